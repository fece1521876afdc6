// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! `weakmeas`: trajectories, ensembles, theorem scans and bounds for weak
//! measurement of a Lie algebra's generators.
//!
//! Exit status: 0 on success, 1 on usage or configuration errors, 2 when a
//! scientific check fails or the integration breaks down.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use weakmeas::harness::{self, ConfigOverrides, CoefficientList, ExperimentConfig};
use weakmeas::Error;

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "WEAKMEAS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "weakmeas", version, about = "Weak measurement of spectrum-generating algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one sNLSE trajectory and write its observables as CSV.
    Simulate(Common),
    /// Average trajectories and compare with the master equation.
    Ensemble(Common),
    /// Scan Haar-random states for the trace-norm and drift bounds.
    TheoremScan(Common),
    /// Print Δ_min, c_H and root data for an algebra.
    Bounds(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Key-value (TOML) config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `su2:two_j=N` or `suN:n=N` [default: su2:two_j=2]
    #[arg(long)]
    algebra: Option<String>,
    /// Measurement strength γ [default: 0.1]
    #[arg(long)]
    gamma: Option<f64>,
    /// Time step [default: 0.001]
    #[arg(long)]
    dt: Option<f64>,
    /// Total time T; T/dt must be an integer [default: 5]
    #[arg(long)]
    time: Option<f64>,
    /// RNG seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Number of trajectories [default: 2000]
    #[arg(long)]
    traj: Option<usize>,
    /// Number of Haar samples [default: 10000]
    #[arg(long)]
    samples: Option<usize>,
    /// Output path; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record every N steps [default: 10]
    #[arg(long)]
    stride: Option<usize>,
    /// Hamiltonian coefficients `a1,a2,...`, one per generator [default: H = 0]
    #[arg(long, allow_hyphen_values = true)]
    ham: Option<String>,
    /// Initial state: haar or highest [default: haar]
    #[arg(long)]
    initial: Option<String>,
    /// Largest accepted ensemble/Lindblad distance [default: 0.05]
    #[arg(long)]
    bound: Option<f64>,
    /// Tolerance on the scan assertions [default: 1e-9]
    #[arg(long)]
    tol: Option<f64>,
    /// Master-equation integrator: rk4 or exact [default: rk4]
    #[arg(long)]
    lindblad: Option<String>,
    /// parallel or sequential [default: parallel]
    #[arg(long)]
    execution: Option<String>,
}

impl Common {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            algebra: self.algebra.clone(),
            ham: self.ham.clone().map(CoefficientList::Text),
            gamma: self.gamma,
            dt: self.dt,
            time: self.time,
            traj: self.traj,
            seed: self.seed,
            stride: self.stride,
            samples: self.samples,
            out: self.out.clone(),
            initial: self.initial.clone(),
            bound: self.bound,
            tol: self.tol,
            lindblad: self.lindblad.clone(),
            execution: self.execution.clone(),
        }
    }

    fn resolve(&self) -> Result<ExperimentConfig, Failure> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => ConfigOverrides::default(),
        };
        Ok(ExperimentConfig::resolve(self.overrides().or(file))?)
    }
}

/// Error plus the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: harness::exit_code(&e), message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 1, message }
}

fn load_config(path: &Path) -> Result<ConfigOverrides, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| usage(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Returns whether the scientific checks passed.
fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Simulate(args) => {
            let cfg = args.resolve()?;
            let record = harness::simulate(&cfg)?;
            let k = record.observables[0].means.len();
            let mut out = output(cfg.out.as_deref())?;
            harness::write_trajectory_csv(&record, k, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Ensemble(args) => {
            let cfg = args.resolve()?;
            let report = harness::ensemble(&cfg)?;
            if let Some(path) = cfg.out.as_deref() {
                let mut out = output(Some(path))?;
                harness::write_distance_csv(&report, &mut out)?;
                out.flush()?;
            }
            write_json(&report, &mut output(None)?)?;
            if !report.passed {
                eprintln!(
                    "weakmeas: max distance {:.3e} exceeds bound {:.3e}",
                    report.max_distance, report.bound
                );
            }
            Ok(report.passed)
        }
        Command::TheoremScan(args) => {
            let cfg = args.resolve()?;
            let report = harness::theorem_scan(&cfg)?;
            write_json(&report, &mut output(cfg.out.as_deref())?)?;
            if let Some(v) = &report.violation {
                eprintln!("weakmeas: {} at sample {}: {:.17e} (limit {:.17e})", v.kind, v.index, v.value, v.limit);
            }
            Ok(report.passed)
        }
        Command::Bounds(args) => {
            let cfg = args.resolve()?;
            let report = harness::bounds(&cfg)?;
            write_json(&report, &mut output(cfg.out.as_deref())?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(f) => {
            eprintln!("weakmeas: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
