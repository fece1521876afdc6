// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment orchestration behind the `weakmeas` binary.
//!
//! Each command resolves an [`ExperimentConfig`], runs the computation and
//! returns a serializable report. Writers for the CSV time series live here
//! too so that the binary only deals with argument parsing and exit codes.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraRep;
use crate::cartan::{self, CartanData};
use crate::dynamics::{
    ensemble_average, haar_state, lindblad_evolve, simulate_trajectory, DensityMatrix, Hamiltonian,
    LindbladMode, NoiseConfig, PureState, TrajectoryRecord, MAX_GAMMA_DT,
};
use crate::error::{Error, Result};
use crate::observables::{self, haar_scan};
use crate::parallel::Execution;

/// Default tolerance on the scan assertions.
pub const DEFAULT_SCAN_TOL: f64 = 1e-9;
/// Default bound on the ensemble/Lindblad distance.
pub const DEFAULT_ENSEMBLE_BOUND: f64 = 0.05;

/// Haar initial states are drawn from stream 1 of the run seed. Trajectory
/// noise always uses stream 0, so the two never share random numbers.
const INITIAL_STATE_STREAM: u64 = 1;

/// `su2:two_j=N` or `suN:n=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Su2 { two_j: u32 },
    SuN { n: usize },
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<AlgebraRep> {
        match *self {
            AlgebraSpec::Su2 { two_j } => AlgebraRep::su2(two_j),
            AlgebraSpec::SuN { n } => AlgebraRep::su_n_fundamental(n),
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraSpec::Su2 { two_j } => write!(f, "su2:two_j={two_j}"),
            AlgebraSpec::SuN { n } => write!(f, "suN:n={n}"),
        }
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unsupported algebra '{s}' (expected su2:two_j=N or suN:n=N)"));
        let (family, param) = s.trim().split_once(':').ok_or_else(bad)?;
        let (key, value) = param.split_once('=').ok_or_else(bad)?;
        match (family, key.trim()) {
            ("su2", "two_j") => {
                let two_j = value.trim().parse().map_err(|_| bad())?;
                if two_j == 0 {
                    return Err(Error::TrivialRepresentation);
                }
                Ok(AlgebraSpec::Su2 { two_j })
            }
            ("suN" | "sun", "n") => {
                let n = value.trim().parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(Error::TrivialRepresentation);
                }
                Ok(AlgebraSpec::SuN { n })
            }
            _ => Err(bad()),
        }
    }
}

/// Starting state of `simulate` and `ensemble`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InitialState {
    /// Haar-random, reproducible from the run seed.
    #[default]
    Haar,
    /// Highest-weight state `|Λ⟩`.
    Highest,
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" => Ok(Self::Haar),
            "highest" => Ok(Self::Highest),
            other => Err(Error::InvalidArgument(format!("unknown initial state '{other}' (expected haar|highest)"))),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Haar => "haar",
            Self::Highest => "highest",
        })
    }
}

/// Hamiltonian coefficients as written in a config file: either a list of
/// numbers or a comma-separated string.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CoefficientList {
    Values(Vec<f64>),
    Text(String),
}

impl CoefficientList {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Self::Values(v) => Ok(v.clone()),
            Self::Text(s) => parse_coefficients(s),
        }
    }
}

/// Parses `a1,a2,...`. An empty string means no coefficients.
pub fn parse_coefficients(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad Hamiltonian coefficient '{}'", t.trim())))
        })
        .collect()
}

/// Partially specified configuration. Command-line flags and the optional
/// config file each produce one; [`ConfigOverrides::or`] layers them.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub algebra: Option<String>,
    pub ham: Option<CoefficientList>,
    pub gamma: Option<f64>,
    pub dt: Option<f64>,
    pub time: Option<f64>,
    pub traj: Option<usize>,
    pub seed: Option<u64>,
    pub stride: Option<usize>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub initial: Option<String>,
    pub bound: Option<f64>,
    pub tol: Option<f64>,
    pub lindblad: Option<String>,
    pub execution: Option<String>,
}

impl ConfigOverrides {
    /// Fields of `self` take precedence; unset ones fall back to `fallback`.
    pub fn or(self, fallback: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            algebra: self.algebra.or(fallback.algebra),
            ham: self.ham.or(fallback.ham),
            gamma: self.gamma.or(fallback.gamma),
            dt: self.dt.or(fallback.dt),
            time: self.time.or(fallback.time),
            traj: self.traj.or(fallback.traj),
            seed: self.seed.or(fallback.seed),
            stride: self.stride.or(fallback.stride),
            samples: self.samples.or(fallback.samples),
            out: self.out.or(fallback.out),
            initial: self.initial.or(fallback.initial),
            bound: self.bound.or(fallback.bound),
            tol: self.tol.or(fallback.tol),
            lindblad: self.lindblad.or(fallback.lindblad),
            execution: self.execution.or(fallback.execution),
        }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algebra: AlgebraSpec,
    /// Empty means `H = 0`.
    pub hamiltonian: Vec<f64>,
    pub gamma: f64,
    pub dt: f64,
    pub time: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub stride: usize,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub initial: InitialState,
    pub bound: f64,
    pub tol: f64,
    pub lindblad: LindbladMode,
    pub execution: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algebra: AlgebraSpec::Su2 { two_j: 2 },
            hamiltonian: Vec::new(),
            gamma: 0.1,
            dt: 1e-3,
            time: 5.0,
            n_traj: 2000,
            seed: 0,
            stride: 10,
            samples: 10_000,
            out: None,
            initial: InitialState::Haar,
            bound: DEFAULT_ENSEMBLE_BOUND,
            tol: DEFAULT_SCAN_TOL,
            lindblad: LindbladMode::Rk4,
            execution: Execution::default(),
        }
    }
}

impl ExperimentConfig {
    /// Fills unset fields from [`Default`] and validates.
    pub fn resolve(o: ConfigOverrides) -> Result<Self> {
        let d = Self::default();
        let invalid = |e: String| Error::InvalidArgument(e);
        let cfg = Self {
            algebra: o.algebra.as_deref().map(str::parse).transpose()?.unwrap_or(d.algebra),
            hamiltonian: o.ham.map(|h| h.values()).transpose()?.unwrap_or(d.hamiltonian),
            gamma: o.gamma.unwrap_or(d.gamma),
            dt: o.dt.unwrap_or(d.dt),
            time: o.time.unwrap_or(d.time),
            n_traj: o.traj.unwrap_or(d.n_traj),
            seed: o.seed.unwrap_or(d.seed),
            stride: o.stride.unwrap_or(d.stride),
            samples: o.samples.unwrap_or(d.samples),
            out: o.out.or(d.out),
            initial: o.initial.as_deref().map(str::parse).transpose()?.unwrap_or(d.initial),
            bound: o.bound.unwrap_or(d.bound),
            tol: o.tol.unwrap_or(d.tol),
            lindblad: o.lindblad.as_deref().map(str::parse).transpose().map_err(invalid)?.unwrap_or(d.lindblad),
            execution: o.execution.as_deref().map(str::parse).transpose().map_err(invalid)?.unwrap_or(d.execution),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [("gamma", self.gamma), ("dt", self.dt), ("time", self.time), ("bound", self.bound), ("tol", self.tol)];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        if let Some(a) = self.hamiltonian.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite Hamiltonian coefficient {a}")));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if self.dt <= 0.0 {
            return Err(Error::InvalidArgument(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.time < 0.0 {
            return Err(Error::InvalidArgument(format!("time must be >= 0, got {}", self.time)));
        }
        if self.gamma * self.dt > MAX_GAMMA_DT * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge(self.gamma * self.dt));
        }
        if self.stride == 0 {
            return Err(Error::InvalidArgument("stride must be >= 1".into()));
        }
        if self.bound <= 0.0 || self.tol < 0.0 {
            return Err(Error::InvalidArgument("bound must be > 0 and tol >= 0".into()));
        }
        self.steps()?;
        Ok(())
    }

    /// `T / dt`, rejected unless integral within rounding.
    pub fn steps(&self) -> Result<usize> {
        let ratio = self.time / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) || steps > u32::MAX as f64 {
            return Err(Error::InvalidArgument(format!(
                "time/dt = {ratio} is not an integer step count"
            )));
        }
        Ok(steps as usize)
    }

    pub fn noise(&self) -> Result<NoiseConfig> {
        Ok(NoiseConfig { gamma: self.gamma, dt: self.dt, seed: self.seed, steps: self.steps()? })
    }

    pub fn hamiltonian(&self, rep: &AlgebraRep) -> Result<Hamiltonian> {
        if self.hamiltonian.is_empty() {
            Ok(Hamiltonian::zero(rep))
        } else {
            Hamiltonian::new(rep, self.hamiltonian.clone())
        }
    }

    pub fn initial_state(&self, rep: &AlgebraRep) -> Result<PureState> {
        match self.initial {
            InitialState::Haar => Ok(haar_state(rep.dim_hilbert(), self.seed, INITIAL_STATE_STREAM)),
            InitialState::Highest => cartan::highest_weight_state(&cartan::cartan_decompose(rep)?),
        }
    }
}

/// Process exit code for an error: 1 for configuration and I/O problems,
/// 2 for numerical or scientific failures.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_)
        | Error::StepTooLarge(_)
        | Error::TrivialRepresentation
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => 1,
        _ => 2,
    }
}

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `simulate`: one sNLSE trajectory.
pub fn simulate(cfg: &ExperimentConfig) -> Result<TrajectoryRecord> {
    let rep = cfg.algebra.build()?;
    let h = cfg.hamiltonian(&rep)?;
    let psi = cfg.initial_state(&rep)?;
    simulate_trajectory(&psi, &h, &rep, &cfg.noise()?, cfg.stride)
}

/// CSV header for a trajectory of an algebra of dimension `k`.
pub fn trajectory_header(k: usize) -> Vec<String> {
    let mut h: Vec<String> = ["t", "delta", "purity", "trace_m2", "drift"].iter().map(|s| s.to_string()).collect();
    h.extend((1..=k).map(|i| format!("x_{i}")));
    h
}

pub fn write_trajectory_csv<W: Write>(record: &TrajectoryRecord, k: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trajectory_header(k))?;
    for (t, row) in record.times.iter().zip(&record.observables) {
        let mut fields = vec![fmt_f64(*t), fmt_f64(row.delta), fmt_f64(row.purity), fmt_f64(row.trace_m2), fmt_f64(row.drift)];
        fields.extend(row.means.iter().map(|&x| fmt_f64(x)));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Summary of an `ensemble` run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub algebra: String,
    pub gamma: f64,
    pub dt: f64,
    pub time: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub initial: String,
    pub lindblad: String,
    pub max_distance: f64,
    pub final_distance: f64,
    pub bound: f64,
    pub passed: bool,
    #[serde(skip)]
    pub times: Vec<f64>,
    #[serde(skip)]
    pub distances: Vec<f64>,
}

/// `ensemble`: trajectory average against the master equation.
pub fn ensemble(cfg: &ExperimentConfig) -> Result<EnsembleReport> {
    let rep = cfg.algebra.build()?;
    let h = cfg.hamiltonian(&rep)?;
    let psi = cfg.initial_state(&rep)?;
    let noise = cfg.noise()?;
    let avg = ensemble_average(&psi, &h, &rep, &noise, cfg.n_traj, cfg.stride, cfg.execution)?;
    let reference = lindblad_evolve(
        &DensityMatrix::from_pure(&psi),
        &h,
        &rep,
        cfg.gamma,
        cfg.dt,
        noise.steps,
        cfg.stride,
        cfg.lindblad,
    )?;
    let distances: Vec<f64> = avg.states.iter().zip(&reference).map(|(a, b)| a.distance(b)).collect();
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    Ok(EnsembleReport {
        algebra: cfg.algebra.to_string(),
        gamma: cfg.gamma,
        dt: cfg.dt,
        time: cfg.time,
        n_traj: cfg.n_traj,
        seed: cfg.seed,
        initial: cfg.initial.to_string(),
        lindblad: match cfg.lindblad {
            LindbladMode::Rk4 => "rk4".into(),
            LindbladMode::Exact => "exact".into(),
        },
        max_distance,
        final_distance: *distances.last().unwrap_or(&0.0),
        bound: cfg.bound,
        passed: max_distance < cfg.bound,
        times: avg.times,
        distances,
    })
}

pub fn write_distance_csv<W: Write>(report: &EnsembleReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "distance"])?;
    for (t, d) in report.times.iter().zip(&report.distances) {
        w.write_record([fmt_f64(*t), fmt_f64(*d)])?;
    }
    w.flush()?;
    Ok(())
}

/// First state that broke a scan assertion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanViolation {
    pub index: usize,
    pub kind: String,
    pub value: f64,
    pub limit: f64,
    /// Amplitudes as `[re, im]` pairs.
    pub state: Vec<[f64; 2]>,
}

/// Report of a `theorem-scan` run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub algebra: String,
    pub samples: usize,
    pub seed: u64,
    pub gamma: f64,
    pub tol: f64,
    pub gcs_value: f64,
    pub min_trace_m2: f64,
    pub mean_trace_m2: f64,
    pub max_trace_m2: f64,
    pub min_drift: f64,
    pub max_drift: f64,
    pub max_identity_defect: f64,
    pub passed: bool,
    pub violation: Option<ScanViolation>,
}

/// `theorem-scan`: `Tr M²` and the localization drift over Haar states.
pub fn theorem_scan(cfg: &ExperimentConfig) -> Result<ScanReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let rep = cfg.algebra.build()?;
    let cd = cartan::cartan_decompose(&rep)?;
    let top = cartan::highest_weight_state(&cd)?;
    let gcs_value = observables::trace_norm_m(&top, &rep);
    let c_h = rep.casimir_eigenvalue();
    let scan = haar_scan(&rep, cfg.samples, cfg.seed, cfg.gamma, cfg.execution);

    let mut report = ScanReport {
        algebra: cfg.algebra.to_string(),
        samples: cfg.samples,
        seed: cfg.seed,
        gamma: cfg.gamma,
        tol: cfg.tol,
        gcs_value,
        min_trace_m2: f64::INFINITY,
        mean_trace_m2: 0.0,
        max_trace_m2: f64::NEG_INFINITY,
        min_drift: f64::INFINITY,
        max_drift: f64::NEG_INFINITY,
        max_identity_defect: 0.0,
        passed: true,
        violation: None,
    };
    let d = rep.dim_hilbert();
    for (i, s) in scan.iter().enumerate() {
        report.min_trace_m2 = report.min_trace_m2.min(s.trace_norm_m);
        report.max_trace_m2 = report.max_trace_m2.max(s.trace_norm_m);
        report.mean_trace_m2 += s.trace_norm_m;
        report.min_drift = report.min_drift.min(s.drift);
        report.max_drift = report.max_drift.max(s.drift);
        report.max_identity_defect = report.max_identity_defect.max((s.delta + s.purity - c_h).abs());
        if report.violation.is_none() {
            let broken = if s.trace_norm_m < gcs_value - cfg.tol {
                Some(("trace_m2_below_gcs", s.trace_norm_m, gcs_value - cfg.tol))
            } else if s.drift > cfg.tol {
                Some(("positive_drift", s.drift, cfg.tol))
            } else {
                None
            };
            if let Some((kind, value, limit)) = broken {
                report.violation = Some(ScanViolation {
                    index: i,
                    kind: kind.into(),
                    value,
                    limit,
                    state: haar_state(d, cfg.seed, i as u64).to_pairs(),
                });
            }
        }
    }
    report.mean_trace_m2 /= cfg.samples as f64;
    report.passed = report.violation.is_none();
    Ok(report)
}

/// Report of the `bounds` command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub algebra: String,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub rank: usize,
    pub normalization: f64,
    pub delta_min: f64,
    pub c_h: f64,
    pub c_adj: f64,
    pub lambda_mu: f64,
    pub lambda_lambda_mu: f64,
    pub highest_weight: Vec<f64>,
    pub mu: Vec<f64>,
    pub positive_roots: Vec<Vec<f64>>,
}

pub fn bounds(cfg: &ExperimentConfig) -> Result<BoundsReport> {
    let rep = cfg.algebra.build()?;
    let cd = cartan::cartan_decompose(&rep)?;
    bounds_for(&cfg.algebra.to_string(), &rep, &cd)
}

pub fn bounds_for(label: &str, rep: &AlgebraRep, cd: &CartanData) -> Result<BoundsReport> {
    let b = observables::uncertainty_bounds(rep, cd)?;
    Ok(BoundsReport {
        algebra: label.to_string(),
        d: rep.dim_hilbert(),
        k: rep.dim_algebra(),
        rank: cd.rank(),
        normalization: rep.normalization(),
        delta_min: b.delta_min,
        c_h: b.c_h,
        c_adj: rep.adjoint_casimir(),
        lambda_mu: b.lambda_mu,
        lambda_lambda_mu: b.lambda_lambda_mu,
        highest_weight: cd.highest_weight()?.iter().copied().collect(),
        mu: cd.positive_root_sum().iter().copied().collect(),
        positive_roots: cd.positive_roots().iter().map(|r| r.vector.iter().copied().collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_spec_round_trip() {
        for s in ["su2:two_j=4", "suN:n=3"] {
            assert_eq!(s.parse::<AlgebraSpec>().unwrap().to_string(), s);
        }
        assert!("su2:two_j=0".parse::<AlgebraSpec>().is_err());
        assert!("so3:n=3".parse::<AlgebraSpec>().is_err());
        assert!("suN:n=x".parse::<AlgebraSpec>().is_err());
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(parse_coefficients("0.1, -2,3e-1").unwrap(), vec![0.1, -2.0, 0.3]);
        assert!(parse_coefficients("").unwrap().is_empty());
        assert!(parse_coefficients("1,,2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let flags = ConfigOverrides { gamma: Some(0.2), ..Default::default() };
        let file = ConfigOverrides { gamma: Some(0.05), dt: Some(1e-2), ..Default::default() };
        let cfg = ExperimentConfig::resolve(flags.or(file)).unwrap();
        assert_eq!(cfg.gamma, 0.2);
        assert_eq!(cfg.dt, 1e-2);
        assert_eq!(cfg.time, 5.0);
    }

    #[test]
    fn validation() {
        let base = ExperimentConfig::default();
        assert_eq!(base.steps().unwrap(), 5000);
        let ragged = ExperimentConfig { time: 1.0005, ..base.clone() };
        assert!(ragged.validate().is_err());
        let big = ExperimentConfig { gamma: 1.0, dt: 0.1, time: 1.0, ..base.clone() };
        assert!(matches!(big.validate(), Err(Error::StepTooLarge(_))));
        let nan = ExperimentConfig { gamma: f64::NAN, ..base };
        assert!(nan.validate().is_err());
    }

    #[test]
    fn trajectory_csv_shape() {
        let cfg = ExperimentConfig { time: 0.01, stride: 5, ..Default::default() };
        let rec = simulate(&cfg).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&rec, 3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,delta,purity,trace_m2,drift,x_1,x_2,x_3");
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.split(',').count() == 8));
    }

    #[test]
    fn bounds_spin_one() {
        let cfg = ExperimentConfig { algebra: "su2:two_j=2".parse().unwrap(), ..Default::default() };
        let b = bounds(&cfg).unwrap();
        assert!((b.delta_min - 1.0).abs() < 1e-12);
        assert!((b.c_h - 2.0).abs() < 1e-12);
        assert_eq!((b.d, b.k, b.rank), (3, 3, 1));
    }

    #[test]
    fn spin_half_scan_is_flat() {
        let cfg = ExperimentConfig { algebra: AlgebraSpec::Su2 { two_j: 1 }, samples: 200, ..Default::default() };
        let r = theorem_scan(&cfg).unwrap();
        assert!(r.passed);
        assert!((r.max_trace_m2 - r.min_trace_m2).abs() < 1e-10);
        assert!((r.gcs_value - 0.5).abs() < 1e-12);
    }
}
