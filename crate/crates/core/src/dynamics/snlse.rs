// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Diffusive sNLSE for continuous weak measurement of every generator:
//!
//! ```text
//! d|ψ⟩ = { -iH dt - γ Σ_i (X_i - ⟨X_i⟩)² dt + Σ_i (X_i - ⟨X_i⟩) dξ_i } |ψ⟩
//! ```
//!
//! with independent Wiener increments `dξ_i ~ N(0, 2γ dt)`.
//!
//! The measurement part is advanced by Euler–Maruyama with the expectations
//! taken at the incoming state, followed by renormalization. The Hamiltonian
//! part is applied either as the exact group propagator `exp(-iH dt)`
//! (default) or as the explicit Euler term `-iH|ψ⟩dt`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector, I};
use crate::observables;

use super::state::{check_gamma_dt, Hamiltonian, NoiseConfig, PureState};

/// How the Hamiltonian term of a step is integrated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HamiltonianScheme {
    /// Multiply by `exp(-iH dt)` after the measurement update. The state
    /// stays on its group orbit exactly, so the total uncertainty is
    /// conserved to roundoff when `γ = 0`.
    #[default]
    Exact,
    /// Add `-iH|ψ⟩dt` alongside the measurement terms.
    Euler,
}

/// Reusable integrator for one `(rep, H, γ, dt)` combination. Holds the
/// work buffers so a step performs no allocation.
pub struct SnlseStepper<'a> {
    rep: &'a AlgebraRep,
    hamiltonian: &'a Hamiltonian,
    gamma: f64,
    dt: f64,
    scheme: HamiltonianScheme,
    propagator: Option<CMatrix>,
    applied: Vec<CVector>,
    means: Vec<f64>,
    update: CVector,
    scratch: CVector,
}

impl<'a> SnlseStepper<'a> {
    pub fn new(rep: &'a AlgebraRep, hamiltonian: &'a Hamiltonian, gamma: f64, dt: f64) -> Result<Self> {
        Self::with_scheme(rep, hamiltonian, gamma, dt, HamiltonianScheme::Exact)
    }

    pub fn with_scheme(
        rep: &'a AlgebraRep,
        hamiltonian: &'a Hamiltonian,
        gamma: f64,
        dt: f64,
        scheme: HamiltonianScheme,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0 && dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!("bad step parameters gamma={gamma}, dt={dt}")));
        }
        check_gamma_dt(gamma, dt)?;
        if hamiltonian.coefficients().len() != rep.dim_algebra() {
            return Err(Error::InvalidArgument("Hamiltonian does not match algebra".into()));
        }
        let d = rep.dim_hilbert();
        let propagator = match scheme {
            HamiltonianScheme::Exact if !hamiltonian.is_zero() => Some(hamiltonian.propagator(dt)),
            _ => None,
        };
        Ok(Self {
            rep,
            hamiltonian,
            gamma,
            dt,
            scheme,
            propagator,
            applied: vec![CVector::zeros(d); rep.dim_algebra()],
            means: vec![0.0; rep.dim_algebra()],
            update: CVector::zeros(d),
            scratch: CVector::zeros(d),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `psi` (assumed normalized) in place by one step with the
    /// realized increments `dξ_i`. Returns `|‖ψ'‖ - 1|` before
    /// renormalization.
    pub fn step(&mut self, psi: &mut CVector, increments: &[f64]) -> Result<f64> {
        let one = c(1.0);
        let zero = c(0.0);
        let gdt = self.gamma * self.dt;

        // applied[i] = (X_i - ⟨X_i⟩) ψ
        for (i, x) in self.rep.generators().iter().enumerate() {
            let v = &mut self.applied[i];
            v.gemv(one, x, psi, zero);
            let mean = psi.dotc(v).re;
            self.means[i] = mean;
            v.axpy(c(-mean), psi, one);
        }

        self.update.copy_from(psi);
        for (i, x) in self.rep.generators().iter().enumerate() {
            let w = &self.applied[i];
            if gdt != 0.0 {
                // -γ dt (X_i - ⟨X_i⟩) w
                self.scratch.gemv(one, x, w, zero);
                self.scratch.axpy(c(-self.means[i]), w, one);
                self.update.axpy(c(-gdt), &self.scratch, one);
            }
            if increments[i] != 0.0 {
                self.update.axpy(c(increments[i]), w, one);
            }
        }
        if self.scheme == HamiltonianScheme::Euler && !self.hamiltonian.is_zero() {
            self.update.gemv(-I * self.dt, self.hamiltonian.matrix(), psi, one);
        }

        let norm = self.update.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::BlowUp);
        }
        let deviation = (norm - 1.0).abs();
        match &self.propagator {
            Some(u) => psi.gemv(c(1.0 / norm), u, &self.update, zero),
            None => {
                psi.copy_from(&self.update);
                *psi /= c(norm);
            }
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BlowUp);
        }
        Ok(deviation)
    }
}

/// One sNLSE step from `state` with the realized increments `dξ_i`.
pub fn snlse_step(
    state: &PureState,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    gamma: f64,
    dt: f64,
    increments: &[f64],
) -> Result<PureState> {
    if increments.len() != rep.dim_algebra() {
        return Err(Error::InvalidArgument(format!(
            "expected {} increments, got {}",
            rep.dim_algebra(),
            increments.len()
        )));
    }
    let mut stepper = SnlseStepper::new(rep, h, gamma, dt)?;
    let mut psi = state.amplitudes().clone();
    stepper.step(&mut psi, increments)?;
    Ok(PureState::from_normalized(psi))
}

/// Gaussian increments `dξ_i ~ N(0, 2γ dt)`, independent across channels
/// and steps.
///
/// The stream is ChaCha8 seeded with `seed_from_u64(seed)`; increments are
/// drawn step-major, channel-minor through the ziggurat `StandardNormal`
/// transform, so a trajectory is fully determined by its seed.
pub struct NoiseStream {
    rng: ChaCha8Rng,
    scale: f64,
}

impl NoiseStream {
    pub fn new(seed: u64, gamma: f64, dt: f64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), scale: (2.0 * gamma * dt).sqrt() }
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        if self.scale == 0.0 {
            out.iter_mut().for_each(|x| *x = 0.0);
            return;
        }
        for x in out.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            *x = self.scale * z;
        }
    }
}

/// Observables recorded along a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableRow {
    /// Total uncertainty `Δ`.
    pub delta: f64,
    /// Generalized purity `P`.
    pub purity: f64,
    /// `Tr M²`.
    pub trace_m2: f64,
    /// Predicted `dΔ/dt`.
    pub drift: f64,
    /// `Σ_j ⟨X_j²⟩`.
    pub casimir: f64,
    /// `⟨X_i⟩`.
    pub means: Vec<f64>,
}

impl ObservableRow {
    pub fn evaluate(state: &PureState, rep: &AlgebraRep, gamma: f64) -> Self {
        let m = observables::Moments::new(state, rep);
        let purity = m.purity();
        let trace_m2 = m.trace_norm_m();
        Self {
            delta: m.total_uncertainty(),
            purity,
            trace_m2,
            drift: 2.0 * gamma * (rep.adjoint_casimir() * purity - trace_m2),
            casimir: m.casimir(),
            means: m.means().to_vec(),
        }
    }
}

/// Time series of one noise realization.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Option<Vec<PureState>>,
    pub observables: Vec<ObservableRow>,
    pub seed: u64,
}

impl TrajectoryRecord {
    pub fn last(&self) -> &ObservableRow {
        self.observables.last().expect("a record always holds the initial row")
    }
}

/// Integrates `cfg.steps` sNLSE steps from `initial`, recording observables
/// every `record_stride` steps (the initial state included).
pub fn simulate_trajectory(
    initial: &PureState,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    cfg: &NoiseConfig,
    record_stride: usize,
) -> Result<TrajectoryRecord> {
    simulate_trajectory_with(initial, h, rep, cfg, record_stride, false, HamiltonianScheme::Exact)
}

/// [`simulate_trajectory`] with optional state snapshots and a choice of
/// Hamiltonian scheme.
pub fn simulate_trajectory_with(
    initial: &PureState,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    cfg: &NoiseConfig,
    record_stride: usize,
    keep_states: bool,
    scheme: HamiltonianScheme,
) -> Result<TrajectoryRecord> {
    let mut times = Vec::new();
    let mut rows = Vec::new();
    let mut states = keep_states.then(Vec::new);
    run(initial, h, rep, cfg, record_stride, scheme, |step, psi| {
        let state = PureState::from_normalized(psi.clone());
        times.push(step as f64 * cfg.dt);
        rows.push(ObservableRow::evaluate(&state, rep, cfg.gamma));
        if let Some(s) = states.as_mut() {
            s.push(state);
        }
    })?;
    Ok(TrajectoryRecord { times, states, observables: rows, seed: cfg.seed })
}

/// Core trajectory loop; `observe(step, ψ)` is called at step 0 and every
/// `stride` steps after.
pub(crate) fn run(
    initial: &PureState,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    cfg: &NoiseConfig,
    stride: usize,
    scheme: HamiltonianScheme,
    mut observe: impl FnMut(usize, &CVector),
) -> Result<()> {
    cfg.validate()?;
    if stride == 0 {
        return Err(Error::InvalidArgument("record stride must be >= 1".into()));
    }
    if initial.dim() != rep.dim_hilbert() {
        return Err(Error::InvalidArgument("initial state dimension mismatch".into()));
    }
    let mut stepper = SnlseStepper::with_scheme(rep, h, cfg.gamma, cfg.dt, scheme)?;
    let mut noise = NoiseStream::new(cfg.seed, cfg.gamma, cfg.dt);
    let mut increments = vec![0.0; rep.dim_algebra()];
    let mut psi = initial.amplitudes().clone();
    observe(0, &psi);
    for step in 1..=cfg.steps {
        noise.fill(&mut increments);
        stepper.step(&mut psi, &increments)?;
        if step % stride == 0 {
            observe(step, &psi);
        }
    }
    Ok(())
}
