// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{self, c, hermiticity_defect, max_abs, CMatrix, CVector};
use num_complex::Complex64;

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Normalizes `amplitudes`. Fails on zero or non-finite input.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BlowUp);
        }
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        Ok(Self { amplitudes: amplitudes / c(norm) })
    }

    pub fn from_components(components: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(components))
    }

    pub(crate) fn from_normalized(amplitudes: CVector) -> Self {
        debug_assert!((amplitudes.norm() - 1.0).abs() < 1e-10);
        Self { amplitudes }
    }

    /// The `index`-th standard basis vector.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0);
        Self { amplitudes: v }
    }

    /// Haar-random state: normalized vector of i.i.d. standard complex
    /// Gaussians.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let v = CVector::from_fn(dim, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            if let Ok(s) = Self::new(v) {
                return s;
            }
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// Real part of `⟨ψ|m|ψ⟩`.
    pub fn expectation(&self, m: &CMatrix) -> f64 {
        linalg::expectation(&self.amplitudes, m).re
    }

    /// `|⟨a|b⟩|²`
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    /// Amplitudes as `[re, im]` pairs, for serialization.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|z| [z.re, z.im]).collect()
    }
}

/// Haar state number `index` of the stream identified by `seed`. Each index
/// owns an independent ChaCha8 stream, so a sample can be regenerated
/// without replaying the ones before it.
pub fn haar_state(dim: usize, seed: u64, index: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    PureState::haar_random(dim, &mut rng)
}

const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
const DENSITY_TRACE_TOL: f64 = 1e-10;
const DENSITY_NEGATIVITY_TOL: f64 = 1e-8;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidDensityMatrix("not square".into()));
        }
        let herm = hermiticity_defect(&entries);
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("hermiticity defect {herm:.3e}")));
        }
        let tr = entries.trace();
        if (tr - c(1.0)).norm() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = linalg::min_eigenvalue(&entries);
        if min < -DENSITY_NEGATIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("minimum eigenvalue {min:.3e}")));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_unchecked(entries: CMatrix) -> Self {
        Self { entries }
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self { entries: state.projector() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { entries: CMatrix::identity(dim, dim) * c(1.0 / dim as f64) }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `trace(ρ²)`
    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.entries, &self.entries).re
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `trace(ρ m)`
    pub fn expectation(&self, m: &CMatrix) -> f64 {
        linalg::trace_product(&self.entries, m).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.entries)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.entries).0
    }

    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        linalg::frobenius_distance(&self.entries, &other.entries)
    }
}

/// Lie-algebraic Hamiltonian `H = Σ_j a_j X_j`.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    coefficients: Vec<f64>,
    matrix: CMatrix,
}

impl Hamiltonian {
    pub fn new(rep: &AlgebraRep, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != rep.dim_algebra() {
            return Err(Error::InvalidArgument(format!(
                "Hamiltonian needs {} coefficients, got {}",
                rep.dim_algebra(),
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Hamiltonian coefficient".into()));
        }
        let matrix = rep.element(&coefficients);
        debug_assert!(hermiticity_defect(&matrix) < 1e-12);
        debug_assert!(rep.projection_residual(&matrix) < 1e-10);
        Ok(Self { coefficients, matrix })
    }

    pub fn zero(rep: &AlgebraRep) -> Self {
        let d = rep.dim_hilbert();
        Self { coefficients: vec![0.0; rep.dim_algebra()], matrix: CMatrix::zeros(d, d) }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&a| a == 0.0)
    }

    /// `exp(-i H dt)`
    pub fn propagator(&self, dt: f64) -> CMatrix {
        if self.is_zero() {
            let d = self.matrix.nrows();
            return CMatrix::identity(d, d);
        }
        linalg::unitary_exp(&self.matrix, dt)
    }

    /// `max |H - Σ_k trace(H X_k)/λ X_k|`
    pub fn span_residual(&self, rep: &AlgebraRep) -> f64 {
        rep.projection_residual(&self.matrix).max(max_abs(&(&self.matrix - self.matrix.adjoint())))
    }
}

/// Measurement strength, time step, RNG seed and step count of one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub gamma: f64,
    pub dt: f64,
    pub seed: u64,
    pub steps: usize,
}

/// Upper bound on `γ·dt` accepted by the integrators.
pub const MAX_GAMMA_DT: f64 = 0.01;

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!("gamma must be finite and >= 0, got {}", self.gamma)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be finite and > 0, got {}", self.dt)));
        }
        check_gamma_dt(self.gamma, self.dt)
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.steps as f64
    }
}

pub(crate) fn check_gamma_dt(gamma: f64, dt: f64) -> Result<()> {
    let product = gamma * dt;
    // Relative slack so that e.g. 0.1 * 0.1 passes.
    if product > MAX_GAMMA_DT * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge(product));
    }
    Ok(())
}
