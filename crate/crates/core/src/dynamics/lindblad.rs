// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Master equation for weak measurement of every generator:
//!
//! ```text
//! dρ/dt = -i[H, ρ] - γ Σ_j [X_j, [X_j, ρ]]
//! ```
//!
//! Propagated with classical RK4 by default. The exact superoperator
//! exponential is available for small spaces and serves as a reference.

use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{self, c, commutator, kron, CMatrix, I};

use super::state::{DensityMatrix, Hamiltonian};

const POSITIVITY_TOL: f64 = 1e-6;
/// Largest Hilbert-space dimension accepted by the exact propagator
/// (`d² ≤ 64`).
pub const EXACT_MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LindbladMode {
    #[default]
    Rk4,
    Exact,
}

impl std::str::FromStr for LindbladMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rk4" => Ok(Self::Rk4),
            "exact" => Ok(Self::Exact),
            other => Err(format!("unknown Lindblad mode '{other}' (expected rk4|exact)")),
        }
    }
}

pub fn lindblad_rhs(rho: &CMatrix, h: &CMatrix, rep: &AlgebraRep, gamma: f64) -> CMatrix {
    let mut out = commutator(h, rho) * (-I);
    if gamma != 0.0 {
        for x in rep.generators() {
            out -= commutator(x, &commutator(x, rho)) * c(gamma);
        }
    }
    out
}

fn rk4(rho: &CMatrix, h: &CMatrix, rep: &AlgebraRep, gamma: f64, dt: f64) -> CMatrix {
    let half = c(0.5 * dt);
    let k1 = lindblad_rhs(rho, h, rep, gamma);
    let k2 = lindblad_rhs(&(rho + &k1 * half), h, rep, gamma);
    let k3 = lindblad_rhs(&(rho + &k2 * half), h, rep, gamma);
    let k4 = lindblad_rhs(&(rho + &k3 * c(dt)), h, rep, gamma);
    rho + (k1 + (k2 + k3) * c(2.0) + k4) * c(dt / 6.0)
}

fn finish(next: CMatrix) -> Result<DensityMatrix> {
    let sym = (&next + next.adjoint()) * c(0.5);
    if sym.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::BlowUp);
    }
    let min = linalg::min_eigenvalue(&sym);
    if min < -POSITIVITY_TOL {
        return Err(Error::Positivity(min));
    }
    Ok(DensityMatrix::from_unchecked(sym))
}

/// One RK4 step of the master equation.
pub fn lindblad_step(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    gamma: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if rho.dim() != rep.dim_hilbert() {
        return Err(Error::InvalidArgument("density matrix dimension mismatch".into()));
    }
    finish(rk4(rho.entries(), h.matrix(), rep, gamma, dt))
}

/// Generator of the master equation acting on column-stacked `vec(ρ)`,
/// using `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.
pub fn lindblad_superoperator(h: &Hamiltonian, rep: &AlgebraRep, gamma: f64) -> CMatrix {
    let d = rep.dim_hilbert();
    let id = CMatrix::identity(d, d);
    let hm = h.matrix();
    let mut l = (kron(&id, hm) - kron(&hm.transpose(), &id)) * (-I);
    for x in rep.generators() {
        let x2 = x * x;
        let dissipator = kron(&id, &x2) + kron(&x2.transpose(), &id) - kron(&x.transpose(), x) * c(2.0);
        l -= dissipator * c(gamma);
    }
    l
}

/// Fixed-step propagator for the master equation.
#[derive(Clone, Debug)]
pub struct LindbladPropagator<'a> {
    rep: &'a AlgebraRep,
    h: &'a Hamiltonian,
    gamma: f64,
    dt: f64,
    exact: Option<CMatrix>,
}

impl<'a> LindbladPropagator<'a> {
    pub fn new(
        rep: &'a AlgebraRep,
        h: &'a Hamiltonian,
        gamma: f64,
        dt: f64,
        mode: LindbladMode,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0 && dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!("bad step parameters gamma={gamma}, dt={dt}")));
        }
        let exact = match mode {
            LindbladMode::Rk4 => None,
            LindbladMode::Exact => {
                if rep.dim_hilbert() > EXACT_MAX_DIM {
                    return Err(Error::InvalidArgument(format!(
                        "exact superoperator exponential limited to d <= {EXACT_MAX_DIM}"
                    )));
                }
                Some((lindblad_superoperator(h, rep, gamma) * c(dt)).exp())
            }
        };
        Ok(Self { rep, h, gamma, dt, exact })
    }

    pub fn step(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match &self.exact {
            None => lindblad_step(rho, self.h, self.rep, self.gamma, self.dt),
            Some(p) => {
                let d = rho.dim();
                let v = p * CMatrix::from_column_slice(d * d, 1, rho.entries().as_slice());
                finish(CMatrix::from_column_slice(d, d, v.as_slice()))
            }
        }
    }
}

/// Evolves `rho0` for `steps` steps, returning the state at step 0 and
/// every `stride` steps after.
#[allow(clippy::too_many_arguments)]
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    gamma: f64,
    dt: f64,
    steps: usize,
    stride: usize,
    mode: LindbladMode,
) -> Result<Vec<DensityMatrix>> {
    if stride == 0 {
        return Err(Error::InvalidArgument("record stride must be >= 1".into()));
    }
    let prop = LindbladPropagator::new(rep, h, gamma, dt, mode)?;
    let mut out = Vec::with_capacity(steps / stride + 1);
    let mut rho = rho0.clone();
    out.push(rho.clone());
    for step in 1..=steps {
        rho = prop.step(&rho)?;
        if step % stride == 0 {
            out.push(rho.clone());
        }
    }
    Ok(out)
}
