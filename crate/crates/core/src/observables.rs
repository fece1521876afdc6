// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scalar functionals of a pure state with respect to the algebra.
//!
//! All functionals are built from the first and second moments
//! `⟨X_i⟩` and `⟨X_i X_j⟩`, which are computed once per state from the
//! vectors `X_i|ψ⟩`.

use serde::Serialize;

use crate::algebra::AlgebraRep;
use crate::cartan::{self, CartanData, Sector};
use crate::dynamics::{haar_state, PureState};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, RMatrix, RVector};
use crate::parallel::{map_indexed, Execution};

const BOUNDS_TOL: f64 = 1e-6;

/// First and second moments of the generators in a state.
#[derive(Clone, Debug)]
pub struct Moments {
    means: Vec<f64>,
    /// `Re ⟨X_i X_j⟩ = ⟨{X_i, X_j}⟩ / 2`
    symmetric: RMatrix,
}

impl Moments {
    pub fn new(state: &PureState, rep: &AlgebraRep) -> Self {
        let psi = state.amplitudes();
        let applied: Vec<CVector> = rep.generators().iter().map(|x| x * psi).collect();
        let k = applied.len();
        let means = applied.iter().map(|v| psi.dotc(v).re).collect();
        let mut symmetric = RMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                // ⟨ψ|X_i X_j|ψ⟩ = (X_i ψ)† (X_j ψ)
                let s = applied[i].dotc(&applied[j]).re;
                symmetric[(i, j)] = s;
                symmetric[(j, i)] = s;
            }
        }
        Self { means, symmetric }
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// `Σ_j ⟨X_j²⟩`
    pub fn casimir(&self) -> f64 {
        self.symmetric.trace()
    }

    /// `Σ_j ⟨X_j⟩²`
    pub fn purity(&self) -> f64 {
        self.means.iter().map(|x| x * x).sum()
    }

    /// `Σ_j ⟨X_j²⟩ - Σ_j ⟨X_j⟩²`
    pub fn total_uncertainty(&self) -> f64 {
        self.casimir() - self.purity()
    }

    /// `M_ij = ⟨{X_i, X_j}⟩ - 2⟨X_i⟩⟨X_j⟩`
    pub fn covariance(&self) -> RMatrix {
        let k = self.means.len();
        RMatrix::from_fn(k, k, |i, j| 2.0 * (self.symmetric[(i, j)] - self.means[i] * self.means[j]))
    }

    /// `Tr M² = Σ_ij M_ij²`
    pub fn trace_norm_m(&self) -> f64 {
        self.covariance().iter().map(|m| m * m).sum()
    }
}

/// Total uncertainty `Δ[ψ]`.
pub fn total_uncertainty(state: &PureState, rep: &AlgebraRep) -> f64 {
    Moments::new(state, rep).total_uncertainty()
}

/// Generalized purity `P[ψ] = Σ_j ⟨X_j⟩²`.
pub fn generalized_purity(state: &PureState, rep: &AlgebraRep) -> f64 {
    Moments::new(state, rep).purity()
}

pub fn covariance_matrix(state: &PureState, rep: &AlgebraRep) -> RMatrix {
    Moments::new(state, rep).covariance()
}

/// `Tr M²`, minimized on coherent states.
pub fn trace_norm_m(state: &PureState, rep: &AlgebraRep) -> f64 {
    Moments::new(state, rep).trace_norm_m()
}

/// Deterministic part of the Itô differential of `Δ` per unit time:
/// `2γ (c_adj P - Tr M²)`. Non-positive, and zero exactly on coherent
/// states.
pub fn localization_drift(state: &PureState, rep: &AlgebraRep, gamma: f64) -> f64 {
    let m = Moments::new(state, rep);
    drift_from(&m, rep, gamma)
}

fn drift_from(m: &Moments, rep: &AlgebraRep, gamma: f64) -> f64 {
    2.0 * gamma * (rep.adjoint_casimir() * m.purity() - m.trace_norm_m())
}

/// Coefficient of `dξ_j` in the Itô differential of `Δ`:
/// `-2 Σ_i ⟨X_i⟩ M_ij`. Vanishes on coherent states.
pub fn uncertainty_noise_coefficients(state: &PureState, rep: &AlgebraRep) -> Vec<f64> {
    let m = Moments::new(state, rep);
    let cov = m.covariance();
    let x = RVector::from_column_slice(m.means());
    (cov * x * -2.0).iter().copied().collect()
}

/// Lower and upper bounds on `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounds {
    /// `Δ` at the highest-weight state.
    pub delta_min: f64,
    /// Casimir eigenvalue.
    pub c_h: f64,
    /// `(Λ, μ)` from root data.
    pub lambda_mu: f64,
    /// `(Λ, Λ + μ)` from root data.
    pub lambda_lambda_mu: f64,
}

/// `(Δ_min, c_H)`, each evaluated from states and cross-checked against the
/// root-space pairings `(Λ, μ)` and `(Λ, Λ + μ)`.
pub fn uncertainty_bounds(rep: &AlgebraRep, cd: &CartanData) -> Result<Bounds> {
    let top = cartan::highest_weight_state(cd)?;
    let delta_min = total_uncertainty(&top, rep);
    let lambda = cd.highest_weight()?;
    let mu = cd.positive_root_sum();
    let lambda_mu = lambda.dot(mu);
    let lambda_lambda_mu = lambda.dot(&(lambda + mu));
    let c_h = rep.casimir_eigenvalue();
    let scale = c_h.abs().max(1.0);
    if (delta_min - lambda_mu).abs() > BOUNDS_TOL * scale {
        return Err(Error::NormalizationMismatch { what: "Δ_min vs (Λ,μ)", state: delta_min, roots: lambda_mu });
    }
    if (c_h - lambda_lambda_mu).abs() > BOUNDS_TOL * scale {
        return Err(Error::NormalizationMismatch { what: "c_H vs (Λ,Λ+μ)", state: c_h, roots: lambda_lambda_mu });
    }
    Ok(Bounds { delta_min, c_h, lambda_mu, lambda_lambda_mu })
}

/// All functionals of one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub delta: f64,
    pub purity: f64,
    pub c_h: f64,
    pub delta_min: f64,
    pub trace_norm_m: f64,
    pub drift: f64,
}

pub fn uncertainty_report(state: &PureState, rep: &AlgebraRep, bounds: &Bounds, gamma: f64) -> UncertaintyReport {
    let m = Moments::new(state, rep);
    UncertaintyReport {
        delta: m.total_uncertainty(),
        purity: m.purity(),
        c_h: bounds.c_h,
        delta_min: bounds.delta_min,
        trace_norm_m: m.trace_norm_m(),
        drift: drift_from(&m, rep, gamma),
    }
}

/// `Tr M²` split by sectors of a Cartan-aligned basis in which the state's
/// expectation vector lies in the Cartan subalgebra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartanSplit {
    /// `Σ_{i,j ∈ 𝔥} M_ij²`
    pub cartan: f64,
    /// `Σ_{i ∈ 𝔥, α} M_iα²`, both orderings.
    pub cartan_root: f64,
    /// Root-sector entries coupling different positive roots.
    pub distinct_roots: f64,
    /// Root-sector entries within a single `±α` pair.
    pub same_root: f64,
    /// `8 Σ_{α>0} ⟨E_α²⟩⟨E_-α²⟩ + 2 Σ_{α>0} ⟨E_α E_-α + E_-α E_α⟩²`
    pub ladder_form: f64,
    /// Largest `|⟨X⟩|` component outside the Cartan subalgebra.
    pub off_cartan_mean: f64,
}

impl CartanSplit {
    pub fn total(&self) -> f64 {
        self.cartan + self.cartan_root + self.distinct_roots + self.same_root
    }
}

/// Rotates the generator basis so that `⟨X⟩` lies in a Cartan subalgebra and
/// splits `Tr M²` into Cartan, mixed and root sectors.
pub fn cartan_split(state: &PureState, rep: &AlgebraRep) -> Result<CartanSplit> {
    let m = Moments::new(state, rep);
    let cd = cartan::cartan_decompose_containing(rep, m.means())?;
    let o = cd.rotated_basis();
    let rotated = &o * m.covariance() * o.transpose();
    let rotated_means = &o * RVector::from_column_slice(m.means());

    let k = rep.dim_algebra();
    let mut split = CartanSplit {
        cartan: 0.0,
        cartan_root: 0.0,
        distinct_roots: 0.0,
        same_root: 0.0,
        ladder_form: 0.0,
        off_cartan_mean: 0.0,
    };
    for i in 0..k {
        if let Sector::Root { .. } = cd.sector(i) {
            split.off_cartan_mean = split.off_cartan_mean.max(rotated_means[i].abs());
        }
        for j in 0..k {
            let v = rotated[(i, j)] * rotated[(i, j)];
            match (cd.sector(i), cd.sector(j)) {
                (Sector::Cartan(_), Sector::Cartan(_)) => split.cartan += v,
                (Sector::Cartan(_), _) | (_, Sector::Cartan(_)) => split.cartan_root += v,
                (Sector::Root { root: a, .. }, Sector::Root { root: b, .. }) => {
                    if a == b {
                        split.same_root += v;
                    } else {
                        split.distinct_roots += v;
                    }
                }
            }
        }
    }
    split.ladder_form = ladder_form(state, &cd);
    Ok(split)
}

fn ladder_form(state: &PureState, cd: &CartanData) -> f64 {
    let psi = state.amplitudes();
    let ex = |m: &CMatrix| psi.dotc(&(m * psi));
    cd.positive_roots()
        .iter()
        .map(|root| {
            let raise_sq = ex(&(&root.raising * &root.raising));
            let lower_sq = ex(&(&root.lowering * &root.lowering));
            let anti = ex(&(&root.raising * &root.lowering + &root.lowering * &root.raising)).re;
            8.0 * (raise_sq * lower_sq).re + 2.0 * anti * anti
        })
        .sum()
}

/// One state of a Haar scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanSample {
    pub delta: f64,
    pub purity: f64,
    pub casimir: f64,
    pub trace_norm_m: f64,
    pub drift: f64,
}

impl ScanSample {
    pub fn evaluate(state: &PureState, rep: &AlgebraRep, gamma: f64) -> Self {
        let m = Moments::new(state, rep);
        Self {
            delta: m.total_uncertainty(),
            purity: m.purity(),
            casimir: m.casimir(),
            trace_norm_m: m.trace_norm_m(),
            drift: drift_from(&m, rep, gamma),
        }
    }
}

/// Evaluates [`ScanSample`] on Haar states `haar_state(d, seed, i)` for
/// `i < samples`. Output is in index order.
pub fn haar_scan(
    rep: &AlgebraRep,
    samples: usize,
    seed: u64,
    gamma: f64,
    exec: Execution,
) -> Vec<ScanSample> {
    let d = rep.dim_hilbert();
    map_indexed(exec, samples, |i| ScanSample::evaluate(&haar_state(d, seed, i as u64), rep, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{cartan_decompose, highest_weight_state};
    use crate::linalg::c;

    fn top(two_j: u32) -> (AlgebraRep, PureState) {
        let rep = AlgebraRep::su2(two_j).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        let s = highest_weight_state(&cd).unwrap();
        (rep, s)
    }

    #[test]
    fn highest_weight_values() {
        for two_j in 1..=6 {
            let (rep, s) = top(two_j);
            let j = two_j as f64 / 2.0;
            assert!((total_uncertainty(&s, &rep) - j).abs() < 1e-12);
            assert!((generalized_purity(&s, &rep) - j * j).abs() < 1e-12);
            assert!((trace_norm_m(&s, &rep) - 2.0 * j * j).abs() < 1e-10);
            assert!(localization_drift(&s, &rep, 0.3).abs() < 1e-10);
            let m = covariance_matrix(&s, &rep);
            let expected = RMatrix::from_diagonal(&RVector::from_vec(vec![j, j, 0.0]));
            assert!((m - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn completely_entangled_spin_one() {
        let rep = AlgebraRep::su2(2).unwrap();
        let s = PureState::from_components(&[c(1.0), c(0.0), c(1.0)]).unwrap();
        assert!(generalized_purity(&s, &rep).abs() < 1e-14);
        assert!((total_uncertainty(&s, &rep) - 2.0).abs() < 1e-12);
        let m = covariance_matrix(&s, &rep);
        assert!((&m - m.transpose()).norm() < 1e-15);
        // By hand: J_x ψ = (0,1,0), J_y ψ = 0, J_z ψ = (1,0,-1)/√2, so
        // ⟨J_x²⟩ = 1, ⟨J_y²⟩ = 0, ⟨J_z²⟩ = 1 and all cross terms vanish.
        let expected = RMatrix::from_diagonal(&RVector::from_vec(vec![2.0, 0.0, 2.0]));
        assert!((&m - expected).norm() < 1e-12, "{m}");
        let drift = localization_drift(&s, &rep, 0.1);
        assert!((drift + 2.0 * 0.1 * 8.0).abs() < 1e-12);
    }

    #[test]
    fn spin_half_all_states_are_coherent() {
        let rep = AlgebraRep::su2(1).unwrap();
        for i in 0..200 {
            let s = haar_state(2, 42, i);
            assert!((total_uncertainty(&s, &rep) - 0.5).abs() < 1e-12);
            assert!((generalized_purity(&s, &rep) - 0.25).abs() < 1e-12);
            assert!((trace_norm_m(&s, &rep) - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn bounds_su2_and_su3() {
        for two_j in 1..=6 {
            let rep = AlgebraRep::su2(two_j).unwrap();
            let cd = cartan_decompose(&rep).unwrap();
            let b = uncertainty_bounds(&rep, &cd).unwrap();
            let j = two_j as f64 / 2.0;
            assert!((b.delta_min - j).abs() < 1e-12);
            assert!((b.c_h - j * (j + 1.0)).abs() < 1e-12);
        }
        let rep = AlgebraRep::su_n_fundamental(3).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        let b = uncertainty_bounds(&rep, &cd).unwrap();
        let s = highest_weight_state(&cd).unwrap();
        assert!((b.delta_min + generalized_purity(&s, &rep) - 4.0 / 3.0).abs() < 1e-12);
        // su(3) fundamental with trace norm 1/2: Δ_min = 1.
        assert!((b.delta_min - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bounds_survive_rescaling() {
        let rep = AlgebraRep::su2(3).unwrap().scaled(0.37).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        let b = uncertainty_bounds(&rep, &cd).unwrap();
        let j = 1.5;
        assert!((b.delta_min - 0.37 * 0.37 * j).abs() < 1e-10);
    }

    #[test]
    fn split_adds_up() {
        let rep = AlgebraRep::su_n_fundamental(3).unwrap();
        for i in 0..20 {
            let s = haar_state(3, 8, i);
            let split = cartan_split(&s, &rep).unwrap();
            let t = trace_norm_m(&s, &rep);
            assert!((split.total() - t).abs() < 1e-8);
            assert!(split.off_cartan_mean < 1e-8);
            assert!((split.same_root - split.ladder_form).abs() < 1e-8);
        }
    }

    #[test]
    fn noise_coefficients_vanish_on_gcs() {
        let (rep, s) = top(4);
        for v in uncertainty_noise_coefficients(&s, &rep) {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn scan_is_deterministic_across_modes() {
        let rep = AlgebraRep::su2(2).unwrap();
        let a = haar_scan(&rep, 300, 5, 0.1, Execution::Sequential);
        let b = haar_scan(&rep, 300, 5, 0.1, Execution::Parallel);
        assert_eq!(a, b);
    }
}
