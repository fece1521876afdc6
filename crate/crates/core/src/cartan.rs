// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Cartan decomposition of a represented algebra.
//!
//! A Cartan subalgebra is found as the centralizer of a generic (regular)
//! element. Roots are the simultaneous eigenvalues of the adjoint action of
//! the Cartan generators on the complexified algebra; their eigenvectors give
//! the ladder operators `E_±α`. The weight basis simultaneously diagonalizes
//! the Cartan generators on the representation space.
//!
//! Root vectors are expressed in the orthonormal coordinates of the Cartan
//! generators `H_a`, which carry the same trace norm `λ` as the original
//! generators. Ladder operators are scaled to `trace(E_α E_α†) = λ`, which
//! makes `[E_α, E_-α] = α·H` and `Σ_j X_j² = Σ_a H_a² + Σ_{α>0} {E_α, E_-α}`.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::AlgebraRep;
use crate::dynamics::PureState;
use crate::error::{Error, Result};
use crate::linalg::{
    self, c, commutator, hermitian_eigen, max_abs, real_kernel, unitary_exp, CMatrix, CVector,
    RMatrix, RVector, I,
};

/// Seed for the generic elements drawn during extraction. Fixed so that the
/// decomposition of a given representation is reproducible.
const GENERIC_SEED: u64 = 0x5eed_ca27a;
const KERNEL_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-8;
const COMMUTE_TOL: f64 = 1e-10;
const WEIGHT_TOL: f64 = 1e-9;
const ANNIHILATION_TOL: f64 = 1e-10;
const MAX_ATTEMPTS: usize = 8;

/// A positive root with its raising and lowering operators.
#[derive(Clone, Debug)]
pub struct PositiveRoot {
    /// `α` in Cartan coordinates.
    pub vector: RVector,
    /// Unit-norm complex coefficients of `E_α` in the generator basis.
    pub coefficients: CVector,
    pub raising: CMatrix,
    /// `E_-α = E_α†`.
    pub lowering: CMatrix,
}

impl PositiveRoot {
    pub fn norm(&self) -> f64 {
        self.vector.norm()
    }
}

/// Sector of a rotated (Cartan-aligned) basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Cartan(usize),
    /// Real or imaginary part of the ladder pair for positive root `root`.
    Root { root: usize, part: usize },
}

#[derive(Clone, Debug)]
pub struct CartanData {
    rank: usize,
    dim_algebra: usize,
    /// Columns: orthonormal coefficient vectors of the Cartan generators.
    cartan_coefficients: RMatrix,
    cartan_generators: Vec<CMatrix>,
    /// Original generator indices when the Cartan subalgebra is spanned by
    /// generators of the input basis.
    aligned_indices: Option<Vec<usize>>,
    positive_roots: Vec<PositiveRoot>,
    weight_basis: CMatrix,
    weights: Vec<RVector>,
    highest_index: Option<usize>,
    positive_root_sum: RVector,
}

impl CartanData {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Indices of the Cartan elements within [`CartanData::rotated_basis`].
    pub fn cartan_indices(&self) -> Vec<usize> {
        (0..self.rank).collect()
    }

    pub fn aligned_generator_indices(&self) -> Option<&[usize]> {
        self.aligned_indices.as_deref()
    }

    pub fn cartan_coefficients(&self) -> &RMatrix {
        &self.cartan_coefficients
    }

    pub fn cartan_generators(&self) -> &[CMatrix] {
        &self.cartan_generators
    }

    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.positive_roots
    }

    /// All roots, positive ones first, then their negatives.
    pub fn roots(&self) -> Vec<RVector> {
        let pos = self.positive_roots.iter().map(|r| r.vector.clone());
        let neg = self.positive_roots.iter().map(|r| -&r.vector);
        pos.chain(neg).collect()
    }

    /// Columns are the weight states, sorted by weight in decreasing
    /// lexicographic order.
    pub fn weight_basis(&self) -> &CMatrix {
        &self.weight_basis
    }

    pub fn weights(&self) -> &[RVector] {
        &self.weights
    }

    pub fn weight_state(&self, index: usize) -> PureState {
        PureState::from_normalized(self.weight_basis.column(index).into_owned())
    }

    /// `Λ`.
    pub fn highest_weight(&self) -> Result<&RVector> {
        self.highest_index.map(|i| &self.weights[i]).ok_or(Error::DegenerateHighestWeight)
    }

    pub fn highest_weight_index(&self) -> Result<usize> {
        self.highest_index.ok_or(Error::DegenerateHighestWeight)
    }

    /// `μ`, the sum of the positive roots.
    pub fn positive_root_sum(&self) -> &RVector {
        &self.positive_root_sum
    }

    /// Orthogonal `K×K` matrix whose rows are the coefficient vectors of a
    /// real basis adapted to the decomposition: the `r` Cartan generators,
    /// then `√2·Re` and `-√2·Im` of each positive-root ladder vector.
    pub fn rotated_basis(&self) -> RMatrix {
        let k = self.dim_algebra;
        let mut out = RMatrix::zeros(k, k);
        for a in 0..self.rank {
            out.set_row(a, &self.cartan_coefficients.column(a).transpose());
        }
        let s = std::f64::consts::SQRT_2;
        for (n, root) in self.positive_roots.iter().enumerate() {
            let row = self.rank + 2 * n;
            for i in 0..k {
                out[(row, i)] = s * root.coefficients[i].re;
                out[(row + 1, i)] = -s * root.coefficients[i].im;
            }
        }
        out
    }

    pub fn sector(&self, row: usize) -> Sector {
        if row < self.rank {
            Sector::Cartan(row)
        } else {
            let n = row - self.rank;
            Sector::Root { root: n / 2, part: n % 2 }
        }
    }

    /// Roots and weights as JSON for debugging.
    pub fn debug_json(&self) -> serde_json::Value {
        let v = |x: &RVector| x.iter().copied().collect::<Vec<f64>>();
        serde_json::json!({
            "rank": self.rank,
            "positive_roots": self.positive_roots.iter().map(|r| v(&r.vector)).collect::<Vec<_>>(),
            "weights": self.weights.iter().map(v).collect::<Vec<_>>(),
            "highest_weight": self.highest_index.map(|i| v(&self.weights[i])),
            "positive_root_sum": v(&self.positive_root_sum),
        })
    }
}

/// Cartan decomposition of `rep`.
///
/// When the input basis contains diagonal generators whose span is already
/// a Cartan subalgebra (`J_z` for spin matrices, the diagonal Gell-Mann
/// generators), that subalgebra is used. Otherwise the centralizer of a
/// random generic element is taken.
pub fn cartan_decompose(rep: &AlgebraRep) -> Result<CartanData> {
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED);
    let k = rep.dim_algebra();

    let diagonal: Vec<usize> = (0..k)
        .filter(|&i| {
            let g = rep.generator(i);
            let d = g.nrows();
            (0..d).all(|r| (0..d).all(|s| r == s || g[(r, s)].norm() < 1e-14))
        })
        .collect();
    if !diagonal.is_empty() {
        for _ in 0..MAX_ATTEMPTS {
            let mut y = vec![0.0; k];
            for &i in &diagonal {
                y[i] = StandardNormal.sample(&mut rng);
            }
            if centralizer(rep, &y).ncols() == diagonal.len() {
                let mut basis = RMatrix::zeros(k, diagonal.len());
                for (col, &i) in diagonal.iter().enumerate() {
                    basis[(i, col)] = 1.0;
                }
                return build(rep, basis, Some(diagonal), &mut rng);
            }
        }
    }

    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let y = random_vector(k, &mut rng);
        let basis = centralizer(rep, y.as_slice());
        match build(rep, basis, None, &mut rng) {
            Ok(cd) => return Ok(cd),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::CartanExtraction("no regular element found".into())))
}

/// Cartan decomposition whose Cartan subalgebra contains the algebra
/// element with coefficients `element`. The first Cartan generator is
/// parallel to `element` when it is nonzero.
///
/// Used to put a state's expectation vector into the Cartan subalgebra.
pub fn cartan_decompose_containing(rep: &AlgebraRep, element: &[f64]) -> Result<CartanData> {
    let k = rep.dim_algebra();
    let x = RVector::from_column_slice(element);
    let norm = x.norm();
    if norm < 1e-12 {
        return cartan_decompose(rep);
    }
    let xhat = &x / norm;
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED ^ 0x9e37_79b9);
    let cent = centralizer(rep, element);

    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let w = &cent * random_vector(cent.ncols(), &mut rng);
        let w = if w.norm() > 0.0 { &w * (1.0 / w.norm()) } else { w };
        let z: Vec<f64> = (&xhat + &w).iter().copied().collect();
        let kernel = centralizer(rep, &z);
        let inside = &kernel * (kernel.transpose() * &xhat);
        if (&inside - &xhat).norm() > 1e-8 {
            last_err = Some(Error::CartanExtraction("element not in centralizer".into()));
            continue;
        }
        let r = kernel.ncols();
        let mut basis = RMatrix::zeros(k, r);
        basis.set_column(0, &xhat);
        let mut filled = 1;
        for col in 0..r {
            if filled == r {
                break;
            }
            let mut v = kernel.column(col).into_owned();
            for prev in 0..filled {
                let p = basis.column(prev).dot(&v);
                v -= basis.column(prev) * p;
            }
            if v.norm() > 1e-6 {
                v /= v.norm();
                basis.set_column(filled, &v);
                filled += 1;
            }
        }
        if filled != r {
            last_err = Some(Error::CartanExtraction("could not complete Cartan basis".into()));
            continue;
        }
        match build(rep, basis, None, &mut rng) {
            Ok(cd) => return Ok(cd),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::CartanExtraction("alignment failed".into())))
}

/// The normalized state annihilated by every raising operator.
pub fn highest_weight_state(cd: &CartanData) -> Result<PureState> {
    let idx = cd.highest_weight_index()?;
    Ok(cd.weight_state(idx))
}

/// `exp(i Σ_k params_k X_k) |Λ⟩`
pub fn generate_gcs(rep: &AlgebraRep, cd: &CartanData, params: &[f64]) -> Result<PureState> {
    if params.len() != rep.dim_algebra() {
        return Err(Error::InvalidArgument(format!(
            "expected {} group parameters, got {}",
            rep.dim_algebra(),
            params.len()
        )));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument("non-finite group parameter".into()));
    }
    let top = highest_weight_state(cd)?;
    let u = unitary_exp(&rep.element(params), -1.0);
    PureState::new(u * top.amplitudes())
}

/// `(E_3, E^+, E^-)` with `E^± = E_±α/|α|` and `E_3 = α·H/|α|²`, satisfying
/// `[E_3, E^±] = ±E^±` and `[E^+, E^-] = E_3`.
pub fn su2_triple_for_root(cd: &CartanData, root_index: usize) -> (CMatrix, CMatrix, CMatrix) {
    let root = &cd.positive_roots[root_index];
    let norm = root.norm();
    let d = root.raising.nrows();
    let mut e3 = CMatrix::zeros(d, d);
    for (a, h) in cd.cartan_generators.iter().enumerate() {
        e3 += h * c(root.vector[a] / (norm * norm));
    }
    (e3, &root.raising * c(1.0 / norm), &root.lowering * c(1.0 / norm))
}

/// `(j_α, m_α)` for a weight state: the spin of the `α`-string through it
/// and its position in that string, found by applying `E^±` until the
/// state is annihilated.
pub fn weight_string(cd: &CartanData, root_index: usize, state: &PureState) -> (f64, f64) {
    let (_, eplus, eminus) = su2_triple_for_root(cd, root_index);
    let climb = |op: &CMatrix| -> usize {
        let mut v = state.amplitudes().clone();
        let mut steps = 0;
        loop {
            let next = op * &v;
            let n = next.norm();
            if n < ANNIHILATION_TOL || steps > v.len() {
                return steps;
            }
            v = next / c(n);
            steps += 1;
        }
    };
    let p = climb(&eplus) as f64;
    let q = climb(&eminus) as f64;
    ((p + q) / 2.0, (q - p) / 2.0)
}

/// Coefficient-space adjoint matrix `A` of the element `y`:
/// `[Σ_j y_j X_j, X_i] = i Σ_k A_ki X_k`.
pub fn adjoint_matrix(rep: &AlgebraRep, y: &[f64]) -> RMatrix {
    let k = rep.dim_algebra();
    let f = rep.structure_constants();
    RMatrix::from_fn(k, k, |row, col| {
        (0..k).filter(|&j| y[j] != 0.0).map(|j| y[j] * f.get(j, col, row)).sum()
    })
}

/// Orthonormal basis (columns) of the centralizer of `y` in the algebra.
pub fn centralizer(rep: &AlgebraRep, y: &[f64]) -> RMatrix {
    real_kernel(&adjoint_matrix(rep, y), KERNEL_TOL)
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> RVector {
    let v = RVector::from_fn(n, |_, _| StandardNormal.sample(rng));
    let norm = v.norm();
    v / norm
}

/// Lexicographic comparison with tolerance.
pub fn lex_cmp(a: &RVector, b: &RVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x - y).abs() > WEIGHT_TOL {
            return x.total_cmp(y);
        }
    }
    Ordering::Equal
}

fn lex_positive(a: &RVector) -> bool {
    lex_cmp(a, &RVector::zeros(a.len())) == Ordering::Greater
}

fn build(
    rep: &AlgebraRep,
    basis: RMatrix,
    aligned: Option<Vec<usize>>,
    rng: &mut ChaCha8Rng,
) -> Result<CartanData> {
    let k = rep.dim_algebra();
    let r = basis.ncols();
    if r == 0 {
        return Err(Error::CartanExtraction("empty centralizer".into()));
    }
    let cartan_generators: Vec<CMatrix> = (0..r)
        .map(|a| rep.element(basis.column(a).as_slice()))
        .collect();
    let scale = rep.normalization().max(1.0);
    for a in 0..r {
        for b in (a + 1)..r {
            let defect = max_abs(&commutator(&cartan_generators[a], &cartan_generators[b]));
            if defect > COMMUTE_TOL * scale {
                return Err(Error::CartanExtraction(format!(
                    "Cartan generators {a},{b} do not commute (residue {defect:.3e})"
                )));
            }
        }
    }

    // ad(H_a) on complex coefficient vectors is i·A_a, Hermitian.
    let ad: Vec<CMatrix> = (0..r)
        .map(|a| adjoint_matrix(rep, basis.column(a).as_slice()).map(|x| I * x))
        .collect();

    let mut roots: Option<Vec<(RVector, CVector)>> = None;
    for _ in 0..MAX_ATTEMPTS {
        let t = random_vector(r, rng);
        let mut g = CMatrix::zeros(k, k);
        for a in 0..r {
            g += &ad[a] * c(t[a]);
        }
        let (values, vectors) = hermitian_eigen(&g);
        let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut found = Vec::new();
        let mut ok = true;
        for (n, &val) in values.iter().enumerate() {
            if val.abs() <= EIGEN_TOL * top.max(1.0) {
                continue;
            }
            let v = vectors.column(n).into_owned();
            let alpha = RVector::from_fn(r, |a, _| v.dotc(&(&ad[a] * &v)).re);
            let residual = (0..r)
                .map(|a| (&ad[a] * &v - &v * c(alpha[a])).norm())
                .fold(0.0, f64::max);
            if residual > EIGEN_TOL * top.max(1.0) {
                ok = false;
                break;
            }
            found.push((alpha, v));
        }
        if ok && found.len() == k - r {
            roots = Some(found);
            break;
        }
    }
    let roots = roots.ok_or_else(|| {
        Error::CartanExtraction("adjoint action could not be simultaneously diagonalized".into())
    })?;

    let mut positive: Vec<(RVector, CVector)> =
        roots.iter().filter(|(a, _)| lex_positive(a)).cloned().collect();
    if 2 * positive.len() != roots.len() {
        return Err(Error::CartanExtraction("roots do not pair as ±α".into()));
    }
    for (alpha, _) in &positive {
        let neg = -alpha;
        if !roots.iter().any(|(b, _)| lex_cmp(b, &neg) == Ordering::Equal) {
            return Err(Error::CartanExtraction("root without negative partner".into()));
        }
    }
    positive.sort_by(|a, b| lex_cmp(&b.0, &a.0));

    let positive_roots: Vec<PositiveRoot> = positive
        .into_iter()
        .map(|(vector, mut coefficients)| {
            linalg::fix_phase(&mut coefficients);
            let raising = rep.complex_element(coefficients.as_slice());
            let lowering = raising.adjoint();
            PositiveRoot { vector, coefficients, raising, lowering }
        })
        .collect();
    for root in &positive_roots {
        for (a, h) in cartan_generators.iter().enumerate() {
            let defect = max_abs(&(commutator(h, &root.raising) - &root.raising * c(root.vector[a])));
            if defect > EIGEN_TOL * scale {
                return Err(Error::CartanExtraction(format!(
                    "[H, E_α] ≠ α E_α (residue {defect:.3e})"
                )));
            }
        }
    }

    let (weight_basis, weights) = weight_decomposition(&cartan_generators, rng)?;
    let highest_index = if weights.len() > 1 && lex_cmp(&weights[0], &weights[1]) == Ordering::Equal
    {
        None
    } else {
        Some(0)
    };
    let positive_root_sum = positive_roots
        .iter()
        .fold(RVector::zeros(r), |acc, root| acc + &root.vector);

    Ok(CartanData {
        rank: r,
        dim_algebra: k,
        cartan_coefficients: basis,
        cartan_generators,
        aligned_indices: aligned,
        positive_roots,
        weight_basis,
        weights,
        highest_index,
        positive_root_sum,
    })
}

fn weight_decomposition(
    cartan: &[CMatrix],
    rng: &mut ChaCha8Rng,
) -> Result<(CMatrix, Vec<RVector>)> {
    let r = cartan.len();
    let d = cartan[0].nrows();
    for _ in 0..MAX_ATTEMPTS {
        let s = random_vector(r, rng);
        let mut combo = CMatrix::zeros(d, d);
        for (a, h) in cartan.iter().enumerate() {
            combo += h * c(s[a]);
        }
        let (_, vectors) = hermitian_eigen(&combo);
        let mut pairs = Vec::with_capacity(d);
        let mut ok = true;
        for n in 0..d {
            let v = vectors.column(n).into_owned();
            let mu = RVector::from_fn(r, |a, _| v.dotc(&(&cartan[a] * &v)).re);
            let residual = (0..r)
                .map(|a| (&cartan[a] * &v - &v * c(mu[a])).norm())
                .fold(0.0, f64::max);
            if residual > EIGEN_TOL {
                ok = false;
                break;
            }
            pairs.push((mu, v));
        }
        if !ok {
            continue;
        }
        pairs.sort_by(|a, b| lex_cmp(&b.0, &a.0));
        let mut basis = CMatrix::zeros(d, d);
        let mut weights = Vec::with_capacity(d);
        for (col, (mu, v)) in pairs.into_iter().enumerate() {
            basis.set_column(col, &v);
            weights.push(mu);
        }
        return Ok((basis, weights));
    }
    Err(Error::CartanExtraction("Cartan generators could not be simultaneously diagonalized".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2(two_j: u32) -> (AlgebraRep, CartanData) {
        let rep = AlgebraRep::su2(two_j).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        (rep, cd)
    }

    #[test]
    fn su2_cartan_is_jz() {
        for two_j in 1..=6 {
            let (rep, cd) = su2(two_j);
            assert_eq!(cd.rank(), 1);
            assert_eq!(cd.aligned_generator_indices(), Some(&[2usize][..]));
            assert!(max_abs(&(&cd.cartan_generators()[0] - rep.generator(2))) < 1e-14);
            let roots = cd.roots();
            assert_eq!(roots.len(), 2);
            assert!((roots[0][0] - 1.0).abs() < 1e-10);
            assert!((roots[1][0] + 1.0).abs() < 1e-10);
            // E_+ ∝ J_x + i J_y
            let jplus = rep.generator(0) + rep.generator(1) * I;
            let e = &cd.positive_roots()[0].raising;
            let ratio = e[(0, 1)] / jplus[(0, 1)];
            assert!(max_abs(&(e - &jplus * ratio)) < 1e-10);
        }
    }

    #[test]
    fn su2_highest_weight_is_top_rung() {
        let (_, cd) = su2(2);
        let top = highest_weight_state(&cd).unwrap();
        assert!((top.amplitudes()[0] - c(1.0)).norm() < 1e-12);
        assert!((cd.highest_weight().unwrap()[0] - 1.0).abs() < 1e-12);

        let (_, cd) = su2(1);
        let top = highest_weight_state(&cd).unwrap();
        assert!((top.amplitudes()[0] - c(1.0)).norm() < 1e-12);
        assert!(top.amplitudes()[1].norm() < 1e-12);
    }

    #[test]
    fn su2_pairings_match_spin_formulas() {
        for two_j in 1..=6 {
            let (_, cd) = su2(two_j);
            let j = two_j as f64 / 2.0;
            let lam = cd.highest_weight().unwrap();
            let mu = cd.positive_root_sum();
            assert!((lam.dot(mu) - j).abs() < 1e-10);
            assert!((lam.dot(&(lam + mu)) - j * (j + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn su3_structure() {
        let rep = AlgebraRep::su_n_fundamental(3).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        assert_eq!(cd.rank(), 2);
        assert_eq!(cd.roots().len(), 6);
        assert_eq!(cd.aligned_generator_indices(), Some(&[2usize, 7][..]));
        let top = highest_weight_state(&cd).unwrap();
        // A standard basis vector.
        let big = top.amplitudes().iter().filter(|z| z.norm() > 1e-12).count();
        assert_eq!(big, 1);
        for root in cd.positive_roots() {
            assert!((&root.raising * top.amplitudes()).norm() < 1e-10);
        }
        let sum = cd.roots().iter().fold(RVector::zeros(2), |a, r| a + r);
        assert!(sum.norm() < 1e-10);
    }

    #[test]
    fn ladder_normalization() {
        let rep = AlgebraRep::su_n_fundamental(3).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        for root in cd.positive_roots() {
            let mut ah = CMatrix::zeros(3, 3);
            for (a, h) in cd.cartan_generators().iter().enumerate() {
                ah += h * c(root.vector[a]);
            }
            let comm = commutator(&root.raising, &root.lowering);
            assert!(max_abs(&(comm - ah)) < 1e-10);
            assert_eq!(root.lowering, root.raising.adjoint());
        }
    }

    #[test]
    fn rotated_basis_is_orthogonal() {
        for rep in [AlgebraRep::su2(3).unwrap(), AlgebraRep::su_n_fundamental(4).unwrap()] {
            let cd = cartan_decompose(&rep).unwrap();
            let o = cd.rotated_basis();
            let k = rep.dim_algebra();
            assert!((&o * o.transpose() - RMatrix::identity(k, k)).norm() < 1e-10);
        }
    }

    #[test]
    fn triples_close() {
        for rep in [AlgebraRep::su2(4).unwrap(), AlgebraRep::su_n_fundamental(3).unwrap()] {
            let cd = cartan_decompose(&rep).unwrap();
            for n in 0..cd.positive_roots().len() {
                let (e3, ep, em) = su2_triple_for_root(&cd, n);
                assert!(max_abs(&(commutator(&e3, &ep) - &ep)) < 1e-10);
                assert!(max_abs(&(commutator(&e3, &em) + &em)) < 1e-10);
                assert!(max_abs(&(commutator(&ep, &em) - &e3)) < 1e-10);
            }
        }
    }

    #[test]
    fn gcs_rotation_by_pi_flips_spin() {
        let (rep, cd) = su2(3);
        let s = generate_gcs(&rep, &cd, &[std::f64::consts::PI, 0.0, 0.0]).unwrap();
        // |j,-j⟩ is the last basis vector.
        assert!((s.amplitudes()[3].norm() - 1.0).abs() < 1e-12);
        let zero = generate_gcs(&rep, &cd, &[0.0; 3]).unwrap();
        assert!((zero.amplitudes()[0] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn weight_strings_su2() {
        let (_, cd) = su2(4);
        for (n, w) in cd.weights().iter().enumerate() {
            let (j, m) = weight_string(&cd, 0, &cd.weight_state(n));
            assert!((j - 2.0).abs() < 1e-12);
            assert!((m - w[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn alignment_contains_element() {
        let rep = AlgebraRep::su_n_fundamental(3).unwrap();
        let x = [0.3, -0.2, 0.5, 0.1, 0.0, 0.7, -0.4, 0.25];
        let cd = cartan_decompose_containing(&rep, &x).unwrap();
        assert_eq!(cd.rank(), 2);
        let xv = RVector::from_column_slice(&x);
        let proj = cd.cartan_coefficients().transpose() * &xv;
        assert!((proj.norm() - xv.norm()).abs() < 1e-10);

        // Singular direction: λ8 alone has a u(2) centralizer.
        let mut y = [0.0; 8];
        y[7] = 1.0;
        let cd = cartan_decompose_containing(&rep, &y).unwrap();
        assert_eq!(cd.rank(), 2);
        assert!((cd.cartan_coefficients()[(7, 0)] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weight_basis_diagonalizes_cartan() {
        let rep = AlgebraRep::su_n_fundamental(4).unwrap();
        let cd = cartan_decompose(&rep).unwrap();
        for (n, w) in cd.weights().iter().enumerate() {
            let s = cd.weight_state(n);
            for (a, h) in cd.cartan_generators().iter().enumerate() {
                assert!((s.expectation(h) - w[a]).abs() < 1e-10);
            }
        }
    }
}
