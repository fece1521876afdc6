// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Irreducible Hermitian representations of compact semisimple Lie algebras.
//!
//! A representation is a list of Hermitian `d×d` generators `X_i` that are
//! trace-orthogonal with a common norm `λ = trace(X_i X_i)`. Everything else
//! (structure constants, Casimir eigenvalue `c_H`, adjoint Casimir `c_adj`)
//! is extracted numerically from the matrices and cross-checked, so the same
//! code path serves every algebra and every basis scale.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, hermiticity_defect, max_abs, trace_product, CMatrix, I};
use num_complex::Complex64;

use crate::linalg;

const HERMITIAN_TOL: f64 = 1e-12;
const CLOSURE_TOL: f64 = 1e-8;
const ORTHOGONALITY_TOL: f64 = 1e-10;
const IRREDUCIBLE_TOL: f64 = 1e-8;
const ADJOINT_TOL: f64 = 1e-10;

/// Real structure constants `f_ijk` with `[X_i, X_j] = i Σ_k f_ijk X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    k: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(k: usize) -> Self {
        Self { k, data: vec![0.0; k * k * k] }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.k + j) * self.k + k]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.k + j) * self.k + k] = v;
    }

    /// Largest violation of total antisymmetry.
    pub fn antisymmetry_defect(&self) -> f64 {
        let k = self.k;
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                for e in 0..k {
                    let v = self.get(a, b, e);
                    worst = worst
                        .max((v + self.get(b, a, e)).abs())
                        .max((v + self.get(a, e, b)).abs())
                        .max((v - self.get(b, e, a)).abs());
                }
            }
        }
        worst
    }

    /// `Σ_kl f_ikl f_jkl`, the adjoint Casimir form in coefficient space.
    pub fn contraction(&self, i: usize, j: usize) -> f64 {
        let k = self.k;
        let mut acc = 0.0;
        for a in 0..k {
            for b in 0..k {
                acc += self.get(i, a, b) * self.get(j, a, b);
            }
        }
        acc
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// An irreducible Hermitian representation with its invariants.
#[derive(Clone, Debug)]
pub struct AlgebraRep {
    label: String,
    generators: Vec<CMatrix>,
    structure_constants: StructureConstants,
    gram: linalg::RMatrix,
    casimir_eigenvalue: f64,
    adjoint_casimir: f64,
    normalization: f64,
}

impl AlgebraRep {
    /// Spin-`j` irrep of su(2), `two_j = 2j`.
    ///
    /// Generators are `J_x, J_y, J_z` in the `J_z` eigenbasis ordered
    /// `m = j, j-1, ..., -j`.
    pub fn su2(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::TrivialRepresentation);
        }
        let d = two_j as usize + 1;
        let j = two_j as f64 / 2.0;
        let m = |idx: usize| j - idx as f64;

        let mut jz = CMatrix::zeros(d, d);
        let mut jplus = CMatrix::zeros(d, d);
        for idx in 0..d {
            jz[(idx, idx)] = c(m(idx));
            if idx > 0 {
                // J_+ |j,m⟩ = sqrt(j(j+1) - m(m+1)) |j,m+1⟩, and |j,m+1⟩ sits at idx-1.
                let mm = m(idx);
                jplus[(idx - 1, idx)] = c((j * (j + 1.0) - mm * (mm + 1.0)).sqrt());
            }
        }
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus) * c(0.5);
        let jy = (&jplus - &jminus) * Complex64::new(0.0, -0.5);
        Self::from_generators(format!("su2:two_j={two_j}"), vec![jx, jy, jz])
    }

    /// Fundamental irrep of su(N) in the generalized Gell-Mann basis,
    /// normalized to `trace(X_i X_j) = δ_ij / 2`.
    ///
    /// Ordering follows the usual su(3) convention: for each column `k`, the
    /// symmetric and antisymmetric off-diagonal pairs `(l, k)` with `l < k`,
    /// then the `k`-th diagonal generator.
    pub fn su_n_fundamental(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("su(N) requires N >= 2, got {n}")));
        }
        let mut gens = Vec::with_capacity(n * n - 1);
        for k in 1..n {
            for l in 0..k {
                let mut sym = CMatrix::zeros(n, n);
                sym[(l, k)] = c(0.5);
                sym[(k, l)] = c(0.5);
                gens.push(sym);

                let mut anti = CMatrix::zeros(n, n);
                anti[(l, k)] = Complex64::new(0.0, -0.5);
                anti[(k, l)] = Complex64::new(0.0, 0.5);
                gens.push(anti);
            }
            let mf = k as f64;
            let scale = 0.5 * (2.0 / (mf * (mf + 1.0))).sqrt();
            let mut diag = CMatrix::zeros(n, n);
            for i in 0..k {
                diag[(i, i)] = c(scale);
            }
            diag[(k, k)] = c(-mf * scale);
            gens.push(diag);
        }
        Self::from_generators(format!("suN:n={n}"), gens)
    }

    /// Validates a generator set and extracts all invariants.
    pub fn from_generators(label: impl Into<String>, generators: Vec<CMatrix>) -> Result<Self> {
        let k = generators.len();
        if k == 0 {
            return Err(Error::InvalidArgument("empty generator set".into()));
        }
        let d = generators[0].nrows();
        if d < 2 {
            return Err(Error::TrivialRepresentation);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.nrows() != d || g.ncols() != d {
                return Err(Error::InvalidArgument(format!(
                    "generator {index} has shape {}x{}, expected {d}x{d}",
                    g.nrows(),
                    g.ncols()
                )));
            }
            let deviation = hermiticity_defect(g);
            if deviation > HERMITIAN_TOL * max_abs(g).max(1.0) {
                return Err(Error::NotHermitian { index, deviation });
            }
        }

        let gram = gram_matrix(&generators);
        let normalization = gram[(0, 0)];
        if normalization <= 0.0 {
            return Err(Error::NotOrthogonal { deviation: f64::INFINITY });
        }
        let mut deviation: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { normalization } else { 0.0 };
                deviation = deviation.max((gram[(i, j)] - target).abs());
            }
        }
        if deviation > ORTHOGONALITY_TOL * normalization.max(1.0) {
            return Err(Error::NotOrthogonal { deviation });
        }

        let structure_constants = compute_structure_constants(&generators)?;
        if structure_constants.as_slice().iter().all(|f| f.abs() < 1e-14) {
            return Err(Error::TrivialRepresentation);
        }
        let (casimir_eigenvalue, adjoint_casimir) =
            casimir_constants_raw(&generators, &structure_constants, normalization)?;

        Ok(Self {
            label: label.into(),
            generators,
            structure_constants,
            gram,
            casimir_eigenvalue,
            adjoint_casimir,
            normalization,
        })
    }

    /// The same algebra with every generator multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s != 0.0) {
            return Err(Error::InvalidArgument(format!("scale must be finite and nonzero, got {s}")));
        }
        let gens = self.generators.iter().map(|g| g * c(s)).collect();
        Self::from_generators(format!("{}*{s}", self.label), gens)
    }

    /// Rescales the basis to be orthonormal under the Killing form, i.e.
    /// `Σ_kl f_ikl f_jkl = δ_ij` (`c_adj = 1`).
    pub fn killing_normalized(&self) -> Result<Self> {
        self.scaled(1.0 / self.adjoint_casimir.sqrt())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &CMatrix {
        &self.generators[i]
    }

    /// `K`, the number of generators.
    pub fn dim_algebra(&self) -> usize {
        self.generators.len()
    }

    /// `d`, the dimension of the representation space.
    pub fn dim_hilbert(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.structure_constants
    }

    pub fn gram(&self) -> &linalg::RMatrix {
        &self.gram
    }

    /// `c_H`, the eigenvalue of `Σ_j X_j²`.
    pub fn casimir_eigenvalue(&self) -> f64 {
        self.casimir_eigenvalue
    }

    /// `c_adj` with `Σ_j [X_j, [X_j, X_i]] = c_adj X_i`.
    pub fn adjoint_casimir(&self) -> f64 {
        self.adjoint_casimir
    }

    /// `λ = trace(X_i X_i)`, shared by every generator.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Algebra element `Σ_k coeffs_k X_k`.
    pub fn element(&self, coeffs: &[f64]) -> CMatrix {
        assert_eq!(coeffs.len(), self.dim_algebra(), "coefficient vector length");
        let d = self.dim_hilbert();
        let mut out = CMatrix::zeros(d, d);
        for (g, &a) in self.generators.iter().zip(coeffs) {
            if a != 0.0 {
                out += g * c(a);
            }
        }
        out
    }

    /// Complex combination `Σ_k coeffs_k X_k`.
    pub fn complex_element(&self, coeffs: &[Complex64]) -> CMatrix {
        let d = self.dim_hilbert();
        let mut out = CMatrix::zeros(d, d);
        for (g, &a) in self.generators.iter().zip(coeffs) {
            out += g * a;
        }
        out
    }

    /// Coefficients of `m` in the generator basis, `trace(m X_k) / λ`.
    pub fn project(&self, m: &CMatrix) -> Vec<Complex64> {
        self.generators.iter().map(|g| trace_product(m, g) / self.normalization).collect()
    }

    /// Residual `max |m - Σ_k project(m)_k X_k|`.
    pub fn projection_residual(&self, m: &CMatrix) -> f64 {
        let coeffs = self.project(m);
        max_abs(&(m - self.complex_element(&coeffs)))
    }

    /// Re-checks every representation invariant, returning the worst
    /// residual found for each.
    pub fn invariant_report(&self) -> InvariantReport {
        let k = self.dim_algebra();
        let d = self.dim_hilbert();
        let f = &self.structure_constants;
        let mut closure: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let lhs = commutator(&self.generators[i], &self.generators[j]);
                let mut rhs = CMatrix::zeros(d, d);
                for (kk, g) in self.generators.iter().enumerate() {
                    rhs += g * (I * f.get(i, j, kk));
                }
                closure = closure.max(max_abs(&(lhs - rhs)));
            }
        }
        let casimir = self.generators.iter().fold(CMatrix::zeros(d, d), |acc, g| acc + g * g);
        let casimir_defect =
            max_abs(&(casimir - CMatrix::identity(d, d) * c(self.casimir_eigenvalue)));
        let mut adjoint_defect: f64 = 0.0;
        for x in &self.generators {
            let dc = double_commutator_sum(&self.generators, x);
            adjoint_defect = adjoint_defect.max(max_abs(&(dc - x * c(self.adjoint_casimir))));
        }
        InvariantReport {
            hermiticity: self.generators.iter().map(hermiticity_defect).fold(0.0, f64::max),
            closure,
            antisymmetry: f.antisymmetry_defect(),
            casimir: casimir_defect,
            adjoint_casimir: adjoint_defect,
        }
    }

    /// Generators and structure constants as JSON, complex entries as
    /// `[re, im]` pairs in row-major order.
    pub fn debug_json(&self) -> serde_json::Value {
        let gens: Vec<Vec<[f64; 2]>> = self
            .generators
            .iter()
            .map(|g| {
                let d = g.nrows();
                (0..d * d).map(|n| {
                    let z = g[(n / d, n % d)];
                    [z.re, z.im]
                })
                .collect()
            })
            .collect();
        serde_json::json!({
            "label": self.label,
            "dim_algebra": self.dim_algebra(),
            "dim_hilbert": self.dim_hilbert(),
            "normalization": self.normalization,
            "casimir_eigenvalue": self.casimir_eigenvalue,
            "adjoint_casimir": self.adjoint_casimir,
            "generators": gens,
            "structure_constants": self.structure_constants.as_slice(),
        })
    }
}

/// Worst residuals of the representation invariants.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InvariantReport {
    pub hermiticity: f64,
    pub closure: f64,
    pub antisymmetry: f64,
    pub casimir: f64,
    pub adjoint_casimir: f64,
}

fn gram_matrix(generators: &[CMatrix]) -> linalg::RMatrix {
    let k = generators.len();
    linalg::RMatrix::from_fn(k, k, |i, j| trace_product(&generators[i], &generators[j]).re)
}

/// `Σ_j [X_j, [X_j, x]]`
pub fn double_commutator_sum(generators: &[CMatrix], x: &CMatrix) -> CMatrix {
    generators
        .iter()
        .fold(CMatrix::zeros(x.nrows(), x.ncols()), |acc, g| acc + commutator(g, &commutator(g, x)))
}

/// Extracts `f_ijk = -(i/λ) trace([X_i, X_j] X_k)` by trace projection and
/// verifies that the commutators close on the span of the generators.
pub fn compute_structure_constants(generators: &[CMatrix]) -> Result<StructureConstants> {
    let k = generators.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty generator set".into()));
    }
    let lambda = trace_product(&generators[0], &generators[0]).re;
    if lambda <= 0.0 {
        return Err(Error::NotOrthogonal { deviation: f64::INFINITY });
    }
    let d = generators[0].nrows();
    let mut f = StructureConstants::zeros(k);
    let mut residual: f64 = 0.0;
    for i in 0..k {
        for j in (i + 1)..k {
            let comm = commutator(&generators[i], &generators[j]);
            let mut span = CMatrix::zeros(d, d);
            for (kk, g) in generators.iter().enumerate() {
                let z = -I * trace_product(&comm, g) / lambda;
                if z.im.abs() > 1e-12 * lambda.max(1.0) {
                    return Err(Error::NotClosed { residual: z.im.abs() });
                }
                f.set(i, j, kk, z.re);
                f.set(j, i, kk, -z.re);
                span += g * (I * z.re);
            }
            residual = residual.max(max_abs(&(comm - span)));
        }
    }
    if residual > CLOSURE_TOL {
        return Err(Error::NotClosed { residual });
    }
    Ok(f)
}

/// `(c_H, c_adj)` for a validated representation.
pub fn casimir_constants(rep: &AlgebraRep) -> Result<(f64, f64)> {
    casimir_constants_raw(&rep.generators, &rep.structure_constants, rep.normalization)
}

fn casimir_constants_raw(
    generators: &[CMatrix],
    f: &StructureConstants,
    lambda: f64,
) -> Result<(f64, f64)> {
    let d = generators[0].nrows();
    let casimir = generators.iter().fold(CMatrix::zeros(d, d), |acc, g| acc + g * g);
    let c_h = casimir.trace().re / d as f64;
    let deviation = max_abs(&(&casimir - CMatrix::identity(d, d) * c(c_h)));
    if deviation > IRREDUCIBLE_TOL * c_h.abs().max(1.0) {
        return Err(Error::NotIrreducible { deviation });
    }

    let k = generators.len();
    let mut per_generator = Vec::with_capacity(k);
    for x in generators {
        let dc = double_commutator_sum(generators, x);
        let ci = trace_product(&dc, x).re / lambda;
        let residual = max_abs(&(dc - x * c(ci)));
        if residual > ADJOINT_TOL * ci.abs().max(1.0) * max_abs(x).max(1.0) {
            return Err(Error::NonUniformAdjointCasimir { spread: residual });
        }
        per_generator.push(ci);
    }
    let c_adj = per_generator[0];
    let mut spread: f64 = 0.0;
    for (i, &ci) in per_generator.iter().enumerate() {
        spread = spread.max((ci - c_adj).abs());
        for j in 0..k {
            let expect = if i == j { c_adj } else { 0.0 };
            spread = spread.max((f.contraction(i, j) - expect).abs());
        }
    }
    if spread > ADJOINT_TOL * c_adj.abs().max(1.0) {
        return Err(Error::NonUniformAdjointCasimir { spread });
    }
    Ok((c_h, c_adj))
}
