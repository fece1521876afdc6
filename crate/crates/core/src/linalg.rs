// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra helpers shared by the other modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `trace(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// ascending. Columns of the returned matrix are the eigenvectors, each
/// phase-fixed so that its largest-modulus component is real and positive.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut v);
        vectors.set_column(col, &v);
    }
    (values, vectors)
}

/// Real symmetric eigen-decomposition, eigenvalues ascending.
pub fn symmetric_eigen(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = RMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let sym = (m + m.adjoint()) * c(0.5);
    sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Rotates `v` so its largest-modulus component is real and non-negative.
pub fn fix_phase(v: &mut CVector) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        // Strict comparison with a small margin keeps the choice stable
        // under roundoff when several components tie.
        if z.norm() > best_norm + 1e-12 {
            best = i;
            best_norm = z.norm();
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// `exp(-i t h)` for Hermitian `h`, via its spectral decomposition.
pub fn unitary_exp(h: &CMatrix, t: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let n = h.nrows();
    let mut scaled = vectors.clone();
    for (j, lambda) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -lambda * t);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * vectors.adjoint()
}

/// Kernel of a real matrix: orthonormal columns spanning `{v : a v = 0}`,
/// found from the eigenvectors of `aᵀa` with eigenvalue below
/// `rel_tol · max(1, largest eigenvalue)`.
pub fn real_kernel(a: &RMatrix, rel_tol: f64) -> RMatrix {
    let gram = a.transpose() * a;
    let (values, vectors) = symmetric_eigen(&gram);
    let scale = values.last().copied().unwrap_or(0.0).max(1.0);
    let cols: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() <= rel_tol * scale)
        .map(|(i, _)| i)
        .collect();
    let mut out = RMatrix::zeros(a.ncols(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &vectors.column(src));
    }
    out
}

/// `⟨ψ|m|ψ⟩`
pub fn expectation(psi: &CVector, m: &CMatrix) -> Complex64 {
    psi.dotc(&(m * psi))
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Column-stacking Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
