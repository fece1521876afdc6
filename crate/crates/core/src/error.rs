// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("abelian/trivial representation not semisimple-irreducible in the required sense")]
    TrivialRepresentation,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator {index} is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { index: usize, deviation: f64 },

    #[error("generators are not trace-orthogonal with uniform norm (deviation {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },

    #[error("not a closed algebra (commutator residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("representation not irreducible (Casimir off-proportionality {deviation:.3e})")]
    NotIrreducible { deviation: f64 },

    #[error("adjoint Casimir is not uniform across generators (spread {spread:.3e})")]
    NonUniformAdjointCasimir { spread: f64 },

    #[error("Cartan extraction failed: {0}")]
    CartanExtraction(String),

    #[error("highest weight not unique")]
    DegenerateHighestWeight,

    #[error(
        "normalization inconsistency between root space and generators \
         ({what}: state value {state:.12}, root-space value {roots:.12})"
    )]
    NormalizationMismatch { what: &'static str, state: f64, roots: f64 },

    #[error("integration blow-up; reduce dt")]
    BlowUp,

    #[error("step too large for positivity (minimum eigenvalue {0:.3e})")]
    Positivity(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("stability guard: gamma*dt = {0:.3e} exceeds 0.01")]
    StepTooLarge(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
