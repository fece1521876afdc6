// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Weak measurement of a spectrum-generating Lie algebra.
//!
//! The crate integrates the diffusive stochastic nonlinear Schrödinger
//! equation (sNLSE) for continuously monitored algebra generators, the
//! matching double-commutator Lindblad master equation, and the state
//! functionals (total uncertainty, generalized purity, covariance trace norm)
//! that show generalized coherent states are the stable end points of the
//! monitoring process.
//!
//! Module map:
//!
//! * [`algebra`]: irreducible Hermitian representations and their invariants.
//! * [`cartan`]: Cartan subalgebra, roots, ladder operators, highest weight.
//! * [`dynamics`]: sNLSE trajectories, Lindblad propagation, ensembles.
//! * [`observables`]: uncertainty, purity, covariance, localization drift.
//! * [`harness`]: experiment configuration and CSV/JSON reporting.
//! * [`parallel`]: the data-parallel execution layer (rayon behind the
//!   `parallel` feature, sequential otherwise).

pub mod algebra;
pub mod cartan;
pub mod dynamics;
mod error;
pub mod harness;
pub mod linalg;
pub mod observables;
pub mod parallel;

pub use algebra::{AlgebraRep, StructureConstants};
pub use cartan::CartanData;
pub use dynamics::{DensityMatrix, Hamiltonian, NoiseConfig, PureState, TrajectoryRecord};
pub use error::{Error, Result};
pub use parallel::Execution;
