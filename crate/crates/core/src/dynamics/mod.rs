// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pure-state trajectories of the sNLSE, the Lindblad master equation, and
//! trajectory ensembles that connect the two.

mod ensemble;
mod lindblad;
mod snlse;
mod state;

pub use ensemble::{ensemble_average, EnsembleAverage};
pub use lindblad::{
    lindblad_evolve, lindblad_rhs, lindblad_step, lindblad_superoperator, LindbladMode,
    LindbladPropagator,
};
pub use snlse::{
    simulate_trajectory, simulate_trajectory_with, snlse_step, HamiltonianScheme, NoiseStream,
    ObservableRow, SnlseStepper, TrajectoryRecord,
};
pub use state::{haar_state, DensityMatrix, Hamiltonian, NoiseConfig, PureState, MAX_GAMMA_DT};
