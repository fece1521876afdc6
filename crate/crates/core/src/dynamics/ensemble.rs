// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::parallel::{map_indexed, Execution};

use super::snlse::{run, HamiltonianScheme};
use super::state::{DensityMatrix, Hamiltonian, NoiseConfig, PureState};

/// Trajectories per work item. Partial sums are formed per chunk and then
/// added in chunk order, so the result does not depend on scheduling.
const CHUNK: usize = 16;

/// Trajectory-averaged projectors `(1/n) Σ_k |ψ_k(t)⟩⟨ψ_k(t)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleAverage {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub n_traj: usize,
}

/// Averages `n_traj` sNLSE trajectories started from `initial`, trajectory
/// `i` using seed `cfg.seed + i`. Records every `stride` steps.
pub fn ensemble_average(
    initial: &PureState,
    h: &Hamiltonian,
    rep: &AlgebraRep,
    cfg: &NoiseConfig,
    n_traj: usize,
    stride: usize,
    exec: Execution,
) -> Result<EnsembleAverage> {
    if n_traj == 0 {
        return Err(Error::InvalidArgument("n_traj must be >= 1".into()));
    }
    cfg.validate()?;
    if stride == 0 {
        return Err(Error::InvalidArgument("record stride must be >= 1".into()));
    }
    let d = rep.dim_hilbert();
    let n_rec = cfg.steps / stride + 1;
    let n_chunks = n_traj.div_ceil(CHUNK);

    let partials = map_indexed(exec, n_chunks, |chunk| -> Result<Vec<CMatrix>> {
        let mut sums = vec![CMatrix::zeros(d, d); n_rec];
        let lo = chunk * CHUNK;
        let hi = (lo + CHUNK).min(n_traj);
        for i in lo..hi {
            let traj_cfg = NoiseConfig { seed: cfg.seed.wrapping_add(i as u64), ..*cfg };
            run(initial, h, rep, &traj_cfg, stride, HamiltonianScheme::Exact, |step, psi| {
                sums[step / stride] += psi * psi.adjoint();
            })?;
        }
        Ok(sums)
    });

    let mut total = vec![CMatrix::zeros(d, d); n_rec];
    for partial in partials {
        for (acc, p) in total.iter_mut().zip(partial?) {
            *acc += p;
        }
    }
    let scale = c(1.0 / n_traj as f64);
    let states = total
        .into_iter()
        .map(|m| DensityMatrix::new(m * scale))
        .collect::<Result<Vec<_>>>()?;
    let times = (0..n_rec).map(|r| (r * stride) as f64 * cfg.dt).collect();
    Ok(EnsembleAverage { times, states, n_traj })
}
