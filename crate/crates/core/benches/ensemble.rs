// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

//! Sequential vs parallel throughput of the two data-parallel loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use weakmeas::dynamics::{ensemble_average, haar_state};
use weakmeas::observables::haar_scan;
use weakmeas::parallel::Execution;
use weakmeas::{AlgebraRep, Hamiltonian, NoiseConfig};

fn modes() -> Vec<Execution> {
    let mut v = vec![Execution::Sequential];
    if Execution::parallel_available() {
        v.push(Execution::Parallel);
    }
    v
}

fn bench_ensemble(c: &mut Criterion) {
    let rep = AlgebraRep::su2(2).unwrap();
    let h = Hamiltonian::zero(&rep);
    let psi = haar_state(3, 0, 1);
    let cfg = NoiseConfig { gamma: 0.1, dt: 1e-3, seed: 0, steps: 500 };
    let n_traj = 256;
    let mut group = c.benchmark_group("ensemble_su2_j1");
    group.sample_size(10);
    group.throughput(Throughput::Elements(n_traj as u64));
    for exec in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(exec), &exec, |b, &exec| {
            b.iter(|| ensemble_average(&psi, &h, &rep, &cfg, black_box(n_traj), 50, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let rep = AlgebraRep::su_n_fundamental(3).unwrap();
    let samples = 4096;
    let mut group = c.benchmark_group("haar_scan_su3");
    group.throughput(Throughput::Elements(samples as u64));
    for exec in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(exec), &exec, |b, &exec| {
            b.iter(|| haar_scan(&rep, black_box(samples), 1, 0.1, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ensemble, bench_scan);
criterion_main!(benches);
