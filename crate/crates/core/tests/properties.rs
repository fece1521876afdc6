// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use weakmeas::cartan::{cartan_decompose, generate_gcs, highest_weight_state};
use weakmeas::dynamics::{snlse_step, Hamiltonian};
use weakmeas::linalg::{unitary_exp, CVector};
use weakmeas::observables::{cartan_split, localization_drift, uncertainty_bounds, Bounds, Moments};
use weakmeas::{AlgebraRep, CartanData, PureState};

struct Case {
    rep: AlgebraRep,
    cd: CartanData,
    bounds: Bounds,
    gcs_trace: f64,
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let mut reps: Vec<AlgebraRep> = (1..=4).map(|t| AlgebraRep::su2(t).unwrap()).collect();
        reps.push(AlgebraRep::su_n_fundamental(3).unwrap());
        reps.push(AlgebraRep::su_n_fundamental(4).unwrap());
        reps.into_iter()
            .map(|rep| {
                let cd = cartan_decompose(&rep).unwrap();
                let bounds = uncertainty_bounds(&rep, &cd).unwrap();
                let top = highest_weight_state(&cd).unwrap();
                let gcs_trace = Moments::new(&top, &rep).trace_norm_m();
                Case { rep, cd, bounds, gcs_trace }
            })
            .collect()
    })
}

fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5)
}

fn state(raw: &[(f64, f64)], d: usize) -> Option<PureState> {
    let v = CVector::from_iterator(d, raw.iter().take(d).map(|&(re, im)| Complex64::new(re, im)));
    if v.norm() < 1e-3 {
        return None;
    }
    PureState::new(v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn uncertainty_plus_purity_is_casimir(idx in 0usize..6, raw in amplitudes()) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        let m = Moments::new(&s, &case.rep);
        prop_assert!((m.total_uncertainty() + m.purity() - case.bounds.c_h).abs() < 1e-10);
        prop_assert!((m.casimir() - case.bounds.c_h).abs() < 1e-10);
    }

    #[test]
    fn uncertainty_lies_between_bounds(idx in 0usize..6, raw in amplitudes()) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        let delta = Moments::new(&s, &case.rep).total_uncertainty();
        prop_assert!(delta >= case.bounds.delta_min - 1e-9);
        prop_assert!(delta <= case.bounds.c_h + 1e-9);
    }

    #[test]
    fn drift_never_positive(idx in 0usize..6, raw in amplitudes(), gamma in 0.0f64..2.0) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        prop_assert!(localization_drift(&s, &case.rep, gamma) <= 1e-9);
    }

    #[test]
    fn trace_norm_minimized_by_coherent_states(idx in 0usize..6, raw in amplitudes()) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        prop_assert!(Moments::new(&s, &case.rep).trace_norm_m() >= case.gcs_trace - 1e-9);
    }

    #[test]
    fn coherent_states_saturate_bounds(idx in 0usize..6, params in prop::collection::vec(-3.0f64..3.0, 15)) {
        let case = &cases()[idx];
        let k = case.rep.dim_algebra();
        let s = generate_gcs(&case.rep, &case.cd, &params[..k]).unwrap();
        let m = Moments::new(&s, &case.rep);
        prop_assert!((m.total_uncertainty() - case.bounds.delta_min).abs() < 1e-9);
        prop_assert!((m.trace_norm_m() - case.gcs_trace).abs() < 1e-9);
        prop_assert!(localization_drift(&s, &case.rep, 1.0).abs() < 1e-9);
    }

    #[test]
    fn functionals_are_group_invariant(
        idx in 0usize..6,
        raw in amplitudes(),
        params in prop::collection::vec(-2.0f64..2.0, 15),
    ) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        let k = case.rep.dim_algebra();
        let u = unitary_exp(&case.rep.element(&params[..k]), 1.0);
        let moved = PureState::new(u * s.amplitudes()).unwrap();
        let (a, b) = (Moments::new(&s, &case.rep), Moments::new(&moved, &case.rep));
        prop_assert!((a.total_uncertainty() - b.total_uncertainty()).abs() < 1e-9);
        prop_assert!((a.trace_norm_m() - b.trace_norm_m()).abs() < 1e-9);
    }

    #[test]
    fn cartan_split_adds_up(idx in 0usize..5, raw in amplitudes()) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        let split = cartan_split(&s, &case.rep).unwrap();
        let total = Moments::new(&s, &case.rep).trace_norm_m();
        prop_assert!((split.total() - total).abs() < 1e-8);
        prop_assert!((split.same_root - split.ladder_form).abs() < 1e-8);
        prop_assert!(split.off_cartan_mean < 1e-8);
    }

    #[test]
    fn step_keeps_norm_and_casimir(
        idx in 0usize..6,
        raw in amplitudes(),
        inc in prop::collection::vec(-0.05f64..0.05, 15),
    ) {
        let case = &cases()[idx];
        let Some(s) = state(&raw, case.rep.dim_hilbert()) else { return Ok(()); };
        let k = case.rep.dim_algebra();
        let h = Hamiltonian::new(&case.rep, inc[..k].iter().map(|x| 10.0 * x).collect()).unwrap();
        let next = snlse_step(&s, &h, &case.rep, 0.1, 1e-3, &inc[..k]).unwrap();
        prop_assert!((next.amplitudes().norm() - 1.0).abs() < 1e-12);
        prop_assert!((Moments::new(&next, &case.rep).casimir() - case.bounds.c_h).abs() < 1e-10);
    }
}
