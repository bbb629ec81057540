mod common;

use common::{factorial_members, factorial_weights};
use proptest::prelude::*;
use quasianalytic::quasianalysis::{continuity_check, shift_bound_check, majorant_properties_check, MajorantProfile, DEFAULT_ORDER};
use quasianalytic::sequences::WeightSequence;

fn weights() -> WeightSequence {
    factorial_weights(DEFAULT_ORDER + 5)
}

#[test]
fn profiles_satisfy_majorant_properties() {
    for f in factorial_members() {
        let profile = MajorantProfile::sample_uniform(&f, &weights(), DEFAULT_ORDER, 1000).unwrap();
        let report = majorant_properties_check(&profile).unwrap();
        assert!(report.holds(), "{}: {:?}", f.name(), report.violations.first());
    }
}

#[test]
fn continuity_on_grids() {
    let m = weights();
    for f in factorial_members() {
        let (a, b) = f.interval();
        let step = (b - a) / 500.0;
        for i in 0..500 {
            let t = a + step * i as f64;
            for n in [0, 1, 3, 7] {
                if let Some(c) = continuity_check(&f, &m, n, t, step.min(b - t), DEFAULT_ORDER).unwrap() {
                    assert!(c.holds, "{} n = {n} t = {t}: {c:?}", f.name());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn shift_bound_holds(idx in 0usize..3, n in 0usize..10, dq in 1usize..20, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let f = &factorial_members()[idx];
        let (a, b) = f.interval();
        let t = a + (b - a) * u;
        let tau = a + (b - a) * v - t;
        let c = shift_bound_check(f, &weights(), n, n + dq, t, tau, DEFAULT_ORDER).unwrap();
        prop_assert!(c.holds, "{:?}", c);
    }
}
