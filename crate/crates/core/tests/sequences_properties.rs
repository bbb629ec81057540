use std::f64::consts::E;

use proptest::prelude::*;
use quasianalytic::sequences::{
    beta_sequence, brute_force_regularize, carleman_inequality_check, convex_regularize, criterion_partial_sums,
    WeightSequence,
};

fn weight_sequence(max_len: usize) -> impl Strategy<Value = WeightSequence> {
    prop::collection::vec(-5.0f64..5.0, 1..max_len).prop_map(|tail| {
        let mut logs = vec![0.0];
        logs.extend(tail);
        WeightSequence::from_logs(logs).unwrap()
    })
}

proptest! {
    #[test]
    fn hull_matches_inf_formula(m in weight_sequence(60)) {
        let fast = convex_regularize(&m);
        let slow = brute_force_regularize(&m).unwrap();
        for (a, b) in fast.log_regularized().iter().zip(slow.log_regularized()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
        }
        prop_assert_eq!(fast.principal(), slow.principal());
    }

    #[test]
    fn regularization_invariants(m in weight_sequence(120)) {
        let violations = convex_regularize(&m).invariant_violations(1e-12);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn regularization_is_idempotent(m in weight_sequence(80)) {
        let once = convex_regularize(&m);
        let twice = convex_regularize(&once.as_weight_sequence());
        for (a, b) in once.log_regularized().iter().zip(twice.log_regularized()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
        prop_assert_eq!(twice.principal().len(), once.len());
    }

    #[test]
    fn geometric_scaling_is_covariant(m in weight_sequence(80), log_r in -3.0f64..3.0) {
        let scaled_logs: Vec<f64> = m.log_values().iter().enumerate().map(|(n, l)| l + n as f64 * log_r).collect();
        let scaled = convex_regularize(&WeightSequence::from_logs(scaled_logs).unwrap());
        let base = convex_regularize(&m);
        for (n, (a, b)) in base.log_regularized().iter().zip(scaled.log_regularized()).enumerate() {
            let expected = a + n as f64 * log_r;
            prop_assert!((b - expected).abs() <= 1e-11 * (1.0 + expected.abs()));
        }
        prop_assert_eq!(base.vertices(), scaled.vertices());
    }

    #[test]
    fn ratios_and_roots_are_monotone(m in weight_sequence(80)) {
        let lc = convex_regularize(&m).log_regularized().to_vec();
        for n in 1..lc.len() - 1 {
            let (d0, d1) = (lc[n] - lc[n - 1], lc[n + 1] - lc[n]);
            prop_assert!(d1 >= d0 - 1e-12 * (1.0 + d0.abs()), "ratio drops at {n}");
            let (r0, r1) = (lc[n] / n as f64, lc[n + 1] / (n + 1) as f64);
            prop_assert!(r1 >= r0 - 1e-12 * (1.0 + r0.abs()), "root drops at {n}");
        }
    }

    #[test]
    fn regularized_roots_below_beta(m in weight_sequence(80)) {
        let reg = convex_regularize(&m);
        for (i, beta) in beta_sequence(&m).iter().enumerate() {
            let n = i + 1;
            let root = (reg.log_value(n) / n as f64).exp();
            prop_assert!(root <= beta * (1.0 + 1e-12), "n = {n}: {root} > {beta}");
        }
    }

    #[test]
    fn finite_carleman_chain(m in weight_sequence(80)) {
        let reg = convex_regularize(&m);
        let sums = criterion_partial_sums(&reg, reg.last_index()).unwrap();
        for (k, _, s2, s3) in sums.rows() {
            prop_assert!(s2 <= E * s3 * (1.0 + 1e-12), "m = {k}: {s2} > e * {s3}");
        }
    }

    #[test]
    fn carleman_inequality(a in prop::collection::vec(1e-6f64..1e6, 1..100)) {
        let check = carleman_inequality_check(&a).unwrap();
        prop_assert!(check.holds && check.lhs <= check.rhs);
    }
}
