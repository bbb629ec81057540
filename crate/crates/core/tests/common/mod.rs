#![allow(dead_code)]

use quasianalytic::sequences::{canonical_sequence, CanonicalName, WeightSequence};
use quasianalytic::smooth_functions::{make_oracle, DerivativeOracle, OracleParams};

fn oracle(name: &str, params: OracleParams, a: f64, b: f64) -> DerivativeOracle {
    make_oracle(name, &params, (a, b)).unwrap()
}

/// One representative of every function kind.
pub fn catalog() -> Vec<DerivativeOracle> {
    vec![
        oracle("exp_scaled", OracleParams { c: Some(1.5), ..Default::default() }, 0.0, 1.0),
        oracle("sin", OracleParams::default(), 0.0, std::f64::consts::PI),
        oracle("cos", OracleParams::default(), -1.0, 2.0),
        oracle("rational_pole", OracleParams { slope: Some(-0.5), ..Default::default() }, 0.0, 1.0),
        oracle("rational_pole", OracleParams { slope: Some(1.0), ..Default::default() }, 0.0, 0.5),
        oracle(
            "polynomial",
            OracleParams { coeffs: Some(vec![1.0, -3.0, 0.5, 2.0, -1.0, 0.25, 0.1, -0.05]), ..Default::default() },
            -1.0,
            1.0,
        ),
        oracle("flat", OracleParams::default(), 0.1, 1.0),
        oracle("zero", OracleParams::default(), 0.0, 1.0),
    ]
}

/// Catalog members with `|f^{(n)}| <= n!` on their interval.
pub fn factorial_members() -> Vec<DerivativeOracle> {
    vec![
        oracle("exp_scaled", OracleParams { scale: Some((-1f64).exp()), ..Default::default() }, 0.0, 1.0),
        oracle("sin", OracleParams::default(), 0.0, std::f64::consts::PI),
        oracle("rational_pole", OracleParams { slope: Some(-0.5), scale: Some(0.5), ..Default::default() }, 0.0, 1.0),
    ]
}

pub fn factorial_weights(n: usize) -> WeightSequence {
    canonical_sequence(CanonicalName::Factorial, n).unwrap()
}

/// Central-difference check of `f^{(n)}` against `f^{(n-1)}`, `n = 1..=max_order`,
/// at the interior points of a 200-cell grid. Errors are measured against
/// `max(|f^{(n)}|, |f^{(n-1)}|)` so zeros of `f^{(n)}` do not blow up the ratio.
/// Returns the offending `(order, x, fd, exact)` tuples.
pub fn finite_difference_failures(f: &DerivativeOracle, max_order: usize, tol: f64) -> Vec<(usize, f64, f64, f64)> {
    const H: f64 = 1e-5;
    let (a, b) = f.interval();
    let mut out = Vec::new();
    for i in 1..200 {
        let x = a + (b - a) * i as f64 / 200.0;
        for n in 1..=max_order {
            let fd = (f.derivative(n - 1, x + H).unwrap() - f.derivative(n - 1, x - H).unwrap()) / (2.0 * H);
            let exact = f.derivative(n, x).unwrap();
            let scale = exact.abs().max(f.derivative(n - 1, x).unwrap().abs());
            if (fd - exact).abs() > tol * scale {
                out.push((n, x, fd, exact));
            }
        }
    }
    out
}
