//! Majorants `B_{f,n}(t) = sup_{j >= n} |f^{(j)}(t)| / (e^j M_j)` and the
//! estimates built on them.
//!
//! The supremum is truncated at an order `J` (default [`DEFAULT_ORDER`]);
//! all weights are handled in log space.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::WeightSequence;
use crate::smooth_functions::{uniform_grid, DerivativeOracle};

pub const DEFAULT_ORDER: usize = 40;

/// Relative slack for the membership test `|f^{(j)}(t)| <= M_j`.
const MEMBERSHIP_SLACK: f64 = 1e-12;
/// Scale-relative zero test for `f^{(n)}(t_0) = 0`.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantValue {
    pub value: f64,
    /// Order `j` attaining the maximum.
    pub argmax: usize,
    /// The maximum sits at the truncation order `J`.
    pub truncated: bool,
}

fn check_weights(m: &WeightSequence, order: usize) -> Result<()> {
    if m.len() < order + 1 {
        return Err(Error::Size(format!(
            "weights have {} entries, truncation order {order} needs {}",
            m.len(),
            order + 1
        )));
    }
    if !crate::sequences::is_log_convex(&m.log_values()[..=order], 1e-12) {
        return Err(Error::Domain("majorants need a log-convex weight sequence".into()));
    }
    Ok(())
}

/// `ln(|f^{(j)}(t)| / (e^j M_j))` for `j = 0..=order`.
fn log_terms(f: &DerivativeOracle, m: &WeightSequence, t: f64, order: usize) -> Result<Vec<f64>> {
    (0..=order)
        .map(|j| {
            let d = f.log_derivative(j, t)?;
            Ok(if d.is_zero() { f64::NEG_INFINITY } else { d.log_abs - j as f64 - m.log_value(j) })
        })
        .collect()
}

/// `B_{f,n}(t)` truncated at order `order`.
pub fn majorant(f: &DerivativeOracle, m: &WeightSequence, n: usize, t: f64, order: usize) -> Result<MajorantValue> {
    if n > order {
        return Err(Error::Order(format!("n = {n} exceeds the truncation order {order}")));
    }
    check_weights(m, order)?;
    let terms = log_terms(f, m, t, order)?;
    let (argmax, best) = terms
        .iter()
        .enumerate()
        .skip(n)
        .fold((n, f64::NEG_INFINITY), |acc, (j, &l)| if l > acc.1 { (j, l) } else { acc });
    Ok(MajorantValue {
        value: best.exp(),
        argmax,
        truncated: best.is_finite() && argmax == order,
    })
}

/// `B_{f,n}(t)` for every `n = 0..=order` (suffix maxima).
fn majorant_column(f: &DerivativeOracle, m: &WeightSequence, t: f64, order: usize) -> Result<Vec<f64>> {
    let terms = log_terms(f, m, t, order)?;
    let mut column = vec![0.0; order + 1];
    let mut running = f64::NEG_INFINITY;
    for j in (0..=order).rev() {
        running = running.max(terms[j]);
        column[j] = running.exp();
    }
    Ok(column)
}

/// Samples of `B_{f,n}(t)` on a grid, `n = 0..=order`.
#[derive(Debug, Clone)]
pub struct MajorantProfile {
    f: DerivativeOracle,
    weights: WeightSequence,
    order: usize,
    grid: Vec<f64>,
    samples: Vec<Vec<f64>>,
}

impl MajorantProfile {
    pub fn sample(f: &DerivativeOracle, weights: &WeightSequence, order: usize, grid: &[f64]) -> Result<Self> {
        check_weights(weights, order)?;
        let samples = grid
            .iter()
            .map(|&t| majorant_column(f, weights, t, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(MajorantProfile {
            f: f.clone(),
            weights: weights.clone(),
            order,
            grid: grid.to_vec(),
            samples,
        })
    }

    /// Profile on a uniform grid of `f`'s interval.
    pub fn sample_uniform(f: &DerivativeOracle, weights: &WeightSequence, order: usize, grid_size: usize) -> Result<Self> {
        let (a, b) = f.interval();
        Self::sample(f, weights, order, &uniform_grid(a, b, grid_size))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// `B_{f,n}(grid[i])`.
    pub fn value(&self, n: usize, i: usize) -> f64 {
        self.samples[i][n]
    }

    /// Rows `(t, n, B)` for CSV export.
    pub fn rows(&self) -> impl Iterator<Item = (f64, usize, f64)> + '_ {
        self.grid
            .iter()
            .zip(&self.samples)
            .flat_map(|(&t, col)| col.iter().enumerate().map(move |(n, &b)| (t, n, b)))
    }

    /// `(j, t)` pairs with `|f^{(j)}(t)| > M_j` on the grid.
    pub fn membership_failures(&self) -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::new();
        for &t in &self.grid {
            for j in 0..=self.order {
                let d = self.f.log_derivative(j, t)?;
                let bound = self.weights.log_value(j);
                if !d.is_zero() && d.log_abs > bound + MEMBERSHIP_SLACK * (1.0 + bound.abs()) {
                    out.push((j, t));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MajorantProperty {
    /// `B_{f,n} <= e^{-n}`
    Bounded,
    /// `B_{f,n} >= B_{f,n+1}`
    Decreasing,
    /// `f^{(n)}(t_0) = 0` implies `B_{f,n}(t_0) = B_{f,n+1}(t_0)`
    FlatAtZeros,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantViolation {
    pub property: MajorantProperty,
    pub n: usize,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MajorantReport {
    pub checked_points: usize,
    pub violations: Vec<MajorantViolation>,
}

impl MajorantReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the three structural properties of the majorants on a profile.
///
/// Requires `|f^{(j)}(t)| <= M_j` at every grid point for `j <= J`.
pub fn majorant_properties_check(profile: &MajorantProfile) -> Result<MajorantReport> {
    let failures = profile.membership_failures()?;
    if !failures.is_empty() {
        let listed: Vec<String> = failures.iter().take(8).map(|(j, t)| format!("(j = {j}, t = {t})")).collect();
        return Err(Error::Precondition(format!(
            "|f^(j)(t)| <= M_j fails at {} point(s): {}",
            failures.len(),
            listed.join(", ")
        )));
    }
    let mut report = MajorantReport::default();
    let order = profile.order;
    for (i, &t) in profile.grid.iter().enumerate() {
        for n in 0..=order {
            report.checked_points += 1;
            let b = profile.value(n, i);
            let cap = (-(n as f64)).exp();
            if b > cap * (1.0 + 1e-12) {
                report.violations.push(MajorantViolation { property: MajorantProperty::Bounded, n, t, lhs: b, rhs: cap });
            }
            if n < order {
                let next = profile.value(n + 1, i);
                if next > b {
                    report.violations.push(MajorantViolation { property: MajorantProperty::Decreasing, n, t, lhs: next, rhs: b });
                }
                let d = profile.f.log_derivative(n, t)?;
                let scale = profile.weights.log_value(n) + n as f64;
                if d.is_zero() || d.log_abs <= ZERO_TOL.ln() + scale {
                    if (b - next).abs() > ZERO_TOL {
                        report.violations.push(MajorantViolation { property: MajorantProperty::FlatAtZeros, n, t, lhs: b, rhs: next });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftBoundCheck {
    /// `B_{f,n}(t + tau)`
    pub lhs: f64,
    /// `max(B_{f,n}(t), e^{-q}) exp(e |tau| M_q / M_{q-1})`
    pub rhs: f64,
    pub holds: bool,
}

/// Continuity estimate of the majorant between `t` and `t + tau`, for `q > n`.
pub fn shift_bound_check(
    f: &DerivativeOracle,
    m: &WeightSequence,
    n: usize,
    q: usize,
    t: f64,
    tau: f64,
    order: usize,
) -> Result<ShiftBoundCheck> {
    if q <= n {
        return Err(Error::Order(format!("q = {q} must exceed n = {n}")));
    }
    if q > m.last_index() {
        return Err(Error::Size(format!("q = {q} exceeds the weight prefix")));
    }
    let at_t = majorant(f, m, n, t, order)?.value;
    let lhs = majorant(f, m, n, t + tau, order)?.value;
    let ratio = (m.log_value(q) - m.log_value(q - 1)).exp();
    let rhs = at_t.max((-(q as f64)).exp()) * (E * tau.abs() * ratio).exp();
    Ok(ShiftBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityCheck {
    pub q: usize,
    /// `|B_{f,n}(t0 + tau) - B_{f,n}(t0)|`
    pub change: f64,
    /// `B_{f,n}(t0) (exp(e |tau| M_q / M_{q-1}) - 1)`
    pub bound: f64,
    pub holds: bool,
}

/// Modulus-of-continuity form of the majorant estimate, with `q` the smallest
/// order above `n` satisfying `e^{-q} < B_{f,n}(t0)`. `None` when
/// `B_{f,n}(t0) = 0` or no such `q` exists within the weights.
pub fn continuity_check(
    f: &DerivativeOracle,
    m: &WeightSequence,
    n: usize,
    t0: f64,
    tau: f64,
    order: usize,
) -> Result<Option<ContinuityCheck>> {
    let b0 = majorant(f, m, n, t0, order)?.value;
    if b0 == 0.0 {
        return Ok(None);
    }
    let q = ((-b0.ln()).floor() as usize + 1).max(n + 1);
    if q > m.last_index() {
        return Ok(None);
    }
    let b1 = majorant(f, m, n, t0 + tau, order)?.value;
    let ratio = (m.log_value(q) - m.log_value(q - 1)).exp();
    let bound = b0 * (E * tau.abs() * ratio).exp_m1();
    let change = (b1 - b0).abs();
    Ok(Some(ContinuityCheck {
        q,
        change,
        bound,
        holds: change <= bound * (1.0 + 1e-9) + 1e-15 * b0,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub order: usize,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateVerdict {
    AllPositive,
    ViolationAt(Violation),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityCertificate {
    pub grid: Vec<f64>,
    pub max_order: usize,
    pub verdict: CertificateVerdict,
}

/// JSON form `{"verdict": "...", "violation": {"order": k, "t": ...} | null}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: String,
    pub violation: Option<Violation>,
}

impl From<&MonotonicityCertificate> for CertificateJson {
    fn from(c: &MonotonicityCertificate) -> Self {
        match c.verdict {
            CertificateVerdict::AllPositive => CertificateJson { verdict: "AllPositive".into(), violation: None },
            CertificateVerdict::ViolationAt(v) => CertificateJson { verdict: "ViolationAt".into(), violation: Some(v) },
        }
    }
}

/// Looks for a negative derivative `f^{(n)}(t)`, `n <= max_order`, on the grid.
///
/// A falsifier: `AllPositive` only reports that no negative value was sampled
/// (zeros are allowed, as for absolutely monotone functions).
/// Orders are scanned first, so the reported violation has the lowest order.
pub fn monotonicity_certificate(f: &DerivativeOracle, max_order: usize, grid: &[f64]) -> Result<MonotonicityCertificate> {
    for order in 0..=max_order {
        for &t in grid {
            let d = f.log_derivative(order, t)?;
            if d.sign < 0.0 {
                return Ok(MonotonicityCertificate {
                    grid: grid.to_vec(),
                    max_order,
                    verdict: CertificateVerdict::ViolationAt(Violation { order, t }),
                });
            }
        }
    }
    Ok(MonotonicityCertificate {
        grid: grid.to_vec(),
        max_order,
        verdict: CertificateVerdict::AllPositive,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BorelWitness {
    /// `1 / max a_n^{1/n}` over the upper half of the available orders.
    pub radius_estimate: f64,
    /// Ratio of the largest root `a_n^{1/n}` in the upper half to the largest
    /// in the lower half; values well above 1 suggest radius 0.
    pub root_growth: f64,
    pub interval_length: f64,
    /// Present when the estimated radius is below the interval length.
    pub witness: Option<String>,
}

/// Root-test radius of `sum a_n x^n` and, when it is smaller than the
/// interval, the obstruction: a function with every derivative positive at the
/// left endpoint of a quasi-analytic class converges on the whole interval,
/// so no such member has this Taylor series.
pub fn borel_image_witness(coeffs: &[f64], interval_length: f64) -> Result<BorelWitness> {
    if coeffs.len() < 3 {
        return Err(Error::Size("the root test needs coefficients a_0..a_2 at least".into()));
    }
    if let Some((i, v)) = coeffs.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!("coefficient a_{i} = {v} is not positive")));
    }
    let roots: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(n, a)| a.ln() / n as f64).collect();
    let half = roots.len() / 2;
    let max_log = |s: &[f64]| s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let upper = max_log(&roots[half..]);
    let lower = max_log(&roots[..half.max(1)]);
    let radius_estimate = (-upper).exp();
    let witness = (radius_estimate < interval_length).then(|| {
        format!(
            "estimated radius {radius_estimate:.6} < interval length {interval_length}: no member of a \
             quasi-analytic class with all derivatives positive at the left endpoint has this Taylor series"
        )
    });
    Ok(BorelWitness {
        radius_estimate,
        root_growth: (upper - lower).exp(),
        interval_length,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{canonical_sequence, CanonicalName};
    use crate::smooth_functions::{make_oracle, OracleParams};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn oracle(name: &str, params: OracleParams, a: f64, b: f64) -> DerivativeOracle {
        make_oracle(name, &params, (a, b)).unwrap()
    }

    fn factorial(n: usize) -> WeightSequence {
        canonical_sequence(CanonicalName::Factorial, n).unwrap()
    }

    fn three_pow_factorial(n: usize) -> WeightSequence {
        WeightSequence::from_logs((0..=n).map(|k| k as f64 * 3f64.ln() + crate::numeric::ln_factorial(k)).collect())
            .unwrap()
    }

    #[test]
    fn zero_function_majorant() {
        let z = oracle("zero", OracleParams::default(), 0.0, 1.0);
        for n in 0..5 {
            assert_eq!(majorant(&z, &factorial(10), n, 0.5, 10).unwrap().value, 0.0);
        }
        let profile = MajorantProfile::sample_uniform(&z, &factorial(10), 10, 11).unwrap();
        assert!(majorant_properties_check(&profile).unwrap().holds());
    }

    #[test]
    fn identity_majorant() {
        let f = oracle("polynomial", OracleParams { coeffs: Some(vec![0.0, 1.0]), ..Default::default() }, 0.0, 1.0);
        for t in [0.0, 0.4, 1.0] {
            let b = majorant(&f, &factorial(40), 1, t, 40).unwrap();
            assert!((b.value - (-1f64).exp()).abs() < 1e-15);
            assert_eq!(b.argmax, 1);
            assert_eq!(majorant(&f, &factorial(40), 2, t, 40).unwrap().value, 0.0);
            assert_eq!(majorant(&f, &factorial(40), 3, t, 40).unwrap().value, 0.0);
        }
    }

    #[test]
    fn unnormalized_exp_exceeds_first_bound() {
        let f = oracle("exp_scaled", OracleParams::default(), 0.0, 1.0);
        let m = three_pow_factorial(40);
        let b = majorant(&f, &m, 0, 1.0, 40).unwrap();
        assert!((b.value - E).abs() < 1e-14 && b.argmax == 0);
        let normalized = f.scaled(1.0 / E);
        let b = majorant(&normalized, &m, 0, 1.0, 40).unwrap();
        assert!((b.value - 1.0).abs() < 1e-15);
        let profile = MajorantProfile::sample_uniform(&f, &m, 40, 11).unwrap();
        assert!(matches!(majorant_properties_check(&profile), Err(Error::Precondition(_))));
    }

    #[test]
    fn majorant_errors() {
        let f = oracle("sin", OracleParams::default(), 0.0, PI);
        let bumpy = WeightSequence::new(&[1.0, 5.0, 2.0, 6.0]).unwrap();
        assert!(matches!(majorant(&f, &bumpy, 0, 1.0, 3), Err(Error::Domain(_))));
        assert!(matches!(majorant(&f, &factorial(5), 6, 1.0, 5), Err(Error::Order(_))));
        assert!(matches!(majorant(&f, &factorial(5), 0, 1.0, 6), Err(Error::Size(_))));
        assert!(matches!(shift_bound_check(&f, &factorial(10), 3, 3, 1.0, 0.1, 10), Err(Error::Order(_))));
    }

    #[test]
    fn sin_profile_properties() {
        let f = oracle("sin", OracleParams::default(), 0.0, PI);
        let profile = MajorantProfile::sample_uniform(&f, &factorial(40), 40, 1000).unwrap();
        let report = majorant_properties_check(&profile).unwrap();
        assert!(report.holds(), "{:?}", &report.violations[..report.violations.len().min(3)]);
        assert_eq!(report.checked_points, 1000 * 41);
        assert_eq!(profile.rows().count(), 1000 * 41);
    }

    #[test]
    fn shift_bound_zero_shift() {
        let f = oracle("sin", OracleParams { scale: Some(1.0 / E), ..Default::default() }, 0.0, PI);
        let c = shift_bound_check(&f, &factorial(40), 2, 5, 1.0, 0.0, 40).unwrap();
        assert!(c.holds && c.lhs <= c.rhs);
    }

    #[test]
    fn certificates() {
        let grid = uniform_grid(0.0, 1.0, 1000);
        let exp = oracle("exp_scaled", OracleParams::default(), 0.0, 1.0);
        assert_eq!(monotonicity_certificate(&exp, 20, &grid).unwrap().verdict, CertificateVerdict::AllPositive);

        let pole = oracle("rational_pole", OracleParams { slope: Some(-0.5), ..Default::default() }, 0.0, 1.0);
        assert_eq!(monotonicity_certificate(&pole, 20, &grid).unwrap().verdict, CertificateVerdict::AllPositive);

        let sin = oracle("sin", OracleParams::default(), 0.0, PI);
        let c = monotonicity_certificate(&sin, 20, &uniform_grid(0.0, PI, 1000)).unwrap();
        match c.verdict {
            CertificateVerdict::ViolationAt(v) => assert!(v.order == 1 && v.t > FRAC_PI_2),
            other => panic!("expected a violation, got {other:?}"),
        }
        let json = serde_json::to_value(CertificateJson::from(&c)).unwrap();
        assert_eq!(json["verdict"], "ViolationAt");
        assert_eq!(json["violation"]["order"], 1);
    }

    #[test]
    fn borel_witness_examples() {
        let fact: Vec<f64> = (0..40).map(|n| crate::numeric::ln_factorial(n).exp()).collect();
        let w = borel_image_witness(&fact, 1.0).unwrap();
        assert!(w.witness.is_some() && w.radius_estimate < 0.2 && w.root_growth > 1.5);

        let ones = vec![1.0; 40];
        let w = borel_image_witness(&ones, 0.5).unwrap();
        assert!(w.witness.is_none() && w.radius_estimate == 1.0);

        let inv: Vec<f64> = fact.iter().map(|v| 1.0 / v).collect();
        let w = borel_image_witness(&inv, 1.0).unwrap();
        assert!(w.witness.is_none() && w.radius_estimate > 5.0);

        assert!(matches!(borel_image_witness(&[1.0, 0.0, 1.0], 1.0), Err(Error::Domain(_))));
    }
}
