//! Bang's norm on real sequences.
//!
//! For `X = (x_n)` and an admissible index set `P` containing 0,
//!
//! ```text
//! ||X|| = inf_{k in P} max(e^{-k}, max_{0 <= n <= k} |x_n|)
//! ```
//!
//! Each candidate is the maximum of a decreasing term and a non-decreasing
//! running maximum. Stored vectors are finite, so the infimum runs over
//! `P ∩ 0..=K`; when the last admissible `e^{-k}` is the minimizer the true
//! norm may be smaller, which is reported through
//! [`NormCertificate::truncated`].

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::RegularizedSequence;
use crate::smooth_functions::DerivativeOracle;

/// A truncated real sequence `x_0..x_K` with its admissible index set.
#[derive(Debug, Clone, PartialEq)]
pub struct BangVector {
    entries: Vec<f64>,
    index_set: Vec<usize>,
}

impl BangVector {
    /// `index_set = None` selects the full range `0..=K`.
    pub fn new(entries: Vec<f64>, index_set: Option<Vec<usize>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Size("a Bang vector needs at least one entry".into()));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("entry {v} is not finite")));
        }
        let index_set = index_set.unwrap_or_else(|| (0..entries.len()).collect());
        if index_set.is_empty() {
            return Err(Error::Domain("the index set is empty".into()));
        }
        if index_set[0] != 0 {
            return Err(Error::Domain("the index set must contain 0".into()));
        }
        if index_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("the index set must be strictly increasing".into()));
        }
        if *index_set.last().unwrap() >= entries.len() {
            return Err(Error::Domain("the index set exceeds the stored entries".into()));
        }
        Ok(BangVector { entries, index_set })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn index_set(&self) -> &[usize] {
        &self.index_set
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn negated(&self) -> Self {
        BangVector {
            entries: self.entries.iter().map(|v| -v).collect(),
            index_set: self.index_set.clone(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.entries.len() != other.entries.len() || self.index_set != other.index_set {
            return Err(Error::Domain("Bang vectors differ in length or index set".into()));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(BangVector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
            index_set: self.index_set.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(BangVector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
            index_set: self.index_set.clone(),
        })
    }

    /// Smallest `k' in P` with `e^{-k'} < |x_0|`; the norm is attained at or
    /// before it.
    pub fn contact_cap(&self) -> Option<usize> {
        let x0 = self.entries[0].abs();
        self.index_set.iter().copied().find(|&k| (-(k as f64)).exp() < x0)
    }
}

/// JSON form `{"entries": [...], "P": [...]}`; `P` defaults to the full range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BangVectorJson {
    pub entries: Vec<f64>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub index_set: Option<Vec<usize>>,
}

impl TryFrom<BangVectorJson> for BangVector {
    type Error = Error;

    fn try_from(json: BangVectorJson) -> Result<Self> {
        BangVector::new(json.entries, json.index_set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormCertificate {
    pub value: f64,
    /// Smallest `k in P` attaining the minimum.
    pub achieving_index: usize,
    /// The minimizer is `e^{-k}` at the last admissible index: the reported
    /// value is only an upper bound for the norm of the infinite sequence.
    pub truncated: bool,
}

fn candidate(k: usize, running_max: f64) -> f64 {
    (-(k as f64)).exp().max(running_max)
}

/// Bang's norm by a single sweep over the stored entries.
pub fn bang_norm(x: &BangVector) -> NormCertificate {
    let mut running_max = 0.0f64;
    let mut best = (f64::INFINITY, 0usize);
    let mut admissible = x.index_set.iter().peekable();
    for (n, v) in x.entries.iter().enumerate() {
        running_max = running_max.max(v.abs());
        if admissible.next_if_eq(&&n).is_some() {
            let c = candidate(n, running_max);
            if c < best.0 {
                best = (c, n);
            }
        }
        if admissible.peek().is_none() {
            break;
        }
    }
    let (value, k) = best;
    let last = *x.index_set.last().unwrap();
    NormCertificate {
        value,
        achieving_index: k,
        truncated: k == last && value == (-(k as f64)).exp(),
    }
}

/// `d(X, Y) = ||X - Y||`; both vectors must share length and index set.
pub fn bang_distance(x: &BangVector, y: &BangVector) -> Result<NormCertificate> {
    Ok(bang_norm(&x.sub(y)?))
}

/// Given `e^{-k1} <= ||X|| <= e^{-k2}` with `k1, k2 in P`, finds the
/// achieving index by searching `P ∩ [k2, k1]` only.
pub fn bracket_achieving_index(x: &BangVector, k1: usize, k2: usize) -> Result<usize> {
    let in_p = |k: usize| x.index_set.binary_search(&k).is_ok();
    if !in_p(k1) || !in_p(k2) {
        return Err(Error::Precondition(format!("bracket indices {k1}, {k2} must both lie in P")));
    }
    let norm = bang_norm(x).value;
    let lower = (-(k1 as f64)).exp();
    let upper = (-(k2 as f64)).exp();
    if !(lower <= norm && norm <= upper) {
        return Err(Error::Precondition(format!(
            "norm {norm} is not bracketed by e^-{k1} = {lower} and e^-{k2} = {upper}"
        )));
    }
    let mut running_max = x.entries[..k2].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut best = (f64::INFINITY, k2);
    for k in k2..=k1 {
        running_max = running_max.max(x.entries[k].abs());
        if in_p(k) {
            let c = candidate(k, running_max);
            if c < best.0 {
                best = (c, k);
            }
        }
    }
    Ok(best.1)
}

/// `X_f(t)` with `x_n = f^{(n)}(t) / (M^c_n e^n)` for `n = 0..=order_cap`.
///
/// The index set is the principal set of `M^c` cut at `order_cap`, with 0 adjoined.
pub fn xf_vector(f: &DerivativeOracle, t: f64, mc: &RegularizedSequence, order_cap: usize) -> Result<BangVector> {
    if mc.len() < order_cap + 1 {
        return Err(Error::Size(format!(
            "regularized sequence has {} entries, order cap {order_cap} needs {}",
            mc.len(),
            order_cap + 1
        )));
    }
    let entries = (0..=order_cap)
        .map(|n| Ok(f.log_derivative(n, t)?.scaled_by_log(mc.log_value(n) + n as f64)))
        .collect::<Result<Vec<f64>>>()?;
    let mut index_set: Vec<usize> = mc.principal().iter().copied().take_while(|&p| p <= order_cap).collect();
    if index_set.first() != Some(&0) {
        index_set.insert(0, 0);
    }
    BangVector::new(entries, Some(index_set))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationCheck {
    /// `||X_f(t + tau)||`
    pub lhs: f64,
    /// `||X_f(t)|| exp(e |tau| M^c_l / M^c_{l-1})`
    pub rhs: f64,
    /// Achieving index of the norm at `t`.
    pub l: usize,
    pub holds: bool,
}

/// Checks `||X_f(t + tau)|| <= ||X_f(t)|| exp(e |tau| M^c_l / M^c_{l-1})`.
///
/// When the norm at `t` is attained at `l = 0` the ratio `M^c_1 / M^c_0` is used.
/// The estimate presumes `|f^{(n)}| <= M_n`; callers verify membership.
pub fn propagation_bound_check(
    f: &DerivativeOracle,
    mc: &RegularizedSequence,
    t: f64,
    tau: f64,
    order_cap: usize,
) -> Result<PropagationCheck> {
    let at_t = bang_norm(&xf_vector(f, t, mc, order_cap)?);
    if at_t.value == 0.0 || at_t.truncated {
        return Err(Error::Precondition(format!(
            "||X_f({t})|| is zero at truncation {order_cap}"
        )));
    }
    let lhs = bang_norm(&xf_vector(f, t + tau, mc, order_cap)?).value;
    let l = at_t.achieving_index;
    let lr = l.max(1);
    if lr >= mc.len() {
        return Err(Error::Size("regularized sequence too short for the ratio M^c_l / M^c_{l-1}".into()));
    }
    let ratio = (mc.log_value(lr) - mc.log_value(lr - 1)).exp();
    let rhs = at_t.value * (E * tau.abs() * ratio).exp();
    Ok(PropagationCheck {
        lhs,
        rhs,
        l,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{canonical_sequence, convex_regularize, CanonicalName, WeightSequence};
    use crate::smooth_functions::{make_oracle, OracleParams};
    use std::f64::consts::PI;

    fn v(entries: &[f64]) -> BangVector {
        BangVector::new(entries.to_vec(), None).unwrap()
    }

    #[test]
    fn zero_vector_is_truncated() {
        let c = bang_norm(&v(&[0.0, 0.0, 0.0]));
        assert_eq!(c.value, (-2f64).exp());
        assert_eq!(c.achieving_index, 2);
        assert!(c.truncated);
    }

    #[test]
    fn leading_one() {
        let c = bang_norm(&v(&[1.0, 0.3, -4.0, 0.0]));
        assert_eq!((c.value, c.achieving_index, c.truncated), (1.0, 0, false));
    }

    #[test]
    fn small_leading_entry() {
        let c = bang_norm(&v(&[0.1, 0.0, 0.0, 0.0]));
        assert_eq!((c.value, c.achieving_index, c.truncated), (0.1, 3, false));
    }

    #[test]
    fn index_set_restricts_candidates() {
        let x = BangVector::new(vec![0.1, 0.0, 0.0, 0.0], Some(vec![0, 1])).unwrap();
        let c = bang_norm(&x);
        assert_eq!((c.value, c.achieving_index), ((-1f64).exp(), 1));
        assert!(c.truncated);
    }

    #[test]
    fn validation() {
        assert!(matches!(BangVector::new(vec![1.0], Some(vec![])), Err(Error::Domain(_))));
        assert!(matches!(BangVector::new(vec![1.0, 2.0], Some(vec![1])), Err(Error::Domain(_))));
        assert!(matches!(BangVector::new(vec![1.0, 2.0], Some(vec![0, 2])), Err(Error::Domain(_))));
        assert!(matches!(BangVector::new(vec![1.0, 2.0], Some(vec![0, 1, 1])), Err(Error::Domain(_))));
        let a = v(&[1.0, 2.0]);
        let b = v(&[1.0, 2.0, 3.0]);
        assert!(matches!(bang_distance(&a, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_to_self_is_flagged_zero() {
        let a = v(&[0.4, -1.0, 2.5]);
        let d = bang_distance(&a, &a).unwrap();
        assert!(d.truncated && d.value == (-2f64).exp());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_achieving_index(&v(&[0.1, 0.0, 0.0, 0.0]), 3, 2).unwrap(), 3);
        assert_eq!(bracket_achieving_index(&v(&[1.0]), 0, 0).unwrap(), 0);
        assert!(matches!(
            bracket_achieving_index(&v(&[0.1, 0.0, 0.0, 0.0]), 1, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn contact_cap_bounds_achieving_index() {
        let x = v(&[0.1, 0.05, 0.0, 0.0, 0.0]);
        assert_eq!(x.contact_cap(), Some(3));
        assert!(bang_norm(&x).achieving_index <= 3);
        assert_eq!(v(&[0.0, 1.0]).contact_cap(), None);
    }

    fn factorial_mc(n: usize) -> RegularizedSequence {
        convex_regularize(&canonical_sequence(CanonicalName::Factorial, n).unwrap())
    }

    #[test]
    fn xf_of_identity() {
        let f = make_oracle("polynomial", &OracleParams { coeffs: Some(vec![0.0, 1.0]), ..Default::default() }, (0.0, 1.0)).unwrap();
        let x = xf_vector(&f, 0.0, &factorial_mc(5), 2).unwrap();
        assert_eq!(x.entries(), &[0.0, (-1f64).exp(), 0.0]);
        assert_eq!(x.index_set(), &[0, 1, 2]);
    }

    #[test]
    fn xf_of_exp_decreases() {
        let f = make_oracle("exp_scaled", &OracleParams::default(), (0.0, 1.0)).unwrap();
        let x = xf_vector(&f, 0.0, &factorial_mc(20), 20).unwrap();
        for (n, w) in x.entries().windows(2).enumerate() {
            assert!(w[1] < w[0]);
            let expected = (-crate::numeric::ln_factorial(n) - n as f64).exp();
            assert!((w[0] - expected).abs() < 1e-14 * expected);
        }
    }

    #[test]
    fn xf_zero_function_and_index_set() {
        let zero = make_oracle("zero", &OracleParams::default(), (0.0, 1.0)).unwrap();
        let mc = convex_regularize(&WeightSequence::new(&[1.0, 5.0, 2.0, 6.0]).unwrap());
        let x = xf_vector(&zero, 0.5, &mc, 3).unwrap();
        assert!(x.entries().iter().all(|v| *v == 0.0));
        assert_eq!(x.index_set(), &[0, 2, 3]);
        assert!(matches!(xf_vector(&zero, 0.5, &mc, 4), Err(Error::Size(_))));
        assert!(matches!(xf_vector(&zero, 1.5, &mc, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn propagation_at_zero_shift_is_equality() {
        let f = make_oracle("sin", &OracleParams::default(), (0.0, PI)).unwrap();
        let c = propagation_bound_check(&f, &factorial_mc(30), 1.0, 0.0, 30).unwrap();
        assert_eq!(c.lhs, c.rhs);
        assert!(c.holds);
    }

    #[test]
    fn propagation_rejects_zero_norm() {
        let zero = make_oracle("zero", &OracleParams::default(), (0.0, 1.0)).unwrap();
        assert!(matches!(
            propagation_bound_check(&zero, &factorial_mc(10), 0.5, 0.1, 10),
            Err(Error::Precondition(_))
        ));
    }
}
