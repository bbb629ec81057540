use num_rational::BigRational;
use num_traits::Zero;

use super::nodes::{rational_to_f64, to_rational, NodeList};
use super::polynomial::gontcharoff_poly;
use crate::error::{Error, Result};
use crate::numeric::ln_rising;
use crate::smooth_functions::DerivativeOracle;

/// `f(x) = sum_{k <= m} f^{(k)}(x_k) Q(x, x_0..x_{k-1}) + remainder`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionResult {
    /// `f(x)`
    pub value: f64,
    pub terms: Vec<f64>,
    pub remainder: f64,
    /// `[min, max]` of `f^{(m+1)}(xi) Q(x, x_0..x_m)` for `xi` in the hull of `x` and the nodes.
    pub bracket: (f64, f64),
    /// Remainder in exact arithmetic, when `f` has rational derivatives.
    pub exact_remainder: Option<BigRational>,
}

impl ExpansionResult {
    pub fn partial_sum(&self) -> f64 {
        self.terms.iter().sum()
    }

    /// Remainder inside the bracket, widened by `slack` relative to the bracket scale.
    pub fn remainder_in_bracket(&self, slack: f64) -> bool {
        let (lo, hi) = self.bracket;
        let pad = slack * (lo.abs().max(hi.abs()) + self.value.abs());
        self.remainder >= lo - pad && self.remainder <= hi + pad
    }
}

/// Generalized Taylor expansion of order `m` at `x` over the first `m + 1` nodes.
///
/// The bracket is the mean-value form of the remainder. It is guaranteed to
/// contain the remainder when the iterated-integral kernel keeps one sign,
/// e.g. for strictly decreasing nodes with `x >= x_0`, or coinciding nodes.
pub fn generalized_taylor(f: &DerivativeOracle, nodes: &NodeList, m: usize, x: f64) -> Result<ExpansionResult> {
    if nodes.len() < m + 1 {
        return Err(Error::Size(format!("order {m} needs {} nodes, {} given", m + 1, nodes.len())));
    }
    let xs = nodes.to_f64();
    let value = f.value(x)?;
    let exact_x = to_rational(x)?;
    let mut terms = Vec::with_capacity(m + 1);
    let mut exact_sum = Some(BigRational::zero());
    for k in 0..=m {
        let q = gontcharoff_poly(&nodes.slice(0, k));
        let qx = q.eval_exact(&exact_x);
        terms.push(f.derivative(k, xs[k])? * rational_to_f64(&qx));
        exact_sum = match (exact_sum, f.exact_derivative(k, &nodes.nodes()[k])) {
            (Some(acc), Some(d)) => Some(acc + d * qx),
            _ => None,
        };
    }
    let remainder = value - terms.iter().sum::<f64>();

    let q_next = rational_to_f64(&gontcharoff_poly(&nodes.slice(0, m + 1)).eval_exact(&exact_x));
    let lo = xs[..=m].iter().copied().fold(x, f64::min);
    let hi = xs[..=m].iter().copied().fold(x, f64::max);
    let range = f.derivative_range(m + 1, lo, hi)?;
    let (a, b) = (range.min * q_next, range.max * q_next);
    let exact_remainder = exact_sum.and_then(|s| f.exact_derivative(0, &exact_x).map(|v| v - s));
    Ok(ExpansionResult {
        value,
        terms,
        remainder,
        bracket: (a.min(b), a.max(b)),
        exact_remainder,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPropagationBound {
    pub value: f64,
    pub log_value: f64,
    /// `A (|x - x_q| + R_q)`; the bound decays in `m_s` only when this is below 1.
    pub contraction: f64,
}

/// `B A^{q+1} ((m_s+q+1)!/m_s!) (A(|x - x_q| + R_q))^{m_s}`, evaluated in log space.
pub fn zero_propagation_bound(b: f64, a: f64, q: usize, m_s: usize, x: f64, x_q: f64, r_q: f64) -> Result<ZeroPropagationBound> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("A = {a} and B = {b} must be positive")));
    }
    let contraction = a * ((x - x_q).abs() + r_q);
    if !(contraction >= 0.0) {
        return Err(Error::Domain("|x - x_q| + R_q must be non-negative".into()));
    }
    let mut log_value = b.ln() + (q + 1) as f64 * a.ln() + ln_rising(m_s, m_s + q + 1);
    if m_s > 0 {
        log_value += m_s as f64 * contraction.ln();
    }
    Ok(ZeroPropagationBound {
        value: log_value.exp(),
        log_value,
        contraction,
    })
}
