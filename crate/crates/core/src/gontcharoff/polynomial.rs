use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::nodes::{rational_string, rational_to_f64, to_rational, NodeList};
use crate::error::{Error, Result};

/// `Q(x, x_0, ..., x_{n-1})` with exact monomial coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GontcharoffPolynomial {
    coefficients: Vec<BigRational>,
    nodes: NodeList,
}

/// Builds `Q(x, x_0..x_{n-1})` by integrating from the innermost node outwards:
/// `Q(x, x_i..x_{n-1}) = int_{x_i}^x Q(t, x_{i+1}..x_{n-1}) dt`.
pub fn gontcharoff_poly(nodes: &NodeList) -> GontcharoffPolynomial {
    let mut p = vec![BigRational::one()];
    for x in nodes.nodes().iter().rev() {
        p = antiderivative_vanishing_at(&p, x);
    }
    GontcharoffPolynomial {
        coefficients: p,
        nodes: nodes.clone(),
    }
}

fn antiderivative_vanishing_at(p: &[BigRational], x0: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(BigRational::zero());
    for (k, c) in p.iter().enumerate() {
        out.push(c / BigRational::from_integer(BigInt::from(k + 1)));
    }
    let at = horner(&out, x0);
    out[0] = -at;
    out
}

fn horner(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn differentiate(coeffs: &[BigRational], m: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = coeffs.to_vec();
    for _ in 0..m {
        if out.len() <= 1 {
            return vec![BigRational::zero()];
        }
        out = out
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect();
    }
    out
}

/// `Q^{(m)}(x_m)`, expected to vanish exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryResidual {
    pub m: usize,
    pub residual: BigRational,
}

impl GontcharoffPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn nodes(&self) -> &NodeList {
        &self.nodes
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(rational_string).collect()
    }

    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(rational_to_f64).collect()
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        horner(&self.coefficients, x)
    }

    /// Value at a float, evaluated exactly and rounded once.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(rational_to_f64(&self.eval_exact(&to_rational(x)?)))
    }

    /// Exact coefficients of the `m`-th derivative.
    pub fn derivative_coefficients(&self, m: usize) -> Vec<BigRational> {
        differentiate(&self.coefficients, m)
    }

    /// `Q^{(m)}(x, x_0..x_{n-1}) = Q(x, x_m..x_{n-1})`.
    pub fn derivative_shift(&self, m: usize) -> Result<GontcharoffPolynomial> {
        let n = self.degree();
        if m > n {
            return Err(Error::Order(format!("derivative order {m} exceeds degree {n}")));
        }
        Ok(GontcharoffPolynomial {
            coefficients: self.derivative_coefficients(m),
            nodes: self.nodes.slice(m, n),
        })
    }

    /// `Q^{(m)}(x_m)` for `m = 0..n-1`.
    pub fn boundary_residuals(&self) -> Vec<BoundaryResidual> {
        self.nodes
            .nodes()
            .iter()
            .enumerate()
            .map(|(m, x)| BoundaryResidual {
                m,
                residual: horner(&self.derivative_coefficients(m), x),
            })
            .collect()
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            nodes: self.nodes.to_f64(),
            degree: self.degree(),
            coefficients: self.coefficient_strings(),
            coefficients_f64: self.coefficients_f64(),
        }
    }
}

/// Exact coefficients as `p/q` strings plus their float values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PolynomialJson {
    pub nodes: Vec<f64>,
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub coefficients_f64: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichCheck {
    /// `(x - x_0)^n / n!`
    pub lower: f64,
    pub value: f64,
    /// `(x - x_last)^n / n!`
    pub upper: f64,
    /// Decided in exact arithmetic.
    pub holds: bool,
}

/// Checks `(x - x_0)^n/n! <= Q(x) <= (x - x_last)^n/n!` for `x > x_0`.
///
/// `x_last` is `next_node` when supplied (it must not exceed `x_{n-1}`) and
/// `x_{n-1}` otherwise. Coinciding nodes reduce to the Taylor weight, where
/// all three values agree.
pub fn sandwich_check(q: &GontcharoffPolynomial, x: f64, next_node: Option<f64>) -> Result<SandwichCheck> {
    let nodes = q.nodes();
    let n = q.degree();
    let x = to_rational(x)?;
    if n == 0 {
        let one = BigRational::one();
        return Ok(SandwichCheck { lower: 1.0, value: 1.0, upper: 1.0, holds: q.eval_exact(&x) == one });
    }
    if !nodes.is_monotone() && !nodes.is_constant() {
        return Err(Error::Domain("the sandwich bound needs strictly decreasing (or coinciding) nodes".into()));
    }
    let first = &nodes.nodes()[0];
    if x <= *first {
        return Err(Error::Domain(format!("x must exceed x_0 = {first}")));
    }
    let last = &nodes.nodes()[n - 1];
    let last = match next_node {
        Some(v) => {
            let v = to_rational(v)?;
            if v > *last {
                return Err(Error::Domain(format!("next node {v} exceeds x_(n-1) = {last}")));
            }
            v
        }
        None => last.clone(),
    };
    let factorial = BigRational::from_integer((1..=n).map(BigInt::from).product());
    let lower = num_traits::pow(&x - first, n) / &factorial;
    let upper = num_traits::pow(&x - &last, n) / &factorial;
    let value = q.eval_exact(&x);
    let holds = lower <= value && value <= upper;
    Ok(SandwichCheck {
        lower: rational_to_f64(&lower),
        value: rational_to_f64(&value),
        upper: rational_to_f64(&upper),
        holds,
    })
}
