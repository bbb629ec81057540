use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interpolation nodes `x_0, ..., x_{n-1}` inside `[a, b]`, held exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeList {
    nodes: Vec<BigRational>,
    interval: (BigRational, BigRational),
    monotone: bool,
}

impl NodeList {
    pub fn from_rationals(nodes: Vec<BigRational>, interval: (BigRational, BigRational)) -> Result<Self> {
        let (a, b) = interval;
        if a > b {
            return Err(Error::Domain("node interval has a > b".into()));
        }
        if let Some(x) = nodes.iter().find(|x| **x < a || **x > b) {
            return Err(Error::Domain(format!("node {} lies outside [{a}, {b}]", x)));
        }
        let monotone = nodes.windows(2).all(|w| w[0] > w[1]);
        Ok(NodeList { nodes, interval: (a, b), monotone })
    }

    /// Nodes from floats, converted exactly (every finite `f64` is a dyadic rational).
    pub fn new(nodes: &[f64], interval: (f64, f64)) -> Result<Self> {
        let exact = nodes.iter().map(|&x| to_rational(x)).collect::<Result<Vec<_>>>()?;
        Self::from_rationals(exact, (to_rational(interval.0)?, to_rational(interval.1)?))
    }

    /// Nodes with the interval set to their hull (`[0, 0]` when empty).
    pub fn spanning(nodes: Vec<BigRational>) -> Self {
        let lo = nodes.iter().min().cloned().unwrap_or_else(BigRational::zero);
        let hi = nodes.iter().max().cloned().unwrap_or_else(BigRational::zero);
        Self::from_rationals(nodes, (lo, hi)).expect("hull contains every node")
    }

    /// Parses a comma-separated list such as `1,0.5,1/3,2e-2` exactly.
    pub fn parse(list: &str) -> Result<Self> {
        let nodes = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_exact)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::spanning(nodes))
    }

    pub fn nodes(&self) -> &[BigRational] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interval(&self) -> &(BigRational, BigRational) {
        &self.interval
    }

    /// `x_0 > x_1 > ... > x_{n-1}` strictly (vacuous for fewer than two nodes).
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// All nodes coincide (the classical Taylor case).
    pub fn is_constant(&self) -> bool {
        self.nodes.windows(2).all(|w| w[0] == w[1])
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.nodes.iter().map(rational_to_f64).collect()
    }

    /// The list `x_from, ..., x_{to-1}`, same interval.
    pub fn slice(&self, from: usize, to: usize) -> NodeList {
        let nodes = self.nodes[from..to].to_vec();
        let monotone = nodes.windows(2).all(|w| w[0] > w[1]);
        NodeList { nodes, interval: self.interval.clone(), monotone }
    }
}

/// JSON form `{"nodes": [...], "interval": [a, b]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeListJson {
    pub nodes: Vec<f64>,
    pub interval: Option<[f64; 2]>,
}

impl TryFrom<NodeListJson> for NodeList {
    type Error = Error;

    fn try_from(json: NodeListJson) -> Result<Self> {
        match json.interval {
            Some([a, b]) => NodeList::new(&json.nodes, (a, b)),
            None => {
                let exact = json.nodes.iter().map(|&x| to_rational(x)).collect::<Result<Vec<_>>>()?;
                Ok(NodeList::spanning(exact))
            }
        }
    }
}

pub(crate) fn to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not a finite real")))
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` with an explicit denominator, even when it is 1.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Exact value of a decimal (`-1.25e-3`) or ratio (`p/q`) literal.
pub fn parse_exact(s: &str) -> Result<BigRational> {
    let bad = || Error::Domain(format!("cannot parse {s:?} as an exact number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() || !(int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let shift = exponent - frac_part.len() as i32;
    let power = BigRational::from_integer(num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize));
    let mut value = BigRational::from_integer(all);
    value = if shift < 0 { value / power } else { value * power };
    if negative {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_exact_literals() {
        assert_eq!(parse_exact("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_exact("-1.25e-1").unwrap(), r(-1, 8));
        assert_eq!(parse_exact("0.1").unwrap(), r(1, 10));
        assert_eq!(parse_exact("3").unwrap(), r(3, 1));
        assert_eq!(parse_exact("2E3").unwrap(), r(2000, 1));
        assert_eq!(parse_exact(".25").unwrap(), r(1, 4));
        assert_eq!(parse_exact("1/3").unwrap(), r(1, 3));
        for bad in ["", "x", "1/0", "1.2.3", "e5", "--1"] {
            assert!(parse_exact(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn monotone_flag() {
        assert!(NodeList::parse("1,0.5,0.25").unwrap().is_monotone());
        assert!(!NodeList::parse("1,0.5,0.5").unwrap().is_monotone());
        assert!(NodeList::parse("0.3,0.3").unwrap().is_constant());
        assert!(NodeList::parse("").unwrap().is_monotone());
    }

    #[test]
    fn rejects_nodes_outside_interval() {
        assert!(matches!(NodeList::new(&[0.5, 2.0], (0.0, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(NodeList::new(&[0.5], (1.0, 0.0)), Err(Error::Domain(_))));
        let json: NodeListJson = serde_json::from_str(r#"{"nodes":[1,0.5],"interval":[0,1]}"#).unwrap();
        assert_eq!(NodeList::try_from(json).unwrap().len(), 2);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&r(3, 1)), "3/1");
        assert_eq!(rational_string(&r(-2, 6)), "-1/3");
    }
}
