use std::fmt;
use std::str::FromStr;

use super::WeightSequence;
use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

/// Named weight sequences used as reference inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalName {
    /// `n!`
    Factorial,
    /// `n^n`, with `0^0 = 1`
    NPowN,
    /// `(n ln n)^n`
    DenjoyLogLinear,
    /// `(n ln n ln ln n)^n`
    DenjoyLogLog,
    /// `(n!)^2`
    FactorialSquared,
    /// `1`
    Constant,
}

impl CanonicalName {
    pub const ALL: [CanonicalName; 6] = [
        CanonicalName::Factorial,
        CanonicalName::NPowN,
        CanonicalName::DenjoyLogLinear,
        CanonicalName::DenjoyLogLog,
        CanonicalName::FactorialSquared,
        CanonicalName::Constant,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CanonicalName::Factorial => "factorial",
            CanonicalName::NPowN => "n_pow_n",
            CanonicalName::DenjoyLogLinear => "denjoy_loglinear",
            CanonicalName::DenjoyLogLog => "denjoy_loglog",
            CanonicalName::FactorialSquared => "factorial_squared",
            CanonicalName::Constant => "constant",
        }
    }

    /// `ln M_n` from the defining formula, `None` where the base `b` of
    /// `b^n` is undefined or at most 1.
    fn formula_log(&self, n: usize) -> Option<f64> {
        let x = n as f64;
        match self {
            CanonicalName::Factorial => Some(ln_factorial(n)),
            CanonicalName::NPowN => Some(if n == 0 { 0.0 } else { x * x.ln() }),
            CanonicalName::FactorialSquared => Some(2.0 * ln_factorial(n)),
            CanonicalName::Constant => Some(0.0),
            CanonicalName::DenjoyLogLinear => power_of_base(x, x * x.ln()),
            CanonicalName::DenjoyLogLog => {
                let lnx = x.ln();
                (lnx > 0.0 && lnx.ln() > 0.0)
                    .then(|| x * lnx * lnx.ln())
                    .and_then(|b| power_of_base(x, b))
            }
        }
    }
}

fn power_of_base(n: f64, base: f64) -> Option<f64> {
    (base.is_finite() && base > 1.0).then(|| n * base.ln())
}

impl fmt::Display for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CanonicalName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CanonicalName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Lookup(format!("unknown canonical sequence '{s}'")))
    }
}

/// Prefix `M_0..M_N` of a named sequence.
///
/// Where the formula is undefined or gives a base `<= 1` (n = 1 for
/// `(n ln n)^n`, n <= 3 for `(n ln n ln ln n)^n`) the entry is padded with
/// `max(1, previous entry)`. `M_0` is always 1.
pub fn canonical_sequence(name: CanonicalName, n: usize) -> Result<WeightSequence> {
    if n < 1 {
        return Err(Error::Size("canonical prefixes need N >= 1".into()));
    }
    let mut logs = Vec::with_capacity(n + 1);
    logs.push(0.0);
    for k in 1..=n {
        let prev: f64 = logs[k - 1];
        logs.push(name.formula_log(k).unwrap_or_else(|| prev.max(0.0)));
    }
    Ok(WeightSequence::from_logs(logs)?.with_label(name.as_str()))
}
