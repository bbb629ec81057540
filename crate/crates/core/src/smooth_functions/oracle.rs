use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_factorial, LogMagnitude};

/// Highest order supported for `e^{-1/x}`; the coefficient table is built once.
pub const FLAT_MAX_ORDER: usize = 80;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    /// `e^{c x}`
    ExpScaled { rate: f64 },
    Sin,
    Cos,
    /// `1 / (1 + s x)`
    RationalPole { slope: f64 },
    /// Monomial coefficients, constant term first.
    Polynomial { coeffs: Vec<f64> },
    /// `e^{-1/x}` for `x > 0`, extended by 0 at the origin.
    Flat,
    Zero,
}

/// A smooth function on `[a, b]` with exact derivatives of every order.
///
/// Every function is multiplied by a constant `scale` (default 1), which is
/// how normalized members such as `e^x / e` are expressed.
#[derive(Debug, Clone)]
pub struct DerivativeOracle {
    kind: FunctionKind,
    scale: f64,
    interval: (f64, f64),
    flat: Option<Arc<FlatTable>>,
}

/// Optional parameters of [`OracleSpec`]; each function accepts a subset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

/// JSON form `{"name": "...", "params": {...}, "interval": [a, b]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub name: String,
    #[serde(default)]
    pub params: OracleParams,
    pub interval: [f64; 2],
}

impl OracleSpec {
    pub fn build(&self) -> Result<DerivativeOracle> {
        make_oracle(&self.name, &self.params, (self.interval[0], self.interval[1]))
    }
}

/// Builds a catalog function by name.
///
/// Names: `exp_scaled` (param `c`), `sin`, `cos`, `rational_pole` (param
/// `slope`, default 1), `polynomial` (param `coeffs`), `flat`, `zero`. All
/// accept `scale`.
pub fn make_oracle(name: &str, params: &OracleParams, interval: (f64, f64)) -> Result<DerivativeOracle> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    let allowed: &[&str] = match name {
        "exp_scaled" => &["c", "scale"],
        "rational_pole" => &["slope", "scale"],
        "polynomial" => &["coeffs", "scale"],
        "sin" | "cos" | "flat" | "zero" => &["scale"],
        _ => return Err(Error::Lookup(format!("unknown function '{name}'"))),
    };
    for (key, present) in [
        ("c", params.c.is_some()),
        ("slope", params.slope.is_some()),
        ("coeffs", params.coeffs.is_some()),
    ] {
        if present && !allowed.contains(&key) {
            return Err(Error::Domain(format!("'{name}' does not take parameter '{key}'")));
        }
    }
    let scale = params.scale.unwrap_or(1.0);
    if !scale.is_finite() {
        return Err(Error::Domain("scale must be finite".into()));
    }
    let kind = match name {
        "exp_scaled" => FunctionKind::ExpScaled { rate: params.c.unwrap_or(1.0) },
        "sin" => FunctionKind::Sin,
        "cos" => FunctionKind::Cos,
        "rational_pole" => {
            let slope = params.slope.unwrap_or(1.0);
            let (ea, eb) = (1.0 + slope * a, 1.0 + slope * b);
            if ea == 0.0 || eb == 0.0 || ea.signum() != eb.signum() {
                return Err(Error::Domain(format!(
                    "pole of 1/(1 + {slope} x) lies in [{a}, {b}]"
                )));
            }
            FunctionKind::RationalPole { slope }
        }
        "polynomial" => FunctionKind::Polynomial {
            coeffs: params.coeffs.clone().unwrap_or_default(),
        },
        "flat" => {
            if a < 0.0 {
                return Err(Error::Domain("e^{-1/x} is only defined for x >= 0".into()));
            }
            FunctionKind::Flat
        }
        _ => FunctionKind::Zero,
    };
    if let FunctionKind::ExpScaled { rate } = kind {
        if !rate.is_finite() {
            return Err(Error::Domain("rate must be finite".into()));
        }
    }
    Ok(DerivativeOracle::from_kind(kind, scale, interval))
}

impl DerivativeOracle {
    fn from_kind(kind: FunctionKind, scale: f64, interval: (f64, f64)) -> Self {
        let flat = matches!(kind, FunctionKind::Flat).then(|| Arc::new(FlatTable::new()));
        DerivativeOracle { kind, scale, interval, flat }
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// The same function multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        DerivativeOracle {
            scale: self.scale * factor,
            ..self.clone()
        }
    }

    /// The same function viewed on another interval.
    pub fn on_interval(&self, a: f64, b: f64) -> Result<Self> {
        self.spec_with_interval([a, b]).build()
    }

    /// The JSON description this oracle was built from.
    pub fn spec(&self) -> OracleSpec {
        self.spec_with_interval([self.interval.0, self.interval.1])
    }

    fn spec_with_interval(&self, interval: [f64; 2]) -> OracleSpec {
        let mut params = OracleParams {
            scale: (self.scale != 1.0).then_some(self.scale),
            ..Default::default()
        };
        match &self.kind {
            FunctionKind::ExpScaled { rate } => params.c = Some(*rate),
            FunctionKind::RationalPole { slope } => params.slope = Some(*slope),
            FunctionKind::Polynomial { coeffs } => params.coeffs = Some(coeffs.clone()),
            _ => {}
        }
        OracleSpec {
            name: self.name().to_string(),
            params,
            interval,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FunctionKind::ExpScaled { .. } => "exp_scaled",
            FunctionKind::Sin => "sin",
            FunctionKind::Cos => "cos",
            FunctionKind::RationalPole { .. } => "rational_pole",
            FunctionKind::Polynomial { .. } => "polynomial",
            FunctionKind::Flat => "flat",
            FunctionKind::Zero => "zero",
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.interval.0 <= x && x <= self.interval.1
    }

    fn check_point(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "x = {x} lies outside [{}, {}]",
                self.interval.0, self.interval.1
            )))
        }
    }

    /// `f^{(n)}(x)` as sign and log-magnitude.
    pub fn log_derivative(&self, n: usize, x: f64) -> Result<LogMagnitude> {
        self.check_point(x)?;
        if self.scale == 0.0 {
            return Ok(LogMagnitude::ZERO);
        }
        let raw = match &self.kind {
            FunctionKind::ExpScaled { rate } => {
                if *rate == 0.0 {
                    LogMagnitude::from_value(if n == 0 { 1.0 } else { 0.0 })
                } else {
                    let sign = if rate.is_sign_negative() && n % 2 == 1 { -1.0 } else { 1.0 };
                    LogMagnitude {
                        sign,
                        log_abs: n as f64 * rate.abs().ln() + rate * x,
                    }
                }
            }
            FunctionKind::Sin => LogMagnitude::from_value(sin_shifted(x, n)),
            FunctionKind::Cos => LogMagnitude::from_value(sin_shifted(x, n + 1)),
            FunctionKind::RationalPole { slope } => {
                if *slope == 0.0 {
                    LogMagnitude::from_value(if n == 0 { 1.0 } else { 0.0 })
                } else {
                    let base = 1.0 + slope * x;
                    let mut sign = base.signum().powi(n as i32 + 1);
                    if (-slope).is_sign_negative() && n % 2 == 1 {
                        sign = -sign;
                    }
                    LogMagnitude {
                        sign,
                        log_abs: n as f64 * slope.abs().ln() + ln_factorial(n) - (n + 1) as f64 * base.abs().ln(),
                    }
                }
            }
            FunctionKind::Polynomial { coeffs } => {
                LogMagnitude::from_value(horner(&derivative_coeffs(coeffs, n), x))
            }
            FunctionKind::Flat => {
                if x == 0.0 {
                    LogMagnitude::ZERO
                } else {
                    let table = self.flat.as_ref().expect("flat table");
                    table.log_derivative(n, x)?
                }
            }
            FunctionKind::Zero => LogMagnitude::ZERO,
        };
        if raw.is_zero() {
            return Ok(raw);
        }
        Ok(LogMagnitude {
            sign: raw.sign * self.scale.signum(),
            log_abs: raw.log_abs + self.scale.abs().ln(),
        })
    }

    /// `f^{(n)}(x)`; may overflow to infinity for large orders.
    pub fn derivative(&self, n: usize, x: f64) -> Result<f64> {
        Ok(self.log_derivative(n, x)?.value())
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.derivative(0, x)
    }

    /// Exact `f^{(n)}(x)` at a rational point, for the members whose
    /// derivatives are rational there (polynomials and zero).
    pub fn exact_derivative(&self, n: usize, x: &BigRational) -> Option<BigRational> {
        let scale = BigRational::from_float(self.scale)?;
        match &self.kind {
            FunctionKind::Zero => Some(BigRational::zero()),
            FunctionKind::Polynomial { coeffs } => {
                let exact: Option<Vec<BigRational>> = coeffs.iter().map(|c| BigRational::from_float(*c)).collect();
                let exact = exact?;
                let mut acc = BigRational::zero();
                for (k, c) in exact.iter().enumerate().skip(n).rev() {
                    let falling: BigInt = ((k - n + 1)..=k).map(BigInt::from).product();
                    acc = acc * x + c * BigRational::from_integer(falling);
                }
                Some(acc * scale)
            }
            _ => None,
        }
    }

    /// Range `[min, max]` of `f^{(n)}` over `[lo, hi]`.
    ///
    /// Exact for exponentials, rational poles, sine and cosine; otherwise the
    /// extremes of a dense sample plus the endpoints (`exact = false`).
    pub fn derivative_range(&self, n: usize, lo: f64, hi: f64) -> Result<DerivativeRange> {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        self.check_point(lo)?;
        self.check_point(hi)?;
        let mut candidates = vec![lo, hi];
        let exact = match &self.kind {
            FunctionKind::ExpScaled { .. } | FunctionKind::RationalPole { .. } | FunctionKind::Zero => true,
            FunctionKind::Sin | FunctionKind::Cos => {
                // f^{(n)}(x) = sin(x + phi) has extrema where x + phi = pi/2 + k pi
                let phi = (n + usize::from(matches!(self.kind, FunctionKind::Cos))) as f64 * FRAC_PI_2;
                let k_lo = ((lo + phi - FRAC_PI_2) / PI).ceil() as i64;
                let k_hi = ((hi + phi - FRAC_PI_2) / PI).floor() as i64;
                candidates.extend((k_lo..=k_hi).map(|k| FRAC_PI_2 + k as f64 * PI - phi).filter(|x| *x >= lo && *x <= hi));
                true
            }
            FunctionKind::Polynomial { coeffs } if derivative_coeffs(coeffs, n).len() <= 2 => true,
            _ => {
                const SAMPLES: usize = 4096;
                candidates.extend((1..SAMPLES).map(|i| lo + (hi - lo) * i as f64 / SAMPLES as f64));
                false
            }
        };
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for x in candidates {
            let v = self.derivative(n, x)?;
            min = min.min(v);
            max = max.max(v);
        }
        Ok(DerivativeRange { min, max, exact })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeRange {
    pub min: f64,
    pub max: f64,
    pub exact: bool,
}

fn sin_shifted(x: f64, n: usize) -> f64 {
    match n % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

fn derivative_coeffs(coeffs: &[f64], n: usize) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(n)
        .map(|(k, c)| c * ((k - n + 1)..=k).map(|j| j as f64).product::<f64>())
        .collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Exact integer coefficients of `p_n` in `d^n/dx^n e^{-1/x} = p_n(1/x) e^{-1/x}`,
/// from `p_0 = 1`, `p_{n+1}(u) = u^2 (p_n(u) - p_n'(u))`. Constant term first.
pub fn flat_polynomial(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for _ in 0..n {
        p = flat_step(&p);
    }
    p
}

fn flat_step(p: &[BigInt]) -> Vec<BigInt> {
    let mut next = vec![BigInt::zero(); p.len() + 2];
    for k in 0..p.len() {
        let derivative_part = if k + 1 < p.len() {
            &p[k + 1] * BigInt::from(k + 1)
        } else {
            BigInt::zero()
        };
        next[k + 2] = &p[k] - derivative_part;
    }
    next
}

#[derive(Debug)]
struct FlatTable {
    coeffs: Vec<Vec<f64>>,
}

impl FlatTable {
    fn new() -> Self {
        let mut coeffs = Vec::with_capacity(FLAT_MAX_ORDER + 1);
        let mut p = vec![BigInt::one()];
        for _ in 0..=FLAT_MAX_ORDER {
            coeffs.push(p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect());
            p = flat_step(&p);
        }
        FlatTable { coeffs }
    }

    fn log_derivative(&self, n: usize, x: f64) -> Result<LogMagnitude> {
        let p = self
            .coeffs
            .get(n)
            .ok_or_else(|| Error::Order(format!("flat derivatives are tabulated up to order {FLAT_MAX_ORDER}")))?;
        let u = 1.0 / x;
        let poly = if u > 1.0 {
            // p(u) = u^deg q(1/u) keeps the evaluation in range for large u
            let deg = p.len() - 1;
            let q = p.iter().fold(0.0, |acc, c| acc * x + c);
            let lq = LogMagnitude::from_value(q);
            LogMagnitude {
                sign: lq.sign,
                log_abs: lq.log_abs + deg as f64 * u.ln(),
            }
        } else {
            LogMagnitude::from_value(horner(p, u))
        };
        if poly.is_zero() {
            return Ok(poly);
        }
        Ok(LogMagnitude {
            sign: poly.sign,
            log_abs: poly.log_abs - u,
        })
    }
}
