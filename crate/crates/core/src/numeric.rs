//! Small numerical helpers shared across modules.

/// Relative tolerance used for equality comparisons of positive reals.
pub const REL_TOL: f64 = 1e-12;

/// `ln n!`, summed directly; exact enough for the orders used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln((a+1)(a+2)...(b))` for `a <= b`, i.e. `ln(b!/a!)`.
pub fn ln_rising(a: usize, b: usize) -> f64 {
    (a + 1..=b).map(|k| (k as f64).ln()).sum()
}

/// Signed value stored as `sign * exp(log_abs)`; keeps huge derivatives finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub sign: f64,
    pub log_abs: f64,
}

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude {
        sign: 0.0,
        log_abs: f64::NEG_INFINITY,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogMagnitude {
                sign: v.signum(),
                log_abs: v.abs().ln(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0
    }

    pub fn value(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.sign * self.log_abs.exp()
        }
    }

    /// `self / exp(log_divisor)` as a plain float.
    pub fn scaled_by_log(&self, log_divisor: f64) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.sign * (self.log_abs - log_divisor).exp()
        }
    }
}

/// `a <= b` up to a relative slack.
pub fn le_rel(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_logs() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        assert!((ln_rising(2, 4) - 12f64.ln()).abs() < 1e-14);
        assert_eq!(ln_rising(3, 3), 0.0);
    }

    #[test]
    fn log_magnitude_round_trip() {
        for v in [-3.5, 0.0, 1e-200, 7.25] {
            let lm = LogMagnitude::from_value(v);
            assert!((lm.value() - v).abs() <= 1e-13 * v.abs());
        }
        assert_eq!(LogMagnitude::from_value(-2.0).scaled_by_log(2f64.ln()), -1.0);
    }
}
