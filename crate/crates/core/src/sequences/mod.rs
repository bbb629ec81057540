//! Weight sequences, log-convex regularization and divergence criteria.
//!
//! Every object here is a finite prefix `M_0..M_N` of an infinite sequence.
//! Quantities that look to the right of an index (`beta_n`, the minorant
//! near `N`) are therefore relative to the prefix: extending the prefix can
//! only lower them.

mod canonical;
mod classify;
mod criteria;
mod regularize;

pub use canonical::{canonical_sequence, CanonicalName};
pub use classify::{classify, ClassificationVerdict, ClassifierPolicy, CriterionTrace, Verdict};
pub use criteria::{beta_sequence, carleman_inequality_check, criterion_partial_sums, CarlemanCheck, PartialSums};
pub use regularize::{brute_force_regularize, convex_regularize, RegularizedJson, RegularizedSequence, BRUTE_FORCE_CAP};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite prefix `M_0..M_N` of a positive weight sequence, normalized to `M_0 = 1`.
///
/// Values are stored as natural logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    log_values: Vec<f64>,
    label: Option<String>,
}

impl WeightSequence {
    /// Builds a sequence from plain values. `values[0]` must equal 1.
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Size(format!(
                "a weight sequence needs at least 2 entries, got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!("entry M_{i} = {v} is not a positive finite number")));
        }
        Self::from_logs(values.iter().map(|v| v.ln()).collect())
    }

    /// Builds a sequence from `ln M_n`. `log_values[0]` must be 0.
    pub fn from_logs(log_values: Vec<f64>) -> Result<Self> {
        if log_values.len() < 2 {
            return Err(Error::Size(format!(
                "a weight sequence needs at least 2 entries, got {}",
                log_values.len()
            )));
        }
        if let Some((i, v)) = log_values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("ln M_{i} = {v} is not finite")));
        }
        if log_values[0].abs() > crate::numeric::REL_TOL {
            return Err(Error::Domain(format!(
                "M_0 must equal 1, got {}",
                log_values[0].exp()
            )));
        }
        let mut log_values = log_values;
        log_values[0] = 0.0;
        Ok(WeightSequence { log_values, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of stored entries, `N + 1`.
    pub fn len(&self) -> usize {
        self.log_values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The last index `N`.
    pub fn last_index(&self) -> usize {
        self.log_values.len() - 1
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn log_value(&self, n: usize) -> f64 {
        self.log_values[n]
    }

    /// `M_n`; may overflow to infinity for fast-growing sequences.
    pub fn value(&self, n: usize) -> f64 {
        self.log_values[n].exp()
    }

    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }

    /// Returns the first `len` entries as a new sequence.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        let mut out = Self::from_logs(self.log_values[..len.min(self.len())].to_vec())?;
        out.label = self.label.clone();
        Ok(out)
    }

    /// Checks `ln M_k <= (ln M_{k-1} + ln M_{k+1}) / 2` with a relative slack.
    pub fn is_log_convex(&self, tol: f64) -> bool {
        is_log_convex(&self.log_values, tol)
    }
}

pub(crate) fn is_log_convex(logs: &[f64], tol: f64) -> bool {
    logs.windows(3).all(|w| {
        let mid = 2.0 * w[1];
        let side = w[0] + w[2];
        mid <= side + tol * (1.0 + mid.abs().max(side.abs()))
    })
}

/// JSON form `{"M": [...], "label": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSequenceJson {
    #[serde(rename = "M")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TryFrom<WeightSequenceJson> for WeightSequence {
    type Error = Error;

    fn try_from(json: WeightSequenceJson) -> Result<Self> {
        let seq = WeightSequence::new(&json.values)?;
        Ok(match json.label {
            Some(l) => seq.with_label(l),
            None => seq,
        })
    }
}

impl From<&WeightSequence> for WeightSequenceJson {
    fn from(seq: &WeightSequence) -> Self {
        WeightSequenceJson {
            values: seq.values(),
            label: seq.label.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_sequences() {
        assert!(matches!(WeightSequence::new(&[1.0]), Err(Error::Size(_))));
        assert!(matches!(WeightSequence::new(&[1.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(WeightSequence::new(&[1.0, -2.0]), Err(Error::Domain(_))));
        assert!(matches!(WeightSequence::new(&[1.0, f64::INFINITY]), Err(Error::Domain(_))));
        assert!(matches!(WeightSequence::new(&[2.0, 3.0]), Err(Error::Domain(_))));
        assert!(matches!(WeightSequence::from_logs(vec![0.0, f64::NAN]), Err(Error::Domain(_))));
    }

    #[test]
    fn log_convexity() {
        assert!(WeightSequence::new(&[1.0, 1.0, 2.0, 6.0, 24.0]).unwrap().is_log_convex(1e-12));
        assert!(!WeightSequence::new(&[1.0, 5.0, 2.0, 6.0]).unwrap().is_log_convex(1e-12));
    }

    #[test]
    fn json_schema() {
        let json: WeightSequenceJson = serde_json::from_str(r#"{"M":[1,5,2,6],"label":"x"}"#).unwrap();
        let seq = WeightSequence::try_from(json).unwrap();
        assert_eq!(seq.label(), Some("x"));
        assert_eq!(seq.last_index(), 3);
        assert!(serde_json::from_str::<WeightSequenceJson>(r#"{"M":[1],"extra":1}"#).is_err());
    }
}
