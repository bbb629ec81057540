use std::f64::consts::E;

use super::{RegularizedSequence, WeightSequence};
use crate::error::{Error, Result};

/// `ln beta_n` for `n = 1..=N`, where `beta_n = min_{n <= k <= N} M_k^{1/k}`.
pub fn log_beta_sequence(m: &WeightSequence) -> Vec<f64> {
    let logs = m.log_values();
    let n_max = m.last_index();
    let mut out = vec![0.0; n_max];
    let mut running = f64::INFINITY;
    for k in (1..=n_max).rev() {
        running = running.min(logs[k] / k as f64);
        out[k - 1] = running;
    }
    out
}

/// `beta_n` for `n = 1..=N`; element `i` holds `beta_{i+1}`.
///
/// The infimum runs over the stored prefix only, so the tail of this list is
/// an upper bound for the value of the infinite sequence.
pub fn beta_sequence(m: &WeightSequence) -> Vec<f64> {
    log_beta_sequence(m).into_iter().map(f64::exp).collect()
}

/// Partial sums of the three equivalent divergence series, for `m = 1..=up_to`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSums {
    /// `S1(m) = sum 1/beta_n`
    pub s1: Vec<f64>,
    /// `S2(m) = sum (M^c_n)^{-1/n}`
    pub s2: Vec<f64>,
    /// `S3(m) = sum M^c_{n-1}/M^c_n`
    pub s3: Vec<f64>,
}

impl PartialSums {
    pub fn len(&self) -> usize {
        self.s3.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s3.is_empty()
    }

    /// Rows `(m, S1, S2, S3)`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64, f64)> + '_ {
        (0..self.len()).map(|i| (i + 1, self.s1[i], self.s2[i], self.s3[i]))
    }
}

pub fn criterion_partial_sums(reg: &RegularizedSequence, up_to: usize) -> Result<PartialSums> {
    if up_to > reg.last_index() {
        return Err(Error::Precondition(format!(
            "partial sums requested up to {up_to} but the prefix ends at {}",
            reg.last_index()
        )));
    }
    let log_beta = log_beta_sequence(reg.source());
    let lc = reg.log_regularized();
    let mut sums = PartialSums {
        s1: Vec::with_capacity(up_to),
        s2: Vec::with_capacity(up_to),
        s3: Vec::with_capacity(up_to),
    };
    let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
    for n in 1..=up_to {
        s1 += (-log_beta[n - 1]).exp();
        s2 += (-lc[n] / n as f64).exp();
        s3 += (lc[n - 1] - lc[n]).exp();
        sums.s1.push(s1);
        sums.s2.push(s2);
        sums.s3.push(s3);
    }
    Ok(sums)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlemanCheck {
    /// `sum_n (a_1 ... a_n)^{1/n}`
    pub lhs: f64,
    /// `e * sum_n a_n`
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates both sides of Carleman's inequality for a positive vector.
pub fn carleman_inequality_check(a: &[f64]) -> Result<CarlemanCheck> {
    if a.is_empty() {
        return Err(Error::Size("Carleman check needs at least one term".into()));
    }
    if let Some((i, v)) = a.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!("term a_{} = {v} is not positive", i + 1)));
    }
    let mut log_product = 0.0;
    let mut lhs = 0.0;
    for (i, v) in a.iter().enumerate() {
        log_product += v.ln();
        lhs += (log_product / (i + 1) as f64).exp();
    }
    let rhs = E * a.iter().sum::<f64>();
    Ok(CarlemanCheck { lhs, rhs, holds: lhs <= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::convex_regularize;

    #[test]
    fn beta_examples() {
        let ones = WeightSequence::new(&[1.0; 4]).unwrap();
        assert_eq!(beta_sequence(&ones), vec![1.0; 3]);

        let fact = WeightSequence::new(&[1.0, 1.0, 2.0, 6.0, 24.0]).unwrap();
        assert!((beta_sequence(&fact)[2] - 6f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((beta_sequence(&fact)[2] - 1.8171205928321397).abs() < 1e-12);

        let dip = WeightSequence::new(&[1.0, 5.0, 2.0]).unwrap();
        assert!((beta_sequence(&dip)[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_s3_for_factorial() {
        let fact = WeightSequence::new(&[1.0, 1.0, 2.0, 6.0, 24.0]).unwrap();
        let sums = criterion_partial_sums(&convex_regularize(&fact), 4).unwrap();
        assert!((sums.s3[3] - 25.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn constant_sequence_sums_count() {
        let ones = WeightSequence::new(&[1.0; 6]).unwrap();
        let sums = criterion_partial_sums(&convex_regularize(&ones), 5).unwrap();
        for (m, s1, s2, s3) in sums.rows() {
            assert_eq!((s1, s2, s3), (m as f64, m as f64, m as f64));
        }
    }

    #[test]
    fn partial_sums_reject_long_request() {
        let ones = WeightSequence::new(&[1.0; 3]).unwrap();
        assert!(criterion_partial_sums(&convex_regularize(&ones), 3).is_err());
    }

    #[test]
    fn carleman_examples() {
        let c = carleman_inequality_check(&[1.0; 5]).unwrap();
        assert!((c.lhs - 5.0).abs() < 1e-14 && (c.rhs - 5.0 * E).abs() < 1e-12 && c.holds);

        let c = carleman_inequality_check(&[1.0, 0.5, 1.0 / 3.0, 0.25]).unwrap();
        let expected: f64 = [1.0f64, 2.0, 6.0, 24.0]
            .iter()
            .enumerate()
            .map(|(i, f)| f.powf(-1.0 / (i + 1) as f64))
            .sum();
        assert!((c.lhs - expected).abs() < 1e-12);
        assert!((c.lhs - 2.709).abs() < 1e-3);
        assert!((c.rhs - E * 25.0 / 12.0).abs() < 1e-12 && c.holds);

        let c = carleman_inequality_check(&[4.0, 1.0]).unwrap();
        assert!((c.lhs - 6.0).abs() < 1e-14 && (c.rhs - 5.0 * E).abs() < 1e-12 && c.holds);
    }

    #[test]
    fn carleman_rejects_bad_terms() {
        assert!(matches!(carleman_inequality_check(&[1.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(carleman_inequality_check(&[]), Err(Error::Size(_))));
    }
}
