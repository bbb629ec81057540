use serde::{Deserialize, Serialize};

use super::{convex_regularize, criterion_partial_sums, PartialSums, WeightSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    QuasiAnalytic,
    NotQuasiAnalytic,
    Inconclusive,
}

/// Thresholds of the prefix-based divergence heuristic.
///
/// With `H` the effective horizon, the window increments are
/// `D_k = S(H / 2^(k-1)) - S(H / 2^k)` for `k = 1..=windows` (newest first).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierPolicy {
    /// Largest index inspected; capped by the prefix length.
    pub horizon: usize,
    /// Number of doubling windows.
    pub windows: usize,
    /// Every `D_k` of `S3` must reach this for a divergence verdict.
    pub eps_div: f64,
    /// A divergence verdict also needs `D_k / D_{k+1} >= min_window_ratio`.
    pub min_window_ratio: f64,
    /// Convergence verdict when the geometric extrapolation of the window
    /// increments bounds the remaining tail of `S3` below this.
    pub eps_conv: f64,
    /// The `liminf M_n^{1/n} < inf` pre-check fires when the window minima of
    /// `ln M_n / n` grow by at most this between consecutive windows.
    pub liminf_tol: f64,
}

impl Default for ClassifierPolicy {
    fn default() -> Self {
        ClassifierPolicy {
            horizon: 10_000,
            windows: 3,
            eps_div: 1e-3,
            min_window_ratio: 0.75,
            eps_conv: 1e-3,
            liminf_tol: 1e-3,
        }
    }
}

/// One criterion's partial sums `S(1..=H)` and its doubling-window increments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionTrace {
    pub partial_sums: Vec<f64>,
    pub window_increments: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub verdict: Verdict,
    pub horizon: usize,
    /// Traces for `sum 1/beta_n`, `sum (M^c_n)^{-1/n}` and `sum M^c_{n-1}/M^c_n`.
    pub criterion_traces: [CriterionTrace; 3],
    /// Set when the prefix suggests `liminf M_n^{1/n} < inf`, which alone implies quasi-analyticity.
    pub trivial_liminf_flag: bool,
    /// Geometric extrapolation of the `S3` tail beyond the horizon, if the increments decay.
    pub tail_estimate: Option<f64>,
    pub policy: ClassifierPolicy,
}

impl ClassificationVerdict {
    /// Rows `(m, S1, S2, S3)` of the three traces.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64, f64)> + '_ {
        let [t1, t2, t3] = &self.criterion_traces;
        (0..t3.partial_sums.len()).map(move |i| (i + 1, t1.partial_sums[i], t2.partial_sums[i], t3.partial_sums[i]))
    }
}

fn window_increments(sums: &[f64], horizon: usize, windows: usize) -> Vec<f64> {
    let at = |m: usize| if m == 0 { 0.0 } else { sums[m - 1] };
    (1..=windows)
        .map(|k| at(horizon >> (k - 1)) - at(horizon >> k))
        .collect()
}

/// Classifies a weight sequence from its prefix, using the `S3` criterion.
///
/// Divergence cannot be decided from finitely many terms; the verdict is
/// the outcome of the explicit [`ClassifierPolicy`] and is `Inconclusive`
/// whenever neither the growth nor the decay evidence is decisive.
pub fn classify(m: &WeightSequence, policy: &ClassifierPolicy) -> ClassificationVerdict {
    let horizon = policy.horizon.min(m.last_index()).max(1);
    let prefix = m.truncated(horizon + 1).expect("prefix of a valid sequence");
    let reg = convex_regularize(&prefix);
    let sums = criterion_partial_sums(&reg, horizon).expect("horizon within prefix");
    let PartialSums { s1, s2, s3 } = sums;
    let windows = policy.windows.max(1);
    let enough = horizon >> windows >= 1;

    let trace = |s: Vec<f64>| CriterionTrace {
        window_increments: if enough { window_increments(&s, horizon, windows) } else { Vec::new() },
        partial_sums: s,
    };
    let criterion_traces = [trace(s1), trace(s2), trace(s3)];

    let mut verdict = ClassificationVerdict {
        verdict: Verdict::Inconclusive,
        horizon,
        criterion_traces,
        trivial_liminf_flag: false,
        tail_estimate: None,
        policy: *policy,
    };
    if !enough {
        return verdict;
    }

    verdict.trivial_liminf_flag = liminf_looks_finite(prefix.log_values(), horizon, windows, policy.liminf_tol);

    let d = &verdict.criterion_traces[2].window_increments;
    let ratios: Vec<f64> = d.windows(2).map(|w| w[0] / w[1]).collect();
    let growing = d.iter().all(|&x| x >= policy.eps_div) && ratios.iter().all(|&r| r >= policy.min_window_ratio);
    let r_max = ratios.iter().copied().fold(0.0, f64::max);
    if r_max < 1.0 {
        verdict.tail_estimate = Some(d[0] * r_max / (1.0 - r_max));
    }

    verdict.verdict = if verdict.trivial_liminf_flag || growing {
        Verdict::QuasiAnalytic
    } else if verdict.tail_estimate.is_some_and(|t| t < policy.eps_conv) {
        Verdict::NotQuasiAnalytic
    } else {
        Verdict::Inconclusive
    };
    verdict
}

fn liminf_looks_finite(logs: &[f64], horizon: usize, windows: usize, tol: f64) -> bool {
    let minima: Vec<f64> = (1..=windows)
        .map(|k| {
            let (lo, hi) = ((horizon >> k) + 1, horizon >> (k - 1));
            (lo..=hi).map(|n| logs[n] / n as f64).fold(f64::INFINITY, f64::min)
        })
        .collect();
    minima.windows(2).all(|w| w[0] - w[1] <= tol)
}
