use serde::{Deserialize, Serialize};

use super::WeightSequence;
use crate::error::{Error, Result};
use crate::numeric::REL_TOL;

/// Largest input the quadratic-window inf-formula oracle accepts.
pub const BRUTE_FORCE_CAP: usize = 200;

/// The largest log-convex minorant `M^c` of a weight sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedSequence {
    log_regularized: Vec<f64>,
    principal: Vec<usize>,
    vertices: Vec<usize>,
    source: WeightSequence,
}

impl RegularizedSequence {
    pub fn log_regularized(&self) -> &[f64] {
        &self.log_regularized
    }

    pub fn log_value(&self, n: usize) -> f64 {
        self.log_regularized[n]
    }

    pub fn value(&self, n: usize) -> f64 {
        self.log_regularized[n].exp()
    }

    pub fn regularized(&self) -> Vec<f64> {
        self.log_regularized.iter().map(|l| l.exp()).collect()
    }

    /// Indices `j` with `M^c_j = M_j` (within [`REL_TOL`]).
    pub fn principal(&self) -> &[usize] {
        &self.principal
    }

    /// Strict vertices of the Newton polygon; a subset of [`Self::principal`].
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn source(&self) -> &WeightSequence {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.log_regularized.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last_index(&self) -> usize {
        self.log_regularized.len() - 1
    }

    /// `M^c` viewed as a weight sequence of its own.
    pub fn as_weight_sequence(&self) -> WeightSequence {
        WeightSequence::from_logs(self.log_regularized.clone()).expect("M^c_0 = M_0 = 1")
    }

    /// Lists every violated structural property: log-convexity, minorant,
    /// contact at principal indices, and affinity between principal indices.
    pub fn invariant_violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let lc = &self.log_regularized;
        let lm = self.source.log_values();
        let slack = |a: f64, b: f64| tol * (1.0 + a.abs().max(b.abs()));
        for k in 1..lc.len().saturating_sub(1) {
            if 2.0 * lc[k] > lc[k - 1] + lc[k + 1] + slack(2.0 * lc[k], lc[k - 1] + lc[k + 1]) {
                out.push(format!("log-convexity fails at k = {k}"));
            }
        }
        for (k, (c, m)) in lc.iter().zip(lm).enumerate() {
            if *c > m + slack(*c, *m) {
                out.push(format!("minorant fails at k = {k}"));
            }
            let touching = (c - m).abs() <= slack(*c, *m);
            if touching != self.principal.binary_search(&k).is_ok() {
                out.push(format!("contact set disagrees with principal set at k = {k}"));
            }
        }
        if self.principal.first() != Some(&0) || self.principal.last() != Some(&self.last_index()) {
            out.push("endpoints missing from principal set".into());
        }
        for w in self.principal.windows(2) {
            let (a, b) = (w[0], w[1]);
            let slope = (lc[b] - lc[a]) / (b - a) as f64;
            for j in a + 1..b {
                let expected = lc[a] + slope * (j - a) as f64;
                if (lc[j] - expected).abs() > slack(lc[j], expected) {
                    out.push(format!("not affine between principal {a} and {b} at {j}"));
                }
            }
        }
        out
    }
}

/// JSON form `{"Mc": [...], "principal": [...]}`, plus `logMc` so that
/// entries overflowing `f64` are still represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularizedJson {
    #[serde(rename = "Mc")]
    pub regularized: Vec<f64>,
    pub principal: Vec<usize>,
    #[serde(rename = "logMc")]
    pub log_regularized: Vec<f64>,
}

impl From<&RegularizedSequence> for RegularizedJson {
    fn from(r: &RegularizedSequence) -> Self {
        RegularizedJson {
            regularized: r.regularized(),
            principal: r.principal.clone(),
            log_regularized: r.log_regularized.clone(),
        }
    }
}

/// Log-convex regularization by the lower convex hull of `(n, ln M_n)`.
///
/// Monotone chain over abscissae that are already sorted, so O(N). Collinear
/// points are dropped from the hull vertices but still count as principal
/// indices because the minorant touches them.
pub fn convex_regularize(m: &WeightSequence) -> RegularizedSequence {
    let logs = m.log_values();
    let mut hull: Vec<usize> = Vec::with_capacity(logs.len());
    for i in 0..logs.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // cross((b - a), (i - a)) <= 0: b is on or above the chord a -> i
            let cross = (b - a) as f64 * (logs[i] - logs[a]) - (logs[b] - logs[a]) * (i - a) as f64;
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    let mut log_regularized = logs.to_vec();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (logs[b] - logs[a]) / (b - a) as f64;
        for j in a + 1..b {
            log_regularized[j] = (logs[a] + slope * (j - a) as f64).min(logs[j]);
        }
    }
    from_minorant(m, log_regularized, hull)
}

/// Independent oracle: evaluates
/// `ln M^c_n = inf (k ln M_{n-l} + l ln M_{n+k}) / (k + l)` over
/// `0 <= l <= n`, `0 <= k <= N - n`, `(k, l) != (0, 0)`.
///
/// Cubic in N; refuses inputs with `N > BRUTE_FORCE_CAP`.
pub fn brute_force_regularize(m: &WeightSequence) -> Result<RegularizedSequence> {
    let n_max = m.last_index();
    if n_max > BRUTE_FORCE_CAP {
        return Err(Error::Size(format!(
            "brute-force regularization is capped at N = {BRUTE_FORCE_CAP}, got {n_max}"
        )));
    }
    let logs = m.log_values();
    let log_regularized = (0..=n_max)
        .map(|n| {
            let mut best = f64::INFINITY;
            for l in 0..=n {
                for k in 0..=(n_max - n) {
                    if k == 0 && l == 0 {
                        continue;
                    }
                    let chord = (k as f64 * logs[n - l] + l as f64 * logs[n + k]) / (k + l) as f64;
                    best = best.min(chord);
                }
            }
            best
        })
        .collect();
    let vertices = Vec::new();
    let mut out = from_minorant(m, log_regularized, vertices);
    // Strict vertices: principal points not lying on the chord of their principal neighbours.
    let lc = out.log_regularized.clone();
    out.vertices = out
        .principal
        .iter()
        .enumerate()
        .filter(|&(i, &j)| {
            if i == 0 || i + 1 == out.principal.len() {
                return true;
            }
            let (a, b) = (out.principal[i - 1], out.principal[i + 1]);
            let chord = lc[a] + (lc[b] - lc[a]) * (j - a) as f64 / (b - a) as f64;
            lc[j] < chord - REL_TOL * (1.0 + chord.abs())
        })
        .map(|(_, &j)| j)
        .collect();
    Ok(out)
}

fn from_minorant(m: &WeightSequence, mut log_regularized: Vec<f64>, vertices: Vec<usize>) -> RegularizedSequence {
    let logs = m.log_values();
    let mut principal = Vec::new();
    for (j, (c, raw)) in log_regularized.iter_mut().zip(logs).enumerate() {
        if (*c - raw).abs() <= REL_TOL * (1.0 + raw.abs()) {
            *c = *raw;
            principal.push(j);
        }
    }
    RegularizedSequence {
        log_regularized,
        principal,
        vertices,
        source: m.clone(),
    }
}
