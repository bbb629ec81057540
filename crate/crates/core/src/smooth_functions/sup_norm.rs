use super::DerivativeOracle;
use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

/// Residual slack (log space) of the `M_{n_k} <= B A^{n_k} n_k!` fit.
pub const MEMBERSHIP_FIT_TOL: f64 = 0.5;

/// Grid maximum of `|f^{(n)}|`, a lower bound for the sup norm `M_n(f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormEstimate {
    pub order: usize,
    pub grid_size: usize,
    /// `ln` of the estimate; `-inf` when the derivative vanishes on the grid.
    pub log_estimate: f64,
    /// Set when the estimate comes from [`refine_sup_norms`].
    pub refined: bool,
}

impl SupNormEstimate {
    pub fn estimate(&self) -> f64 {
        self.log_estimate.exp()
    }
}

/// `size` equispaced points of `[a, b]`, endpoints included.
pub fn uniform_grid(a: f64, b: f64, size: usize) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..size)
            .map(|i| if i + 1 == size { b } else { a + (b - a) * i as f64 / (size - 1) as f64 })
            .collect(),
    }
}

fn grid_log_max(f: &DerivativeOracle, order: usize, grid: &[f64]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for &x in grid {
        let d = f.log_derivative(order, x)?;
        if !d.is_zero() {
            best = best.max(d.log_abs);
        }
    }
    Ok(best)
}

/// Grid estimates of `M_n(f) = sup |f^{(n)}|` for `n = 0..=max_order`.
pub fn sup_norms(f: &DerivativeOracle, max_order: usize, grid_size: usize) -> Result<Vec<SupNormEstimate>> {
    if grid_size < 2 {
        return Err(Error::Size("sup-norm grid needs at least 2 points".into()));
    }
    let (a, b) = f.interval();
    let grid = uniform_grid(a, b, grid_size);
    (0..=max_order)
        .map(|order| {
            Ok(SupNormEstimate {
                order,
                grid_size,
                log_estimate: grid_log_max(f, order, &grid)?,
                refined: false,
            })
        })
        .collect()
}

/// Re-estimates on the grid with halved spacing (`2(G - 1) + 1` points),
/// which contains the old grid, so no estimate can decrease.
pub fn refine_sup_norms(f: &DerivativeOracle, estimates: &[SupNormEstimate]) -> Result<Vec<SupNormEstimate>> {
    let (a, b) = f.interval();
    estimates
        .iter()
        .map(|e| {
            let grid_size = 2 * (e.grid_size - 1) + 1;
            let grid = uniform_grid(a, b, grid_size);
            Ok(SupNormEstimate {
                order: e.order,
                grid_size,
                log_estimate: grid_log_max(f, e.order, &grid)?.max(e.log_estimate),
                refined: true,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PringsheimReport {
    /// `M_n(f)^{1/n} / n` for `n = 1..=max_order`.
    pub ratios: Vec<f64>,
    /// Minimum of `ratios` over each window of `window` consecutive orders.
    pub window_minima: Vec<f64>,
    pub window: usize,
}

/// Empirical Pringsheim diagnostic: bounded ratios indicate analyticity.
/// The sliding-window minima track the `liminf` variant of the criterion.
pub fn pringsheim_ratio(f: &DerivativeOracle, max_order: usize, grid_size: usize, window: usize) -> Result<PringsheimReport> {
    if max_order < 2 {
        return Err(Error::Order("Pringsheim ratios need max_order >= 2".into()));
    }
    let norms = sup_norms(f, max_order, grid_size)?;
    let ratios: Vec<f64> = norms[1..]
        .iter()
        .map(|e| (e.log_estimate / e.order as f64).exp() / e.order as f64)
        .collect();
    let window = window.clamp(1, ratios.len());
    let window_minima = ratios
        .windows(window)
        .map(|w| w.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    Ok(PringsheimReport { ratios, window_minima, window })
}

/// Least-squares fit of `ln M_{n_k} - ln n_k! ~ ln B + n_k ln A`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipFit {
    pub log_a: f64,
    pub log_b: f64,
    /// `ln M_{n_k} - ln n_k! - (ln B + n_k ln A)`; `-inf` where `M_{n_k} = 0`.
    pub residuals: Vec<f64>,
    /// The residual at the largest order stays within [`MEMBERSHIP_FIT_TOL`]:
    /// growth beyond `A^n n!` shows up as the tail escaping the fitted line.
    pub member: bool,
}

impl MembershipFit {
    pub fn a(&self) -> f64 {
        self.log_a.exp()
    }

    pub fn b(&self) -> f64 {
        self.log_b.exp()
    }
}

/// Empirical test of `M_{n_k}(f) <= B A^{n_k} n_k!` along a subsequence.
pub fn class_membership_fit(
    f: &DerivativeOracle,
    subseq: &[usize],
    max_order: usize,
    grid_size: usize,
) -> Result<MembershipFit> {
    if subseq.len() < 2 {
        return Err(Error::Size("membership fit needs at least 2 orders".into()));
    }
    if subseq.windows(2).any(|w| w[0] >= w[1]) || subseq[0] < 1 || *subseq.last().unwrap() > max_order {
        return Err(Error::Precondition(format!(
            "orders must increase strictly within 1..={max_order}"
        )));
    }
    let norms = sup_norms(f, max_order, grid_size)?;
    let ys: Vec<f64> = subseq.iter().map(|&n| norms[n].log_estimate - ln_factorial(n)).collect();
    let points: Vec<(f64, f64)> = subseq
        .iter()
        .zip(&ys)
        .filter(|(_, y)| y.is_finite())
        .map(|(&n, &y)| (n as f64, y))
        .collect();

    let (log_a, log_b) = match points.len() {
        0 => (0.0, 0.0),
        1 => (0.0, points[0].1),
        len => {
            let len = len as f64;
            let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
            let my = points.iter().map(|p| p.1).sum::<f64>() / len;
            let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let slope = sxy / sxx;
            (slope, my - slope * mx)
        }
    };
    let residuals: Vec<f64> = subseq
        .iter()
        .zip(&ys)
        .map(|(&n, &y)| if y.is_finite() { y - (log_b + n as f64 * log_a) } else { f64::NEG_INFINITY })
        .collect();
    let member = residuals.last().is_some_and(|r| *r <= MEMBERSHIP_FIT_TOL);
    Ok(MembershipFit { log_a, log_b, residuals, member })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth_functions::{make_oracle, OracleParams};
    use std::f64::consts::{E, PI};

    fn oracle(name: &str, a: f64, b: f64) -> DerivativeOracle {
        make_oracle(name, &OracleParams::default(), (a, b)).unwrap()
    }

    #[test]
    fn zero_function_has_zero_norms() {
        for e in sup_norms(&oracle("zero", 0.0, 1.0), 5, 10).unwrap() {
            assert_eq!(e.estimate(), 0.0);
        }
    }

    #[test]
    fn exp_norm_is_e() {
        for e in sup_norms(&oracle("exp_scaled", 0.0, 1.0), 8, 11).unwrap() {
            assert!((e.estimate() - E).abs() < 1e-14);
        }
    }

    #[test]
    fn sin_norm_on_half_period() {
        let f = oracle("sin", 0.0, PI);
        let coarse = sup_norms(&f, 0, 4).unwrap();
        assert!(coarse[0].estimate() < 1.0);
        let fine = sup_norms(&f, 0, 3).unwrap();
        assert!((fine[0].estimate() - 1.0).abs() < 1e-15);
        let refined = refine_sup_norms(&f, &coarse).unwrap();
        assert!(refined[0].refined && refined[0].estimate() >= coarse[0].estimate());
    }

    #[test]
    fn grid_size_validation() {
        assert!(matches!(sup_norms(&oracle("sin", 0.0, 1.0), 2, 1), Err(Error::Size(_))));
    }

    #[test]
    fn pringsheim_exp_ratios_vanish() {
        let r = pringsheim_ratio(&oracle("exp_scaled", 0.0, 1.0), 40, 11, 5).unwrap();
        assert!(r.ratios.windows(2).all(|w| w[1] < w[0]));
        assert!(r.ratios[39] < 0.03);
    }

    #[test]
    fn pringsheim_rational_pole_bounded() {
        let r = pringsheim_ratio(&oracle("rational_pole", 0.0, 0.5), 60, 101, 5).unwrap();
        // M_n = n! at x = 0, (n!)^{1/n}/n -> 1/e
        assert!(r.ratios.iter().all(|&v| v <= 1.0));
        assert!((r.ratios[59] - 1.0 / E).abs() < 0.05);
    }

    #[test]
    fn pringsheim_flat_bounded_away_from_origin() {
        let r = pringsheim_ratio(&oracle("flat", 1e-2, 1.0), 30, 201, 5).unwrap();
        let tail_max = r.ratios[20..].iter().copied().fold(0.0, f64::max);
        assert!(tail_max < 150.0, "{:?}", r.ratios);
        assert!(r.window_minima.len() == 26);
    }

    #[test]
    fn membership_exp() {
        let subseq: Vec<usize> = (1..=10).collect();
        let fit = class_membership_fit(&oracle("exp_scaled", 0.0, 1.0), &subseq, 10, 101).unwrap();
        assert!(fit.member);
        assert!(fit.a() <= 1.0);
        // every point lies below B e^{n} n! with B = e
        assert!(fit.residuals.iter().all(|r| r.is_finite()));
    }

    #[test]
    fn membership_polynomial_is_trivial() {
        let f = make_oracle(
            "polynomial",
            &OracleParams { coeffs: Some(vec![1.0, 2.0, 0.0, -1.0]), ..Default::default() },
            (0.0, 1.0),
        )
        .unwrap();
        let subseq: Vec<usize> = (4..=10).collect();
        let fit = class_membership_fit(&f, &subseq, 10, 11).unwrap();
        assert!(fit.member);
        assert!(fit.residuals.iter().all(|r| *r == f64::NEG_INFINITY));
    }

    #[test]
    fn membership_flat_fails() {
        let subseq: Vec<usize> = (1..=12).collect();
        let fit = class_membership_fit(&oracle("flat", 0.0, 1.0), &subseq, 12, 1001).unwrap();
        assert!(!fit.member);
        assert!(*fit.residuals.last().unwrap() > 1.0);
        assert!(fit.log_a > 2.0);
    }

    #[test]
    fn membership_fit_errors() {
        let f = oracle("sin", 0.0, 1.0);
        assert!(matches!(class_membership_fit(&f, &[3], 5, 10), Err(Error::Size(_))));
        assert!(matches!(class_membership_fit(&f, &[3, 2], 5, 10), Err(Error::Precondition(_))));
    }
}
