//! Kolmogorov–Smirnov and Cramér–von Mises statistics against the Pareto
//! law with the shape replaced by its MLE.
//!
//! Critical values come from the same Monte-Carlo machinery as the
//! characterization statistics, with the shape re-estimated in every
//! replication; see [`baseline_critical_value`].

use crate::distributions::mle_alpha_slice;
use crate::error::{Error, Result};
use crate::montecarlo::{critical_value, SimulationConfig};
use crate::sample::Sample;
use crate::statistics::{Statistic, StatisticValue};

fn fitted_cdf(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: xs.len(),
        });
    }
    let alpha = mle_alpha_slice(xs)?;
    Ok(xs.iter().map(|&x| -(-alpha * x.ln()).exp_m1()).collect())
}

/// Kolmogorov distance from fitted CDF values at the order statistics.
fn ks_from_cdf_values(f: &[f64]) -> f64 {
    let n = f.len() as f64;
    f.iter()
        .enumerate()
        .map(|(i, &fi)| {
            let i = i as f64;
            ((i + 1.0) / n - fi).max(fi - i / n)
        })
        .fold(0.0, f64::max)
}

/// Cramér–von Mises discrepancy from fitted CDF values at the order statistics.
fn cvm_from_cdf_values(f: &[f64]) -> f64 {
    let n = f.len() as f64;
    let sum: f64 = f
        .iter()
        .enumerate()
        .map(|(i, &fi)| (fi - (2.0 * i as f64 + 1.0) / (2.0 * n)).powi(2))
        .sum();
    1.0 / (12.0 * n) + sum
}

pub(crate) fn ks_sorted(xs: &[f64]) -> Result<f64> {
    Ok(ks_from_cdf_values(&fitted_cdf(xs)?))
}

pub(crate) fn cvm_sorted(xs: &[f64]) -> Result<f64> {
    Ok(cvm_from_cdf_values(&fitted_cdf(xs)?))
}

/// `D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)` with
/// `F(x) = 1 - x^{-alpha_hat}`.
pub fn ks_statistic_estimated(s: &Sample) -> Result<StatisticValue> {
    Ok(StatisticValue {
        name: Statistic::Ks,
        value: ks_sorted(s.sorted())?,
        n: s.len(),
    })
}

/// `omega^2_n = 1/(12n) + sum_i (F(x_(i)) - (2i-1)/(2n))^2` with
/// `F(x) = 1 - x^{-alpha_hat}`.
pub fn cvm_statistic_estimated(s: &Sample) -> Result<StatisticValue> {
    Ok(StatisticValue {
        name: Statistic::Cvm,
        value: cvm_sorted(s.sorted())?,
        n: s.len(),
    })
}

/// Lilliefors-style critical value: the upper `level` quantile of the
/// statistic when Pareto data are simulated and the shape is re-estimated in
/// every replication.
pub fn baseline_critical_value(statistic: Statistic, n: usize, level: f64, cfg: &SimulationConfig) -> Result<f64> {
    match statistic {
        Statistic::Ks | Statistic::Cvm => critical_value(statistic, n, level, cfg),
        _ => Err(Error::Unsupported("baseline critical value")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quantile_grid(n: usize) -> Sample {
        // Pareto(1) quantiles at i/(n+1).
        Sample::new((1..=n).map(|i| 1.0 / (1.0 - i as f64 / (n as f64 + 1.0))).collect()).unwrap()
    }

    #[test]
    fn quantile_grid_is_close_and_shrinks() {
        let d: Vec<f64> = [10, 40, 160]
            .iter()
            .map(|&n| ks_statistic_estimated(&quantile_grid(n)).unwrap().value)
            .collect();
        assert!(d[0] < 0.15, "{d:?}");
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
        let w: Vec<f64> = [10, 40, 160]
            .iter()
            .map(|&n| cvm_statistic_estimated(&quantile_grid(n)).unwrap().value)
            .collect();
        assert!(w[0] < 0.05, "{w:?}");
        assert!(w[0] > w[1] && w[1] > w[2], "{w:?}");
    }

    #[test]
    fn point_mass_like_sample() {
        let s = Sample::new(vec![1.5; 10]).unwrap();
        // F_hat = 1 - e^{-1} at every point.
        let d = ks_statistic_estimated(&s).unwrap().value;
        assert!((d - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        let s = Sample::new((0..10).map(|i| 1.5 + 1e-9 * i as f64).collect()).unwrap();
        assert!(ks_statistic_estimated(&s).unwrap().value > 0.6);
    }

    #[test]
    fn cvm_minimum_configuration() {
        let n = 8;
        let f: Vec<f64> = (1..=n).map(|i| (2.0 * i as f64 - 1.0) / (2.0 * n as f64)).collect();
        assert_eq!(cvm_from_cdf_values(&f), 1.0 / (12.0 * n as f64));
        assert!((ks_from_cdf_values(&f) - 0.5 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_short_samples() {
        let s = Sample::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(ks_statistic_estimated(&s), Err(Error::DegenerateSample));
        assert_eq!(cvm_statistic_estimated(&s), Err(Error::DegenerateSample));
        let s = Sample::new(vec![2.0]).unwrap();
        assert!(ks_statistic_estimated(&s).is_err());
    }

    #[test]
    fn power_transform_invariance() {
        let s = Sample::new(vec![1.2, 1.9, 2.4, 3.3, 7.0, 12.5]).unwrap();
        let s2 = s.powf(2.7).unwrap();
        for f in [ks_statistic_estimated, cvm_statistic_estimated] {
            let a = f(&s).unwrap().value;
            let b = f(&s2).unwrap().value;
            assert!((a - b).abs() < 1e-12);
        }
    }
}
