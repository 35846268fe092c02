//! The Pareto null family, the alternative families, and the shape MLE.

mod alternatives;
mod locally_optimal;
pub mod root;

pub use alternatives::AlternativeSpec;
pub use locally_optimal::{
    locally_optimal_density_t, locally_optimal_density_v, LocallyOptimal, Projection,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sample::Sample;

/// Shape parameter of the Pareto law `F(x) = 1 - x^{-alpha}` on `[1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoParams {
    alpha: f64,
}

impl ParetoParams {
    pub fn new(alpha: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        Ok(ParetoParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        pareto_cdf(x, *self)
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_support(x)?;
        Ok(self.alpha * x.powf(-self.alpha - 1.0))
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(invalid("p", p, "probability must lie in [0, 1)"));
        }
        Ok(pareto_from_uniform(1.0 - p, self.alpha))
    }
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, v, "must be positive and finite"))
    }
}

pub(crate) fn check_support(x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::NonFinite { value: x });
    }
    if x < 1.0 {
        return Err(Error::OutsideSupport { value: x });
    }
    Ok(())
}

/// `1 - x^{-alpha}` for `x >= 1`.
pub fn pareto_cdf(x: f64, p: ParetoParams) -> Result<f64> {
    check_support(x)?;
    Ok(-(-p.alpha * x.ln()).exp_m1())
}

/// Inverse transform `u^{-1/alpha}` for `u` in `(0, 1]`.
pub fn pareto_from_uniform(u: f64, alpha: f64) -> f64 {
    u.powf(-1.0 / alpha)
}

/// Uniform draw on `(0, 1]`.
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Raw i.i.d. Pareto draws in generation order.
pub fn pareto_draws<R: Rng + ?Sized>(alpha: f64, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| pareto_from_uniform(open_unit(rng), alpha))
        .collect()
}

pub fn pareto_sample<R: Rng + ?Sized>(p: ParetoParams, n: usize, rng: &mut R) -> Result<Sample> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Sample::new(pareto_draws(p.alpha, n, rng))
}

/// Maximum-likelihood estimate `n / sum(ln x)` of the Pareto shape.
pub fn mle_alpha(s: &Sample) -> Result<f64> {
    mle_alpha_slice(s.sorted())
}

pub(crate) fn mle_alpha_slice(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let log_sum: f64 = xs.iter().map(|x| x.ln()).sum();
    if log_sum <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    Ok(xs.len() as f64 / log_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn par(a: f64) -> ParetoParams {
        ParetoParams::new(a).unwrap()
    }

    #[test]
    fn cdf_values() {
        assert_eq!(pareto_cdf(1.0, par(2.7)).unwrap(), 0.0);
        assert_relative_eq!(pareto_cdf(2.0, par(1.0)).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(pareto_cdf(4.0, par(0.5)).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(
            pareto_cdf(0.99, par(1.0)),
            Err(Error::OutsideSupport { .. })
        ));
        assert_eq!(pareto_cdf(f64::INFINITY, par(1.0)).unwrap(), 1.0);
    }

    #[test]
    fn params_validated() {
        assert!(ParetoParams::new(0.0).is_err());
        assert!(ParetoParams::new(-1.0).is_err());
        assert!(ParetoParams::new(f64::NAN).is_err());
    }

    #[test]
    fn inverse_transform_point() {
        for &a in &[0.3, 1.0, 2.5] {
            assert_eq!(pareto_from_uniform(0.25, a), 0.25f64.powf(-1.0 / a));
        }
    }

    #[test]
    fn sample_within_dkw_band() {
        // P(sup|F_n - F| > eps) <= 2 exp(-2 n eps^2); eps for level 1e-3.
        let n = 100_000;
        let eps = ((2.0f64 / 1e-3).ln() / (2.0 * n as f64)).sqrt();
        let mut r = rng::stream(11, 0, 0);
        let s = pareto_sample(par(1.0), n, &mut r).unwrap();
        let sup = s
            .sorted()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = 1.0 - 1.0 / x;
                (f - i as f64 / n as f64)
                    .abs()
                    .max(((i + 1) as f64 / n as f64 - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(sup < eps, "sup {sup} >= band {eps}");
    }

    #[test]
    fn sample_mean_alpha_two() {
        // The variance is infinite at alpha = 2, so the empirical SE only
        // serves as a loose yardstick.
        let mut r = rng::stream(12, 0, 0);
        let s = pareto_sample(par(2.0), 100_000, &mut r).unwrap();
        let mean = s.sorted().iter().sum::<f64>() / s.len() as f64;
        let sd = {
            let v = s.sorted().iter().map(|x| (x - mean).powi(2)).sum::<f64>()
                / (s.len() - 1) as f64;
            v.sqrt()
        };
        let se = sd / (s.len() as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn mle_examples() {
        let s = Sample::new(vec![E, E, E]).unwrap();
        assert_relative_eq!(mle_alpha(&s).unwrap(), 1.0, epsilon = 1e-15);
        let s = Sample::new(vec![E * E]).unwrap();
        assert_relative_eq!(mle_alpha(&s).unwrap(), 0.5, epsilon = 1e-15);
        let s = Sample::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(mle_alpha(&s), Err(Error::DegenerateSample));
    }

    #[test]
    fn mle_consistent() {
        let mut r = rng::stream(13, 0, 0);
        let s = pareto_sample(par(3.0), 100_000, &mut r).unwrap();
        let a = mle_alpha(&s).unwrap();
        assert!((a - 3.0).abs() < 0.05, "{a}");
    }

    #[test]
    fn power_equivariance() {
        let a = 2.7;
        let xa = pareto_draws(a, 1000, &mut rng::stream(5, 0, 0));
        let x1 = pareto_draws(1.0, 1000, &mut rng::stream(5, 0, 0));
        for (p, q) in xa.iter().zip(&x1) {
            assert_relative_eq!(p.powf(a), *q, max_relative = 1e-12);
        }
    }

    #[test]
    fn mle_on_exponentiated_exponentials() {
        use rand_distr::{Distribution, Exp};
        let exp = Exp::new(2.5).unwrap();
        let mut r = rng::stream(6, 0, 0);
        let logs: Vec<f64> = (0..5000).map(|_| exp.sample(&mut r)).collect();
        let xs: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
        let s = Sample::new(xs).unwrap();
        let mean_log = logs.iter().sum::<f64>() / logs.len() as f64;
        assert_relative_eq!(mle_alpha(&s).unwrap(), 1.0 / mean_log, max_relative = 1e-12);
    }
}
