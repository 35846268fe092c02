//! Alternative families on `[1, inf)`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc, erfc_inv};
use statrs::function::gamma::gamma_lr;

use super::locally_optimal::{LocallyOptimal, Projection};
use super::root::invert_cdf;
use super::{check_positive, check_support, open_unit, pareto_from_uniform};
use crate::error::{invalid, Error, Result};
use crate::sample::Sample;

/// Every distribution the tests are run against, null included.
///
/// The families named after a classical law on `(0, inf)` (log-normal,
/// half-normal, Weibull, gamma) are shifted by one, `X = 1 + Y`, so that
/// they share the Pareto support. Log-gamma is `exp(Y)` with `Y` gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AlternativeSpec {
    Pareto { alpha: f64 },
    /// `G = 1 - exp(-alpha (ln x)^{theta + 1})`.
    LogWeibull { alpha: f64, theta: f64 },
    /// `G = 1 - exp(-alpha ln x - theta ln^beta x)`.
    LogLinearExponent { alpha: f64, beta: f64, theta: f64 },
    /// `G = (1 - theta)(1 - x^{-alpha}) + theta (1 - x^{-beta})`.
    ParetoMixture { alpha: f64, beta: f64, theta: f64 },
    LocallyOptimalT { alpha: f64, theta: f64, c: f64, d: f64 },
    LocallyOptimalV { alpha: f64, theta: f64, c: f64, d: f64 },
    ShiftedLogNormal { mu: f64, sigma: f64 },
    ShiftedHalfNormal { sigma: f64 },
    ShiftedWeibull { shape: f64, scale: f64 },
    ShiftedGamma { shape: f64, rate: f64 },
    LogGamma { shape: f64, rate: f64 },
}

fn check_unit_theta(theta: f64) -> Result<()> {
    if (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        Err(invalid("theta", theta, "must lie in [0, 1)"))
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

fn std_normal_quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

impl AlternativeSpec {
    /// The five power-study alternatives, in table order.
    pub fn power_study_set() -> [AlternativeSpec; 5] {
        [
            AlternativeSpec::ShiftedLogNormal {
                mu: 0.0,
                sigma: 1.0,
            },
            AlternativeSpec::ShiftedHalfNormal { sigma: 1.0 },
            AlternativeSpec::ShiftedWeibull {
                shape: 2.0,
                scale: 1.0,
            },
            AlternativeSpec::ShiftedGamma {
                shape: 2.0,
                rate: 1.0,
            },
            AlternativeSpec::LogGamma {
                shape: 2.0,
                rate: 1.0,
            },
        ]
    }

    /// Stable stream tag for an alternative family, independent of its
    /// position in any list.
    pub fn family_code(&self) -> u64 {
        match self {
            AlternativeSpec::Pareto { .. } => 0,
            AlternativeSpec::ShiftedLogNormal { .. } => 1,
            AlternativeSpec::ShiftedHalfNormal { .. } => 2,
            AlternativeSpec::ShiftedWeibull { .. } => 3,
            AlternativeSpec::ShiftedGamma { .. } => 4,
            AlternativeSpec::LogGamma { .. } => 5,
            AlternativeSpec::LogWeibull { .. } => 6,
            AlternativeSpec::LogLinearExponent { .. } => 7,
            AlternativeSpec::ParetoMixture { .. } => 8,
            AlternativeSpec::LocallyOptimalT { .. } => 9,
            AlternativeSpec::LocallyOptimalV { .. } => 10,
        }
    }

    /// Short label used in tables and on the command line.
    pub fn label(&self) -> &'static str {
        match self {
            AlternativeSpec::Pareto { .. } => "pareto",
            AlternativeSpec::LogWeibull { .. } => "log-weibull",
            AlternativeSpec::LogLinearExponent { .. } => "log-linear-exponent",
            AlternativeSpec::ParetoMixture { .. } => "pareto-mixture",
            AlternativeSpec::LocallyOptimalT { .. } => "locally-optimal-t",
            AlternativeSpec::LocallyOptimalV { .. } => "locally-optimal-v",
            AlternativeSpec::ShiftedLogNormal { .. } => "log-normal",
            AlternativeSpec::ShiftedHalfNormal { .. } => "half-normal",
            AlternativeSpec::ShiftedWeibull { .. } => "weibull",
            AlternativeSpec::ShiftedGamma { .. } => "gamma",
            AlternativeSpec::LogGamma { .. } => "log-gamma",
        }
    }

    /// Checks every parameter constraint of the family.
    pub fn validate(&self) -> Result<()> {
        match *self {
            AlternativeSpec::Pareto { alpha } => check_positive("alpha", alpha),
            AlternativeSpec::LogWeibull { alpha, theta } => {
                check_positive("alpha", alpha)?;
                check_unit_theta(theta)
            }
            AlternativeSpec::LogLinearExponent { alpha, beta, theta } => {
                check_positive("alpha", alpha)?;
                if !(beta > 1.0 && beta.is_finite()) {
                    return Err(invalid("beta", beta, "must exceed 1"));
                }
                check_unit_theta(theta)
            }
            AlternativeSpec::ParetoMixture { alpha, beta, theta } => {
                check_positive("alpha", alpha)?;
                if !(beta > alpha && beta.is_finite()) {
                    return Err(invalid("beta", beta, "must exceed alpha"));
                }
                check_unit_theta(theta)
            }
            AlternativeSpec::LocallyOptimalT { .. } | AlternativeSpec::LocallyOptimalV { .. } => {
                self.locally_optimal().map(|_| ())
            }
            AlternativeSpec::ShiftedLogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(invalid("mu", mu, "must be finite"));
                }
                check_positive("sigma", sigma)
            }
            AlternativeSpec::ShiftedHalfNormal { sigma } => check_positive("sigma", sigma),
            AlternativeSpec::ShiftedWeibull { shape, scale } => {
                check_positive("shape", shape)?;
                check_positive("scale", scale)
            }
            AlternativeSpec::ShiftedGamma { shape, rate }
            | AlternativeSpec::LogGamma { shape, rate } => {
                check_positive("shape", shape)?;
                check_positive("rate", rate)
            }
        }
    }

    fn locally_optimal(&self) -> Result<LocallyOptimal> {
        match *self {
            AlternativeSpec::LocallyOptimalT { alpha, theta, c, d } => {
                LocallyOptimal::new(Projection::Upsilon, alpha, theta, c, d)
            }
            AlternativeSpec::LocallyOptimalV { alpha, theta, c, d } => {
                LocallyOptimal::new(Projection::PsiAtMaxVariance, alpha, theta, c, d)
            }
            _ => unreachable!("not a locally optimal family"),
        }
    }

    /// Distribution function at `x >= 1`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        check_support(x)?;
        Ok(self.cdf_unchecked(x))
    }

    fn cdf_unchecked(&self, x: f64) -> f64 {
        fn gamma_cdf(shape: f64, z: f64) -> f64 {
            if z == f64::INFINITY {
                1.0
            } else if z <= 0.0 {
                0.0
            } else {
                gamma_lr(shape, z)
            }
        }
        let u = x.ln();
        match *self {
            AlternativeSpec::Pareto { alpha } => -(-alpha * u).exp_m1(),
            AlternativeSpec::LogWeibull { alpha, theta } => {
                -(-alpha * u.powf(theta + 1.0)).exp_m1()
            }
            AlternativeSpec::LogLinearExponent { alpha, beta, theta } => {
                -(-alpha * u - theta * u.powf(beta)).exp_m1()
            }
            AlternativeSpec::ParetoMixture { alpha, beta, theta } => {
                (1.0 - theta) * -(-alpha * u).exp_m1() + theta * -(-beta * u).exp_m1()
            }
            AlternativeSpec::LocallyOptimalT { .. } | AlternativeSpec::LocallyOptimalV { .. } => {
                self.locally_optimal()
                    .expect("validated")
                    .cdf(x)
                    .expect("in support")
            }
            AlternativeSpec::ShiftedLogNormal { mu, sigma } => {
                if x <= 1.0 {
                    0.0
                } else {
                    std_normal_cdf(((x - 1.0).ln() - mu) / sigma)
                }
            }
            AlternativeSpec::ShiftedHalfNormal { sigma } => {
                erf((x - 1.0) / (sigma * SQRT_2))
            }
            AlternativeSpec::ShiftedWeibull { shape, scale } => {
                -(-((x - 1.0) / scale).powf(shape)).exp_m1()
            }
            AlternativeSpec::ShiftedGamma { shape, rate } => {
                gamma_cdf(shape, rate * (x - 1.0))
            }
            AlternativeSpec::LogGamma { shape, rate } => gamma_cdf(shape, rate * u),
        }
    }

    /// Quantile function on `[0, 1)`; closed form where one exists, monotone
    /// root-finding on the CDF otherwise.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..1.0).contains(&p) {
            return Err(invalid("p", p, "probability must lie in [0, 1)"));
        }
        Ok(match *self {
            AlternativeSpec::Pareto { alpha } => pareto_from_uniform(1.0 - p, alpha),
            AlternativeSpec::LogWeibull { alpha, theta } => {
                let e = -(-p).ln_1p();
                (e / alpha).powf(1.0 / (theta + 1.0)).exp()
            }
            AlternativeSpec::ShiftedLogNormal { mu, sigma } => {
                if p == 0.0 {
                    1.0
                } else {
                    1.0 + (mu + sigma * std_normal_quantile(p)).exp()
                }
            }
            AlternativeSpec::ShiftedHalfNormal { sigma } => {
                1.0 + sigma * std_normal_quantile(0.5 * (1.0 + p))
            }
            AlternativeSpec::ShiftedWeibull { shape, scale } => {
                1.0 + scale * (-(-p).ln_1p()).powf(1.0 / shape)
            }
            _ => invert_cdf(|x| self.cdf_unchecked(x), p)?,
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, lo: Option<&LocallyOptimal>) -> Result<f64> {
        Ok(match *self {
            AlternativeSpec::Pareto { alpha } => pareto_from_uniform(open_unit(rng), alpha),
            AlternativeSpec::LogWeibull { alpha, theta } => {
                let e: f64 = Exp1.sample(rng);
                (e / alpha).powf(1.0 / (theta + 1.0)).exp()
            }
            AlternativeSpec::ParetoMixture { alpha, beta, theta } => {
                let shape = if rng.random::<f64>() < theta {
                    beta
                } else {
                    alpha
                };
                pareto_from_uniform(open_unit(rng), shape)
            }
            AlternativeSpec::LogLinearExponent { .. } => {
                invert_cdf(|x| self.cdf_unchecked(x), rng.random::<f64>())?
            }
            AlternativeSpec::LocallyOptimalT { .. } | AlternativeSpec::LocallyOptimalV { .. } => {
                let lo = lo.expect("constructed by sample");
                invert_cdf(|x| lo.cdf_unchecked(x), rng.random::<f64>())?
            }
            AlternativeSpec::ShiftedLogNormal { mu, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                1.0 + (mu + sigma * z).exp()
            }
            AlternativeSpec::ShiftedHalfNormal { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                1.0 + sigma * z.abs()
            }
            AlternativeSpec::ShiftedWeibull { shape, scale } => {
                let e: f64 = Exp1.sample(rng);
                1.0 + scale * e.powf(1.0 / shape)
            }
            AlternativeSpec::ShiftedGamma { shape, rate } => {
                1.0 + gamma_draw(shape, rate, rng)?
            }
            AlternativeSpec::LogGamma { shape, rate } => gamma_draw(shape, rate, rng)?.exp(),
        })
    }

    /// Raw i.i.d. draws in generation order.
    pub fn draws<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        let lo = match self {
            AlternativeSpec::LocallyOptimalT { .. } | AlternativeSpec::LocallyOptimalV { .. } => {
                Some(self.locally_optimal()?)
            }
            _ => None,
        };
        (0..n).map(|_| self.draw(rng, lo.as_ref())).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Sample::new(self.draws(n, rng)?)
    }
}

fn gamma_draw<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    let g = Gamma::new(shape, 1.0 / rate).map_err(|_| invalid("shape", shape, "invalid gamma"))?;
    Ok(g.sample(rng))
}
