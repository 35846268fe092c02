//! Alternatives along the locally optimal directions of the two statistics:
//!
//! ```text
//! g(x; theta) = alpha x^{-alpha-1}
//!             + theta (C alpha p(x) + D (alpha ln x - 1)) x^{-alpha-1}
//! ```
//!
//! with `p` the null projection of the statistic's kernel (`upsilon` for the
//! integral statistic, `psi(.; t0)` for the sup statistic).

use crate::asymptotics::projection::{psi_std, tau0, upsilon_std};
use crate::error::{invalid, Error, Result};

use super::{check_positive, check_support};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `upsilon(x)`.
    Upsilon,
    /// `psi(x; t0)` with `t0 = (sqrt 7 - 1)^{1/alpha}`.
    PsiAtMaxVariance,
}

impl Projection {
    /// Value at standardized log-scale `v = alpha ln x`.
    fn at(self, v: f64) -> f64 {
        match self {
            Projection::Upsilon => upsilon_std(v),
            Projection::PsiAtMaxVariance => psi_std(v, tau0()),
        }
    }

    /// `int_0^v p(w) e^{-w} dw`, the projection's contribution to the CDF.
    fn partial_mass(self, v: f64) -> f64 {
        let e1 = (-v).exp();
        let e2 = (-2.0 * v).exp();
        match self {
            Projection::Upsilon => (e1 - e2 * (1.0 + 2.0 * v)) / 6.0,
            Projection::PsiAtMaxVariance => {
                let tau = tau0();
                let big_t = tau.exp();
                let m = v.min(tau);
                let free = (big_t - 1.0 / big_t) * 0.5 * (1.0 - e2)
                    + (0.5 / big_t - 0.5) * (1.0 - e1);
                let ind = 0.5 * (1.0 - (-m).exp()) - 0.5 * big_t * (1.0 - (-2.0 * m).exp());
                free + ind
            }
        }
    }

    /// Lower bound of the projection for every `v >= from`, valid once `from`
    /// is beyond the projection's interior extremum and kink.
    fn tail_lower_bound(self, from: f64) -> f64 {
        let limit = match self {
            Projection::Upsilon => -1.0 / 6.0,
            Projection::PsiAtMaxVariance => -0.5 + 0.5 * (-tau0()).exp(),
        };
        limit.min(self.at(from))
    }

    fn tail_upper_bound(self, from: f64) -> f64 {
        let limit = match self {
            Projection::Upsilon => -1.0 / 6.0,
            Projection::PsiAtMaxVariance => -0.5 + 0.5 * (-tau0()).exp(),
        };
        limit.max(self.at(from))
    }
}

/// Number of grid points of the nonnegativity scan.
const GRID_POINTS: usize = 10_000;
/// The scan covers `x` up to the `1 - 1e-6` null quantile.
const GRID_END_V: f64 = 13.815_510_557_964_274; // ln(1e6)

/// A validated locally optimal alternative density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocallyOptimal {
    projection: Projection,
    alpha: f64,
    theta: f64,
    c: f64,
    d: f64,
}

impl LocallyOptimal {
    /// Validates parameters and checks `g >= 0` on `[1, inf)`: a log-spaced
    /// grid up to the null `1 - 1e-6` quantile, then an analytic tail bound.
    pub fn new(projection: Projection, alpha: f64, theta: f64, c: f64, d: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("c", c)?;
        if !theta.is_finite() {
            return Err(invalid("theta", theta, "must be finite"));
        }
        if !d.is_finite() {
            return Err(invalid("d", d, "must be finite"));
        }
        let lo = LocallyOptimal {
            projection,
            alpha,
            theta,
            c,
            d,
        };
        lo.check_nonnegative()?;
        Ok(lo)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn projection(&self) -> Projection {
        self.projection
    }

    /// `g(x) x^{alpha+1}` as a function of `v = alpha ln x`.
    fn bracket(&self, v: f64) -> f64 {
        self.alpha
            + self.theta * (self.c * self.alpha * self.projection.at(v) + self.d * (v - 1.0))
    }

    fn negative_at(&self, v: f64) -> Error {
        let x = (v / self.alpha).exp();
        Error::NegativeDensity {
            x,
            value: self.bracket(v) * x.powf(-self.alpha - 1.0),
        }
    }

    fn check_nonnegative(&self) -> Result<()> {
        let step = GRID_END_V / (GRID_POINTS - 1) as f64;
        for k in 0..GRID_POINTS {
            let v = k as f64 * step;
            if self.bracket(v) < 0.0 {
                return Err(self.negative_at(v));
            }
        }
        // Beyond the grid the D term is monotone in v with slope theta * D.
        let slope = self.theta * self.d;
        if slope < 0.0 {
            // Eventually negative: report the first crossing past the grid.
            let mut v = GRID_END_V;
            while self.bracket(v) >= 0.0 {
                v *= 2.0;
            }
            return Err(self.negative_at(v));
        }
        let tc = self.theta * self.c * self.alpha;
        let proj_min = if tc >= 0.0 {
            tc * self.projection.tail_lower_bound(GRID_END_V)
        } else {
            tc * self.projection.tail_upper_bound(GRID_END_V)
        };
        let tail = self.alpha + proj_min + self.theta * self.d * (GRID_END_V - 1.0);
        if tail < 0.0 {
            return Err(self.negative_at(GRID_END_V));
        }
        Ok(())
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        check_support(x)?;
        let v = self.alpha * x.ln();
        Ok(self.bracket(v) * x.powf(-self.alpha - 1.0))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_support(x)?;
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        let v = self.alpha * x.ln();
        let e = (-v).exp();
        let base = -(-v).exp_m1();
        let value = base
            + self.theta
                * (self.c * self.projection.partial_mass(v) - self.d * (v / self.alpha) * e);
        value.clamp(0.0, 1.0)
    }
}

/// Density of the locally optimal alternative for the integral statistic.
pub fn locally_optimal_density_t(x: f64, alpha: f64, theta: f64, c: f64, d: f64) -> Result<f64> {
    LocallyOptimal::new(Projection::Upsilon, alpha, theta, c, d)?.density(x)
}

/// Density of the locally optimal alternative for the sup statistic.
pub fn locally_optimal_density_v(x: f64, alpha: f64, theta: f64, c: f64, d: f64) -> Result<f64> {
    LocallyOptimal::new(Projection::PsiAtMaxVariance, alpha, theta, c, d)?.density(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_half_line, Tolerance};
    use approx::assert_relative_eq;

    fn total_mass(lo: &LocallyOptimal) -> f64 {
        // x = e^u, dx = e^u du
        let bp = [tau0() / lo.alpha];
        integrate_half_line(
            |u| lo.density(u.exp()).unwrap() * u.exp(),
            8.0,
            &bp,
            Tolerance::default(),
        )
        .unwrap()
        .value
    }

    #[test]
    fn null_case() {
        for proj in [Projection::Upsilon, Projection::PsiAtMaxVariance] {
            let lo = LocallyOptimal::new(proj, 1.5, 0.0, 3.0, -2.0).unwrap();
            for &x in &[1.0, 1.7, 4.0, 100.0] {
                assert_relative_eq!(
                    lo.density(x).unwrap(),
                    1.5 * f64::powf(x, -2.5),
                    max_relative = 1e-15
                );
            }
        }
    }

    #[test]
    fn value_at_one() {
        // upsilon(1) = -1/6
        let g = locally_optimal_density_t(1.0, 1.0, 0.05, 1.0, 0.0).unwrap();
        assert_relative_eq!(g, 1.0 - 0.05 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn integrates_to_one() {
        for proj in [Projection::Upsilon, Projection::PsiAtMaxVariance] {
            let lo = LocallyOptimal::new(proj, 1.0, 0.05, 1.0, 0.0).unwrap();
            assert!((total_mass(&lo) - 1.0).abs() < 1e-8, "{proj:?}");
            let lo = LocallyOptimal::new(proj, 2.5, 0.2, 1.0, 0.3).unwrap();
            assert!((total_mass(&lo) - 1.0).abs() < 1e-8, "{proj:?}");
        }
    }

    #[test]
    fn closed_form_cdf_matches_quadrature() {
        for proj in [Projection::Upsilon, Projection::PsiAtMaxVariance] {
            let lo = LocallyOptimal::new(proj, 1.3, 0.4, 1.0, 0.5).unwrap();
            for &x in &[1.0, 1.2, 1.6, 2.0, 5.0, 40.0] {
                let bp = [tau0() / lo.alpha];
                let q = crate::quadrature::integrate(
                    |u| lo.density(u.exp()).unwrap() * u.exp(),
                    0.0,
                    f64::ln(x),
                    &bp,
                    Tolerance::default(),
                )
                .unwrap()
                .value;
                assert!((lo.cdf(x).unwrap() - q).abs() < 1e-12, "{proj:?} x={x}");
            }
        }
    }

    #[test]
    fn sign_check_small_theta() {
        let lo = LocallyOptimal::new(Projection::PsiAtMaxVariance, 1.0, 0.01, 1.0, 0.0).unwrap();
        for k in 0..1000 {
            let x = 10f64.powf(k as f64 * 0.006);
            assert!(lo.density(x).unwrap() >= 0.0);
        }
    }

    #[test]
    fn negative_densities_rejected() {
        // A negative D term eventually dominates in the tail.
        assert!(matches!(
            LocallyOptimal::new(Projection::Upsilon, 1.0, 0.01, 1.0, -1.0),
            Err(Error::NegativeDensity { .. })
        ));
        // Large theta drives the density below zero near x = 1.
        assert!(matches!(
            LocallyOptimal::new(Projection::Upsilon, 1.0, 10.0, 1.0, 0.0),
            Err(Error::NegativeDensity { .. })
        ));
        assert!(locally_optimal_density_v(2.0, 1.0, 50.0, 1.0, 0.0).is_err());
    }
}
