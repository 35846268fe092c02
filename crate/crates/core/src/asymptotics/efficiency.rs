//! Local Bahadur efficiencies.
//!
//! A perturbation direction `h(x) = d/dtheta g(x; theta)` at `theta = 0` is
//! carried as its *score* `z`, defined through
//! `h(x) = alpha x^{-alpha-1} z(alpha ln x)`. Every integral against `h`
//! then becomes an expectation over a standard exponential `V`:
//!
//! ```text
//! int h            = E[z(V)]
//! int upsilon h    = E[upsilon(V) z(V)]
//! int psi(.;t) h   = E[psi(V; tau) z(V)]
//! int x^{a+1} h^2 / a      = E[z(V)^2]
//! a int h(x) ln x dx       = E[V z(V)]
//! ```

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::projection::{psi_std, sigma2_v_max_value, tau0, upsilon_std, SIGMA2_T};
use crate::distributions::{check_positive, LocallyOptimal, Projection};
use crate::error::{invalid, Error, Result};
use crate::quadrature::expect_exp1;
use crate::statistics::Statistic;

type ScoreFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A null perturbation `h = g'_theta(x; 0)` in score form.
#[derive(Clone)]
pub struct H0Perturbation {
    label: String,
    alpha: f64,
    score: ScoreFn,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for H0Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("H0Perturbation")
            .field("label", &self.label)
            .field("alpha", &self.alpha)
            .finish()
    }
}

impl H0Perturbation {
    /// Builds a perturbation from its score on the `v = alpha ln x` scale.
    ///
    /// `breakpoints` lists `v` values where the score has a kink or jump.
    pub fn from_score<F>(label: impl Into<String>, alpha: f64, breakpoints: Vec<f64>, z: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_positive("alpha", alpha)?;
        Ok(H0Perturbation {
            label: label.into(),
            alpha,
            score: Arc::new(z),
            breakpoints,
        })
    }

    /// Builds a perturbation from `h` given on the original `x` scale.
    pub fn from_density_derivative<F>(label: impl Into<String>, alpha: f64, h: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_positive("alpha", alpha)?;
        // z(v) = h(x) x^{alpha+1} / alpha with x = e^{v/alpha}; evaluated in
        // log form to keep x^{alpha+1} from overflowing.
        H0Perturbation::from_score(label, alpha, Vec::new(), move |v| {
            let x = (v / alpha).exp();
            h(x) * ((alpha + 1.0) * v / alpha).exp() / alpha
        })
    }

    /// Example 1 direction: log-Weibull, `G = 1 - exp(-alpha ln^{theta+1} x)`.
    pub fn log_weibull(alpha: f64) -> Result<Self> {
        H0Perturbation::from_score("log-weibull", alpha, Vec::new(), move |v| {
            let u = v / alpha;
            let lu = u.ln();
            1.0 + lu - alpha * u * lu
        })
    }

    /// `G = 1 - exp(-alpha ln x - theta ln^beta x)`.
    pub fn log_linear_exponent(alpha: f64, beta: f64) -> Result<Self> {
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(invalid("beta", beta, "must exceed 1"));
        }
        H0Perturbation::from_score("log-linear-exponent", alpha, Vec::new(), move |v| {
            let u = v / alpha;
            (beta * u.powf(beta - 1.0) - alpha * u.powf(beta)) / alpha
        })
    }

    /// Mixture `(1 - theta) Pareto(alpha) + theta Pareto(beta)`.
    pub fn pareto_mixture(alpha: f64, beta: f64) -> Result<Self> {
        if !(beta > alpha && beta.is_finite()) {
            return Err(invalid("beta", beta, "must exceed alpha"));
        }
        H0Perturbation::from_score("pareto-mixture", alpha, Vec::new(), move |v| {
            -1.0 + beta / alpha * (-(beta / alpha - 1.0) * v).exp()
        })
    }

    /// Direction of a locally optimal family:
    /// `h = (C alpha p(x) + D (alpha ln x - 1)) x^{-alpha-1}`.
    pub fn locally_optimal(projection: Projection, alpha: f64, c: f64, d: f64) -> Result<Self> {
        check_positive("c", c)?;
        let (label, bps) = match projection {
            Projection::Upsilon => ("locally-optimal-t", Vec::new()),
            Projection::PsiAtMaxVariance => ("locally-optimal-v", vec![tau0()]),
        };
        H0Perturbation::from_score(label, alpha, bps, move |v| {
            let p = match projection {
                Projection::Upsilon => upsilon_std(v),
                Projection::PsiAtMaxVariance => psi_std(v, tau0()),
            };
            c * p + d * (v - 1.0) / alpha
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Score at `v = alpha ln x`.
    pub fn score(&self, v: f64) -> f64 {
        (self.score)(v)
    }

    /// `h(x)` on the original scale.
    pub fn h(&self, x: f64) -> f64 {
        let v = self.alpha * x.ln();
        self.alpha * x.powf(-self.alpha - 1.0) * self.score(v)
    }

    /// `E[phi(V) z(V)]` with extra breakpoints for `phi`.
    pub fn expect_with<F: Fn(f64) -> f64>(&self, phi: F, extra: &[f64]) -> Result<f64> {
        let mut bps = self.breakpoints.clone();
        bps.extend_from_slice(extra);
        expect_exp1(|v| phi(v) * self.score(v), &bps)
    }

    /// `int h(x) dx`; zero for every valid perturbation.
    pub fn mass(&self) -> Result<f64> {
        self.expect_with(|_| 1.0, &[])
    }

    /// `int upsilon(x) h(x) dx`.
    pub fn upsilon_moment(&self) -> Result<f64> {
        self.expect_with(upsilon_std, &[])
    }

    /// `int psi(x; t) h(x) dx` at `tau = alpha ln t`.
    pub fn psi_moment(&self, tau: f64) -> Result<f64> {
        self.expect_with(|v| psi_std(v, tau), &[tau])
    }

    /// `alpha int h(x) ln x dx`.
    pub fn log_moment(&self) -> Result<f64> {
        self.expect_with(|v| v, &[])
    }

    /// `int x^{alpha+1} h(x)^2 / alpha dx`.
    pub fn fisher_moment(&self) -> Result<f64> {
        let bps = self.breakpoints.clone();
        expect_exp1(|v| self.score(v).powi(2), &bps)
    }
}

/// `h0 = h - (alpha ln x - 1) alpha^2 x^{-alpha-1} int h(s) ln s ds`,
/// together with the residuals of its two defining identities.
#[derive(Debug, Clone)]
pub struct CenteredPerturbation {
    pub h0: H0Perturbation,
    /// `int h0^2 x^{a+1}/a - (int h^2 x^{a+1}/a - (a int h ln x)^2)`.
    pub variance_identity_residual: f64,
    /// `int upsilon h0 - int upsilon h`.
    pub projection_identity_residual: f64,
}

const IDENTITY_TOL: f64 = 1e-8;

pub fn centered_perturbation(h: &H0Perturbation) -> Result<CenteredPerturbation> {
    // In score form the correction is (v - 1) E[V z(V)].
    let shift = h.log_moment()?;
    let inner = h.clone();
    let h0 = H0Perturbation::from_score(
        format!("{} (centered)", h.label),
        h.alpha,
        h.breakpoints.clone(),
        move |v| inner.score(v) - (v - 1.0) * shift,
    )?;
    let variance_identity_residual = h0.fisher_moment()? - kl_curvature(h)?;
    let projection_identity_residual = h0.upsilon_moment()? - h.upsilon_moment()?;
    if variance_identity_residual.abs() > IDENTITY_TOL {
        return Err(Error::IdentityCheck {
            name: "centered variance",
            residual: variance_identity_residual,
        });
    }
    if projection_identity_residual.abs() > IDENTITY_TOL {
        return Err(Error::IdentityCheck {
            name: "projection invariance",
            residual: projection_identity_residual,
        });
    }
    Ok(CenteredPerturbation {
        h0,
        variance_identity_residual,
        projection_identity_residual,
    })
}

/// Coefficient of `t^2` in the large-deviation function `f(t)` near zero.
pub fn slope_coefficient(statistic: Statistic) -> Result<f64> {
    match statistic {
        // 54/5 = 1 / (2 * 9 * sigma^2_T)
        Statistic::Tn => Ok(1.0 / (18.0 * SIGMA2_T)),
        Statistic::Vn => Ok(1.0 / (8.0 * sigma2_v_max_value())),
        _ => Err(Error::Unsupported("large-deviation slope")),
    }
}

/// Upper end of the `tau = alpha ln t` range searched for the supremum.
const TAU_HI: f64 = 60.0;
const SUP_GRID: usize = 512;

/// Supremum over `t >= 1` of `|int psi(x; t) h(x) dx|`, returned with the
/// maximizing `tau`.
pub fn psi_moment_sup(h: &H0Perturbation) -> Result<(f64, f64)> {
    let eval = |tau: f64| h.psi_moment(tau).map(f64::abs);
    let step = TAU_HI / (SUP_GRID - 1) as f64;
    let mut best = (0.0, eval(0.0)?);
    let mut values = Vec::with_capacity(SUP_GRID);
    for k in 0..SUP_GRID {
        let tau = k as f64 * step;
        let val = eval(tau)?;
        values.push(val);
        if val > best.1 {
            best = (tau, val);
        }
    }
    // Golden-section refinement around the best grid point.
    let k = (best.0 / step).round() as usize;
    let mut a = (k.saturating_sub(1)) as f64 * step;
    let mut b = ((k + 1).min(SUP_GRID - 1)) as f64 * step;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    for _ in 0..80 {
        if (b - a) < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d)?;
        }
    }
    for (tau, val) in [(c, fc), (d, fd)] {
        if val > best.1 {
            best = (tau, val);
        }
    }
    Ok(best)
}

/// Derivative at zero of the limit in probability `b(theta)` of a statistic.
pub fn b_prime0(statistic: Statistic, h: &H0Perturbation) -> Result<f64> {
    match statistic {
        Statistic::Tn => Ok(3.0 * h.upsilon_moment()?),
        Statistic::Vn => Ok(2.0 * psi_moment_sup(h)?.1),
        _ => Err(Error::Unsupported("b'(0)")),
    }
}

/// `2 K''(0)`: `int x^{a+1} h^2 / a - (a int h ln x)^2`.
pub fn kl_curvature(h: &H0Perturbation) -> Result<f64> {
    let fisher = h.fisher_moment()?;
    let lm = h.log_moment()?;
    Ok(fisher - lm * lm)
}

/// Components of one local Bahadur efficiency computation.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyReport {
    pub family: String,
    pub statistic: Statistic,
    pub alpha: f64,
    pub b_prime0: f64,
    pub kl_curvature: f64,
    pub slope_coefficient: f64,
    /// `2 f''/2 b'(0)^2 / 2K''(0)` before clipping.
    pub raw_efficiency: f64,
    /// `raw_efficiency`, clipped to 1 when it exceeds the Cauchy–Schwarz
    /// bound by more than the tolerance.
    pub efficiency: f64,
    pub clipped: bool,
}

const BOUND_TOL: f64 = 1e-6;

pub fn local_efficiency(statistic: Statistic, h: &H0Perturbation) -> Result<EfficiencyReport> {
    let slope = slope_coefficient(statistic)?;
    let b = b_prime0(statistic, h)?;
    let kl = kl_curvature(h)?;
    let raw = 2.0 * slope * b * b / kl;
    let clipped = raw > 1.0 + BOUND_TOL;
    Ok(EfficiencyReport {
        family: h.label.clone(),
        statistic,
        alpha: h.alpha,
        b_prime0: b,
        kl_curvature: kl,
        slope_coefficient: slope,
        raw_efficiency: raw,
        efficiency: if clipped { 1.0 } else { raw },
        clipped,
    })
}

/// Efficiency of a statistic against its own locally optimal family.
///
/// `theta_small` is only used to confirm that the family is a valid density
/// at that parameter value.
pub fn optimality_check(
    statistic: Statistic,
    alpha: f64,
    c: f64,
    d: f64,
    theta_small: f64,
) -> Result<EfficiencyReport> {
    let projection = match statistic {
        Statistic::Tn => Projection::Upsilon,
        Statistic::Vn => Projection::PsiAtMaxVariance,
        _ => return Err(Error::Unsupported("locally optimal family")),
    };
    LocallyOptimal::new(projection, alpha, theta_small, c, d)?;
    let h = H0Perturbation::locally_optimal(projection, alpha, c, d)?;
    local_efficiency(statistic, &h)
}

/// Closed-form mixture efficiency of the sup statistic as a function of
/// `r = beta / alpha` (alpha cancels).
pub fn mixture_efficiency_v_closed(r: f64) -> f64 {
    2.0 * slope_coefficient(Statistic::Vn).expect("supported") * (2.0 * r - 1.0)
        / ((1.0 + r).powi(2) * r.powf(2.0 / (r - 1.0)))
}

/// Maximizes the quadrature-based mixture efficiency of the sup statistic
/// over `beta / alpha` in `[lo, hi]` by golden-section search. Returns
/// `(beta / alpha, efficiency)`.
pub fn maximize_mixture_efficiency_v(alpha: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let eff = |r: f64| -> Result<f64> {
        let h = H0Perturbation::pareto_mixture(alpha, r * alpha)?;
        Ok(local_efficiency(Statistic::Vn, &h)?.raw_efficiency)
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = eff(c)?;
    let mut fd = eff(d)?;
    while b - a > 1e-5 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eff(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eff(d)?;
        }
    }
    let r = 0.5 * (a + b);
    Ok((r, eff(r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;
    use statrs::function::gamma::gamma;

    const TRIGAMMA_1: f64 = PI * PI / 6.0;

    #[test]
    fn perturbations_have_zero_mass() {
        let hs = vec![
            H0Perturbation::log_weibull(1.3).unwrap(),
            H0Perturbation::log_linear_exponent(0.7, 2.5).unwrap(),
            H0Perturbation::pareto_mixture(1.0, 2.0).unwrap(),
            H0Perturbation::locally_optimal(Projection::Upsilon, 2.0, 1.0, 3.0).unwrap(),
            H0Perturbation::locally_optimal(Projection::PsiAtMaxVariance, 0.5, 1.0, 3.0).unwrap(),
        ];
        for h in hs {
            assert!(h.mass().unwrap().abs() < 1e-9, "{h:?}");
        }
    }

    #[test]
    fn score_and_density_forms_agree() {
        let h = H0Perturbation::pareto_mixture(1.5, 4.0).unwrap();
        let raw = H0Perturbation::from_density_derivative("raw", 1.5, |x| {
            -1.5 * x.powf(-2.5) + 4.0 * x.powf(-5.0)
        })
        .unwrap();
        for &x in &[1.0, 1.3, 2.0, 10.0] {
            assert_relative_eq!(h.h(x), raw.h(x), max_relative = 1e-12);
        }
        assert_relative_eq!(
            kl_curvature(&h).unwrap(),
            kl_curvature(&raw).unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn log_weibull_constants() {
        for &a in &[0.5, 1.0, 3.0] {
            let h = H0Perturbation::log_weibull(a).unwrap();
            assert!((b_prime0(Statistic::Tn, &h).unwrap() - 0.25).abs() < 1e-8);
            assert!((kl_curvature(&h).unwrap() - TRIGAMMA_1).abs() < 1e-8);
        }
    }

    #[test]
    fn log_linear_exponent_closed_forms() {
        for &a in &[0.5, 1.0, 3.0] {
            for k in 0..8 {
                let beta = 1.25 + 0.5 * k as f64;
                let h = H0Perturbation::log_linear_exponent(a, beta).unwrap();
                let b = b_prime0(Statistic::Tn, &h).unwrap();
                let b_closed = gamma(beta + 1.0) * (beta - 1.0) / (2f64.powf(beta + 1.0) * a.powf(beta));
                assert_relative_eq!(b, b_closed, max_relative = 1e-6);
                let kl = kl_curvature(&h).unwrap();
                let kl_closed = (beta * beta * gamma(2.0 * beta - 1.0) - gamma(beta + 1.0).powi(2))
                    / a.powf(2.0 * beta);
                assert_relative_eq!(kl, kl_closed, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn mixture_closed_forms() {
        let (a, b) = (1.0, 2.0);
        let h = H0Perturbation::pareto_mixture(a, b).unwrap();
        assert_relative_eq!(b_prime0(Statistic::Vn, &h).unwrap(), 1.0 / 12.0, max_relative = 1e-8);
        assert_relative_eq!(kl_curvature(&h).unwrap(), 1.0 / 12.0, max_relative = 1e-8);
        for &(a, b) in &[(1.0, 1.5), (0.5, 3.0), (2.0, 9.0)] {
            let h = H0Perturbation::pareto_mixture(a, b).unwrap();
            let r: f64 = b / a;
            let bv = (b - a) * (b - a) / (a * (a + b) * r.powf(b / (b - a)));
            assert_relative_eq!(b_prime0(Statistic::Vn, &h).unwrap(), bv, max_relative = 1e-8);
            let e = local_efficiency(Statistic::Vn, &h).unwrap().efficiency;
            assert_relative_eq!(e, mixture_efficiency_v_closed(r), max_relative = 1e-7);
        }
    }

    #[test]
    fn efficiencies() {
        let h = H0Perturbation::log_weibull(1.0).unwrap();
        let e = local_efficiency(Statistic::Tn, &h).unwrap();
        assert_relative_eq!(e.efficiency, 27.0 / (20.0 * TRIGAMMA_1), max_relative = 1e-8);
        assert!((e.efficiency - 0.8207).abs() < 1e-4);

        let h = H0Perturbation::log_linear_exponent(1.0, 2.0).unwrap();
        let e = local_efficiency(Statistic::Tn, &h).unwrap();
        assert_relative_eq!(e.efficiency, 27.0 / 80.0, max_relative = 1e-8);

        let h = H0Perturbation::log_linear_exponent(1.0, 1.5).unwrap();
        let e = local_efficiency(Statistic::Tn, &h).unwrap();
        assert_relative_eq!(e.efficiency, 27.0 * PI / (160.0 * (4.0 - PI)), max_relative = 1e-7);
    }

    #[test]
    fn slope_coefficients() {
        assert_relative_eq!(slope_coefficient(Statistic::Tn).unwrap(), 10.8, max_relative = 1e-14);
        assert_relative_eq!(
            slope_coefficient(Statistic::Vn).unwrap(),
            81.0 / (7.0 * 7f64.sqrt() + 10.0),
            max_relative = 1e-14
        );
        assert!(slope_coefficient(Statistic::Ks).is_err());
    }

    #[test]
    fn centered_perturbation_identities() {
        let h = H0Perturbation::log_weibull(1.0).unwrap();
        let c = centered_perturbation(&h).unwrap();
        assert!(c.variance_identity_residual.abs() < 1e-8);
        assert!(c.projection_identity_residual.abs() < 1e-8);

        // Already orthogonal to ln x: h0 = h.
        let h = H0Perturbation::locally_optimal(Projection::Upsilon, 1.0, 1.0, 0.0).unwrap();
        let c = centered_perturbation(&h).unwrap();
        for k in 0..50 {
            let v = 0.2 * k as f64;
            assert!((c.h0.score(v) - h.score(v)).abs() < 1e-8);
            // and equals C upsilon alpha x^{-alpha-1} in density form
            assert!((c.h0.score(v) - upsilon_std(v)).abs() < 1e-8);
        }

        // The D term is removed by centering.
        let h = H0Perturbation::locally_optimal(Projection::Upsilon, 1.5, 2.0, 5.0).unwrap();
        let c = centered_perturbation(&h).unwrap();
        for k in 0..50 {
            let v = 0.2 * k as f64;
            assert!((c.h0.score(v) - 2.0 * upsilon_std(v)).abs() < 1e-8);
        }
    }

    #[test]
    fn optimal_families_are_efficient() {
        for stat in [Statistic::Tn, Statistic::Vn] {
            for &a in &[0.5, 1.0, 3.0] {
                for &d in &[0.0, 5.0] {
                    let e = optimality_check(stat, a, 1.0, d, 0.01).unwrap();
                    assert!((e.raw_efficiency - 1.0).abs() < 1e-3, "{stat:?} a={a} d={d}: {e:?}");
                }
            }
        }
    }

    #[test]
    fn cauchy_schwarz_bound() {
        let hs = vec![
            H0Perturbation::log_weibull(2.0).unwrap(),
            H0Perturbation::log_linear_exponent(1.0, 3.0).unwrap(),
            H0Perturbation::pareto_mixture(1.0, 6.0).unwrap(),
        ];
        for h in &hs {
            for stat in [Statistic::Tn, Statistic::Vn] {
                let e = local_efficiency(stat, h).unwrap();
                assert!(e.raw_efficiency <= 1.0 + 1e-6, "{e:?}");
            }
        }
    }

    #[test]
    fn divergent_fisher_moment_detected() {
        // x^{a+1} h^2 is not integrable when the score grows like e^{v/2}.
        let h = H0Perturbation::from_score("heavy", 1.0, vec![], |v| (0.5 * v).exp() - 2.0).unwrap();
        assert!(kl_curvature(&h).is_err());
    }
}
