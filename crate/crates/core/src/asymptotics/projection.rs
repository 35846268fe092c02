//! Null projections of the two kernels and their variances.
//!
//! Under the null, `V = alpha ln X` is standard exponential and both
//! projections depend on `x` only through `V`, so each function has a
//! standardized form in `v` (and `tau = alpha ln t`).

use crate::distributions::check_support;
use crate::error::Result;
use crate::quadrature::expect_exp1;

/// Variance of `upsilon(X)` under the null.
pub const SIGMA2_T: f64 = 5.0 / 972.0;

/// Asymptotic variance of `sqrt(n) T_n`, i.e. `3^2 * SIGMA2_T`.
pub const ASYMPTOTIC_VARIANCE_T: f64 = 5.0 / 108.0;

/// `(7 sqrt 7 + 10) / 648`, the maximum of `sigma^2(t)`.
pub fn sigma2_v_max_value() -> f64 {
    (7.0 * 7f64.sqrt() + 10.0) / 648.0
}

/// `tau0 = ln(sqrt 7 - 1)`, the maximizer of `sigma^2` on the `alpha ln t` scale.
pub fn tau0() -> f64 {
    (7f64.sqrt() - 1.0).ln()
}

/// `t0 = (sqrt 7 - 1)^{1/alpha}`.
pub fn t0(alpha: f64) -> f64 {
    (7f64.sqrt() - 1.0).powf(1.0 / alpha)
}

pub fn upsilon_std(v: f64) -> f64 {
    2.0 / 3.0 * v * (-v).exp() - 1.0 / 6.0
}

/// `upsilon(s) = (2/3) alpha ln s / s^alpha - 1/6`.
pub fn upsilon(s: f64, alpha: f64) -> Result<f64> {
    check_support(s)?;
    Ok(upsilon_std(alpha * s.ln()))
}

/// `psi` on the standardized scale; the indicator is `v <= tau`.
///
/// Below `tau` the `e^{tau - v}` terms cancel exactly and are dropped.
pub fn psi_std(v: f64, tau: f64) -> f64 {
    let inv_t = (-tau).exp();
    if v <= tau {
        0.5 * inv_t - (-v - tau).exp()
    } else {
        (tau - v).exp() - (-v - tau).exp() - 0.5 + 0.5 * inv_t
    }
}

/// `psi(s; t) = t^a/s^a - 1/(s^a t^a) - 1/2 + 1/(2 t^a) + I{s <= t}(1/2 - t^a/s^a)`.
pub fn psi(s: f64, t: f64, alpha: f64) -> Result<f64> {
    check_support(s)?;
    check_support(t)?;
    let ta = t.powf(alpha);
    let sa = s.powf(alpha);
    let mut out = ta / sa - 1.0 / (sa * ta) - 0.5 + 0.5 / ta;
    if s <= t {
        out += 0.5 - ta / sa;
    }
    Ok(out)
}

/// `sigma^2_T` by quadrature of `upsilon^2` against the Pareto(alpha) law.
pub fn sigma2_t(alpha: f64) -> Result<f64> {
    crate::distributions::check_positive("alpha", alpha)?;
    // The u -> alpha u substitution is explicit here so alpha stays on the path.
    expect_exp1(|v| upsilon((v / alpha).exp(), alpha).unwrap_or(f64::NAN).powi(2), &[])
}

/// Closed form `sigma^2(t) = (t^{2a} + t^a - 2) / (12 t^{3a})`.
pub fn sigma2_v(t: f64, alpha: f64) -> Result<f64> {
    check_support(t)?;
    let w = t.powf(alpha);
    Ok((w * w + w - 2.0) / (12.0 * w * w * w))
}

/// `Var psi(X; t)` by quadrature.
pub fn sigma2_v_quadrature(t: f64, alpha: f64) -> Result<f64> {
    check_support(t)?;
    crate::distributions::check_positive("alpha", alpha)?;
    let tau = alpha * t.ln();
    let mean = expect_exp1(|v| psi_std(v, tau), &[tau])?;
    let second = expect_exp1(|v| psi_std(v, tau).powi(2), &[tau])?;
    Ok(second - mean * mean)
}

/// Numerical maximizer of the closed-form `sigma^2(t)` over `t >= 1`.
///
/// Locates the sign change of the derivative by bisection, which pins the
/// argument to machine precision (a value-based search stalls near
/// `sqrt(eps)` on the flat top). Returns `(t0, sigma^2(t0))`.
pub fn sigma2_v_max(alpha: f64) -> Result<(f64, f64)> {
    crate::distributions::check_positive("alpha", alpha)?;
    // d/dw of (w^2 + w - 2) / (12 w^3) has the sign of (-w^2 - 2w + 6).
    let slope_sign = |w: f64| -w * w - 2.0 * w + 6.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while slope_sign(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope_sign(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    let t = w.powf(1.0 / alpha);
    Ok((t, sigma2_v(t, alpha)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn upsilon_values() {
        for &a in &[0.5, 1.0, 4.0] {
            assert_relative_eq!(upsilon(1.0, a).unwrap(), -1.0 / 6.0);
            let peak = upsilon(E.powf(1.0 / a), a).unwrap();
            assert_relative_eq!(peak, 2.0 / (3.0 * E) - 1.0 / 6.0, epsilon = 1e-15);
            assert!((peak - 0.078_586).abs() < 1e-6);
            assert!((upsilon(1e300, a).unwrap() + 1.0 / 6.0).abs() < 1e-10);
        }
        assert!(upsilon(0.5, 1.0).is_err());
    }

    #[test]
    fn upsilon_is_centered() {
        for &a in &[0.5, 1.0, 3.0] {
            let m = expect_exp1(|v| upsilon((v / a).exp(), a).unwrap(), &[]).unwrap();
            assert!(m.abs() < 1e-10, "{m}");
        }
    }

    #[test]
    fn sigma2_t_is_alpha_free() {
        for &a in &[0.5, 1.0, 3.0, 7.3] {
            assert!((sigma2_t(a).unwrap() - SIGMA2_T).abs() < 1e-10);
        }
        assert_relative_eq!(9.0 * SIGMA2_T, ASYMPTOTIC_VARIANCE_T, max_relative = 1e-15);
    }

    #[test]
    fn psi_at_t_one_vanishes() {
        for &s in &[1.01, 2.0, 50.0] {
            assert!(psi(s, 1.0, 1.7).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn psi_standardized_matches_direct() {
        for &(s, t, a) in &[(1.5, 2.0, 1.0), (3.0, 2.0, 0.7), (2.0, 2.0, 2.0), (1.0, 5.0, 1.3)] {
            let d = psi(s, t, a).unwrap();
            let st = psi_std(a * f64::ln(s), a * f64::ln(t));
            assert!((d - st).abs() < 1e-13, "{s} {t} {a}");
        }
        // s = t takes the indicator branch: 1/2 - t^a/s^a = -1/2
        let t: f64 = 2.0;
        let want = 1.0 - 1.0 / (t * t) - 0.5 + 0.5 / t - 0.5;
        assert_relative_eq!(psi(t, t, 1.0).unwrap(), want, epsilon = 1e-15);
    }

    #[test]
    fn psi_is_centered() {
        for &t in &[1.5, 2.0, 5.0] {
            for &a in &[0.5, 1.0, 3.0] {
                let tau = a * f64::ln(t);
                let m = expect_exp1(|v| psi_std(v, tau), &[tau]).unwrap();
                assert!(m.abs() < 1e-10, "t={t} a={a}: {m}");
            }
        }
    }

    #[test]
    fn sigma2_v_closed_form_vs_quadrature() {
        for &a in &[0.5, 1.0, 3.0] {
            for k in 0..40 {
                let t = 1.0 + 0.25 * k as f64;
                let c = sigma2_v(t, a).unwrap();
                let q = sigma2_v_quadrature(t, a).unwrap();
                assert!((c - q).abs() < 1e-9, "t={t} a={a}: {c} vs {q}");
            }
        }
        assert_eq!(sigma2_v(1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn sigma2_v_maximum() {
        for &a in &[0.5, 1.0, 2.0, 3.0] {
            let (t, m) = sigma2_v_max(a).unwrap();
            assert!((t - t0(a)).abs() < 1e-8);
            assert!((m - sigma2_v_max_value()).abs() < 1e-10);
        }
        let (t, m) = sigma2_v_max(1.0).unwrap();
        assert!((t - 1.645_751).abs() < 1e-6);
        assert!((m - 0.044_012_745).abs() < 1e-8);
    }
}
