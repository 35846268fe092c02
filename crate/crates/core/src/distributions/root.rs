//! Monotone CDF inversion: bracketing by doubling, then bisection with a
//! safeguarded secant step.

use crate::error::{Error, Result};

pub const PROB_TOL: f64 = 1e-12;

/// Finds `x >= 1` with `cdf(x) = p` for a continuous nondecreasing `cdf` on
/// `[1, inf)`.
pub fn invert_cdf<F: Fn(f64) -> f64>(cdf: F, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::RootBracket { target: p });
    }
    let mut lo = 1.0;
    let mut f_lo = cdf(lo);
    if f_lo >= p {
        return Ok(lo);
    }
    let mut hi = 2.0;
    let mut f_hi = cdf(hi);
    while f_hi < p {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::RootBracket { target: p });
        }
        f_hi = cdf(hi);
    }

    let mut last_width = hi - lo;
    let mut use_bisection = false;
    for _ in 0..400 {
        let x = if use_bisection || f_hi <= f_lo {
            0.5 * (lo + hi)
        } else {
            let s = lo + (p - f_lo) * (hi - lo) / (f_hi - f_lo);
            let margin = 1e-3 * (hi - lo);
            s.clamp(lo + margin, hi - margin)
        };
        if x <= lo || x >= hi {
            return Ok(if p - f_lo < f_hi - p { lo } else { hi });
        }
        let fx = cdf(x);
        if (fx - p).abs() <= PROB_TOL {
            return Ok(x);
        }
        if fx < p {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        let width = hi - lo;
        use_bisection = width > 0.5 * last_width;
        last_width = width;
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_pareto() {
        for &p in &[0.0, 0.01, 0.3, 0.5, 0.9, 0.999] {
            let x = invert_cdf(|x| 1.0 - x.powf(-1.5), p).unwrap();
            assert!((1.0 - x.powf(-1.5) - p).abs() <= PROB_TOL);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(invert_cdf(|x| 1.0 - 1.0 / x, 1.0).is_err());
        assert!(invert_cdf(|x| 1.0 - 1.0 / x, -0.1).is_err());
    }

    #[test]
    fn heavy_tail_bracket() {
        let x = invert_cdf(|x| 1.0 - x.powf(-0.2), 0.99).unwrap();
        assert!((x / 1e10 - 1.0).abs() < 1e-6);
    }
}
