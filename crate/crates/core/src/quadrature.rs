//! Adaptive Gauss–Kronrod quadrature on finite intervals and on `[0, inf)`.
//!
//! Half-line integrals are evaluated on `[0, u0]` and then on successive
//! doublings `[u, 2u]` until a piece contributes less than the tail tolerance.
//! A tail that stops shrinking is reported as non-convergence, which is how
//! divergent moment integrals surface.

#![allow(clippy::excessive_precision)]

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod abscissae (non-negative half) and weights; the 10-point
// Gauss rule uses the odd-indexed abscissae.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_109_209_997,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and limits for the adaptive rule.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Gauss-Kronrod estimate on `[a, b]` plus the Kronrod estimate of `int |f|`.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (Estimate, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut magnitude = fc.abs() * WGK[10];
    let mut gauss = 0.0;
    for k in 0..10 {
        let dx = half * XGK[k];
        let (lo, hi) = (f(center - dx), f(center + dx));
        let pair = lo + hi;
        kronrod += WGK[k] * pair;
        magnitude += WGK[k] * (lo.abs() + hi.abs());
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    let est = Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    };
    (est, magnitude * half.abs())
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
    magnitude: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over `[a, b]`, splitting first at the given breakpoints.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    let mut cuts: Vec<f64> = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut magnitude = 0.0;
    for w in cuts.windows(2) {
        let (est, m) = kronrod21(&f, w[0], w[1]);
        total += est.value;
        total_err += est.error;
        magnitude += m;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            est,
            magnitude: m,
        });
    }

    // Errors below a few ulps of `int |f|` are rounding noise, not truncation.
    let target = |total: f64, magnitude: f64| {
        tol.abs
            .max(tol.rel * total.abs())
            .max(64.0 * f64::EPSILON * magnitude)
    };
    while total_err > target(total, magnitude) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature { error: total_err });
        }
        let worst = heap.pop().expect("heap holds at least one interval");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let (left, lm) = kronrod21(&f, worst.a, mid);
        let (right, rm) = kronrod21(&f, mid, worst.b);
        total += left.value + right.value - worst.est.value;
        total_err += left.error + right.error - worst.est.error;
        magnitude += lm + rm - worst.magnitude;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            est: left,
            magnitude: lm,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            est: right,
            magnitude: rm,
        });
    }
    // Re-sum to shed accumulated cancellation from the running totals.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.est.value, e + p.est.error));
    Ok(Estimate { value, error })
}

/// Integrates `f` over `[0, inf)`.
///
/// `first` is the end of the initial window; breakpoints inside it are
/// honoured. Beyond it the integral is accumulated over doublings until a
/// piece is below `tail_tol`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    first: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    const TAIL_TOL: f64 = 1e-16;
    const MAX_DOUBLINGS: usize = 16;
    let reach = breakpoints
        .iter()
        .copied()
        .filter(|p| p.is_finite())
        .fold(first, f64::max);
    let mut est = integrate(&f, 0.0, reach, breakpoints, tol)?;
    if !est.value.is_finite() {
        return Err(Error::Quadrature { error: f64::INFINITY });
    }
    let mut lo = reach;
    for _ in 0..MAX_DOUBLINGS {
        let hi = 2.0 * lo;
        let piece = integrate(&f, lo, hi, &[], tol)?;
        if !piece.value.is_finite() {
            return Err(Error::Quadrature { error: f64::INFINITY });
        }
        est.value += piece.value;
        est.error += piece.error;
        if piece.value.abs() < TAIL_TOL && piece.error < TAIL_TOL {
            return Ok(est);
        }
        lo = hi;
    }
    Err(Error::Quadrature { error: f64::INFINITY })
}

/// `E[phi(V)]` for `V` standard exponential, i.e. `int_0^inf e^{-v} phi(v) dv`.
pub fn expect_exp1<F: Fn(f64) -> f64>(phi: F, breakpoints: &[f64]) -> Result<f64> {
    integrate_half_line(
        |v| {
            let w = (-v).exp();
            if w == 0.0 {
                0.0
            } else {
                w * phi(v)
            }
        },
        32.0,
        breakpoints,
        Tolerance::default(),
    )
    .map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let e = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, &[], Tolerance::default()).unwrap();
        assert_relative_eq!(e.value, 64.0 / 6.0 - 4.0, epsilon = 1e-13);
    }

    #[test]
    fn exponential_moments() {
        for k in 0..6 {
            let m = expect_exp1(|v| v.powi(k), &[]).unwrap();
            let fact: f64 = (1..=k).map(f64::from).product();
            assert_relative_eq!(m, fact, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_singularity_at_origin() {
        // E[ln V] = -gamma, E[ln^2 V] = gamma^2 + pi^2/6
        let gamma = 0.577_215_664_901_532_9;
        let m1 = expect_exp1(f64::ln, &[]).unwrap();
        let m2 = expect_exp1(|v| v.ln().powi(2), &[]).unwrap();
        assert_relative_eq!(m1, -gamma, epsilon = 1e-11);
        assert_relative_eq!(m2, gamma * gamma + PI * PI / 6.0, epsilon = 1e-10);
    }

    #[test]
    fn jump_breakpoint() {
        let e = expect_exp1(|v| if v <= 1.5 { 1.0 } else { 0.0 }, &[1.5]).unwrap();
        assert_relative_eq!(e, 1.0 - (-1.5f64).exp(), epsilon = 1e-14);
    }

    #[test]
    fn divergent_tail_is_reported() {
        let r = integrate_half_line(|u| 1.0 / (1.0 + u), 1.0, &[], Tolerance::default());
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
