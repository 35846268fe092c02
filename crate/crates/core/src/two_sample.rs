//! Two-sample Kolmogorov–Smirnov test with the asymptotic Kolmogorov
//! p-value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleKs {
    pub statistic: f64,
    pub p_value: f64,
    pub m: usize,
    pub n: usize,
}

/// `sup_x |F_m(x) - G_n(x)|` over two sorted samples.
pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (m, n) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    Ok(d)
}

/// Kolmogorov survival function `Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        // The alternating series converges slowly here and Q is 1 to
        // double precision.
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as i64 % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample test; the p-value uses Stephens' finite-sample adjustment
/// `lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D` with `ne = mn / (m + n)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TwoSampleKs> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    for v in a.iter().chain(&b) {
        if !v.is_finite() {
            return Err(Error::NonFinite { value: *v });
        }
    }
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let d = ks_two_sample_sorted(&a, &b)?;
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    let root = ne.sqrt();
    Ok(TwoSampleKs {
        statistic: d,
        p_value: kolmogorov_sf((root + 0.12 + 0.11 / root) * d),
        m: a.len(),
        n: b.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistic_by_hand() {
        assert_eq!(ks_two_sample_sorted(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
        assert_eq!(ks_two_sample_sorted(&[1.0, 3.0], &[2.0, 4.0]).unwrap(), 0.5);
        assert_eq!(ks_two_sample_sorted(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        // Ties across samples are stepped together.
        assert_eq!(ks_two_sample_sorted(&[1.0, 2.0], &[2.0, 2.0]).unwrap(), 0.5);
        assert!(ks_two_sample_sorted(&[], &[1.0]).is_err());
    }

    #[test]
    fn kolmogorov_quantiles() {
        // Classical asymptotic critical values.
        assert!((kolmogorov_sf(1.358_099) - 0.05).abs() < 1e-5);
        assert!((kolmogorov_sf(1.627_624) - 0.01).abs() < 1e-5);
        assert!((kolmogorov_sf(1.223_848) - 0.10).abs() < 1e-5);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(5.0) < 1e-20);
    }

    #[test]
    fn sf_is_monotone() {
        let mut prev = 1.0;
        for k in 1..400 {
            let q = kolmogorov_sf(k as f64 * 0.01);
            assert!(q <= prev + 1e-15);
            prev = q;
        }
    }

    #[test]
    fn shifted_samples_reject() {
        let a: Vec<f64> = (0..500).map(f64::from).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 150.0).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.statistic - 0.3).abs() < 1e-12);
        assert!(r.p_value < 1e-10);
    }
}
