use pareto_gof::distributions::{AlternativeSpec, ParetoParams};
use pareto_gof::rng;
use pareto_gof::two_sample::ks_two_sample;

#[test]
fn mixture_without_weight_is_pareto() {
    let mix = AlternativeSpec::ParetoMixture {
        alpha: 1.5,
        beta: 4.0,
        theta: 0.0,
    };
    let pareto = ParetoParams::new(1.5).unwrap();
    for x in [1.0, 1.01, 1.7, 3.0, 20.0, 1e4] {
        assert!((mix.cdf(x).unwrap() - pareto.cdf(x).unwrap()).abs() < 1e-15);
    }

    let mut r1 = rng::stream(11, 1, 0);
    let mut r2 = rng::stream(11, 2, 0);
    let a = mix.draws(2000, &mut r1).unwrap();
    let b = AlternativeSpec::Pareto { alpha: 1.5 }.draws(2000, &mut r2).unwrap();
    let ks = ks_two_sample(&a, &b).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn every_family_draws_from_its_support() {
    let families = [
        AlternativeSpec::Pareto { alpha: 2.0 },
        AlternativeSpec::LogWeibull { alpha: 1.0, theta: 0.5 },
        AlternativeSpec::LogLinearExponent { alpha: 1.0, beta: 2.0, theta: 0.5 },
        AlternativeSpec::ParetoMixture { alpha: 1.0, beta: 3.0, theta: 0.4 },
        AlternativeSpec::ShiftedLogNormal { mu: 0.0, sigma: 1.0 },
        AlternativeSpec::ShiftedHalfNormal { sigma: 1.0 },
        AlternativeSpec::ShiftedWeibull { shape: 2.0, scale: 1.0 },
        AlternativeSpec::ShiftedGamma { shape: 2.0, rate: 1.0 },
        AlternativeSpec::LogGamma { shape: 2.0, rate: 1.0 },
    ];
    for f in families {
        let mut r = rng::stream(3, f.family_code(), 0);
        let xs = f.draws(500, &mut r).unwrap();
        assert!(xs.iter().all(|&x| x >= 1.0 && x.is_finite()), "{}", f.label());
        // Draws follow the stated CDF.
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let d = sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let g = f.cdf(x).unwrap();
                (g - i as f64 / n).abs().max(((i + 1) as f64 / n - g).abs())
            })
            .fold(0.0, f64::max);
        assert!(d * n.sqrt() < 1.95, "{}: D = {d}", f.label());
    }
}

#[test]
fn quantile_inverts_cdf() {
    let f = AlternativeSpec::ShiftedGamma { shape: 2.0, rate: 1.0 };
    for p in [0.01, 0.3, 0.5, 0.9, 0.999] {
        let x = f.quantile(p).unwrap();
        assert!((f.cdf(x).unwrap() - p).abs() < 1e-9);
    }
}
