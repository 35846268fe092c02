#![no_main]

use libfuzzer_sys::fuzz_target;
use pareto_gof::sample::parse_observations;
use pareto_gof::{Sample, Statistic};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(values) = parse_observations(text) else {
        return;
    };
    assert!(values.iter().all(|x| x.is_finite() && *x >= 1.0));
    if let Ok(s) = Sample::new(values) {
        if s.len() <= 256 {
            for stat in Statistic::ALL {
                let _ = stat.compute(&s);
            }
        }
    }
});
