#![no_main]

use libfuzzer_sys::fuzz_target;
use pareto_gof::statistics::{statistic_t_direct, statistic_t_rank};
use pareto_gof::{Sample, Statistic};

fuzz_target!(|data: &[u8]| {
    let values: Vec<f64> = data
        .chunks_exact(8)
        .take(128)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let Ok(s) = Sample::new(values) else {
        return;
    };
    if s.len() < 2 {
        return;
    }
    let v = Statistic::Vn.compute(&s).unwrap().value;
    assert!((0.0..=1.0).contains(&v), "V_n = {v}");
    let rank = statistic_t_rank(&s).unwrap().value;
    assert!(rank.abs() <= 0.5 + 1e-12, "T_n = {rank}");
    if !s.has_ties() {
        let direct = statistic_t_direct(&s).unwrap().value;
        assert!((rank - direct).abs() <= 1e-12, "{rank} vs {direct}");
    }
    for stat in [Statistic::Ks, Statistic::Cvm] {
        let _ = stat.compute(&s);
    }
});
