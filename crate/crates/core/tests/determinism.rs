use pareto_gof::distributions::AlternativeSpec;
use pareto_gof::montecarlo::{simulate_null, SimulationConfig, Tail};
use pareto_gof::power::power_table;
use pareto_gof::Statistic;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn null_simulation_ignores_thread_count() {
    let cfg = SimulationConfig::default().with_reps(1100).with_seed(9);
    let run = |t| pool(t).install(|| simulate_null(Statistic::Tn, 25, &cfg).unwrap().values);
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn power_table_ignores_thread_count() {
    let cfg = SimulationConfig::default().with_reps(600).with_seed(9);
    let alts = [AlternativeSpec::ShiftedHalfNormal { sigma: 1.0 }];
    let run = |t| pool(t).install(|| power_table(&alts, &[20], 0.05, Tail::TwoSided, &cfg).unwrap());
    assert_eq!(run(1), run(5));
}

#[test]
fn seed_changes_the_simulation() {
    let a = simulate_null(Statistic::Vn, 15, &SimulationConfig::default().with_reps(300).with_seed(1)).unwrap();
    let b = simulate_null(Statistic::Vn, 15, &SimulationConfig::default().with_reps(300).with_seed(2)).unwrap();
    assert_ne!(a.values, b.values);
}
