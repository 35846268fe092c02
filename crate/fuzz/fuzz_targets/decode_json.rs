#![no_main]

use libfuzzer_sys::fuzz_target;
use pareto_gof::distributions::AlternativeSpec;
use pareto_gof::montecarlo::CriticalValueTable;
use pareto_gof::power::PowerReport;
use pareto_gof::verify::Ledger;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = serde_json::from_slice::<AlternativeSpec>(data) {
        if spec.validate().is_ok() {
            for p in [0.0, 0.25, 0.5, 0.999] {
                let _ = spec.quantile(p);
            }
            for x in [1.0, 2.0, 1e6, f64::INFINITY] {
                let _ = spec.cdf(x);
            }
        }
    }
    if let Ok(table) = serde_json::from_slice::<CriticalValueTable>(data) {
        let _ = table.to_tsv();
        let _ = table.monotonicity_warnings();
    }
    if let Ok(report) = serde_json::from_slice::<PowerReport>(data) {
        let _ = report.to_tsv();
        let _ = report.ordering_holds();
    }
    if let Ok(ledger) = serde_json::from_slice::<Ledger>(data) {
        let _ = ledger.to_tsv();
    }
});
