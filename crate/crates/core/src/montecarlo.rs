//! Simulated null distributions, critical values, p-values and test runs.
//!
//! Replications are grouped in fixed-size chunks; chunk `k` of the
//! simulation at sample size `n` draws from
//! `rng::stream(seed, domain(NULL_SIMULATION, n, 0), k)`. Chunk results are
//! concatenated in chunk order and sorted, so the output is bitwise identical
//! for any number of worker threads. All statistics requested together are
//! evaluated on the same simulated samples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::pareto_draws;
use crate::error::{Error, Result};
use crate::rng::{self, kinds};
use crate::sample::Sample;
use crate::statistics::Statistic;

pub const DEFAULT_REPS: usize = 10_000;
pub const DEFAULT_CHUNK: usize = 250;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub reps: usize,
    pub seed: u64,
    /// Shape of the Pareto law the null samples are drawn from.
    pub alpha: f64,
    /// Replications per independently seeded chunk.
    pub chunk_size: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            reps: DEFAULT_REPS,
            seed: 20_160_101,
            alpha: 1.0,
            chunk_size: DEFAULT_CHUNK,
        }
    }
}

impl SimulationConfig {
    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("reps must be positive".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk_size must be positive".into()));
        }
        crate::distributions::check_positive("alpha", self.alpha)
    }

    pub(crate) fn chunks(&self) -> impl IndexedParallelIterator<Item = (u64, usize)> + '_ {
        let count = self.reps.div_ceil(self.chunk_size);
        (0..count).into_par_iter().map(move |k| {
            let len = self.chunk_size.min(self.reps - k * self.chunk_size);
            (k as u64, len)
        })
    }
}

/// Sorted simulated values of one statistic under the null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistribution {
    pub statistic: Statistic,
    pub n: usize,
    pub config: SimulationConfig,
    pub values: Vec<f64>,
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(crate::error::invalid("level", level, "must lie in (0, 1)"))
    }
}

/// 1-based index `ceil((1 - level) reps)` of the upper critical value.
///
/// Products that are integers up to rounding (`0.95 * 10000`) are snapped
/// before taking the ceiling.
pub fn quantile_index(level: f64, reps: usize) -> usize {
    let x = (1.0 - level) * reps as f64;
    let k = if (x - x.round()).abs() < 1e-9 {
        x.round()
    } else {
        x.ceil()
    };
    (k as usize).clamp(1, reps)
}

impl NullDistribution {
    pub fn reps(&self) -> usize {
        self.values.len()
    }

    /// Order statistic of index `ceil((1 - level) reps)`.
    pub fn upper_quantile(&self, level: f64) -> Result<f64> {
        check_level(level)?;
        Ok(self.values[quantile_index(level, self.values.len()) - 1])
    }

    /// Mirror of `upper_quantile`: the order statistic of index
    /// `reps - ceil((1 - level) reps) + 1`, so that `value < lower` has the
    /// same simulated frequency as `value > upper`.
    pub fn lower_quantile(&self, level: f64) -> Result<f64> {
        check_level(level)?;
        let reps = self.values.len();
        Ok(self.values[reps - quantile_index(level, reps)])
    }

    pub fn region(&self, level: f64, tail: Tail) -> Result<RejectionRegion> {
        Ok(match tail {
            Tail::Upper => RejectionRegion {
                lower: None,
                upper: self.upper_quantile(level)?,
            },
            Tail::TwoSided => RejectionRegion {
                lower: Some(self.lower_quantile(level / 2.0)?),
                upper: self.upper_quantile(level / 2.0)?,
            },
        })
    }

    /// `(1 + #{simulated >= observed}) / (reps + 1)`.
    pub fn p_value(&self, observed: f64) -> f64 {
        let below = self.values.partition_point(|&v| v < observed);
        let at_or_above = self.values.len() - below;
        (1 + at_or_above) as f64 / (self.values.len() + 1) as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (self.values.len() - 1) as f64
    }
}

/// Simulates several statistics on shared null samples of size `n`.
pub fn simulate_null_many(
    statistics: &[Statistic],
    n: usize,
    cfg: &SimulationConfig,
) -> Result<Vec<NullDistribution>> {
    cfg.validate()?;
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: n });
    }
    let domain = rng::domain(kinds::NULL_SIMULATION, n as u64, 0);
    let chunks: Vec<Vec<Vec<f64>>> = cfg
        .chunks()
        .map(|(k, len)| {
            let mut r = rng::stream(cfg.seed, domain, k);
            let mut out = vec![Vec::with_capacity(len); statistics.len()];
            for _ in 0..len {
                let mut xs = pareto_draws(cfg.alpha, n, &mut r);
                xs.sort_unstable_by(f64::total_cmp);
                for (slot, stat) in out.iter_mut().zip(statistics) {
                    slot.push(stat.compute_sorted(&xs)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(statistics
        .iter()
        .enumerate()
        .map(|(idx, &statistic)| {
            let mut values: Vec<f64> = chunks.iter().flat_map(|c| c[idx].iter().copied()).collect();
            values.sort_unstable_by(f64::total_cmp);
            NullDistribution {
                statistic,
                n,
                config: *cfg,
                values,
            }
        })
        .collect())
}

pub fn simulate_null(statistic: Statistic, n: usize, cfg: &SimulationConfig) -> Result<NullDistribution> {
    Ok(simulate_null_many(&[statistic], n, cfg)?.remove(0))
}

pub fn critical_value(statistic: Statistic, n: usize, level: f64, cfg: &SimulationConfig) -> Result<f64> {
    check_level(level)?;
    simulate_null(statistic, n, cfg)?.upper_quantile(level)
}

pub fn p_value(statistic: Statistic, observed: f64, n: usize, cfg: &SimulationConfig) -> Result<f64> {
    Ok(simulate_null(statistic, n, cfg)?.p_value(observed))
}

/// Which side(s) of the null distribution reject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// Large values are significant.
    #[default]
    Upper,
    /// Equal-tailed: `level / 2` in each tail.
    TwoSided,
}

impl std::str::FromStr for Tail {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "upper" => Ok(Tail::Upper),
            "two-sided" => Ok(Tail::TwoSided),
            other => Err(format!("unknown tail {other:?} (expected upper or two-sided)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectionRegion {
    pub lower: Option<f64>,
    pub upper: f64,
}

impl RejectionRegion {
    /// Both boundaries are strict: values equal to a critical value are retained.
    pub fn rejects(&self, value: f64) -> bool {
        decide(value, self.upper) || self.lower.is_some_and(|l| value < l)
    }
}

/// Result of testing one sample, with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: Statistic,
    pub value: f64,
    pub n: usize,
    pub level: f64,
    pub critical_value: f64,
    pub p_value: f64,
    /// True iff `value > critical_value`.
    pub reject: bool,
    pub has_ties: bool,
    pub config: SimulationConfig,
}

/// Decision rule: large values are significant, rejection is strict.
pub fn decide(value: f64, critical: f64) -> bool {
    value > critical
}

pub fn run_test(s: &Sample, statistic: Statistic, level: f64, cfg: &SimulationConfig) -> Result<TestOutcome> {
    check_level(level)?;
    let value = statistic.compute(s)?.value;
    let null = simulate_null(statistic, s.len(), cfg)?;
    outcome_against(&null, s, value, level)
}

/// Builds an outcome from an already simulated null distribution.
pub fn outcome_against(null: &NullDistribution, s: &Sample, value: f64, level: f64) -> Result<TestOutcome> {
    let critical = null.upper_quantile(level)?;
    Ok(TestOutcome {
        statistic: null.statistic,
        value,
        n: s.len(),
        level,
        critical_value: critical,
        p_value: null.p_value(value),
        reject: decide(value, critical),
        has_ties: s.has_ties(),
        config: null.config,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueRow {
    pub n: usize,
    pub level: f64,
    pub critical_value: f64,
}

/// Grid of simulated upper quantiles over sample sizes and levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub statistic: Statistic,
    pub config: SimulationConfig,
    pub rows: Vec<CriticalValueRow>,
}

impl CriticalValueTable {
    pub fn get(&self, n: usize, level: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.level == level)
            .map(|r| r.critical_value)
    }

    /// TSV with columns `n, level, critical_value, reps, seed`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("n\tlevel\tcritical_value\treps\tseed\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{:.6}\t{}\t{}\n",
                r.n, r.level, r.critical_value, self.config.reps, self.config.seed
            ));
        }
        out
    }

    /// Levels for which the quantile grows as the level shrinks, but some
    /// larger `n` has a larger critical value. Soft diagnostic only.
    pub fn monotonicity_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for a in &self.rows {
            for b in &self.rows {
                if a.level == b.level && b.n > a.n && b.critical_value > a.critical_value {
                    warnings.push(format!(
                        "level {}: critical value at n={} ({:.4}) exceeds n={} ({:.4})",
                        a.level, b.n, b.critical_value, a.n, a.critical_value
                    ));
                }
                if a.n == b.n && b.level < a.level && b.critical_value < a.critical_value {
                    warnings.push(format!(
                        "n={}: level {} critical value below level {}",
                        a.n, b.level, a.level
                    ));
                }
            }
        }
        warnings
    }
}

pub fn critical_value_table(
    statistic: Statistic,
    ns: &[usize],
    levels: &[f64],
    cfg: &SimulationConfig,
) -> Result<CriticalValueTable> {
    for &l in levels {
        check_level(l)?;
    }
    let mut rows = Vec::with_capacity(ns.len() * levels.len());
    for &n in ns {
        let null = simulate_null(statistic, n, cfg)?;
        for &level in levels {
            rows.push(CriticalValueRow {
                n,
                level,
                critical_value: null.upper_quantile(level)?,
            });
        }
    }
    Ok(CriticalValueTable {
        statistic,
        config: *cfg,
        rows,
    })
}
