//! Empirical check of the characterization: under a Pareto law, `X` and
//! `max(X/Y, Y/X)` are identically distributed.
//!
//! Each meta-replication draws `pairs` observations `X_i` and, independently,
//! `pairs` pairs `(Y_i, W_i)`, then compares `{X_i}` with
//! `{max(Y_i/W_i, W_i/Y_i)}` by a two-sample Kolmogorov–Smirnov test. Using
//! fresh pairs keeps the two samples independent, which the test assumes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::AlternativeSpec;
use crate::error::{Error, Result};
use crate::rng::{self, kinds};
use crate::two_sample::ks_two_sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationConfig {
    pub pairs: usize,
    pub meta_reps: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for CharacterizationConfig {
    fn default() -> Self {
        CharacterizationConfig {
            pairs: 10_000,
            meta_reps: 200,
            level: 0.05,
            seed: 20_160_101,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub alternative: String,
    pub config: CharacterizationConfig,
    pub rejections: usize,
    pub rejection_rate: f64,
    /// Binomial standard error of the rejection rate at the nominal level.
    pub nominal_se: f64,
    pub mean_statistic: f64,
}

impl CharacterizationReport {
    /// Rejection rate within three binomial standard errors of the level.
    pub fn is_nominal(&self) -> bool {
        (self.rejection_rate - self.config.level).abs() <= 3.0 * self.nominal_se
    }
}

/// One meta-replication: KS statistic and p-value.
pub fn single_check(alt: &AlternativeSpec, pairs: usize, seed: u64, index: u64) -> Result<(f64, f64)> {
    if pairs == 0 {
        return Err(Error::EmptySample);
    }
    let mut r = rng::stream(seed, rng::domain(kinds::CHARACTERIZATION, alt.family_code(), 0), index);
    let x = alt.draws(pairs, &mut r)?;
    let y = alt.draws(pairs, &mut r)?;
    let w = alt.draws(pairs, &mut r)?;
    let ratios: Vec<f64> = y.iter().zip(&w).map(|(&a, &b)| (a / b).max(b / a)).collect();
    let t = ks_two_sample(&x, &ratios)?;
    Ok((t.statistic, t.p_value))
}

pub fn characterization_check(alt: &AlternativeSpec, cfg: &CharacterizationConfig) -> Result<CharacterizationReport> {
    if !(cfg.level > 0.0 && cfg.level < 1.0) {
        return Err(crate::error::invalid("level", cfg.level, "must lie in (0, 1)"));
    }
    if cfg.meta_reps == 0 {
        return Err(Error::Config("meta_reps must be positive".into()));
    }
    let results: Vec<(f64, f64)> = (0..cfg.meta_reps as u64)
        .into_par_iter()
        .map(|k| single_check(alt, cfg.pairs, cfg.seed, k))
        .collect::<Result<_>>()?;
    let rejections = results.iter().filter(|(_, p)| *p < cfg.level).count();
    let m = cfg.meta_reps as f64;
    Ok(CharacterizationReport {
        alternative: alt.label().to_string(),
        config: *cfg,
        rejections,
        rejection_rate: rejections as f64 / m,
        nominal_se: (cfg.level * (1.0 - cfg.level) / m).sqrt(),
        mean_statistic: results.iter().map(|r| r.0).sum::<f64>() / m,
    })
}
