//! The U-empirical distribution function `M_n` and the statistics `T_n`
//! (integral type) and `V_n` (supremum type).
//!
//! All pair comparisons use the same floating-point predicate,
//! `x_hi / x_lo <= t`, with no epsilon snapping, so that the fast and the
//! direct evaluation paths agree exactly on the counts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;

/// The four test statistics handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    /// Integral-type characterization statistic `T_n`.
    Tn,
    /// Kolmogorov–Smirnov-type characterization statistic `V_n`.
    Vn,
    /// Kolmogorov–Smirnov `D_n` with estimated shape.
    Ks,
    /// Cramér–von Mises `omega^2_n` with estimated shape.
    Cvm,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [Statistic::Tn, Statistic::Vn, Statistic::Ks, Statistic::Cvm];

    pub fn symbol(&self) -> &'static str {
        match self {
            Statistic::Tn => "T_n",
            Statistic::Vn => "V_n",
            Statistic::Ks => "D_n",
            Statistic::Cvm => "omega2_n",
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            Statistic::Tn => "tn",
            Statistic::Vn => "vn",
            Statistic::Ks => "ks",
            Statistic::Cvm => "cvm",
        }
    }

    /// Evaluates the statistic on a sample.
    pub fn compute(&self, s: &Sample) -> Result<StatisticValue> {
        match self {
            Statistic::Tn => statistic_t_rank(s),
            Statistic::Vn => statistic_v(s),
            Statistic::Ks => crate::baseline::ks_statistic_estimated(s),
            Statistic::Cvm => crate::baseline::cvm_statistic_estimated(s),
        }
    }

    /// Evaluates the statistic on already sorted observations.
    pub(crate) fn compute_sorted(&self, xs: &[f64]) -> Result<f64> {
        match self {
            Statistic::Tn => t_rank_sorted(xs),
            Statistic::Vn => v_sorted(xs),
            Statistic::Ks => crate::baseline::ks_sorted(xs),
            Statistic::Cvm => crate::baseline::cvm_sorted(xs),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Statistic {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tn" | "t" | "t_n" => Ok(Statistic::Tn),
            "vn" | "v" | "v_n" => Ok(Statistic::Vn),
            "ks" | "dn" | "d_n" => Ok(Statistic::Ks),
            "cvm" | "omega2" | "w2" => Ok(Statistic::Cvm),
            other => Err(format!("unknown statistic {other:?} (expected tn, vn, ks or cvm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticValue {
    pub name: Statistic,
    pub value: f64,
    pub n: usize,
}

fn require_pairs(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::TooFewObservations { needed: 2, got: n })
    } else {
        Ok(())
    }
}

fn pair_total(n: usize) -> u64 {
    (n as u64) * (n as u64 - 1) / 2
}

/// `M_n(t)`: fraction of unordered pairs with `max(x_i/x_j, x_j/x_i) <= t`.
pub fn u_empirical_cdf(s: &Sample, t: f64) -> Result<f64> {
    crate::distributions::check_support(t)?;
    let xs = s.sorted();
    require_pairs(xs.len())?;
    let mut count = 0u64;
    for (i, &lo) in xs.iter().enumerate() {
        let rest = &xs[i + 1..];
        count += rest.partition_point(|&hi| hi / lo <= t) as u64;
    }
    Ok(count as f64 / pair_total(xs.len()) as f64)
}

/// For each sorted position `j`, the number of pair maxima `<= x_j`.
///
/// For a fixed smaller element the ratio grows with the larger one, so a
/// pointer sweep finds, for every pair, the first sample point the ratio
/// does not exceed. O(n^2) time, O(n) memory.
fn pair_counts_at_points(xs: &[f64]) -> Vec<u64> {
    let n = xs.len();
    let mut first_cover = vec![0u64; n + 1];
    for i in 0..n {
        let lo = xs[i];
        let mut p = 0usize;
        for &hi in &xs[i + 1..] {
            let r = hi / lo;
            while p < n && xs[p] < r {
                p += 1;
            }
            first_cover[p] += 1;
        }
    }
    let mut acc = 0u64;
    first_cover[..n]
        .iter()
        .map(|&c| {
            acc += c;
            acc
        })
        .collect()
}

/// `sum_j #{pair maxima <= x_j}` without materializing per-point counts.
///
/// Row `i` holds the ratios `x_k / x_i`, `k > i`, which are already sorted;
/// a branchless merge against the sample counts the sample points below
/// each ratio. Each merge is a serial dependency chain, so `LANES` rows are
/// merged in lockstep to overlap them. The sample is padded with `+inf` and
/// every ratio row ends in a `+inf` sentinel, so no lane reads out of range.
fn pair_count_total(xs: &[f64]) -> u64 {
    const LANES: usize = 4;
    let n = xs.len();
    let width = n + 1;
    let mut padded = Vec::with_capacity(width);
    padded.extend_from_slice(xs);
    padded.push(f64::INFINITY);
    let mut rows = vec![f64::INFINITY; LANES * width];
    let mut below = 0u64;
    for first in (0..n).step_by(LANES) {
        let mut len = [0usize; LANES];
        for (lane, row) in (first..n.min(first + LANES)).enumerate() {
            let lo = xs[row];
            let m = n - row - 1;
            let buf = &mut rows[lane * width..(lane + 1) * width];
            for (r, &hi) in buf[..m].iter_mut().zip(&xs[row + 1..]) {
                *r = hi / lo;
            }
            buf[m] = f64::INFINITY;
            len[lane] = m;
        }
        let mut p = [0usize; LANES];
        let mut q = [0usize; LANES];
        while (0..LANES).any(|l| q[l] < len[l]) {
            for l in 0..LANES {
                let active = (q[l] < len[l]) as usize;
                let step = active & (padded[p[l]] < rows[l * width + q[l]]) as usize;
                let stop = active - step;
                below += (stop * p[l]) as u64;
                p[l] += step;
                q[l] += stop;
            }
        }
    }
    pair_total(n) * n as u64 - below
}

/// `#{k : x_k <= x_j}` for each sorted position.
fn sample_counts(xs: &[f64]) -> Vec<u64> {
    xs.iter()
        .map(|&x| xs.partition_point(|&y| y <= x) as u64)
        .collect()
}

pub(crate) fn t_rank_sorted(xs: &[f64]) -> Result<f64> {
    let n = xs.len();
    require_pairs(n)?;
    let big_n = pair_total(n);
    let sample_part: u64 = if xs.windows(2).any(|w| w[0] == w[1]) {
        sample_counts(xs).iter().sum()
    } else {
        (n as u64) * (n as u64 + 1) / 2
    };
    let rank_sum = sample_part + pair_count_total(xs);
    let n64 = n as u64;
    let numerator = 2 * rank_sum as i128 - ((n64 + 1) * (n64 + big_n)) as i128;
    Ok(numerator as f64 / (2 * n64 * big_n) as f64)
}

/// `T_n` from pooled ranks: `(2nN)^{-1} (2 sum r_j - (n+1)(n+N))`.
///
/// Ranks count pooled values `<= x_j`; with ties this differs from the
/// direct definition (see [`statistic_t_direct`]).
pub fn statistic_t_rank(s: &Sample) -> Result<StatisticValue> {
    Ok(StatisticValue {
        name: Statistic::Tn,
        value: t_rank_sorted(s.sorted())?,
        n: s.len(),
    })
}

/// `T_n = (1/n) sum_j (M_n(x_j) - F_n(x_j))`, evaluated literally in
/// O(n^3). Serves as the oracle for [`statistic_t_rank`].
pub fn statistic_t_direct(s: &Sample) -> Result<StatisticValue> {
    let xs = s.original();
    let n = xs.len();
    require_pairs(n)?;
    let big_n = pair_total(n) as f64;
    let mut acc = 0.0;
    for &t in &xs {
        let mut pairs = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if (xs[i] / xs[j]).max(xs[j] / xs[i]) <= t {
                    pairs += 1;
                }
            }
        }
        let below = xs.iter().filter(|&&x| x <= t).count() as f64;
        acc += pairs as f64 / big_n - below / n as f64;
    }
    Ok(StatisticValue {
        name: Statistic::Tn,
        value: acc / n as f64,
        n,
    })
}

fn sorted_pair_maxima(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut pm = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for &hi in &xs[i + 1..] {
            pm.push(hi / xs[i]);
        }
    }
    pm.sort_unstable_by(f64::total_cmp);
    pm
}

pub(crate) fn v_sorted(xs: &[f64]) -> Result<f64> {
    let n = xs.len();
    require_pairs(n)?;
    let pm = sorted_pair_maxima(xs);
    let big_n = pm.len();
    // Both step functions are right-continuous and constant between jumps,
    // so the supremum is attained at a jump (the left limit at a jump is the
    // value at the previous one, and equals 0 before the first jump >= 1).
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < big_n || j < n {
        let next = match (pm.get(i), xs.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < big_n && pm[i] <= next {
            i += 1;
        }
        while j < n && xs[j] <= next {
            j += 1;
        }
        let diff = (i as f64 / big_n as f64 - j as f64 / n as f64).abs();
        sup = sup.max(diff);
    }
    Ok(sup)
}

/// `V_n = sup_{t >= 1} |M_n(t) - F_n(t)|`.
pub fn statistic_v(s: &Sample) -> Result<StatisticValue> {
    Ok(StatisticValue {
        name: Statistic::Vn,
        value: v_sorted(s.sorted())?,
        n: s.len(),
    })
}

/// Sample points pooled with all pair maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledRanks {
    /// The `N = n(n-1)/2` pair maxima, ascending.
    pub pair_maxima: Vec<f64>,
    /// Rank of each sorted sample point in the pooled set: the number of
    /// pooled values `<= x_j`.
    pub ranks: Vec<u64>,
}

impl PooledRanks {
    pub fn new(s: &Sample) -> Result<Self> {
        let xs = s.sorted();
        require_pairs(xs.len())?;
        let pair_maxima = sorted_pair_maxima(xs);
        let ranks = xs
            .iter()
            .map(|&x| {
                let below_pairs = pair_maxima.partition_point(|&m| m <= x);
                let below_sample = xs.partition_point(|&y| y <= x);
                (below_pairs + below_sample) as u64
            })
            .collect();
        Ok(PooledRanks { pair_maxima, ranks })
    }

    /// Same ranks via the O(n^2) pointer sweep, without sorting pair maxima.
    pub fn ranks_by_sweep(s: &Sample) -> Result<Vec<u64>> {
        let xs = s.sorted();
        require_pairs(xs.len())?;
        Ok(pair_counts_at_points(xs)
            .into_iter()
            .zip(sample_counts(xs))
            .map(|(a, b)| a + b)
            .collect())
    }

    pub fn rank_sum(&self) -> u64 {
        self.ranks.iter().sum()
    }
}
