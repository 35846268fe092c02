//! Published critical values and powers, used by `--compare-paper` and the
//! acceptance checks. Values are as printed (two or four decimals).

use crate::statistics::Statistic;

pub const TABLE_NS: [usize; 6] = [10, 20, 30, 40, 50, 100];
pub const TABLE_LEVELS: [f64; 3] = [0.1, 0.05, 0.01];

/// Upper critical values of `T_n`, rows by `TABLE_NS`, columns by `TABLE_LEVELS`.
pub const CRITICAL_T: [[f64; 3]; 6] = [
    [0.09, 0.13, 0.22],
    [0.06, 0.09, 0.15],
    [0.05, 0.07, 0.11],
    [0.04, 0.06, 0.09],
    [0.04, 0.06, 0.09],
    [0.03, 0.04, 0.05],
];

/// Upper critical values of `V_n`.
pub const CRITICAL_V: [[f64; 3]; 6] = [
    [0.36, 0.41, 0.56],
    [0.24, 0.28, 0.36],
    [0.19, 0.22, 0.28],
    [0.16, 0.19, 0.24],
    [0.15, 0.16, 0.21],
    [0.11, 0.12, 0.15],
];

pub fn critical_value(statistic: Statistic, n: usize, level: f64) -> Option<f64> {
    let table = match statistic {
        Statistic::Tn => &CRITICAL_T,
        Statistic::Vn => &CRITICAL_V,
        _ => return None,
    };
    let row = TABLE_NS.iter().position(|&m| m == n)?;
    let col = TABLE_LEVELS.iter().position(|&l| (l - level).abs() < 1e-12)?;
    Some(table[row][col])
}

pub const POWER_LEVEL: f64 = 0.05;
pub const POWER_NS: [usize; 2] = [20, 50];

/// Powers at level 0.05 in the order `T_n, V_n, D_n, omega2_n`, keyed by
/// alternative label and sample size.
pub const POWER: [(&str, usize, [f64; 4]); 10] = [
    ("log-normal", 20, [0.6263, 0.6713, 0.5585, 0.6432]),
    ("half-normal", 20, [0.6254, 0.6718, 0.5327, 0.6489]),
    ("weibull", 20, [0.9984, 0.9988, 0.9893, 0.9990]),
    ("gamma", 20, [0.9937, 0.9940, 0.9642, 0.9919]),
    ("log-gamma", 20, [0.4654, 0.5282, 0.4096, 0.4643]),
    ("log-normal", 50, [0.9877, 0.9758, 0.9520, 0.9841]),
    ("half-normal", 50, [0.9697, 0.9691, 0.9268, 0.9763]),
    ("weibull", 50, [1.0, 1.0, 1.0, 1.0]),
    ("gamma", 50, [1.0, 1.0, 1.0, 1.0]),
    ("log-gamma", 50, [0.9158, 0.8955, 0.8241, 0.9015]),
];

pub fn power(alternative: &str, n: usize, statistic: Statistic) -> Option<f64> {
    let col = Statistic::ALL.iter().position(|&s| s == statistic)?;
    POWER
        .iter()
        .find(|(label, m, _)| *label == alternative && *m == n)
        .map(|row| row.2[col])
}
