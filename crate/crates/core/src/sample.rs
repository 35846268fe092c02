//! Validated observation vectors on `[1, inf)` and the plain-text data format.

use crate::error::{Error, Result};

/// A sample of observations from a distribution on `[1, inf)`.
///
/// Values are stored sorted ascending; `order[k]` is the position the `k`-th
/// smallest value had in the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    sorted: Vec<f64>,
    order: Vec<usize>,
    has_ties: bool,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFinite { value: v });
            }
            if v < 1.0 {
                return Err(Error::OutsideSupport { value: v });
            }
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let has_ties = sorted.windows(2).any(|w| w[0] == w[1]);
        Ok(Sample {
            sorted,
            order,
            has_ties,
        })
    }

    /// Parses the text data format and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        Sample::new(parse_observations(text)?)
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Observations in ascending order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Permutation mapping sorted positions back to input positions.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Observations in their original input order.
    pub fn original(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.sorted.len()];
        for (k, &i) in self.order.iter().enumerate() {
            out[i] = self.sorted[k];
        }
        out
    }

    /// True when at least two observations are exactly equal.
    pub fn has_ties(&self) -> bool {
        self.has_ties
    }

    /// Applies `x -> x^c` to every observation (`c > 0`), preserving order.
    pub fn powf(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(crate::error::invalid("c", c, "power must be positive"));
        }
        Sample::new(self.original().into_iter().map(|x| x.powf(c)).collect())
    }
}

/// Parses one observation per line.
///
/// Blank lines are skipped and everything after a `#` is a comment. Values
/// must be finite decimals that are at least 1.
pub fn parse_observations(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let value: f64 = body.parse().map_err(|_| Error::Parse {
            line,
            message: format!("cannot parse {body:?} as a number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("non-finite value {body:?}"),
            });
        }
        if value < 1.0 {
            return Err(Error::Parse {
                line,
                message: format!(
                    "value {value} is below 1; observations must lie in the support [1, inf) \
                     (rescale data by its lower threshold first)"
                ),
            });
        }
        out.push(value);
    }
    if out.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(out)
}
