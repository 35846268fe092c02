//! Goodness-of-fit tests for the Pareto law built on the ratio-of-maxima
//! characterization: if `X` and `Y` are i.i.d. Pareto then
//! `max(X/Y, Y/X)` has the same law as `X`.
//!
//! The integral statistic `T_n` and Kolmogorov-type statistic `V_n` compare
//! the U-empirical distribution of pairwise max-ratios with the empirical
//! distribution of the sample. Both are free of the unknown shape.

pub mod asymptotics;
pub mod baseline;
pub mod characterization;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod montecarlo;
pub mod power;
pub mod quadrature;
pub mod reference;
pub mod rng;
pub mod sample;
pub mod statistics;
pub mod two_sample;
pub mod verify;

pub use error::{Error, Result};
pub use sample::Sample;
pub use statistics::Statistic;
