//! Null projections, limiting variances and local Bahadur efficiencies.

pub mod efficiency;
pub mod projection;

pub use efficiency::{local_efficiency, EfficiencyReport, H0Perturbation};
pub use projection::{sigma2_t, sigma2_v, sigma2_v_max, t0, tau0, ASYMPTOTIC_VARIANCE_T, SIGMA2_T};
