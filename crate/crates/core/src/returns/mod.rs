//! Log-return samples from opening-price series and the statistics used to
//! classify their distributions.

mod bimodality;
pub(crate) mod histogram;
mod moments;
mod scaling;
mod series;

pub use bimodality::{bimodality, detect_modes, BimodalityReport, Mode};
pub use histogram::{binned_quantile, effective_range, histogram, ReturnHistogram};
pub use moments::{mean, population_std, skewness};
pub use scaling::{fit_power_law, scaling_exponent, std_by_scale, ScalingFit};
pub use series::{log_returns, Observation, PriceSeries, ReturnSample};

/// Bin count used to classify distributions as unimodal or bimodal.
pub const CLASSIFY_BINS: usize = 20;
