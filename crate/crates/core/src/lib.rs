//! Discrete-time quantum walks as models for long-horizon logarithmic return
//! distributions.
//!
//! The crate is split in three parts:
//!
//! * [`qwalk`]: exact simulation of the one-dimensional coined walk, position
//!   distributions, three-site smoothing and step-count ensembles.
//! * [`returns`]: price series ingestion, log returns, histograms, the
//!   bimodality measure, skewness and volatility scaling exponents.
//! * [`fit`]: hill-climbing fits of walk distributions to return histograms,
//!   scored by MAE and KS, next to Gaussian and two-component mixture
//!   baselines.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod qwalk;
pub mod returns;

pub use error::{Error, Result};
pub use fit::{
    align, align_to_histogram, gaussian_fit, gmm2_fit, hill_climb_fit, ks_statistic, mae,
    refine_with_ensemble, AffineMap, Aligned, AlignmentConfig, FitResult, GaussianFitResult,
    Gmm2FitResult, NPolicy, SearchConfig,
};
pub use qwalk::{
    coin_matrix, distribution, distribution_with, ensemble_distribution, evolve, initial_state,
    smooth_aggregate, step, Coin, CoinParams, DistributionKind, EnsembleSpec, InitParams, OddSites,
    PositionDistribution, WalkState,
};
pub use returns::{
    bimodality, detect_modes, effective_range, histogram, log_returns, scaling_exponent, skewness,
    std_by_scale, BimodalityReport, PriceSeries, ReturnHistogram, ReturnSample, ScalingFit,
};
