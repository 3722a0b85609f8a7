//! Fitting binned return distributions with smoothed quantum-walk
//! distributions, and the Gaussian / two-component mixture baselines.
//!
//! The walk fit minimizes the mean absolute error between per-bin
//! probabilities. The Kolmogorov-Smirnov distance on the same binning is
//! reported alongside but never optimized.

mod align;
mod baseline;
mod metrics;
mod search;

pub use align::{align, align_to_histogram, AffineMap, Aligned, AlignmentConfig, MAX_BIN_DELTA};
pub use baseline::{
    gaussian_fit, gmm2_fit, normal_cdf, GaussianFitResult, Gmm2FitResult, GmmStart,
};
pub use metrics::{ks_statistic, mae};
pub use search::{hill_climb_fit, refine_with_ensemble, FitResult, NPolicy, SearchConfig};

use std::io::Write;

use crate::error::Result;

/// Writes `bin_center,empirical,fitted` rows.
pub fn write_curve_csv<W: Write>(
    out: W,
    lower_edge: f64,
    bin_width: f64,
    empirical: &[f64],
    fitted: &[f64],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_center", "empirical", "fitted"])?;
    for (i, (e, f)) in empirical.iter().zip(fitted).enumerate() {
        let centre = lower_edge + (i as f64 + 0.5) * bin_width;
        w.write_record([centre.to_string(), e.to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
