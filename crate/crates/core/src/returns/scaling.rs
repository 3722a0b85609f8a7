use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moments::population_std;
use super::series::{check_history, log_returns_from_logs, PriceSeries};
use crate::error::{Error, Result};

/// Power-law fit `std(dt) ~ dt^alpha` of log-return standard deviations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub intercept: f64,
    /// Inclusive range of horizons used in the regression.
    pub dt_range: (usize, usize),
    /// Standard deviation of the log returns for `dt = 1, 2, ...`.
    pub std_by_dt: Vec<f64>,
}

/// Population standard deviation of the `dt`-day log returns for every
/// `dt` in `1..=dt_max`.
pub fn std_by_scale(series: &PriceSeries, dt_max: usize) -> Result<Vec<f64>> {
    if dt_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "dt_max={dt_max} must be at least 2"
        )));
    }
    check_history(series.len(), dt_max)?;
    let logs = series.log_prices();
    let stds: Vec<f64> = (1..=dt_max)
        .into_par_iter()
        .map(|dt| population_std(&log_returns_from_logs(&logs, dt)))
        .collect();
    if stds.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::ZeroVariance);
    }
    Ok(stds)
}

/// Ordinary least squares of `ln std` on `ln dt`. Returns
/// `(slope, slope standard error, intercept)`.
pub fn fit_power_law(dts: &[f64], stds: &[f64]) -> Result<(f64, f64, f64)> {
    if dts.len() != stds.len() {
        return Err(Error::LengthMismatch(dts.len(), stds.len()));
    }
    if dts.len() < 3 {
        return Err(Error::InvalidParameter(
            "power-law fit needs at least 3 points".into(),
        ));
    }
    if dts.iter().chain(stds).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter(
            "power-law fit needs positive data".into(),
        ));
    }
    let x: Vec<f64> = dts.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = stds.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).powi(2))
        .sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok((slope, stderr, intercept))
}

/// Scaling exponent of the log-return standard deviation over
/// `dt = 1..=dt_max`.
pub fn scaling_exponent(series: &PriceSeries, dt_max: usize) -> Result<ScalingFit> {
    let stds = std_by_scale(series, dt_max)?;
    let dts: Vec<f64> = (1..=dt_max).map(|d| d as f64).collect();
    let (alpha, alpha_stderr, intercept) = fit_power_law(&dts, &stds)?;
    Ok(ScalingFit {
        alpha,
        alpha_stderr,
        intercept,
        dt_range: (1, dt_max),
        std_by_dt: stds,
    })
}
