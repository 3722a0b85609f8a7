use serde::{Deserialize, Serialize};

use super::series::ReturnSample;
use crate::error::{Error, Result};

/// Equal-width histogram of a return sample, normalized to unit mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnHistogram {
    pub n_bins: usize,
    pub edges: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl ReturnHistogram {
    /// Histogram on `n_bins` equal bins over `[lo, hi]` with the given
    /// probabilities.
    pub fn from_parts(lo: f64, hi: f64, probabilities: Vec<f64>) -> Result<Self> {
        let n_bins = probabilities.len();
        if n_bins == 0 {
            return Err(Error::EmptyDistribution);
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::ZeroWidthSupport);
        }
        if probabilities.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidParameter("negative bin probability".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "bin probabilities sum to {total}"
            )));
        }
        Ok(Self {
            n_bins,
            edges: equal_edges(lo, hi, n_bins),
            probabilities,
        })
    }

    pub fn lo(&self) -> f64 {
        self.edges[0]
    }

    pub fn hi(&self) -> f64 {
        self.edges[self.n_bins]
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi() - self.lo()) / self.n_bins as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn center(&self, bin: usize) -> f64 {
        0.5 * (self.edges[bin] + self.edges[bin + 1])
    }
}

pub(crate) fn equal_edges(lo: f64, hi: f64, n_bins: usize) -> Vec<f64> {
    let w = (hi - lo) / n_bins as f64;
    let mut edges: Vec<f64> = (0..=n_bins).map(|k| lo + k as f64 * w).collect();
    edges[n_bins] = hi;
    edges
}

/// Bin index of `x` on `n_bins` equal bins over `[lo, hi]`, the last bin
/// closed on the right. `None` outside the range.
pub(crate) fn bin_index(x: f64, lo: f64, hi: f64, n_bins: usize) -> Option<usize> {
    if !(x >= lo && x <= hi) {
        return None;
    }
    let t = (x - lo) / (hi - lo) * n_bins as f64;
    Some((t.floor() as usize).min(n_bins - 1))
}

/// Histogram of weighted points on `n_bins` equal bins spanning the points'
/// own range. Weights are normalized.
pub(crate) fn weighted_histogram(points: &[(f64, f64)], n_bins: usize) -> Result<ReturnHistogram> {
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !(lo < hi) {
        return Err(Error::ZeroWidthSupport);
    }
    let total: f64 = points.iter().map(|p| p.1).sum();
    let mut probabilities = vec![0.0; n_bins];
    for &(x, w) in points {
        let k = bin_index(x, lo, hi, n_bins).expect("point inside its own range");
        probabilities[k] += w / total;
    }
    Ok(ReturnHistogram {
        n_bins,
        edges: equal_edges(lo, hi, n_bins),
        probabilities,
    })
}

/// Equal-width histogram over `[min, max]` of the sample.
pub fn histogram(sample: &ReturnSample, n_bins: usize) -> Result<ReturnHistogram> {
    if n_bins < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_bins={n_bins} must be at least 2"
        )));
    }
    if sample.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let lo = sample.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sample
        .values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter("non-finite return value".into()));
    }
    if lo == hi {
        return Err(Error::ZeroWidthSupport);
    }
    let mut counts = vec![0u64; n_bins];
    for &v in &sample.values {
        counts[bin_index(v, lo, hi, n_bins).expect("value inside sample range")] += 1;
    }
    let total = sample.len() as f64;
    let probabilities = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(ReturnHistogram {
        n_bins,
        edges: equal_edges(lo, hi, n_bins),
        probabilities,
    })
}

/// Quantile of a binned distribution whose mass is spread uniformly inside
/// each bin (piecewise-linear CDF). `edges` has one more entry than `probs`.
pub fn binned_quantile(edges: &[f64], probs: &[f64], p: f64) -> f64 {
    debug_assert_eq!(edges.len(), probs.len() + 1);
    let total: f64 = probs.iter().sum();
    let target = p.clamp(0.0, 1.0) * total;
    let mut cumulative = 0.0;
    let mut last_occupied = None;
    for (k, &mass) in probs.iter().enumerate() {
        if mass <= 0.0 {
            continue;
        }
        if cumulative + mass >= target {
            let frac = ((target - cumulative) / mass).clamp(0.0, 1.0);
            return edges[k] + frac * (edges[k + 1] - edges[k]);
        }
        cumulative += mass;
        last_occupied = Some(k);
    }
    last_occupied.map_or(edges[edges.len() - 1], |k| edges[k + 1])
}

/// Width of the central 95% of the histogram's probability.
pub fn effective_range(hist: &ReturnHistogram) -> f64 {
    let (lo, hi) = central_interval(hist);
    hi - lo
}

/// 2.5% and 97.5% quantiles.
pub(crate) fn central_interval(hist: &ReturnHistogram) -> (f64, f64) {
    (
        binned_quantile(&hist.edges, &hist.probabilities, 0.025),
        binned_quantile(&hist.edges, &hist.probabilities, 0.975),
    )
}
