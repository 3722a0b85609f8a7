//! Placing a walk distribution on the binning of an empirical histogram.
//!
//! Walk coordinates `x` map to returns through `g = scale * x + offset`.
//! Unless a map is supplied, `scale` stretches the walk's effective range
//! onto the histogram's and the centres of the two central-95% intervals are
//! made to coincide; `offset` then adds `shift` whole bins. The walk's
//! effective range is measured the same way as the histogram's: its points
//! are binned into the same number of equal bins across their own support.
//!
//! Walk mass falling outside the histogram lands in extra bins of the same
//! width; the empirical vector gets zeros there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qwalk::{DistributionKind, PositionDistribution};
use crate::returns::histogram::{central_interval, weighted_histogram};
use crate::returns::{histogram, ReturnHistogram, ReturnSample};

pub const MAX_BIN_DELTA: i32 = 4;
const MAX_PADDING: i64 = 10_000;
// walk points this close to an outer edge (in bins) count as inside
const EDGE_SNAP: f64 = 1e-9;

/// `g = scale * x + origin` before the shift is applied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub scale: f64,
    pub origin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlignmentConfig {
    /// Offset of the walk relative to the histogram, in bins.
    pub shift: i32,
    /// Change to the base bin count, within `[-4, 4]`.
    pub bin_delta: i32,
    /// Fixed map; `None` matches effective ranges.
    pub map: Option<AffineMap>,
    /// Drift term, always 0: placement is carried by `shift` alone.
    pub mu_drift: f64,
}

impl AlignmentConfig {
    pub fn new(shift: i32, bin_delta: i32) -> Result<Self> {
        let cfg = Self {
            shift,
            bin_delta,
            map: None,
            mu_drift: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_map(mut self, map: AffineMap) -> Result<Self> {
        self.map = Some(map);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bin_delta.abs() > MAX_BIN_DELTA {
            return Err(Error::InvalidParameter(format!(
                "bin_delta={} outside [-{MAX_BIN_DELTA}, {MAX_BIN_DELTA}]",
                self.bin_delta
            )));
        }
        if self.mu_drift != 0.0 {
            return Err(Error::InvalidParameter("mu_drift is fixed at 0".into()));
        }
        if let Some(m) = self.map {
            if !(m.scale > 0.0) || !m.scale.is_finite() || !m.origin.is_finite() {
                return Err(Error::InvalidParameter(format!("invalid map {m:?}")));
            }
        }
        Ok(())
    }

    pub fn n_bins(&self, base_bins: usize) -> Result<usize> {
        let n = base_bins as i64 + self.bin_delta as i64;
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "base_bins={base_bins} with bin_delta={} leaves fewer than 2 bins",
                self.bin_delta
            )));
        }
        Ok(n as usize)
    }
}

/// Paired per-bin probabilities on a shared, zero-padded binning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aligned {
    pub p_emp: Vec<f64>,
    pub p_fit: Vec<f64>,
    /// Left edge of the first (possibly padded) bin.
    pub lower_edge: f64,
    pub bin_width: f64,
    pub pad_left: usize,
    pub pad_right: usize,
    /// Bin count of the empirical histogram before padding.
    pub n_hist: usize,
    /// The map that was used, resolved if it was matched.
    pub map: AffineMap,
    /// Return coordinate of walk position 0.
    pub offset: f64,
}

impl Aligned {
    /// Sum of absolute per-bin differences over the padded support, divided
    /// by the empirical bin count. Equals [`mae`](crate::fit::mae) of the two
    /// vectors when no padding was needed; walk mass pushed outside the
    /// histogram is fully penalized instead of diluted by the extra bins.
    pub fn mae(&self) -> f64 {
        let total: f64 = self
            .p_emp
            .iter()
            .zip(&self.p_fit)
            .map(|(a, b)| (a - b).abs())
            .sum();
        total / self.n_hist as f64
    }

    pub fn ks(&self) -> Result<f64> {
        crate::fit::ks_statistic(&self.p_emp, &self.p_fit)
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        (0..self.p_emp.len())
            .map(|i| self.lower_edge + (i as f64 + 0.5) * self.bin_width)
            .collect()
    }
}

fn matched_map(points: &[(f64, f64)], hist: &ReturnHistogram) -> Result<AffineMap> {
    let walk_hist = weighted_histogram(points, hist.n_bins)?;
    let (wl, wh) = central_interval(&walk_hist);
    let (hl, hh) = central_interval(hist);
    let (walk_range, hist_range) = (wh - wl, hh - hl);
    if !(walk_range > 0.0) || !(hist_range > 0.0) {
        return Err(Error::ZeroWidthSupport);
    }
    let scale = hist_range / walk_range;
    Ok(AffineMap {
        scale,
        origin: 0.5 * (hl + hh) - scale * 0.5 * (wl + wh),
    })
}

/// Aligns `qw` with an already built histogram (whose bin count is taken
/// as given; `cfg.bin_delta` is not re-applied).
pub fn align_to_histogram(
    qw: &PositionDistribution,
    hist: &ReturnHistogram,
    cfg: &AlignmentConfig,
) -> Result<Aligned> {
    cfg.validate()?;
    if qw.kind() == DistributionKind::Raw {
        return Err(Error::InvalidParameter(
            "alignment expects a smoothed or ensemble distribution".into(),
        ));
    }
    let points: Vec<(f64, f64)> = qw.support().collect();
    if points.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let map = match cfg.map {
        Some(m) => m,
        None => matched_map(&points, hist)?,
    };
    let n = hist.n_bins;
    let (lo, hi) = (hist.lo(), hist.hi());
    let width = hist.bin_width();
    let offset = map.origin + cfg.mu_drift + cfg.shift as f64 * width;

    let mut placed = Vec::with_capacity(points.len());
    let (mut kmin, mut kmax) = (i64::MAX, i64::MIN);
    let mut inside = false;
    for &(x, p) in &points {
        let g = map.scale * x + offset;
        let t = (g - lo) / (hi - lo) * n as f64;
        if !t.is_finite() {
            return Err(Error::AlignmentOutOfRange);
        }
        let mut k = t.floor();
        if k == n as f64 && t <= n as f64 + EDGE_SNAP {
            k -= 1.0;
        } else if k == -1.0 && t >= -EDGE_SNAP {
            k = 0.0;
        }
        if k < -(MAX_PADDING as f64) || k > (n as i64 + MAX_PADDING) as f64 {
            return Err(Error::AlignmentOutOfRange);
        }
        let k = k as i64;
        inside |= (0..n as i64).contains(&k);
        kmin = kmin.min(k);
        kmax = kmax.max(k);
        placed.push((k, p));
    }
    if !inside {
        return Err(Error::AlignmentOutOfRange);
    }
    let pad_left = (-kmin).max(0) as usize;
    let pad_right = (kmax - (n as i64 - 1)).max(0) as usize;
    if (pad_left + pad_right) as i64 > MAX_PADDING {
        return Err(Error::AlignmentOutOfRange);
    }
    let len = n + pad_left + pad_right;

    let mut p_fit = vec![0.0; len];
    for (k, p) in placed {
        p_fit[(k + pad_left as i64) as usize] += p;
    }
    let mut p_emp = vec![0.0; len];
    p_emp[pad_left..pad_left + n].copy_from_slice(&hist.probabilities);
    normalize(&mut p_fit);
    normalize(&mut p_emp);

    Ok(Aligned {
        p_emp,
        p_fit,
        lower_edge: lo - pad_left as f64 * width,
        bin_width: width,
        pad_left,
        pad_right,
        n_hist: n,
        map,
        offset,
    })
}

fn normalize(p: &mut [f64]) {
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|v| *v /= total);
    }
}

/// Builds the histogram with `base_bins + cfg.bin_delta` bins and aligns
/// `qw` with it.
pub fn align(
    qw: &PositionDistribution,
    sample: &ReturnSample,
    base_bins: usize,
    cfg: &AlignmentConfig,
) -> Result<Aligned> {
    let hist = histogram(sample, cfg.n_bins(base_bins)?)?;
    align_to_histogram(qw, &hist, cfg)
}
