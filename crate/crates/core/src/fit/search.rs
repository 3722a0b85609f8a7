//! Steepest-ascent hill climbing over the walk angles.
//!
//! Stage 1 scores every point of a coarse grid over `(eta, theta, phi,
//! omega)` crossed with every `(shift, bin_delta)` pair and keeps the best.
//! Stage 2 repeatedly scores all axis-aligned neighbours of the current
//! point (one angular step either way on each angle, one unit either way on
//! `shift` and `bin_delta`), moves to the best neighbour if it strictly
//! lowers the MAE, and otherwise halves the angular steps. It stops once
//! every angular step is below the requested precision.
//!
//! Equal MAE values are resolved lexicographically on
//! `(theta, eta, omega, phi, shift, bin_delta)`, so the outcome does not
//! depend on how the parallel evaluations are scheduled.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::align::{align_to_histogram, Aligned, AlignmentConfig, MAX_BIN_DELTA};
use crate::error::{Error, Result};
use crate::qwalk::ensemble::smoothed_walk;
use crate::qwalk::{
    ensemble_distribution, CoinParams, EnsembleSpec, InitParams, PositionDistribution,
};
use crate::returns::{histogram, ReturnHistogram, ReturnSample};

const TWO_PI: f64 = 2.0 * PI;

/// How the step count of the walk is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "lowercase")]
pub enum NPolicy {
    Fixed { n: usize },
    Ensemble(EnsembleSpec),
}

impl Default for NPolicy {
    fn default() -> Self {
        NPolicy::Fixed { n: 100 }
    }
}

impl NPolicy {
    pub fn walk(&self, init: InitParams, coin: CoinParams) -> Result<PositionDistribution> {
        match self {
            NPolicy::Fixed { n } => smoothed_walk(init, coin, *n),
            NPolicy::Ensemble(spec) => ensemble_distribution(init, coin, spec),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Grid points per angular axis in the coarse stage.
    pub grid_points: usize,
    /// Inclusive shift range, in bins.
    pub shift_range: (i32, i32),
    /// Inclusive bin-count adjustment range, within `[-4, 4]`.
    pub bin_delta_range: (i32, i32),
    /// Cap on refinement iterations (moves plus step halvings).
    pub max_iterations: usize,
    /// Target angular precision in radians.
    pub precision: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 8,
            shift_range: (-3, 3),
            bin_delta_range: (-4, 4),
            max_iterations: 10_000,
            precision: 1e-4,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.grid_points < 2 {
            return bad(format!(
                "grid_points={} must be at least 2",
                self.grid_points
            ));
        }
        if self.shift_range.0 > self.shift_range.1 {
            return bad(format!("empty shift range {:?}", self.shift_range));
        }
        let (lo, hi) = self.bin_delta_range;
        if lo > hi || lo < -MAX_BIN_DELTA || hi > MAX_BIN_DELTA {
            return bad(format!(
                "bin_delta range {:?} not inside [-4, 4]",
                self.bin_delta_range
            ));
        }
        if !(self.precision > 0.0) {
            return bad(format!("precision={} must be positive", self.precision));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive".into());
        }
        Ok(())
    }

    fn spacing(&self) -> [f64; 4] {
        let g = self.grid_points as f64;
        // eta, theta, phi, omega
        [
            TWO_PI / g,
            FRAC_PI_2 / (g - 1.0),
            TWO_PI / g,
            TWO_PI / (g - 1.0),
        ]
    }
}

/// Outcome of a walk fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coin: CoinParams,
    pub init: InitParams,
    /// Alignment with the resolved map.
    pub alignment: AlignmentConfig,
    pub base_bins: usize,
    /// Return coordinate of walk position 0.
    pub initial_position: f64,
    pub mae: f64,
    pub ks: f64,
    pub n_policy: NPolicy,
    pub fitted_curve: Vec<f64>,
    pub empirical_curve: Vec<f64>,
    pub bin_lower_edge: f64,
    pub bin_width: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Best MAE after the coarse stage and after every refinement iteration.
    pub mae_trace: Vec<f64>,
    /// Final angular steps for `(eta, theta, phi, omega)`.
    pub final_steps: [f64; 4],
}

impl FitResult {
    pub fn bin_centers(&self) -> Vec<f64> {
        (0..self.fitted_curve.len())
            .map(|i| self.bin_lower_edge + (i as f64 + 0.5) * self.bin_width)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Candidate {
    angles: [f64; 4],
    shift: i32,
    bin_delta: i32,
}

impl Candidate {
    fn params(&self) -> Result<(CoinParams, InitParams)> {
        let [eta, theta, phi, omega] = self.angles;
        Ok((CoinParams::new(eta, theta)?, InitParams::new(phi, omega)?))
    }

    fn tie_order(&self, other: &Self) -> Ordering {
        let [e1, t1, p1, o1] = self.angles;
        let [e2, t2, p2, o2] = other.angles;
        t1.total_cmp(&t2)
            .then(e1.total_cmp(&e2))
            .then(o1.total_cmp(&o2))
            .then(p1.total_cmp(&p2))
            .then(self.shift.cmp(&other.shift))
            .then(self.bin_delta.cmp(&other.bin_delta))
    }
}

#[derive(Clone, Copy, Debug)]
struct Scored {
    mae: f64,
    cand: Candidate,
}

impl Scored {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mae
            .total_cmp(&other.mae)
            .then_with(|| self.cand.tie_order(&other.cand))
    }

    fn min(self, other: Self) -> Self {
        if other.cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

struct Objective<'a> {
    hists: Vec<Option<ReturnHistogram>>,
    policy: &'a NPolicy,
}

impl Objective<'_> {
    fn hist(&self, bin_delta: i32) -> Option<&ReturnHistogram> {
        self.hists
            .get((bin_delta + MAX_BIN_DELTA) as usize)?
            .as_ref()
    }

    fn walk(&self, cand: &Candidate) -> Result<PositionDistribution> {
        let (coin, init) = cand.params()?;
        self.policy.walk(init, coin)
    }

    fn aligned(&self, walk: &PositionDistribution, cand: &Candidate) -> Result<Aligned> {
        let hist = self.hist(cand.bin_delta).ok_or_else(|| {
            Error::InvalidParameter(format!("no histogram for bin_delta={}", cand.bin_delta))
        })?;
        let cfg = AlignmentConfig::new(cand.shift, cand.bin_delta)?;
        align_to_histogram(walk, hist, &cfg)
    }

    /// MAE, or infinity for candidates that cannot be placed.
    fn score_with(&self, walk: &PositionDistribution, cand: Candidate) -> Scored {
        let mae = self
            .aligned(walk, &cand)
            .map(|a| a.mae())
            .ok()
            .filter(|m| !m.is_nan())
            .unwrap_or(f64::INFINITY);
        Scored { mae, cand }
    }

    fn score(&self, cand: Candidate) -> Scored {
        match self.walk(&cand) {
            Ok(walk) => self.score_with(&walk, cand),
            Err(_) => Scored {
                mae: f64::INFINITY,
                cand,
            },
        }
    }
}

fn wrap_periodic(x: f64) -> f64 {
    let r = x.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

fn wrap_omega(x: f64) -> f64 {
    // the distribution depends on omega only modulo 2pi
    let r = wrap_periodic(x + PI) - PI;
    r.clamp(-PI, PI)
}

fn moved(angles: [f64; 4], axis: usize, delta: f64) -> [f64; 4] {
    let mut out = angles;
    out[axis] = match axis {
        0 | 2 => wrap_periodic(angles[axis] + delta),
        1 => (angles[axis] + delta).clamp(0.0, FRAC_PI_2),
        _ => wrap_omega(angles[axis] + delta),
    };
    out
}

fn neighbours(cur: Candidate, steps: &[f64; 4], cfg: &SearchConfig) -> Vec<Candidate> {
    let mut out = Vec::with_capacity(12);
    for (axis, step) in steps.iter().enumerate() {
        for sign in [-1.0, 1.0] {
            let angles = moved(cur.angles, axis, sign * step);
            if angles != cur.angles {
                out.push(Candidate { angles, ..cur });
            }
        }
    }
    for d in [-1, 1] {
        let shift = cur.shift + d;
        if (cfg.shift_range.0..=cfg.shift_range.1).contains(&shift) {
            out.push(Candidate { shift, ..cur });
        }
        let bin_delta = cur.bin_delta + d;
        if (cfg.bin_delta_range.0..=cfg.bin_delta_range.1).contains(&bin_delta) {
            out.push(Candidate { bin_delta, ..cur });
        }
    }
    out
}

fn coarse_grid(cfg: &SearchConfig) -> Vec<[f64; 4]> {
    let g = cfg.grid_points;
    let [d_eta, d_theta, d_phi, d_omega] = cfg.spacing();
    let mut grid = Vec::with_capacity(g.pow(4));
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                for l in 0..g {
                    grid.push([
                        i as f64 * d_eta,
                        (j as f64 * d_theta).min(FRAC_PI_2),
                        k as f64 * d_phi,
                        (-PI + l as f64 * d_omega).min(PI),
                    ]);
                }
            }
        }
    }
    grid
}

/// Fits a smoothed walk distribution to the histogram of `sample` by
/// minimizing the per-bin MAE.
///
/// A result whose refinement hit `max_iterations` is returned with
/// `converged = false`.
pub fn hill_climb_fit(
    sample: &ReturnSample,
    base_bins: usize,
    n_policy: &NPolicy,
    search: &SearchConfig,
) -> Result<FitResult> {
    search.validate()?;
    let hists = (-MAX_BIN_DELTA..=MAX_BIN_DELTA)
        .map(|d| {
            let inside = (search.bin_delta_range.0..=search.bin_delta_range.1).contains(&d);
            let n = base_bins as i64 + d as i64;
            if inside && n >= 2 {
                histogram(sample, n as usize).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if hists.iter().all(Option::is_none) {
        return Err(Error::InvalidParameter(format!(
            "base_bins={base_bins} leaves no valid bin count"
        )));
    }
    let objective = Objective {
        hists,
        policy: n_policy,
    };

    let hypers: Vec<(i32, i32)> = (search.shift_range.0..=search.shift_range.1)
        .flat_map(|s| (search.bin_delta_range.0..=search.bin_delta_range.1).map(move |d| (s, d)))
        .filter(|&(_, d)| objective.hist(d).is_some())
        .collect();

    let best = coarse_grid(search)
        .into_par_iter()
        .filter_map(|angles| {
            let probe = Candidate {
                angles,
                shift: 0,
                bin_delta: 0,
            };
            let walk = objective.walk(&probe).ok()?;
            hypers
                .iter()
                .map(|&(shift, bin_delta)| {
                    objective.score_with(
                        &walk,
                        Candidate {
                            angles,
                            shift,
                            bin_delta,
                        },
                    )
                })
                .reduce(Scored::min)
        })
        .reduce_with(Scored::min)
        .filter(|s| s.mae.is_finite())
        .ok_or(Error::AlignmentOutOfRange)?;

    let mut current = best;
    let mut steps = search.spacing().map(|s| s / 2.0);
    let mut trace = vec![current.mae];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < search.max_iterations {
        iterations += 1;
        let challenger = neighbours(current.cand, &steps, search)
            .into_par_iter()
            .map(|c| objective.score(c))
            .reduce_with(Scored::min);
        match challenger {
            Some(c) if c.mae < current.mae => current = c,
            _ => {
                steps.iter_mut().for_each(|s| *s /= 2.0);
            }
        }
        trace.push(current.mae);
        if steps.iter().all(|&s| s < search.precision) {
            converged = true;
            break;
        }
    }

    let walk = objective.walk(&current.cand)?;
    let aligned = objective.aligned(&walk, &current.cand)?;
    let (coin, init) = current.cand.params()?;
    let alignment =
        AlignmentConfig::new(current.cand.shift, current.cand.bin_delta)?.with_map(aligned.map)?;
    Ok(FitResult {
        coin,
        init,
        alignment,
        base_bins,
        initial_position: aligned.offset,
        mae: aligned.mae(),
        ks: aligned.ks()?,
        n_policy: *n_policy,
        fitted_curve: aligned.p_fit,
        empirical_curve: aligned.p_emp,
        bin_lower_edge: aligned.lower_edge,
        bin_width: aligned.bin_width,
        converged,
        iterations,
        mae_trace: trace,
        final_steps: steps,
    })
}

/// Replaces the fixed-step walk of `fit` by an ensemble over step counts,
/// keeping the angles and the alignment map.
///
/// The ensemble is rescaled by `n / n_mean` so its width in walk units
/// matches the fixed-step walk the map was fitted to.
pub fn refine_with_ensemble(
    fit: &FitResult,
    sample: &ReturnSample,
    spec: &EnsembleSpec,
) -> Result<FitResult> {
    let NPolicy::Fixed { n } = fit.n_policy else {
        return Err(Error::InvalidParameter(
            "refinement expects a fixed-n fit".into(),
        ));
    };
    let mut walk = ensemble_distribution(fit.init, fit.coin, spec)?;
    let ratio = n as f64 / spec.n_mean;
    if ratio != 1.0 {
        walk = walk.scale_positions(ratio, walk.kind());
    }
    let hist = histogram(sample, fit.alignment.n_bins(fit.base_bins)?)?;
    let aligned = align_to_histogram(&walk, &hist, &fit.alignment)?;
    Ok(FitResult {
        mae: aligned.mae(),
        ks: aligned.ks()?,
        n_policy: NPolicy::Ensemble(*spec),
        initial_position: aligned.offset,
        fitted_curve: aligned.p_fit,
        empirical_curve: aligned.p_emp,
        bin_lower_edge: aligned.lower_edge,
        bin_width: aligned.bin_width,
        ..fit.clone()
    })
}
