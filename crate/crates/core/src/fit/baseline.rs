//! Gaussian and two-component Gaussian-mixture baselines, scored on the same
//! binning as the walk fit. Model densities are integrated over each bin and
//! renormalized to the histogram's range.

use std::f64::consts::{PI, SQRT_2};

use libm::erfc;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use super::metrics::{ks_statistic, mae};
use crate::error::{Error, Result};
use crate::returns::{histogram, mean, population_std, ReturnHistogram, ReturnSample};

const EM_TOLERANCE: f64 = 1e-8;
const EM_MAX_ITERATIONS: usize = 500;
const COLLAPSE_RATIO: f64 = 1e-10;

pub fn normal_cdf(x: f64, mean: f64, std: f64) -> f64 {
    0.5 * erfc(-(x - mean) / (std * SQRT_2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianFitResult {
    pub mean: f64,
    pub std: f64,
    pub mae: f64,
    pub ks: f64,
    pub fitted_curve: Vec<f64>,
    pub empirical_curve: Vec<f64>,
    pub bin_lower_edge: f64,
    pub bin_width: f64,
}

/// Which starting point produced a mixture fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "start", content = "index", rename_all = "snake_case")]
pub enum GmmStart {
    /// Means at the quartiles, pooled std, equal weights.
    Quartiles,
    /// Seeded perturbation of the quartile start.
    Perturbed(usize),
    /// Both components equal to the single-Gaussian fit.
    SingleGaussian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gmm2FitResult {
    /// Components ordered by mean.
    pub weights: [f64; 2],
    pub means: [f64; 2],
    pub stds: [f64; 2],
    pub log_likelihood: f64,
    /// Log-likelihood at every EM iteration of the selected start.
    pub log_likelihood_trace: Vec<f64>,
    pub converged: bool,
    pub start: GmmStart,
    pub mae: f64,
    pub ks: f64,
    pub fitted_curve: Vec<f64>,
    pub empirical_curve: Vec<f64>,
    pub bin_lower_edge: f64,
    pub bin_width: f64,
}

/// Probability of each histogram bin under `cdf`, renormalized to the
/// histogram range.
fn bin_masses(hist: &ReturnHistogram, cdf: impl Fn(f64) -> f64) -> Vec<f64> {
    let c: Vec<f64> = hist.edges.iter().map(|&e| cdf(e)).collect();
    let mut masses: Vec<f64> = c.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let total: f64 = masses.iter().sum();
    if total > 0.0 {
        masses.iter_mut().for_each(|m| *m /= total);
    }
    masses
}

/// Method-of-moments Gaussian.
pub fn gaussian_fit(sample: &ReturnSample, base_bins: usize) -> Result<GaussianFitResult> {
    let hist = histogram(sample, base_bins)?;
    let m = mean(&sample.values);
    let s = population_std(&sample.values);
    if !(s > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let fitted = bin_masses(&hist, |x| normal_cdf(x, m, s));
    Ok(GaussianFitResult {
        mean: m,
        std: s,
        mae: mae(&hist.probabilities, &fitted)?,
        ks: ks_statistic(&hist.probabilities, &fitted)?,
        fitted_curve: fitted,
        empirical_curve: hist.probabilities.clone(),
        bin_lower_edge: hist.lo(),
        bin_width: hist.bin_width(),
    })
}

#[derive(Clone, Copy, Debug)]
struct Mixture {
    weights: [f64; 2],
    means: [f64; 2],
    stds: [f64; 2],
}

impl Mixture {
    fn log_density(&self, k: usize, x: f64) -> f64 {
        let z = (x - self.means[k]) / self.stds[k];
        self.weights[k].ln() - 0.5 * z * z - self.stds[k].ln() - 0.5 * (2.0 * PI).ln()
    }

    fn cdf(&self, x: f64) -> f64 {
        (0..2)
            .map(|k| self.weights[k] * normal_cdf(x, self.means[k], self.stds[k]))
            .sum()
    }

    fn log_likelihood(&self, xs: &[f64]) -> f64 {
        xs.iter()
            .map(|&x| log_sum_exp(self.log_density(0, x), self.log_density(1, x)))
            .sum()
    }

    fn sorted(mut self) -> Self {
        if self.means[1] < self.means[0] {
            self.weights.swap(0, 1);
            self.means.swap(0, 1);
            self.stds.swap(0, 1);
        }
        self
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

struct EmRun {
    mixture: Mixture,
    trace: Vec<f64>,
    converged: bool,
}

/// EM from `start`. `None` if a component collapses.
fn run_em(xs: &[f64], start: Mixture, min_std: f64) -> Option<EmRun> {
    let n = xs.len() as f64;
    let mut mix = start;
    let mut trace: Vec<f64> = Vec::new();
    let mut resp = vec![0.0; xs.len()];
    for _ in 0..EM_MAX_ITERATIONS {
        // E step: responsibilities of component 0 and the current likelihood
        let mut ll = 0.0;
        for (r, &x) in resp.iter_mut().zip(xs) {
            let (a, b) = (mix.log_density(0, x), mix.log_density(1, x));
            let lse = log_sum_exp(a, b);
            *r = (a - lse).exp();
            ll += lse;
        }
        if !ll.is_finite() {
            return None;
        }
        let gained = trace.last().map(|&prev| ll - prev);
        trace.push(ll);
        if matches!(gained, Some(g) if g < EM_TOLERANCE) {
            return Some(EmRun {
                mixture: mix,
                trace,
                converged: true,
            });
        }
        // M step
        let n0: f64 = resp.iter().sum();
        let n1 = n - n0;
        if !(n0 > 0.0 && n1 > 0.0) {
            return None;
        }
        let mu0 = resp.iter().zip(xs).map(|(r, x)| r * x).sum::<f64>() / n0;
        let mu1 = resp.iter().zip(xs).map(|(r, x)| (1.0 - r) * x).sum::<f64>() / n1;
        let v0 = resp
            .iter()
            .zip(xs)
            .map(|(r, x)| r * (x - mu0).powi(2))
            .sum::<f64>()
            / n0;
        let v1 = resp
            .iter()
            .zip(xs)
            .map(|(r, x)| (1.0 - r) * (x - mu1).powi(2))
            .sum::<f64>()
            / n1;
        let (s0, s1) = (v0.sqrt(), v1.sqrt());
        if !(s0 >= min_std && s1 >= min_std) {
            return None;
        }
        mix = Mixture {
            weights: [n0 / n, n1 / n],
            means: [mu0, mu1],
            stds: [s0, s1],
        };
    }
    Some(EmRun {
        mixture: mix,
        trace,
        converged: false,
    })
}

/// Linear-interpolation percentile of sorted data.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, frac) = (pos.floor() as usize, pos.fract());
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// Two-component Gaussian mixture by expectation-maximization.
///
/// Starts from the quartiles (pooled within-half std, equal weights) and
/// from `restarts` seeded perturbations of that start; the single-Gaussian
/// solution is kept as a further candidate. The candidate with the highest
/// log-likelihood wins. Starts whose components collapse are discarded.
pub fn gmm2_fit(
    sample: &ReturnSample,
    base_bins: usize,
    seed: u64,
    restarts: usize,
) -> Result<Gmm2FitResult> {
    let xs = &sample.values;
    if xs.len() < 10 {
        return Err(Error::InvalidParameter(format!(
            "mixture fit needs at least 10 values, got {}",
            xs.len()
        )));
    }
    let hist = histogram(sample, base_bins)?;
    let m = mean(xs);
    let s = population_std(xs);
    if !(s > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let min_std = COLLAPSE_RATIO * s;

    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    let half = sorted.len() / 2;
    let (lower, upper) = sorted.split_at(half);
    let within: f64 = [lower, upper]
        .iter()
        .map(|part| {
            let pm = mean(part);
            part.iter().map(|x| (x - pm).powi(2)).sum::<f64>()
        })
        .sum();
    let pooled = (within / sorted.len() as f64).sqrt();
    let pooled = if pooled >= min_std { pooled } else { s };
    let quartiles = Mixture {
        weights: [0.5, 0.5],
        means: [percentile(&sorted, 0.25), percentile(&sorted, 0.75)],
        stds: [pooled, pooled],
    };

    let mut starts = vec![(GmmStart::Quartiles, quartiles)];
    let weight_dist = Uniform::new(0.2, 0.8).expect("valid range");
    for r in 1..=restarts {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let z: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let means = [
            quartiles.means[0] + 0.5 * s * z[0],
            quartiles.means[1] + 0.5 * s * z[1],
        ];
        let stds = [pooled * (0.5 * z[2]).exp(), pooled * (0.5 * z[3]).exp()];
        let w = weight_dist.sample(&mut rng);
        starts.push((
            GmmStart::Perturbed(r),
            Mixture {
                weights: [w, 1.0 - w],
                means,
                stds,
            },
        ));
    }

    let mut candidates: Vec<(GmmStart, EmRun)> = starts
        .into_iter()
        .filter_map(|(label, start)| run_em(xs, start, min_std).map(|run| (label, run)))
        .collect();
    if candidates.is_empty() {
        return Err(Error::ComponentCollapse);
    }
    let single = Mixture {
        weights: [0.5, 0.5],
        means: [m, m],
        stds: [s, s],
    };
    candidates.push((
        GmmStart::SingleGaussian,
        EmRun {
            mixture: single,
            trace: vec![single.log_likelihood(xs)],
            converged: true,
        },
    ));

    let (start, best) = candidates
        .into_iter()
        .reduce(|a, b| {
            let (la, lb) = (*a.1.trace.last().unwrap(), *b.1.trace.last().unwrap());
            if lb > la {
                b
            } else {
                a
            }
        })
        .expect("non-empty");
    let mix = best.mixture.sorted();
    let fitted = bin_masses(&hist, |x| mix.cdf(x));
    Ok(Gmm2FitResult {
        weights: mix.weights,
        means: mix.means,
        stds: mix.stds,
        log_likelihood: *best.trace.last().unwrap(),
        log_likelihood_trace: best.trace,
        converged: best.converged,
        start,
        mae: mae(&hist.probabilities, &fitted)?,
        ks: ks_statistic(&hist.probabilities, &fitted)?,
        fitted_curve: fitted,
        empirical_curve: hist.probabilities.clone(),
        bin_lower_edge: hist.lo(),
        bin_width: hist.bin_width(),
    })
}
