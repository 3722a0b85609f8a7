//! Averaging smoothed walk distributions over normally distributed step
//! counts.
//!
//! Sample `i` draws its step count from its own ChaCha20 stream
//! (`seed_from_u64(seed)` with stream `i`), so the result does not depend on
//! evaluation order. Draws below 2 are redrawn; accepted draws are rounded to
//! the nearest even integer.
//!
//! Distributions of different `n` are mapped onto a common grid: every
//! smoothed coordinate `x` is rescaled to `x / n`, assigned to the nearest of
//! 201 equally spaced points on `[-1, 1]`, and the grid is reported in walk
//! units at `n_mean`. When all samples share the same `n` no re-gridding
//! happens and the smoothed walk itself is returned.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coin::{CoinParams, InitParams};
use super::distribution::{distribution, smooth_aggregate, DistributionKind, PositionDistribution};
use super::state::evolve;
use crate::error::{Error, Result};

pub const GRID_POINTS: usize = 201;
const MAX_REDRAWS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n_mean: f64,
    pub n_std: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            n_mean: 100.0,
            n_std: 15.0,
            samples: 1000,
            seed: 42,
        }
    }
}

impl EnsembleSpec {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter(
                "ensemble needs at least one sample".into(),
            ));
        }
        if !(self.n_mean > 0.0) || !self.n_mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "n_mean={} must be positive",
                self.n_mean
            )));
        }
        if !(self.n_std >= 0.0) || !self.n_std.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "n_std={} must be non-negative",
                self.n_std
            )));
        }
        Ok(())
    }

    /// The step count used by sample `index`.
    pub fn draw(&self, index: usize) -> Result<usize> {
        let normal = Normal::new(self.n_mean, self.n_std)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        for _ in 0..MAX_REDRAWS {
            let x = normal.sample(&mut rng);
            if x >= 2.0 {
                return Ok(2 * (x / 2.0).round() as usize);
            }
        }
        Err(Error::InvalidParameter(format!(
            "n_mean={} too small: step counts keep rounding below 2",
            self.n_mean
        )))
    }

    /// Number of samples per distinct step count.
    pub fn step_counts(&self) -> Result<BTreeMap<usize, usize>> {
        self.validate()?;
        let draws: Vec<usize> = (0..self.samples)
            .into_par_iter()
            .map(|i| self.draw(i))
            .collect::<Result<_>>()?;
        let mut counts = BTreeMap::new();
        for n in draws {
            *counts.entry(n).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

pub(crate) fn smoothed_walk(
    init: InitParams,
    coin: CoinParams,
    n: usize,
) -> Result<PositionDistribution> {
    smooth_aggregate(&distribution(&evolve(init, coin, n)))
}

/// Equal-weight average of smoothed walks over step counts drawn from
/// `N(n_mean, n_std^2)`.
pub fn ensemble_distribution(
    init: InitParams,
    coin: CoinParams,
    spec: &EnsembleSpec,
) -> Result<PositionDistribution> {
    let counts = spec.step_counts()?;
    if counts.len() == 1 {
        let (&n, _) = counts.iter().next().expect("one entry");
        let d = smoothed_walk(init, coin, n)?;
        return Ok(d.scale_positions(1.0, DistributionKind::Ensemble));
    }

    let walks: Vec<(usize, usize, PositionDistribution)> = counts
        .par_iter()
        .map(|(&n, &count)| smoothed_walk(init, coin, n).map(|d| (n, count, d)))
        .collect::<Result<_>>()?;

    let half = (GRID_POINTS - 1) as f64 / 2.0;
    let mut grid = vec![0.0; GRID_POINTS];
    for (n, count, d) in &walks {
        let weight = *count as f64 / spec.samples as f64;
        for (x, p) in d.iter() {
            let u = x / *n as f64;
            let k = ((u + 1.0) * half)
                .round()
                .clamp(0.0, (GRID_POINTS - 1) as f64) as usize;
            grid[k] += weight * p;
        }
    }
    let positions = (0..GRID_POINTS)
        .map(|k| spec.n_mean * (k as f64 / half - 1.0))
        .collect();
    Ok(PositionDistribution::from_parts(
        positions,
        grid,
        DistributionKind::Ensemble,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_normal_matches_fixed_walk() {
        let init = InitParams::new(0.4, 1.2).unwrap();
        let coin = CoinParams::new(1.0, 0.6).unwrap();
        let spec = EnsembleSpec {
            n_mean: 100.0,
            n_std: 0.0,
            samples: 1000,
            seed: 7,
        };
        let e = ensemble_distribution(init, coin, &spec).unwrap();
        let s = smoothed_walk(init, coin, 100).unwrap();
        assert_eq!(e.positions(), s.positions());
        assert_eq!(e.probabilities(), s.probabilities());
        assert_eq!(e.kind(), DistributionKind::Ensemble);
    }

    #[test]
    fn draws_round_to_even_and_stay_above_two() {
        let spec = EnsembleSpec {
            n_mean: 3.0,
            n_std: 5.0,
            samples: 500,
            seed: 1,
        };
        let counts = spec.step_counts().unwrap();
        assert!(counts.keys().all(|&n| n >= 2 && n % 2 == 0));
        assert_eq!(counts.values().sum::<usize>(), 500);
    }

    #[test]
    fn reproducible_and_normalized() {
        let init = InitParams::symmetric();
        let coin = CoinParams::hadamard();
        let spec = EnsembleSpec {
            samples: 200,
            ..EnsembleSpec::default()
        };
        let a = ensemble_distribution(init, coin, &spec).unwrap();
        let b = ensemble_distribution(init, coin, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), GRID_POINTS);
        assert!((a.total() - 1.0).abs() < 1e-10);
        assert_eq!(a.positions()[0], -100.0);
        assert_eq!(a.positions()[200], 100.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let init = InitParams::up();
        let coin = CoinParams::hadamard();
        for spec in [
            EnsembleSpec {
                samples: 0,
                ..EnsembleSpec::default()
            },
            EnsembleSpec {
                n_mean: 0.0,
                ..EnsembleSpec::default()
            },
            EnsembleSpec {
                n_std: -1.0,
                ..EnsembleSpec::default()
            },
            EnsembleSpec {
                n_mean: 0.5,
                n_std: 0.0,
                ..EnsembleSpec::default()
            },
        ] {
            assert!(
                ensemble_distribution(init, coin, &spec).is_err(),
                "{spec:?}"
            );
        }
    }
}
