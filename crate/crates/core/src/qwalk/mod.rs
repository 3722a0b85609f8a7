//! One-dimensional discrete-time quantum walk.
//!
//! A walker carries a two-component spinor (up, down) on every integer site.
//! Each step applies a 2x2 unitary coin to the spinor on every site and then
//! moves the up component one site to the right and the down component one
//! site to the left. Starting from site 0, after `n` steps the support is
//! `[-n, n]` and only sites with `j + n` even are occupied.

mod coin;
mod distribution;
pub(crate) mod ensemble;
mod state;

pub use coin::{coin_matrix, Coin, CoinParams, InitParams};
pub use distribution::{
    distribution, distribution_with, smooth_aggregate, DistributionKind, OddSites,
    PositionDistribution,
};
pub use ensemble::{ensemble_distribution, EnsembleSpec};
pub use state::{evolve, initial_state, step, WalkState};

use std::f64::consts::PI;

pub(crate) const TWO_PI: f64 = 2.0 * PI;
