use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::coin::{coin_matrix, Coin, CoinParams, InitParams};
use crate::error::{Error, Result};

const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Spinor amplitudes of the walk after `n` steps.
///
/// `up[k]` and `down[k]` hold `a_j(n)` and `b_j(n)` for `j = k - n`, so both
/// vectors have length `2n + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkState {
    n: usize,
    up: Vec<C64>,
    down: Vec<C64>,
}

impl WalkState {
    pub fn steps(&self) -> usize {
        self.n
    }

    /// Sites `-n..=n` in storage order.
    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let n = self.n as i64;
        -n..=n
    }

    pub fn up(&self) -> &[C64] {
        &self.up
    }

    pub fn down(&self) -> &[C64] {
        &self.down
    }

    /// `(a_j, b_j)`; zero outside `[-n, n]`.
    pub fn amplitude(&self, j: i64) -> (C64, C64) {
        let k = j + self.n as i64;
        if k < 0 || k as usize >= self.up.len() {
            return (C64::default(), C64::default());
        }
        (self.up[k as usize], self.down[k as usize])
    }

    /// `|a_j|^2 + |b_j|^2` for every site in storage order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.up
            .iter()
            .zip(&self.down)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.probabilities().iter().sum()
    }
}

/// The spinor of `params` placed on site 0.
pub fn initial_state(params: InitParams) -> WalkState {
    let (a, b) = params.spinor();
    WalkState {
        n: 0,
        up: vec![a],
        down: vec![b],
    }
}

/// One coin toss followed by the conditional shift.
pub fn step(state: &WalkState, coin: &Coin) -> Result<WalkState> {
    let dev = coin.unitarity_deviation();
    if !(dev <= UNITARITY_TOLERANCE) {
        return Err(Error::NonUnitaryCoin(dev));
    }
    let len = state.up.len() + 2;
    let mut up = vec![C64::default(); len];
    let mut down = vec![C64::default(); len];
    for (k, (&a, &b)) in state.up.iter().zip(&state.down).enumerate() {
        let (a, b) = coin.apply(a, b);
        // site j = k - n lands at storage index k + 2 (up, j + 1) or k (down, j - 1)
        up[k + 2] = a;
        down[k] = b;
    }
    Ok(WalkState {
        n: state.n + 1,
        up,
        down,
    })
}

/// `n` steps of the walk from `initial_state(init)`.
///
/// Runs in `O(n^2)` with two buffers of the final size, touching only the
/// occupied parity sublattice each step.
pub fn evolve(init: InitParams, coin: CoinParams, n: usize) -> WalkState {
    let coin = coin_matrix(coin);
    let width = 2 * n + 1;
    let (a0, b0) = init.spinor();
    let mut up = vec![C64::default(); width];
    let mut down = vec![C64::default(); width];
    up[n] = a0;
    down[n] = b0;
    let mut next_up = vec![C64::default(); width];
    let mut next_down = vec![C64::default(); width];

    for t in 0..n {
        // occupied sites at step t: j = -t, -t+2, ..., t  (index n + j)
        next_up.iter_mut().for_each(|z| *z = C64::default());
        next_down.iter_mut().for_each(|z| *z = C64::default());
        let mut k = n - t;
        while k <= n + t {
            let (a, b) = coin.apply(up[k], down[k]);
            next_up[k + 1] = a;
            next_down[k - 1] = b;
            k += 2;
        }
        std::mem::swap(&mut up, &mut next_up);
        std::mem::swap(&mut down, &mut next_down);
    }
    WalkState { n, up, down }
}
