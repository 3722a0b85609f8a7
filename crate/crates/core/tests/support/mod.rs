//! Test-only oracles and synthetic data.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use qwfin::{PositionDistribution, PriceSeries, ReturnSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

/// Walk probabilities by summing amplitudes over every spin path.
///
/// Starting spin `s0` carries `(cos(w/2), e^{i phi} sin(w/2))[s0]`; each step
/// multiplies by the coin entry `U[s_new][s_old]` and moves +1 for up,
/// -1 for down. Returns `P_j` for `j = -n..=n`.
pub fn path_sum(eta: f64, theta: f64, phi: f64, omega: f64, n: usize) -> BTreeMap<i64, f64> {
    let e = C64::from_polar(1.0, eta);
    let (s, c) = (theta.sin(), theta.cos());
    let u = [[e * c, C64::new(s, 0.0)], [C64::new(s, 0.0), -e.conj() * c]];
    let init = [
        C64::new((omega / 2.0).cos(), 0.0),
        C64::from_polar((omega / 2.0).sin(), phi),
    ];
    let mut amp: BTreeMap<(i64, usize), C64> = BTreeMap::new();
    for (s0, &a0) in init.iter().enumerate() {
        for path in 0u64..(1u64 << n) {
            let mut a = a0;
            let mut spin = s0;
            let mut j = 0i64;
            for k in 0..n {
                let next = ((path >> k) & 1) as usize;
                a *= u[next][spin];
                spin = next;
                j += if spin == 0 { 1 } else { -1 };
            }
            *amp.entry((j, spin)).or_default() += a;
        }
    }
    let mut p: BTreeMap<i64, f64> = (-(n as i64)..=n as i64).map(|j| (j, 0.0)).collect();
    for ((j, _), a) in amp {
        *p.get_mut(&j).unwrap() += a.norm_sqr();
    }
    p
}

/// Random angles `(eta, theta, phi, omega)` in their domains.
pub fn random_angles(rng: &mut impl Rng) -> (f64, f64, f64, f64) {
    use std::f64::consts::{FRAC_PI_2, PI};
    (
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..=FRAC_PI_2),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(-PI..=PI),
    )
}

/// Geometric Brownian path with i.i.d. normal log increments.
pub fn gbm_series(steps: usize, drift: f64, vol: f64, seed: u64) -> PriceSeries {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let normal = Normal::new(drift, vol).unwrap();
    let mut log_price = 100f64.ln();
    let mut prices = Vec::with_capacity(steps + 1);
    prices.push(log_price.exp());
    for _ in 0..steps {
        log_price += normal.sample(&mut rng);
        prices.push(log_price.exp());
    }
    PriceSeries::from_prices("GBM", &prices).unwrap()
}

/// Equal mixture of two normals.
pub fn mixture_sample(n: usize, means: [f64; 2], std: f64, seed: u64) -> ReturnSample {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let comps = [
        Normal::new(means[0], std).unwrap(),
        Normal::new(means[1], std).unwrap(),
    ];
    let values = (0..n)
        .map(|_| comps[rng.random_range(0..2)].sample(&mut rng))
        .collect();
    ReturnSample::new(504, values)
}

pub fn normal_sample(n: usize, mean: f64, std: f64, seed: u64) -> ReturnSample {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let d = Normal::new(mean, std).unwrap();
    ReturnSample::new(504, (0..n).map(|_| d.sample(&mut rng)).collect())
}

/// Return sample whose values are the walk points under `g = scale*x + offset`,
/// each repeated in proportion to its probability (at least once).
pub fn walk_target(
    walk: &PositionDistribution,
    scale: f64,
    offset: f64,
    total: usize,
) -> ReturnSample {
    let mut values = Vec::with_capacity(total + walk.len());
    for (x, p) in walk.support() {
        let copies = ((p * total as f64).round() as usize).max(1);
        values.extend(std::iter::repeat_n(scale * x + offset, copies));
    }
    ReturnSample::new(504, values)
}
