#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod support;

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qwfin::{
    coin_matrix, distribution, distribution_with, ensemble_distribution, evolve, smooth_aggregate,
    CoinParams, EnsembleSpec, InitParams, OddSites,
};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[test]
fn path_sum_oracle_hadamard_two_steps() {
    let p = support::path_sum(0.0, PI / 4.0, 0.0, 0.0, 2);
    assert!((p[&-2] - 0.25).abs() < 1e-15);
    assert!((p[&0] - 0.5).abs() < 1e-15);
    assert!((p[&2] - 0.25).abs() < 1e-15);
    assert_eq!(p[&-1] + p[&1], 0.0);
}

#[test]
fn evolve_matches_path_sum_for_small_n() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (eta, theta, phi, omega) = support::random_angles(&mut rng);
        let coin = CoinParams::new(eta, theta).unwrap();
        let init = InitParams::new(phi, omega).unwrap();
        for n in 0..=9 {
            let oracle = support::path_sum(eta, theta, phi, omega, n);
            let d = distribution_with(&evolve(init, coin, n), OddSites::Keep);
            for (x, p) in d.iter() {
                assert!((p - oracle[&(x as i64)]).abs() < 1e-10, "n={n} j={x}");
            }
        }
    }
}

#[test]
fn symmetric_hadamard_matches_path_sum_symmetry() {
    for n in 1..=12 {
        let oracle = support::path_sum(0.0, PI / 4.0, FRAC_PI_2, FRAC_PI_2, n);
        for j in 1..=n as i64 {
            assert!((oracle[&j] - oracle[&-j]).abs() < 1e-12);
        }
    }
}

#[test]
fn ensemble_averages_preserve_mass() {
    let spec = EnsembleSpec {
        samples: 300,
        seed: 5,
        ..EnsembleSpec::default()
    };
    let coin = CoinParams::new(1.3, 0.8).unwrap();
    let init = InitParams::new(4.0, -0.7).unwrap();
    let e = ensemble_distribution(init, coin, &spec).unwrap();
    assert!((e.total() - 1.0).abs() < 1e-10);
    let again = ensemble_distribution(init, coin, &spec).unwrap();
    assert_eq!(e, again);
    let other = ensemble_distribution(init, coin, &EnsembleSpec { seed: 6, ..spec }).unwrap();
    assert_ne!(e, other);
}

fn angles() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0..2.0 * PI, 0.0..=FRAC_PI_2, 0.0..2.0 * PI, -PI..=PI)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coin_is_unitary(eta in -10.0f64..10.0, theta in 0.0..=FRAC_PI_2) {
        let u = coin_matrix(CoinParams::new(eta, theta).unwrap());
        prop_assert!(u.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn walk_invariants((eta, theta, phi, omega) in angles(), n in 0usize..=200) {
        let state = evolve(InitParams::new(phi, omega).unwrap(), CoinParams::new(eta, theta).unwrap(), n);
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        for (j, p) in state.positions().zip(state.probabilities()) {
            prop_assert!(j.abs() <= n as i64);
            if (j + n as i64) % 2 != 0 {
                prop_assert_eq!(p, 0.0);
            }
        }
        let raw = distribution(&state);
        let smooth = smooth_aggregate(&raw).unwrap();
        prop_assert!((smooth.total() - 1.0).abs() < 1e-10);
        prop_assert_eq!(smooth.len(), raw.support().count().div_ceil(3));
    }
}
