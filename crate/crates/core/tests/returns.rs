#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod support;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qwfin::returns::{fit_power_law, mean, population_std};
use qwfin::{
    bimodality, detect_modes, histogram, log_returns, scaling_exponent, skewness, std_by_scale,
    PriceSeries, ReturnHistogram, ReturnSample,
};

fn sample(values: Vec<f64>) -> ReturnSample {
    ReturnSample::new(1, values)
}

fn prices() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5f64..2.0, 10..80).prop_map(|steps| {
        steps
            .iter()
            .scan(100.0, |p, r| {
                *p *= r;
                Some(*p)
            })
            .collect()
    })
}

fn spread_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3..200)
        .prop_filter("needs spread", |v| population_std(v) > 1e-3)
}

proptest! {
    #[test]
    fn returns_are_additive(p in prices(), dt in 1usize..4) {
        let s = PriceSeries::from_prices("P", &p).unwrap();
        prop_assume!(2 * dt < s.len());
        let one = log_returns(&s, dt).unwrap().values;
        let two = log_returns(&s, 2 * dt).unwrap().values;
        for (t, g) in two.iter().enumerate() {
            prop_assert!((g - (one[t] + one[t + dt])).abs() < 1e-12);
        }
    }

    #[test]
    fn histogram_is_normalized(v in spread_values(), bins in 2usize..60) {
        let h = histogram(&sample(v), bins).unwrap();
        prop_assert_eq!(h.probabilities.len(), bins);
        prop_assert_eq!(h.edges.len(), bins + 1);
        prop_assert!((h.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bm_invariant_under_affine_edges(
        probs in prop::collection::vec(0u32..20, 3..40),
        a in 1e-3f64..1e3,
        b in -10.0f64..10.0,
    ) {
        let total: u32 = probs.iter().sum();
        prop_assume!(total > 0);
        let p: Vec<f64> = probs.iter().map(|&c| c as f64 / total as f64).collect();
        let n = p.len() as f64;
        let base = ReturnHistogram::from_parts(0.0, n, p.clone()).unwrap();
        let moved = ReturnHistogram::from_parts(b, b + a * n, p).unwrap();
        let (r0, r1) = (bimodality(&base), bimodality(&moved));
        prop_assert!((r0.bm - r1.bm).abs() < 1e-12);
        prop_assert_eq!(detect_modes(&base), detect_modes(&moved));
        if r0.delta_x <= r0.l_eff {
            prop_assert!((0.0..=1.0).contains(&r0.bm));
        }
    }

    #[test]
    fn skewness_affine_and_reflection(v in spread_values(), a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let g = skewness(&sample(v.clone())).unwrap();
        let moved = skewness(&sample(v.iter().map(|x| a * x + b).collect())).unwrap();
        let flipped = skewness(&sample(v.iter().map(|x| -x).collect())).unwrap();
        prop_assert!((g - moved).abs() < 1e-9);
        prop_assert!((g + flipped).abs() < 1e-12);
    }
}

#[test]
fn two_spikes_have_unit_contrast() {
    for n in [3usize, 5, 20, 101] {
        let h = histogram(&sample(vec![-1.0, 1.0]), n).unwrap();
        let r = bimodality(&h);
        let n = n as f64;
        assert_eq!(r.mode_count, 2);
        assert_eq!((r.p_max1, r.p_max2, r.p_min), (0.5, 0.5, 0.0));
        // quantiles sit 5% inside the outer edges of the end bins
        assert_abs_diff_eq!(r.l_eff, 2.0 * (n - 0.1) / n, epsilon = 1e-12);
        assert_abs_diff_eq!(r.bm, r.delta_x / r.l_eff, epsilon = 1e-15);
        assert_abs_diff_eq!(r.bm, (n - 1.0) / (n - 0.1), epsilon = 1e-12);
    }
}

#[test]
fn skewness_reference_values() {
    assert_abs_diff_eq!(
        skewness(&sample(vec![0.0, 0.0, 1.0])).unwrap(),
        1.0 / 2f64.sqrt(),
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        skewness(&sample(vec![-2.0, -1.0, 0.0, 1.0, 2.0])).unwrap(),
        0.0,
        epsilon = 1e-14
    );
    assert!(skewness(&sample(vec![1.0, 1.0, 1.0])).is_err());
    assert!(skewness(&sample(vec![1.0, 2.0])).is_err());
}

#[test]
fn moments_of_known_sample() {
    let v = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
    assert_eq!(mean(&v), 5.0);
    assert_eq!(population_std(&v), 2.0);
}

#[test]
fn gbm_scaling_exponent_is_one_half() {
    let s = support::gbm_series(100_000, 0.0003, 0.013, 2024);
    let stds = std_by_scale(&s, 504).unwrap();
    assert_eq!(stds.len(), 504);
    let fit = scaling_exponent(&s, 504).unwrap();
    assert!((fit.alpha - 0.5).abs() < 0.02, "alpha = {}", fit.alpha);
    assert_eq!(fit.dt_range, (1, 504));
}

#[test]
fn exact_power_law_recovered() {
    let dts: Vec<f64> = (1..=504).map(|d| d as f64).collect();
    for alpha in [0.3, 0.5, 0.62] {
        let stds: Vec<f64> = dts.iter().map(|d| 0.02 * d.powf(alpha)).collect();
        let (slope, stderr, _) = fit_power_law(&dts, &stds).unwrap();
        assert_abs_diff_eq!(slope, alpha, epsilon = 1e-12);
        assert!(stderr < 1e-10);
    }
}

#[test]
fn csv_ingestion() {
    let text = "\u{feff}Date,Open,High\n\
                2020-01-02,10.0,11\n\
                2020-01-03 00:00:00,null,11\n\
                2020-01-06T00:00:00,11.0,12\n\
                2020-01-07,0,12\n\
                2020-01-08,12.5,13\n";
    let s = PriceSeries::from_csv_reader("T", text.as_bytes()).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s.prices().collect::<Vec<_>>(), vec![10.0, 11.0, 12.5]);

    let bad = "Date,Open\n2020-13-45,1.0\n";
    assert!(PriceSeries::from_csv_reader("T", bad.as_bytes()).is_err());
    let unordered = "Date,Open\n2020-01-03,1.0\n2020-01-02,1.0\n";
    assert!(PriceSeries::from_csv_reader("T", unordered.as_bytes()).is_err());
}
