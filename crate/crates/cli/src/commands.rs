use std::path::{Path, PathBuf};

use anyhow::Context;
use qwfin::fit::write_curve_csv;
use qwfin::returns::{mean, population_std};
use qwfin::{
    bimodality, distribution, ensemble_distribution, evolve, gaussian_fit, gmm2_fit,
    hill_climb_fit, histogram, log_returns, refine_with_ensemble, scaling_exponent, skewness,
    smooth_aggregate, CoinParams, EnsembleSpec, InitParams, NPolicy, PositionDistribution,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{
    create, write_histogram_csv, write_json, AssetReport, Classification, HorizonStats, Input,
    Provenance, ScalingReport, StatsReport,
};

fn out_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_distribution(dir: &Path, stem: &str, d: &PositionDistribution) -> anyhow::Result<()> {
    let csv = dir.join(format!("{stem}.csv"));
    d.write_csv(create(&csv)?)?;
    write_json(&dir.join(format!("{stem}.json")), d)
}

#[derive(Debug, Serialize)]
pub struct SimulateConfig {
    pub eta: f64,
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
    pub n: usize,
    pub ensemble: Option<EnsembleSpec>,
}

pub fn simulate(cfg: SimulateConfig, out: &Path) -> anyhow::Result<()> {
    let coin = CoinParams::new(cfg.eta, cfg.theta)?;
    let init = InitParams::new(cfg.phi, cfg.omega)?;
    out_dir(out)?;
    let raw = distribution(&evolve(init, coin, cfg.n));
    write_distribution(out, "raw", &raw)?;
    write_distribution(out, "smoothed", &smooth_aggregate(&raw)?)?;
    if let Some(spec) = &cfg.ensemble {
        write_distribution(out, "ensemble", &ensemble_distribution(init, coin, spec)?)?;
    }
    let seed = cfg.ensemble.map(|e| e.seed);
    write_json(
        &out.join("simulate.json"),
        &Provenance::new("simulate", None, seed, cfg),
    )
}

#[derive(Debug, Serialize)]
struct StatsConfig<'a> {
    dt: &'a [usize],
    bins: usize,
}

pub fn stats(input: &Path, dts: &[usize], bins: usize, out: &Path) -> anyhow::Result<()> {
    let input = Input::read(input)?;
    if bins < 2 {
        return Err(
            qwfin::Error::InvalidParameter(format!("bins={bins} must be at least 2")).into(),
        );
    }
    // fail before writing anything
    let samples = dts
        .iter()
        .map(|&dt| log_returns(&input.series, dt))
        .collect::<qwfin::Result<Vec<_>>>()?;
    out_dir(out)?;
    let ticker = input.ticker().to_owned();
    let mut horizons = Vec::with_capacity(samples.len());
    for sample in &samples {
        let mut h = HorizonStats {
            dt: sample.dt,
            sample_size: sample.len(),
            mean: mean(&sample.values),
            std: population_std(&sample.values),
            skewness: None,
            classification: None,
            bimodality: None,
            histogram: None,
            histogram_file: None,
            notes: Vec::new(),
        };
        match skewness(sample) {
            Ok(g) => h.skewness = Some(g),
            Err(e) => h.notes.push(format!("skewness: {e}")),
        }
        match histogram(sample, bins) {
            Ok(hist) => {
                let name = format!("{ticker}_dt{}_histogram.csv", sample.dt);
                write_histogram_csv(&out.join(&name), &hist)?;
                let bm = bimodality(&hist);
                h.classification = Some(Classification::of(&bm));
                h.bimodality = Some(bm);
                h.histogram = Some(hist);
                h.histogram_file = Some(name);
            }
            Err(e) => h.notes.push(format!("histogram: {e}")),
        }
        horizons.push(h);
    }
    let report = StatsReport {
        ticker: ticker.clone(),
        observations: input.series.len(),
        horizons,
        provenance: Provenance::new("stats", Some(&input), None, StatsConfig { dt: dts, bins }),
    };
    write_json(&out.join(format!("{ticker}_stats.json")), &report)
}

#[derive(Debug, Serialize)]
struct ScalingConfig {
    dt_max: usize,
}

pub fn scaling(input: &Path, dt_max: usize, out: &Path) -> anyhow::Result<()> {
    let input = Input::read(input)?;
    let fit = scaling_exponent(&input.series, dt_max)?;
    out_dir(out)?;
    let ticker = input.ticker().to_owned();
    let mut w = create(&out.join(format!("{ticker}_scaling.csv")))?;
    {
        use std::io::Write;
        writeln!(w, "dt,std")?;
        for (k, s) in fit.std_by_dt.iter().enumerate() {
            writeln!(w, "{},{}", k + 1, s)?;
        }
        w.flush()?;
    }
    let report = ScalingReport {
        ticker: ticker.clone(),
        observations: input.series.len(),
        scaling: fit,
        provenance: Provenance::new("scaling", Some(&input), None, ScalingConfig { dt_max }),
    };
    write_json(&out.join(format!("{ticker}_scaling.json")), &report)
}

/// Files written by [`fit`], relative to the output directory.
pub fn fit_outputs(ticker: &str, ensemble: bool) -> Vec<PathBuf> {
    let mut names = vec![
        "report.json",
        "curve_qw.csv",
        "curve_gaussian.csv",
        "curve_gmm.csv",
    ];
    if ensemble {
        names.push("curve_qw_ensemble.csv");
    }
    names
        .iter()
        .map(|n| PathBuf::from(format!("{ticker}_{n}")))
        .collect()
}

pub fn fit(input: &Path, cfg: RunConfig, out: &Path) -> anyhow::Result<()> {
    cfg.validate()?;
    let input = Input::read(input)?;
    let sample = log_returns(&input.series, cfg.dt)?;
    let classify = histogram(&sample, cfg.classify_bins)?;
    let bm = bimodality(&classify);
    let skew = skewness(&sample)?;
    let mut warnings = Vec::new();

    let scaling = if input.series.len() > cfg.scaling_dt_max {
        match scaling_exponent(&input.series, cfg.scaling_dt_max) {
            Ok(s) => Some(s),
            Err(e) => {
                warnings.push(format!("scaling: {e}"));
                None
            }
        }
    } else {
        warnings.push(format!(
            "scaling: series of {} observations is too short for dt_max={}",
            input.series.len(),
            cfg.scaling_dt_max
        ));
        None
    };

    let walk = hill_climb_fit(
        &sample,
        cfg.base_bins,
        &NPolicy::Fixed { n: cfg.n },
        &cfg.search,
    )?;
    if !walk.converged {
        warnings.push(format!(
            "quantum walk: iteration cap {} reached before {} rad precision",
            cfg.search.max_iterations, cfg.search.precision
        ));
    }
    let ensemble = cfg
        .ensemble_spec()
        .map(|spec| refine_with_ensemble(&walk, &sample, &spec))
        .transpose()?;
    let gaussian = gaussian_fit(&sample, cfg.base_bins)?;
    let gmm = match gmm2_fit(&sample, cfg.base_bins, cfg.seed, cfg.gmm_restarts) {
        Ok(g) => Some(g),
        Err(e) => {
            warnings.push(format!("gmm: {e}"));
            None
        }
    };

    out_dir(out)?;
    let ticker = input.ticker().to_owned();
    let files = fit_outputs(&ticker, ensemble.is_some());
    let curve =
        |k: usize, lower: f64, width: f64, emp: &[f64], fitted: &[f64]| -> anyhow::Result<()> {
            write_curve_csv(create(&out.join(&files[k]))?, lower, width, emp, fitted)?;
            Ok(())
        };
    curve(
        1,
        walk.bin_lower_edge,
        walk.bin_width,
        &walk.empirical_curve,
        &walk.fitted_curve,
    )?;
    curve(
        2,
        gaussian.bin_lower_edge,
        gaussian.bin_width,
        &gaussian.empirical_curve,
        &gaussian.fitted_curve,
    )?;
    if let Some(g) = &gmm {
        curve(
            3,
            g.bin_lower_edge,
            g.bin_width,
            &g.empirical_curve,
            &g.fitted_curve,
        )?;
    }
    if let Some(e) = &ensemble {
        curve(
            4,
            e.bin_lower_edge,
            e.bin_width,
            &e.empirical_curve,
            &e.fitted_curve,
        )?;
    }

    let seed = cfg.seed;
    let report = AssetReport {
        ticker,
        dt: cfg.dt,
        sample_size: sample.len(),
        classification: Classification::of(&bm),
        bimodality: bm,
        skewness: skew,
        scaling,
        quantum_walk: walk,
        quantum_walk_ensemble: ensemble,
        gaussian,
        gmm,
        warnings,
        provenance: Provenance::new("fit", Some(&input), Some(seed), cfg),
    };
    write_json(&out.join(&files[0]), &report)
}
