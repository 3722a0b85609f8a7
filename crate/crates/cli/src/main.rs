//! `qwfin`: quantum-walk analysis of long-horizon log-return distributions.

mod commands;
mod config;
mod report;

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwfin::EnsembleSpec;

use crate::commands::SimulateConfig;
use crate::config::{EnsembleConfig, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "qwfin", version)]
#[command(about = "Quantum-walk fits of log-return distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a walk and write raw, smoothed and ensemble distributions
    Simulate(SimulateArgs),
    /// Log-return histograms, bimodality and skewness for each horizon
    Stats {
        /// Price CSV with Date and Open columns.
        #[arg(long)]
        input: PathBuf,
        /// Horizon in trading days; repeat for several.
        #[arg(long = "dt", default_values_t = [504])]
        dts: Vec<usize>,
        #[arg(long, default_value_t = qwfin::returns::CLASSIFY_BINS)]
        bins: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Volatility scaling exponent over horizons 1..=dt-max
    Scaling {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 504)]
        dt_max: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Fit the walk, Gaussian and two-component mixture to one horizon
    Fit(FitArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega: f64,
    /// Number of steps.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Also write the average over a normal ensemble of step counts.
    #[arg(long)]
    ensemble: bool,
    #[arg(long, default_value_t = 100.0)]
    n_mean: f64,
    #[arg(long, default_value_t = 15.0)]
    n_std: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Flags override the values of `--config`.
#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dt: Option<usize>,
    /// Base bin count of the fitted histograms.
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    classify_bins: Option<usize>,
    /// Walk length of the fixed-n fit.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_mean: Option<f64>,
    #[arg(long)]
    n_std: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Skip the ensemble refinement.
    #[arg(long)]
    no_ensemble: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Coarse grid points per angle.
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    gmm_restarts: Option<usize>,
    #[arg(long)]
    scaling_dt_max: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl FitArgs {
    fn run_config(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = self.$flag { cfg.$($field).+ = v; })*
            };
        }
        set!(
            dt => dt,
            bins => base_bins,
            classify_bins => classify_bins,
            n => n,
            seed => seed,
            grid_points => search.grid_points,
            max_iterations => search.max_iterations,
            gmm_restarts => gmm_restarts,
            scaling_dt_max => scaling_dt_max,
        );
        if self.no_ensemble {
            cfg.ensemble = None;
        } else if self.n_mean.is_some() || self.n_std.is_some() || self.samples.is_some() {
            let e = cfg.ensemble.get_or_insert_with(EnsembleConfig::default);
            e.n_mean = self.n_mean.unwrap_or(e.n_mean);
            e.n_std = self.n_std.unwrap_or(e.n_std);
            e.samples = self.samples.unwrap_or(e.samples);
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let ensemble = a.ensemble.then_some(EnsembleSpec {
                n_mean: a.n_mean,
                n_std: a.n_std,
                samples: a.samples,
                seed: a.seed,
            });
            let cfg = SimulateConfig {
                eta: a.eta,
                theta: a.theta,
                phi: a.phi,
                omega: a.omega,
                n: a.n,
                ensemble,
            };
            commands::simulate(cfg, &a.out)
        }
        Command::Stats {
            input,
            dts,
            bins,
            out,
        } => commands::stats(&input, &dts, bins, &out),
        Command::Scaling { input, dt_max, out } => commands::scaling(&input, dt_max, &out),
        Command::Fit(a) => commands::fit(&a.input, a.run_config()?, &a.out),
    }
}

/// 3 for too little data, 2 for bad input or parameters, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<qwfin::Error>() {
            return match e {
                qwfin::Error::InsufficientHistory { .. } | qwfin::Error::EmptyDistribution => 3,
                _ => 2,
            };
        }
        if cause.is::<serde_json::Error>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
