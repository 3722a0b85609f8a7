use std::path::Path;

use anyhow::Context;
use qwfin::{EnsembleSpec, SearchConfig};
use serde::{Deserialize, Serialize};

/// Step-count distribution for the ensemble refinement. The seed comes from
/// [`RunConfig::seed`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n_mean: f64,
    pub n_std: f64,
    pub samples: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        let d = EnsembleSpec::default();
        Self {
            n_mean: d.n_mean,
            n_std: d.n_std,
            samples: d.samples,
        }
    }
}

/// Everything `fit` needs besides the input file. Loaded from JSON, then
/// overridden by command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Return horizon in trading days.
    pub dt: usize,
    /// Bins of the classification histogram.
    pub classify_bins: usize,
    /// Base bin count of the fitted histograms.
    pub base_bins: usize,
    /// Walk length of the fixed-n fit.
    pub n: usize,
    /// `None` skips the ensemble refinement.
    pub ensemble: Option<EnsembleConfig>,
    pub seed: u64,
    /// Perturbed restarts of the mixture fit.
    pub gmm_restarts: usize,
    /// Longest horizon of the scaling fit; skipped when the series is shorter.
    pub scaling_dt_max: usize,
    pub search: SearchConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt: 504,
            classify_bins: qwfin::returns::CLASSIFY_BINS,
            base_bins: 20,
            n: 100,
            ensemble: Some(EnsembleConfig::default()),
            seed: 42,
            gmm_restarts: 4,
            scaling_dt_max: 504,
            search: SearchConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(qwfin::Error::from)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> qwfin::Result<()> {
        let bad = |msg: &str| Err(qwfin::Error::InvalidParameter(msg.into()));
        if self.dt == 0 {
            return bad("dt must be at least 1");
        }
        if self.classify_bins < 2 || self.base_bins < 2 {
            return bad("bin counts must be at least 2");
        }
        if self.n == 0 {
            return bad("n must be positive");
        }
        if self.scaling_dt_max < 2 {
            return bad("scaling_dt_max must be at least 2");
        }
        if let Some(e) = &self.ensemble {
            if e.samples == 0 {
                return bad("ensemble samples must be positive");
            }
        }
        self.search.validate()
    }

    pub fn ensemble_spec(&self) -> Option<EnsembleSpec> {
        self.ensemble.map(|e| EnsembleSpec {
            n_mean: e.n_mean,
            n_std: e.n_std,
            samples: e.samples,
            seed: self.seed,
        })
    }
}
