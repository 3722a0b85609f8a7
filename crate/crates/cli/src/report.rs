use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use qwfin::{
    BimodalityReport, FitResult, GaussianFitResult, Gmm2FitResult, PriceSeries, ReturnHistogram,
    ScalingFit,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Unimodal,
    Bimodal,
}

impl Classification {
    pub fn of(report: &BimodalityReport) -> Self {
        if report.is_bimodal() {
            Self::Bimodal
        } else {
            Self::Unimodal
        }
    }
}

/// What is needed to reproduce a run.
#[derive(Debug, Serialize)]
pub struct Provenance<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: Option<String>,
    pub input_sha256: Option<String>,
    pub seed: Option<u64>,
    pub config: C,
}

impl<C: Serialize> Provenance<C> {
    pub fn new(command: &'static str, input: Option<&Input>, seed: Option<u64>, config: C) -> Self {
        Self {
            tool: "qwfin",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input: input.map(|i| i.path.display().to_string()),
            input_sha256: input.map(|i| i.sha256.clone()),
            seed,
            config,
        }
    }
}

/// A price file together with the digest of its bytes.
pub struct Input {
    pub path: PathBuf,
    pub sha256: String,
    pub series: PriceSeries,
}

impl Input {
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let bytes = std::fs::read(path)
            .map_err(qwfin::Error::from)
            .with_context(|| format!("reading {}", path.display()))?;
        let ticker = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into());
        let series = PriceSeries::from_csv_reader(ticker, bytes.as_slice())
            .with_context(|| format!("parsing {}", path.display()))?;
        Ok(Self {
            path: path.to_path_buf(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            series,
        })
    }

    pub fn ticker(&self) -> &str {
        self.series.ticker()
    }
}

/// Statistics of one return horizon.
#[derive(Debug, Serialize)]
pub struct HorizonStats {
    pub dt: usize,
    pub sample_size: usize,
    pub mean: f64,
    pub std: f64,
    pub skewness: Option<f64>,
    pub classification: Option<Classification>,
    pub bimodality: Option<BimodalityReport>,
    pub histogram: Option<ReturnHistogram>,
    pub histogram_file: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct StatsReport<C: Serialize> {
    pub ticker: String,
    pub observations: usize,
    pub horizons: Vec<HorizonStats>,
    pub provenance: Provenance<C>,
}

#[derive(Debug, Serialize)]
pub struct ScalingReport<C: Serialize> {
    pub ticker: String,
    pub observations: usize,
    pub scaling: ScalingFit,
    pub provenance: Provenance<C>,
}

#[derive(Debug, Serialize)]
pub struct AssetReport<C: Serialize> {
    pub ticker: String,
    pub dt: usize,
    pub sample_size: usize,
    pub classification: Classification,
    pub bimodality: BimodalityReport,
    pub skewness: f64,
    pub scaling: Option<ScalingFit>,
    pub quantum_walk: FitResult,
    pub quantum_walk_ensemble: Option<FitResult>,
    pub gaussian: GaussianFitResult,
    pub gmm: Option<Gmm2FitResult>,
    /// Non-fatal issues, e.g. a climb that hit its iteration cap.
    pub warnings: Vec<String>,
    pub provenance: Provenance<C>,
}

pub fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn write_histogram_csv(path: &Path, hist: &ReturnHistogram) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "bin_lower,bin_upper,bin_center,probability")?;
    for (k, p) in hist.probabilities.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            hist.edges[k],
            hist.edges[k + 1],
            hist.center(k),
            p
        )?;
    }
    w.flush()?;
    Ok(())
}
