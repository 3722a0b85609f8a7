use std::io::Write;

use serde::{Deserialize, Serialize};

use super::state::WalkState;
use crate::error::{Error, Result};

const NORMALIZATION_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Raw,
    Smoothed,
    Ensemble,
}

/// Whether [`distribution_with`] keeps the always-empty sites of the wrong
/// parity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OddSites {
    #[default]
    Drop,
    Keep,
}

/// Probability mass on a strictly increasing set of coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionDistribution {
    positions: Vec<f64>,
    probabilities: Vec<f64>,
    kind: DistributionKind,
}

impl PositionDistribution {
    pub fn new(
        positions: Vec<f64>,
        probabilities: Vec<f64>,
        kind: DistributionKind,
    ) -> Result<Self> {
        if positions.len() != probabilities.len() {
            return Err(Error::LengthMismatch(positions.len(), probabilities.len()));
        }
        if positions.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if positions.iter().any(|x| !x.is_finite()) || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "positions must be finite and strictly increasing".into(),
            ));
        }
        if probabilities.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "probabilities must be non-negative".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            positions,
            probabilities,
            kind,
        })
    }

    /// Constructor for callers that already guarantee the invariants.
    pub(crate) fn from_parts(
        positions: Vec<f64>,
        probabilities: Vec<f64>,
        kind: DistributionKind,
    ) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        debug_assert!((probabilities.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOLERANCE);
        Self {
            positions,
            probabilities,
            kind,
        }
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, p)| x * p).sum()
    }

    /// `(coordinate, probability)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.positions
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }

    /// Pairs with strictly positive probability.
    pub fn support(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.iter().filter(|&(_, p)| p > 0.0)
    }

    pub(crate) fn scale_positions(&self, factor: f64, kind: DistributionKind) -> Self {
        let positions = self.positions.iter().map(|x| x * factor).collect();
        Self {
            positions,
            probabilities: self.probabilities.clone(),
            kind,
        }
    }

    /// Headered CSV with columns `coordinate,probability`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["coordinate", "probability"])?;
        for (x, p) in self.iter() {
            w.write_record([x.to_string(), p.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Occupation probabilities `|a_j|^2 + |b_j|^2`, dropping the empty parity
/// sublattice.
pub fn distribution(state: &WalkState) -> PositionDistribution {
    distribution_with(state, OddSites::Drop)
}

pub fn distribution_with(state: &WalkState, odd: OddSites) -> PositionDistribution {
    let n = state.steps() as i64;
    let (positions, probabilities) = state
        .positions()
        .zip(state.probabilities())
        .filter(|&(j, _)| odd == OddSites::Keep || (j + n).rem_euclid(2) == 0)
        .map(|(j, p)| (j as f64, p))
        .unzip();
    PositionDistribution {
        positions,
        probabilities,
        kind: DistributionKind::Raw,
    }
}

/// Merge consecutive triples of occupied sites into single points.
///
/// Sites with non-zero probability are taken left to right in groups of
/// three (the last group may hold one or two). Each group becomes a point
/// carrying the group's total probability at its probability-weighted mean
/// coordinate.
pub fn smooth_aggregate(dist: &PositionDistribution) -> Result<PositionDistribution> {
    if dist.kind != DistributionKind::Raw {
        return Err(Error::InvalidParameter(format!(
            "smoothing expects a raw distribution, got {:?}",
            dist.kind
        )));
    }
    let occupied: Vec<(f64, f64)> = dist.support().collect();
    if occupied.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let (positions, probabilities) = occupied
        .chunks(3)
        .map(|group| {
            let mass: f64 = group.iter().map(|&(_, p)| p).sum();
            let centre = group.iter().map(|&(x, p)| x * p).sum::<f64>() / mass;
            (centre, mass)
        })
        .unzip();
    Ok(PositionDistribution {
        positions,
        probabilities,
        kind: DistributionKind::Smoothed,
    })
}
