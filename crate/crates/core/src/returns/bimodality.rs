use serde::{Deserialize, Serialize};

use super::histogram::{effective_range, ReturnHistogram};

/// A local maximum of a histogram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub bin: usize,
    pub probability: f64,
}

/// Strict local maxima of the bin probabilities, ordered by bin.
///
/// Runs of equal adjacent bins are treated as one plateau located at its
/// centre bin (the lower of the two middle bins for even lengths). A plateau
/// is a mode when it is higher than each neighbouring run it has.
pub fn detect_modes(hist: &ReturnHistogram) -> Vec<Mode> {
    let p = &hist.probabilities;
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (k, &v) in p.iter().enumerate() {
        match runs.last_mut() {
            Some((start, len)) if p[*start] == v => *len += 1,
            _ => runs.push((k, 1)),
        }
    }
    let value = |r: &(usize, usize)| p[r.0];
    runs.iter()
        .enumerate()
        .filter(|&(i, run)| {
            let left_ok = i == 0 || value(run) > value(&runs[i - 1]);
            let right_ok = i + 1 == runs.len() || value(run) > value(&runs[i + 1]);
            left_ok && right_ok
        })
        .map(|(_, &(start, len))| Mode {
            bin: start + (len - 1) / 2,
            probability: p[start],
        })
        .collect()
}

/// Bimodality measure of a histogram and the quantities entering it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BimodalityReport {
    pub bm: f64,
    pub p_max1: f64,
    pub p_max2: f64,
    pub p_min: f64,
    pub delta_x: f64,
    pub l_eff: f64,
    pub mode_count: usize,
    /// Bins of the two modes entering the measure, left to right.
    pub mode_bins: Option<(usize, usize)>,
}

impl BimodalityReport {
    pub fn is_bimodal(&self) -> bool {
        self.mode_count >= 2
    }
}

/// `BM = ((P_max2 - P_min) / P_max1) * (dx / L_eff)`.
///
/// Zero for a single mode. With more than two modes the two tallest are
/// used, ties going to the pair that lies furthest apart. `P_min` is the
/// lowest bin strictly between the two modes, or the lower mode when they
/// are adjacent; `dx` is the distance between the mode bin centres.
pub fn bimodality(hist: &ReturnHistogram) -> BimodalityReport {
    let modes = detect_modes(hist);
    let l_eff = effective_range(hist);
    if modes.len() < 2 {
        return BimodalityReport {
            bm: 0.0,
            p_max1: modes.first().map_or(0.0, |m| m.probability),
            p_max2: 0.0,
            p_min: 0.0,
            delta_x: 0.0,
            l_eff,
            mode_count: modes.len(),
            mode_bins: None,
        };
    }

    let mut best: Option<(Mode, Mode)> = None;
    for (i, a) in modes.iter().enumerate() {
        for b in &modes[i + 1..] {
            let key = |x: &Mode, y: &Mode| {
                (
                    x.probability.max(y.probability),
                    x.probability.min(y.probability),
                    y.bin - x.bin,
                )
            };
            let better = match &best {
                None => true,
                Some((x, y)) => {
                    let (c, d) = (key(a, b), key(x, y));
                    (c.0, c.1).partial_cmp(&(d.0, d.1)) == Some(std::cmp::Ordering::Greater)
                        || ((c.0, c.1) == (d.0, d.1) && c.2 > d.2)
                }
            };
            if better {
                best = Some((*a, *b));
            }
        }
    }
    let (left, right) = best.expect("at least two modes");
    let p = &hist.probabilities;
    let p_min = if right.bin - left.bin >= 2 {
        p[left.bin + 1..right.bin]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    } else {
        left.probability.min(right.probability)
    };
    let p_max1 = left.probability.max(right.probability);
    let p_max2 = left.probability.min(right.probability);
    let delta_x = hist.center(right.bin) - hist.center(left.bin);
    let bm = (p_max2 - p_min) / p_max1 * (delta_x / l_eff);
    BimodalityReport {
        bm,
        p_max1,
        p_max2,
        p_min,
        delta_x,
        l_eff,
        mode_count: modes.len(),
        mode_bins: Some((left.bin, right.bin)),
    }
}
