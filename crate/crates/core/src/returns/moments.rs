use super::series::ReturnSample;
use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard deviation with `1/N` normalization.
pub fn population_std(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Skewness `m3 / m2^(3/2)` from population central moments.
pub fn skewness(sample: &ReturnSample) -> Result<f64> {
    let values = &sample.values;
    if values.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "skewness needs at least 3 values, got {}",
            values.len()
        )));
    }
    let m = mean(values);
    let n = values.len() as f64;
    let (m2, m3) = values.iter().fold((0.0, 0.0), |(s2, s3), &x| {
        let d = x - m;
        (s2 + d * d, s3 + d * d * d)
    });
    let (m2, m3) = (m2 / n, m3 / n);
    if m2 <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(m3 / m2.powf(1.5))
}
