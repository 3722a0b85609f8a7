use crate::error::{Error, Result};

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(())
}

/// `(1/N) sum_i |p_emp(i) - p_fit(i)|`.
pub fn mae(p_emp: &[f64], p_fit: &[f64]) -> Result<f64> {
    check_lengths(p_emp, p_fit)?;
    let total: f64 = p_emp.iter().zip(p_fit).map(|(a, b)| (a - b).abs()).sum();
    Ok(total / p_emp.len() as f64)
}

/// Largest gap between the two cumulative sums.
pub fn ks_statistic(p_emp: &[f64], p_fit: &[f64]) -> Result<f64> {
    check_lengths(p_emp, p_fit)?;
    for p in [p_emp, p_fit] {
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
    }
    let (mut ca, mut cb, mut worst) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in p_emp.iter().zip(p_fit) {
        ca += a;
        cb += b;
        worst = worst.max((ca - cb).abs());
    }
    Ok(worst.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let p = [0.2, 0.3, 0.5];
        assert_eq!(mae(&p, &p).unwrap(), 0.0);
        assert_eq!(mae(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), 0.5);
        assert_eq!(ks_statistic(&p, &p).unwrap(), 0.0);
        assert_eq!(ks_statistic(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            mae(&[1.0], &[0.5, 0.5]),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(matches!(
            ks_statistic(&[1.0], &[0.5, 0.5]),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(ks_statistic(&[0.5, 0.4], &[0.5, 0.5]).is_err());
    }

    fn normalized(raw: Vec<u32>) -> Vec<f64> {
        let total: u32 = raw.iter().sum();
        raw.iter().map(|&c| c as f64 / total as f64).collect()
    }

    proptest! {
        #[test]
        fn symmetric_and_zero_only_on_equal(a in prop::collection::vec(1u32..50, 2..30), seed in any::<u64>()) {
            let pa = normalized(a.clone());
            let mut b = a;
            let idx = (seed as usize) % b.len();
            b[idx] += 1 + (seed % 7) as u32;
            let pb = normalized(b);
            prop_assert_eq!(mae(&pa, &pb).unwrap(), mae(&pb, &pa).unwrap());
            prop_assert_eq!(ks_statistic(&pa, &pb).unwrap(), ks_statistic(&pb, &pa).unwrap());
            prop_assert!(mae(&pa, &pb).unwrap() > 0.0);
            prop_assert!(ks_statistic(&pa, &pb).unwrap() > 0.0);
            prop_assert_eq!(mae(&pa, &pa).unwrap(), 0.0);
            prop_assert_eq!(ks_statistic(&pa, &pa).unwrap(), 0.0);
            let ks = ks_statistic(&pa, &pb).unwrap();
            prop_assert!((0.0..=1.0).contains(&ks));
        }
    }
}
