use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Summaries of repeated standard-training accuracies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineStats {
    /// Mean of all runs.
    pub standard1: f64,
    /// Best mean over consecutive groups of `group_size` runs.
    pub standard2: f64,
    /// Mean of the three best runs.
    pub standard3: f64,
    pub n_runs: usize,
    pub group_size: usize,
    /// Trailing runs that did not fill a group.
    pub dropped: usize,
}

pub fn baselines(accuracies: &[f64], group_size: usize) -> Result<BaselineStats> {
    let n = accuracies.len();
    if n < 3 {
        return Err(Error::Undefined(format!("need at least 3 runs, got {n}")));
    }
    if group_size == 0 || group_size > n {
        return Err(Error::InvalidArgument(format!(
            "group size {group_size} does not fit {n} runs"
        )));
    }
    if accuracies.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidArgument("non-finite accuracy".into()));
    }
    let standard1 = accuracies.iter().sum::<f64>() / n as f64;
    let standard2 = accuracies
        .chunks_exact(group_size)
        .map(|g| g.iter().sum::<f64>() / group_size as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut sorted = accuracies.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let standard3 = sorted[..3].iter().sum::<f64>() / 3.0;
    Ok(BaselineStats {
        standard1,
        standard2,
        standard3,
        n_runs: n,
        group_size,
        dropped: n % group_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn six_value_example() {
        let b = baselines(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6], 3).unwrap();
        assert!((b.standard1 - 0.35).abs() < 1e-12);
        assert!((b.standard2 - 0.5).abs() < 1e-12);
        assert!((b.standard3 - 0.5).abs() < 1e-12);
        assert_eq!(b.dropped, 0);
    }

    #[test]
    fn equal_values_collapse() {
        let b = baselines(&[0.42; 9], 3).unwrap();
        assert_eq!((b.standard1, b.standard2), (b.standard3, b.standard3));
    }

    #[test]
    fn remainder_is_recorded() {
        let b = baselines(&[0.1, 0.2, 0.3, 0.4, 0.9], 3).unwrap();
        assert_eq!(b.dropped, 2);
        assert!((b.standard2 - 0.2).abs() < 1e-12);
    }

    #[test]
    fn too_few_runs() {
        assert!(baselines(&[0.5, 0.6], 1).is_err());
    }

    proptest! {
        #[test]
        fn top_three_dominates(acc in proptest::collection::vec(0.0f64..1.0, 3..200)) {
            let b = baselines(&acc, 3).unwrap();
            prop_assert!(b.standard3 >= b.standard1 - 1e-12);
            prop_assert!(b.standard3 >= b.standard2 - 1e-12);
        }
    }
}
