use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::ScoreTable;

/// Equal-width bins over `[min, max]`; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn score_histogram(table: &ScoreTable, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    if table.is_empty() {
        return Err(Error::EmptyDataset(table.dataset_name.clone()));
    }
    table.validate()?;
    let lo = table.scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = table.scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins).map(|k| lo + width * k as f64).collect();
    let mut counts = vec![0; bins];
    for &s in &table.scores {
        let k = if width > 0.0 {
            (((s - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[k] += 1;
    }
    Ok(Histogram { edges, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::ScoreMethod;
    use proptest::prelude::*;

    fn table(scores: Vec<f64>) -> ScoreTable {
        ScoreTable::new("h", ScoreMethod::Loss, (0..scores.len() as u64).collect(), scores)
    }

    #[test]
    fn constant_scores_fill_one_bin() {
        let h = score_histogram(&table(vec![2.5; 7]), 4).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.total(), 7);
    }

    #[test]
    fn max_lands_in_last_bin() {
        let h = score_histogram(&table(vec![0.0, 0.5, 1.0]), 2).unwrap();
        assert_eq!(h.counts, vec![1, 2]);
        assert_eq!(h.edges, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn empty_table_is_an_error() {
        assert!(score_histogram(&table(vec![]), 3).is_err());
    }

    proptest! {
        #[test]
        fn counts_conserve_n(scores in proptest::collection::vec(-1e6f64..1e6, 1..300), bins in 1usize..50) {
            let n = scores.len();
            prop_assert_eq!(score_histogram(&table(scores), bins).unwrap().total(), n);
        }
    }
}
