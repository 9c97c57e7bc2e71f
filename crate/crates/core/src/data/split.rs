use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitFractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitFractions {
    pub fn new(train: f64, val: f64, test: f64) -> Self {
        SplitFractions { train, val, test }
    }
}

/// Stratified train/val/test split.
///
/// Within each class the positions are shuffled and cut at
/// `round(n_c * train)` and `round(n_c * (train + val))`, so every class keeps
/// its proportions to within one example. Each resulting split is shuffled.
pub fn split(
    dataset: &Dataset,
    fractions: SplitFractions,
    seed: u64,
) -> Result<(Dataset, Dataset, Dataset)> {
    let SplitFractions { train, val, test } = fractions;
    if [train, val, test].iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(Error::InvalidArgument(format!(
            "split fractions must lie in [0, 1]: {fractions:?}"
        )));
    }
    if (train + val + test - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "split fractions must sum to 1, got {}",
            train + val + test
        )));
    }
    let mut rng = rng::stream(seed, Stream::Split);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); dataset.num_classes];
    for (p, &y) in dataset.labels().iter().enumerate() {
        by_class[y].push(p);
    }
    let mut parts: [Vec<usize>; 3] = Default::default();
    for members in &mut by_class {
        members.shuffle(&mut rng);
        let n = members.len();
        let cut1 = ((n as f64 * train).round() as usize).min(n);
        let cut2 = ((n as f64 * (train + val)).round() as usize).clamp(cut1, n);
        parts[0].extend_from_slice(&members[..cut1]);
        parts[1].extend_from_slice(&members[cut1..cut2]);
        parts[2].extend_from_slice(&members[cut2..]);
    }
    for (part, (frac, label)) in parts
        .iter_mut()
        .zip([(train, "train"), (val, "val"), (test, "test")])
    {
        if frac > 0.0 && part.is_empty() {
            return Err(Error::EmptyDataset(format!(
                "{} {label} split is empty with fraction {frac}",
                dataset.name
            )));
        }
        part.shuffle(&mut rng);
    }
    let [tr, va, te] = parts;
    Ok((
        dataset.subset(&tr, format!("{}/train", dataset.name)),
        dataset.subset(&va, format!("{}/val", dataset.name)),
        dataset.subset(&te, format!("{}/test", dataset.name)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn balanced(n_per_class: usize, classes: usize) -> Dataset {
        let n = n_per_class * classes;
        Dataset::new(
            "b",
            classes,
            vec![1],
            (0..n as u64).collect(),
            (0..n).map(|i| i as f32).collect(),
            (0..n).map(|i| i % classes).collect(),
        )
        .unwrap()
    }

    #[test]
    fn ninety_ten_on_fifty_thousand() {
        let ds = balanced(5000, 10);
        let (tr, va, te) = split(&ds, SplitFractions::new(0.9, 0.1, 0.0), 3).unwrap();
        assert_eq!((tr.len(), va.len(), te.len()), (45000, 5000, 0));
        assert_eq!(tr.class_counts(), vec![4500; 10]);
    }

    #[test]
    fn partition_and_determinism() {
        let ds = balanced(37, 3);
        let f = SplitFractions::new(0.7, 0.2, 0.1);
        let (a, b, c) = split(&ds, f, 9).unwrap();
        let mut all: Vec<u64> = [a.ids(), b.ids(), c.ids()].concat();
        assert_eq!(all.len(), ds.len());
        all.sort();
        assert_eq!(all, ds.ids());
        let (a2, b2, c2) = split(&ds, f, 9).unwrap();
        assert_eq!((a, b, c), (a2, b2, c2));
        let ids: HashSet<u64> = split(&ds, f, 10).unwrap().0.ids().iter().copied().collect();
        assert_eq!(ids.len(), 26 * 3);
    }

    #[test]
    fn errors() {
        let ds = balanced(2, 2);
        assert!(split(&ds, SplitFractions::new(0.5, 0.4, 0.0), 0).is_err());
        assert!(matches!(
            split(&ds, SplitFractions::new(0.9, 0.1, 0.0), 0),
            Err(Error::EmptyDataset(_))
        ));
    }
}
