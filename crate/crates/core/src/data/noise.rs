use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// Selected labels are redrawn uniformly over all classes; the new label
    /// may equal the old one.
    #[default]
    UniformResample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub fraction: f64,
    pub seed: u64,
    #[serde(default)]
    pub mode: NoiseMode,
}

impl NoiseSpec {
    pub fn new(fraction: f64, seed: u64) -> Self {
        NoiseSpec {
            fraction,
            seed,
            mode: NoiseMode::UniformResample,
        }
    }

    /// `floor(p * n)`, with a 1e-9 allowance so that e.g. `0.29 * 100` is 29.
    pub fn corrupted_count(&self, n: usize) -> usize {
        ((self.fraction * n as f64 + 1e-9).floor() as usize).min(n)
    }
}

/// Corrupts exactly `floor(p * N)` distinct examples and marks them in the
/// noise mask (merged with any existing mask).
pub fn inject_label_noise(dataset: &Dataset, spec: &NoiseSpec) -> Result<Dataset> {
    if !(0.0..=1.0).contains(&spec.fraction) {
        return Err(Error::InvalidArgument(format!(
            "noise fraction must lie in [0, 1], got {}",
            spec.fraction
        )));
    }
    let n = dataset.len();
    let count = spec.corrupted_count(n);
    let mut rng = rng::stream(spec.seed, Stream::Noise);
    let mut labels = dataset.labels().to_vec();
    let mut mask = dataset
        .noise_mask()
        .map(<[bool]>::to_vec)
        .unwrap_or_else(|| vec![false; n]);
    let mut chosen = index::sample(&mut rng, n, count).into_vec();
    chosen.sort_unstable();
    for p in chosen {
        labels[p] = match spec.mode {
            NoiseMode::UniformResample => rng.random_range(0..dataset.num_classes),
        };
        mask[p] = true;
    }
    Ok(dataset.with_labels(labels, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(n: usize, classes: usize) -> Dataset {
        Dataset::new(
            "n",
            classes,
            vec![1],
            (0..n as u64).collect(),
            vec![0.0; n],
            (0..n).map(|i| i % classes).collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_fraction_changes_nothing() {
        let d = ds(50, 5);
        let out = inject_label_noise(&d, &NoiseSpec::new(0.0, 1)).unwrap();
        assert_eq!(out.labels(), d.labels());
        assert_eq!(out.noise_mask().unwrap(), &vec![false; 50][..]);
    }

    #[test]
    fn exact_cardinality() {
        let d = ds(1000, 10);
        let out = inject_label_noise(&d, &NoiseSpec::new(0.4, 3)).unwrap();
        assert_eq!(out.noise_mask().unwrap().iter().filter(|&&m| m).count(), 400);
        assert_eq!(NoiseSpec::new(0.29, 0).corrupted_count(100), 29);
        assert_eq!(NoiseSpec::new(0.333, 0).corrupted_count(10), 3);
    }

    #[test]
    fn only_masked_labels_change() {
        let d = ds(300, 4);
        let out = inject_label_noise(&d, &NoiseSpec::new(0.5, 8)).unwrap();
        let mask = out.noise_mask().unwrap();
        for i in 0..300 {
            if !mask[i] {
                assert_eq!(out.labels()[i], d.labels()[i]);
            }
        }
    }

    #[test]
    fn full_resample_keeps_about_one_in_c() {
        let d = ds(10_000, 10);
        let out = inject_label_noise(&d, &NoiseSpec::new(1.0, 21)).unwrap();
        let same = (0..10_000).filter(|&i| out.labels()[i] == d.labels()[i]).count();
        let frac = same as f64 / 10_000.0;
        assert!((frac - 0.1).abs() <= 0.02, "kept fraction {frac}");
    }

    #[test]
    fn rejects_bad_fraction() {
        assert!(inject_label_noise(&ds(10, 2), &NoiseSpec::new(1.5, 0)).is_err());
    }
}
