use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reference::{fit_reference, TrainConfig};
use super::table::{ScoreMetadata, ScoreMethod, ScoreTable};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::evaluate;
use crate::rng::{self, derive_seed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CScoreMode {
    /// `1 - held-out correctness`.
    Acc,
    /// Held-out cross-entropy.
    Loss,
}

impl std::str::FromStr for CScoreMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acc" => Ok(CScoreMode::Acc),
            "loss" => Ok(CScoreMode::Loss),
            other => Err(Error::InvalidArgument(format!("unknown c-score mode {other:?}"))),
        }
    }
}

fn num_folds(alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange {
            what: "alpha",
            detail: format!("{alpha} not in (0, 1]"),
        });
    }
    let k = (1.0 / alpha - 1e-9).ceil() as usize;
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "alpha",
            detail: format!("{alpha} yields {k} fold(s); need at least 2"),
        });
    }
    Ok(k)
}

/// Held-out folds for one repeat: a seeded shuffle of `0..n` cut into
/// `ceil(1/alpha)` contiguous, nonempty pieces.
pub fn cscore_folds(n: usize, alpha: f64, seed: u64, repeat: usize) -> Result<Vec<Vec<usize>>> {
    let k = num_folds(alpha)?;
    if n < k {
        return Err(Error::InvalidArgument(format!(
            "{n} examples cannot fill {k} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(derive_seed(seed, repeat as u64), Stream::Folds));
    Ok((0..k)
        .map(|j| order[j * n / k..(j + 1) * n / k].to_vec())
        .collect())
}

/// Hold-out consistency score averaged over `repeats` fold partitions.
/// Each fold model is trained on the complement of its fold.
pub fn estimate_cscore(
    data: &Dataset,
    config: &TrainConfig,
    alpha: f64,
    repeats: usize,
    mode: CScoreMode,
) -> Result<ScoreTable> {
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be positive".into()));
    }
    config.validate()?;
    let n = data.len();
    let mut jobs = Vec::new();
    for r in 0..repeats {
        for (j, fold) in cscore_folds(n, alpha, config.seed, r)?.into_iter().enumerate() {
            jobs.push((r, j, fold));
        }
    }
    let results: Vec<Result<(Vec<usize>, Vec<f64>)>> = jobs
        .into_par_iter()
        .map(|(r, j, held_out)| {
            let mut in_fold = vec![false; n];
            for &p in &held_out {
                in_fold[p] = true;
            }
            let rest: Vec<usize> = (0..n).filter(|&p| !in_fold[p]).collect();
            let train = data.subset(&rest, format!("{}/cscore-{r}-{j}/train", data.name));
            let test = data.subset(&held_out, format!("{}/cscore-{r}-{j}/test", data.name));
            let mut cfg = config.clone();
            cfg.seed = derive_seed(config.seed, ((r as u64) << 32) | j as u64);
            let model = fit_reference(&cfg, &train, |_, _| Ok(ControlFlow::Continue(())))?;
            let eval = evaluate(&model, &test)?;
            let vals = match mode {
                CScoreMode::Acc => eval.correct.iter().map(|&c| if c { 0.0 } else { 1.0 }).collect(),
                CScoreMode::Loss => eval.losses,
            };
            Ok((held_out, vals))
        })
        .collect();

    let mut sums = vec![0.0; n];
    for res in results {
        let (positions, vals) = res?;
        for (p, v) in positions.into_iter().zip(vals) {
            sums[p] += v;
        }
    }
    let scores: Vec<f64> = sums.into_iter().map(|s| s / repeats as f64).collect();
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Diverged("non-finite held-out loss".into()));
    }
    let method = match mode {
        CScoreMode::Acc => ScoreMethod::CscoreAcc,
        CScoreMode::Loss => ScoreMethod::CscoreLoss,
    };
    Ok(ScoreTable::new(data.name.clone(), method, data.ids().to_vec(), scores).with_metadata(
        ScoreMetadata {
            arch: Some(config.arch.clone()),
            epochs: Some(config.epochs),
            alpha: Some(alpha),
            repeats: Some(repeats),
            seed: Some(config.seed),
            ..Default::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gen_synthetic, SyntheticSpec};
    use crate::nn::ArchSpec;
    use proptest::prelude::*;

    #[test]
    fn alpha_bounds() {
        assert_eq!(num_folds(0.25).unwrap(), 4);
        assert_eq!(num_folds(0.5).unwrap(), 2);
        assert_eq!(num_folds(0.3).unwrap(), 4);
        assert_eq!(num_folds(0.6).unwrap(), 2);
        assert!(num_folds(1.0).is_err());
        assert!(num_folds(0.0).is_err());
    }

    proptest! {
        #[test]
        fn every_example_held_out_once_per_repeat(n in 4usize..300, alpha in 0.05f64..0.5, seed: u64, r in 0usize..5) {
            prop_assume!(n >= num_folds(alpha).unwrap());
            let folds = cscore_folds(n, alpha, seed, r).unwrap();
            let mut seen = vec![0u32; n];
            for f in &folds {
                prop_assert!(!f.is_empty());
                for &p in f { seen[p] += 1; }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn separable_task_scores_zero_in_acc_mode() {
        let ds = gen_synthetic(&SyntheticSpec {
            num_classes: 2,
            examples_per_class: 40,
            input_dim: 4,
            margin_range: (30.0, 40.0),
            noise_std: 0.1,
            seed: 3,
        })
        .unwrap();
        let mut cfg = TrainConfig::new(ArchSpec::mlp(&[4, 16, 2]), 5, 8, 2);
        cfg.optimizer.lr = 0.02;
        let t = estimate_cscore(&ds, &cfg, 0.5, 2, CScoreMode::Acc).unwrap();
        assert!(t.scores.iter().all(|&s| s == 0.0), "{:?}", t.scores);
    }
}
