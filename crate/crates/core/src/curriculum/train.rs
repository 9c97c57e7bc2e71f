use std::time::Instant;

use super::order::order_examples;
use super::record::{Recorder, RunRecord, RunStatus};
use super::sampler::PoolSampler;
use super::settings::CurriculumConfig;
use crate::data::{hflip_batch, Dataset};
use crate::error::{Error, Result};
use crate::nn::{cosine_lr, Model, OptimizerState};
use crate::rng::{self, Stream};
use crate::scoring::ScoreTable;

/// Ordered training with a dynamic training set.
///
/// At each step `t` the pool is the first `g(t)` entries of the ordered index;
/// a batch is drawn from it, one SGD step is taken with the cosine learning
/// rate, and validation runs on the configured cadence.
pub fn train_with_curriculum(
    config: &CurriculumConfig,
    scores: &ScoreTable,
    train: &Dataset,
    val: &Dataset,
    test: &Dataset,
) -> Result<(RunRecord, Model)> {
    train_with_curriculum_observed(config, scores, train, val, test, |_, _| {})
}

/// As [`train_with_curriculum`], calling `observe(t, batch_ids)` for every
/// sampled batch.
pub fn train_with_curriculum_observed<F>(
    config: &CurriculumConfig,
    scores: &ScoreTable,
    train: &Dataset,
    val: &Dataset,
    test: &Dataset,
    mut observe: F,
) -> Result<(RunRecord, Model)>
where
    F: FnMut(usize, &[u64]),
{
    let started = Instant::now();
    config.validate(train.len())?;
    let settings = &config.settings;
    let index = order_examples(train, scores, config.order, settings.seed)?;
    let mut recorder = Recorder::new(settings, train, val, test)?;

    let mut model = Model::init(&settings.arch, settings.seed)?;
    let mut opt = OptimizerState::new(&model, &settings.optimizer)?;
    let mut batch_rng = rng::stream(settings.seed, Stream::Batches);
    let mut aug_rng = rng::stream(settings.seed, Stream::Augment);
    let mut sampler = PoolSampler::new(settings.sampling);

    let mut final_loss = None;
    let mut status = RunStatus::Completed;
    for t in 1..=settings.total_steps {
        let size = config.pacing.eval(t)?;
        if size != sampler.pool_len() {
            sampler.set_pool(index.positions[..size].to_vec());
        }
        let positions = sampler.next_batch(settings.batch_size, &mut batch_rng);
        let mut batch = train.batch(&positions);
        observe(t, &batch.example_ids);
        if settings.hflip {
            hflip_batch(&mut batch, &train.input_shape, &mut aug_rng)?;
        }
        let out = model.loss_and_grad(&batch)?;
        if !out.mean_loss.is_finite() {
            status = RunStatus::Failed {
                reason: format!("non-finite loss at step {t}"),
            };
            break;
        }
        final_loss = Some(out.mean_loss);
        let lr = cosine_lr(t, settings.total_steps, settings.optimizer.lr)?;
        match opt.sgd_step(&mut model, &out.grad, lr) {
            Ok(()) => {}
            Err(Error::Diverged(reason)) => {
                status = RunStatus::Failed {
                    reason: format!("{reason} at step {t}"),
                };
                break;
            }
            Err(e) => return Err(e),
        }
        if recorder.after_step(t, &model, size, lr)?.is_break() {
            break;
        }
    }
    let record = recorder.finish(
        Some(config.order),
        Some(config.pacing),
        settings,
        final_loss,
        status,
        started.elapsed().as_secs_f64(),
    );
    Ok((record, model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curriculum::{train_standard, Order, TrainSettings};
    use crate::data::{gen_synthetic, split, SplitFractions, SyntheticSpec};
    use crate::nn::ArchSpec;
    use crate::pacing::{PacingFamily, PacingSpec};
    use crate::scoring::oracle_score;

    fn data() -> (Dataset, Dataset, Dataset) {
        let ds = gen_synthetic(&SyntheticSpec {
            num_classes: 3,
            examples_per_class: 40,
            input_dim: 4,
            margin_range: (0.5, 3.0),
            noise_std: 1.0,
            seed: 2,
        })
        .unwrap();
        split(&ds, SplitFractions::new(0.6, 0.2, 0.2), 1).unwrap()
    }

    #[test]
    fn single_step_run() {
        let (tr, va, te) = data();
        let settings = TrainSettings::new(ArchSpec::mlp(&[4, 8, 3]), 1, 8, 3);
        let config = CurriculumConfig {
            order: Order::Ascending,
            pacing: PacingSpec::new(PacingFamily::Linear, 0.5, 0.2, tr.len(), 1).unwrap(),
            settings,
        };
        let mut steps = 0;
        let (rec, _) = train_with_curriculum_observed(
            &config,
            &oracle_score(&tr).unwrap(),
            &tr,
            &va,
            &te,
            |_, _| steps += 1,
        )
        .unwrap();
        assert_eq!(steps, 1);
        assert_eq!(rec.series.len(), 1);
        assert_eq!(rec.best_val_step, Some(1));
    }

    #[test]
    fn random_order_full_pacing_matches_standard() {
        let (tr, va, te) = data();
        let settings = TrainSettings::new(ArchSpec::mlp(&[4, 8, 3]), 40, 8, 11);
        let config = CurriculumConfig {
            order: Order::Random,
            pacing: PacingSpec::new(PacingFamily::Exp, 0.0, 0.3, tr.len(), 40).unwrap(),
            settings: settings.clone(),
        };
        let (a, ma) = train_with_curriculum(&config, &oracle_score(&tr).unwrap(), &tr, &va, &te).unwrap();
        let (b, mb) = train_standard(&settings, &tr, &va, &te).unwrap();
        assert_eq!(ma.params(), mb.params());
        assert_eq!(a.series, b.series);
    }

    #[test]
    fn mismatched_pacing_is_rejected() {
        let (tr, va, te) = data();
        let settings = TrainSettings::new(ArchSpec::mlp(&[4, 3]), 10, 8, 0);
        let config = CurriculumConfig {
            order: Order::Random,
            pacing: PacingSpec::new(PacingFamily::Exp, 0.5, 0.3, tr.len() + 1, 10).unwrap(),
            settings,
        };
        assert!(train_with_curriculum(&config, &oracle_score(&tr).unwrap(), &tr, &va, &te).is_err());
    }
}
