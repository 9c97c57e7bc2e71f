use std::ops::ControlFlow;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use super::record::{Recorder, RunRecord, RunStatus};
use super::settings::{Sampling, TrainSettings};
use crate::data::{hflip_batch, Dataset};
use crate::error::{Error, Result};
use crate::nn::{cosine_lr, Model, OptimizerState};
use crate::rng::{self, Stream};

pub(crate) struct LoopOutcome {
    pub model: Model,
    pub status: RunStatus,
    pub final_loss: Option<f64>,
}

/// I.i.d. minibatch SGD over the full training set.
///
/// Shuffled passes over positions `0..N` (remainder dropped, reshuffled on
/// exhaustion), cosine learning rate over `T` steps. `on_step(t, model)` runs
/// after every update and may stop training early.
pub(crate) fn run_standard_loop<F>(
    settings: &TrainSettings,
    train: &Dataset,
    mut on_step: F,
) -> Result<LoopOutcome>
where
    F: FnMut(usize, &Model) -> Result<ControlFlow<()>>,
{
    settings.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset(train.name.clone()));
    }
    let n = train.len();
    let b = settings.batch_size;
    let mut model = Model::init(&settings.arch, settings.seed)?;
    let mut opt = OptimizerState::new(&model, &settings.optimizer)?;
    let mut batch_rng = rng::stream(settings.seed, Stream::Batches);
    let mut aug_rng = rng::stream(settings.seed, Stream::Augment);

    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut cursor: Option<usize> = None;
    let mut final_loss = None;
    for t in 1..=settings.total_steps {
        let positions: Vec<usize> = if settings.sampling == Sampling::WithReplacement || n < b {
            (0..b).map(|_| batch_rng.random_range(0..n)).collect()
        } else {
            let start = match cursor {
                Some(c) if c + b <= n => c,
                _ => {
                    order.clear();
                    order.extend(0..n);
                    order.shuffle(&mut batch_rng);
                    0
                }
            };
            cursor = Some(start + b);
            order[start..start + b].to_vec()
        };
        let mut batch = train.batch(&positions);
        if settings.hflip {
            hflip_batch(&mut batch, &train.input_shape, &mut aug_rng)?;
        }
        let out = model.loss_and_grad(&batch)?;
        if !out.mean_loss.is_finite() {
            return Ok(LoopOutcome {
                model,
                status: RunStatus::Failed {
                    reason: format!("non-finite loss at step {t}"),
                },
                final_loss: None,
            });
        }
        final_loss = Some(out.mean_loss);
        let lr = cosine_lr(t, settings.total_steps, settings.optimizer.lr)?;
        if let Err(e) = opt.sgd_step(&mut model, &out.grad, lr) {
            return match e {
                Error::Diverged(reason) => Ok(LoopOutcome {
                    model,
                    status: RunStatus::Failed {
                        reason: format!("{reason} at step {t}"),
                    },
                    final_loss,
                }),
                other => Err(other),
            };
        }
        if on_step(t, &model)?.is_break() {
            break;
        }
    }
    Ok(LoopOutcome {
        model,
        status: RunStatus::Completed,
        final_loss,
    })
}

/// Standard i.i.d. training with periodic validation; returns the run record
/// and the final model.
pub fn train_standard(
    settings: &TrainSettings,
    train: &Dataset,
    val: &Dataset,
    test: &Dataset,
) -> Result<(RunRecord, Model)> {
    let started = Instant::now();
    let mut recorder = Recorder::new(settings, train, val, test)?;
    let n = train.len();
    let outcome = run_standard_loop(settings, train, |t, model| {
        let lr = cosine_lr(t, settings.total_steps, settings.optimizer.lr)?;
        recorder.after_step(t, model, n, lr)
    })?;
    let record = recorder.finish(
        None,
        None,
        settings,
        outcome.final_loss,
        outcome.status,
        started.elapsed().as_secs_f64(),
    );
    Ok((record, outcome.model))
}
