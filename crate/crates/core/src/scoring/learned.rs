use std::ops::ControlFlow;

use super::reference::{fit_reference, TrainConfig};
use super::table::{ScoreMetadata, ScoreMethod, ScoreTable};
use super::trace::PredictionTrace;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::evaluate;

/// `c(i) + avg_loss(i) / (1 + max_j avg_loss(j))`. The fractional part lies in
/// `[0, 1)`, so the ordering refines the ordering by learned checkpoint.
pub fn learned_epoch_scores(trace: &PredictionTrace) -> Vec<f64> {
    let c = trace.learned_epochs();
    let avg = trace.mean_losses();
    let denom = 1.0 + avg.iter().copied().fold(0.0, f64::max);
    c.iter()
        .zip(&avg)
        .map(|(&c, &a)| c as f64 + a / denom)
        .collect()
}

/// Trains a reference model for `config.epochs` epochs, tracing clean
/// correctness and loss after each, and scores by learned epoch.
pub fn score_by_learned_epoch(data: &Dataset, config: &TrainConfig) -> Result<ScoreTable> {
    let mut trace = PredictionTrace::new(data.ids().to_vec());
    fit_reference(config, data, |epoch, model| {
        if epoch > 0 {
            trace.push(epoch, &evaluate(model, data)?);
        }
        Ok(ControlFlow::Continue(()))
    })?;
    let scores = learned_epoch_scores(&trace);
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Diverged("non-finite loss in trace".into()));
    }
    Ok(ScoreTable::new(
        data.name.clone(),
        ScoreMethod::LearnedEpoch,
        data.ids().to_vec(),
        scores,
    )
    .with_metadata(ScoreMetadata {
        arch: Some(config.arch.clone()),
        epochs: Some(config.epochs),
        steps_per_epoch: Some(config.steps_per_epoch(data.len())),
        seed: Some(config.seed),
        ..Default::default()
    }))
}
