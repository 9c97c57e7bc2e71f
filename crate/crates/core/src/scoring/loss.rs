use std::ops::ControlFlow;

use super::reference::{fit_reference, TrainConfig};
use super::table::{ScoreMetadata, ScoreMethod, ScoreTable};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::evaluate;

/// Per-example clean loss of a reference model at `snapshot_epoch`
/// (`0` scores the untrained model).
pub fn score_by_loss(
    data: &Dataset,
    config: &TrainConfig,
    snapshot_epoch: usize,
) -> Result<ScoreTable> {
    if snapshot_epoch > config.epochs {
        return Err(Error::OutOfRange {
            what: "snapshot_epoch",
            detail: format!("{snapshot_epoch} > {} epochs", config.epochs),
        });
    }
    let mut scores = None;
    fit_reference(config, data, |epoch, model| {
        if epoch == snapshot_epoch {
            scores = Some(evaluate(model, data)?.losses);
            return Ok(ControlFlow::Break(()));
        }
        Ok(ControlFlow::Continue(()))
    })?;
    let scores = scores.ok_or_else(|| Error::Diverged("snapshot never reached".into()))?;
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Diverged("non-finite loss score".into()));
    }
    Ok(
        ScoreTable::new(data.name.clone(), ScoreMethod::Loss, data.ids().to_vec(), scores)
            .with_metadata(ScoreMetadata {
                arch: Some(config.arch.clone()),
                epochs: Some(config.epochs),
                steps_per_epoch: Some(config.steps_per_epoch(data.len())),
                snapshot_epoch: Some(snapshot_epoch),
                seed: Some(config.seed),
                ..Default::default()
            }),
    )
}
