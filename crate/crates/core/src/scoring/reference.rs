use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::curriculum::{run_standard_loop, RunStatus, TrainSettings};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::{ArchSpec, Model, OptimizerConfig};

/// Budget and optimiser for a reference model trained to produce scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub arch: ArchSpec,
    pub epochs: usize,
    pub batch_size: usize,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    #[serde(default)]
    pub hflip: bool,
}

impl TrainConfig {
    pub fn new(arch: ArchSpec, epochs: usize, batch_size: usize, seed: u64) -> Self {
        TrainConfig {
            arch,
            epochs,
            batch_size,
            optimizer: OptimizerConfig::default(),
            seed,
            hflip: false,
        }
    }

    /// `max(1, N / B)`.
    pub fn steps_per_epoch(&self, n: usize) -> usize {
        (n / self.batch_size.max(1)).max(1)
    }

    pub fn settings(&self, n: usize) -> TrainSettings {
        let mut s = TrainSettings::new(
            self.arch.clone(),
            self.epochs * self.steps_per_epoch(n),
            self.batch_size,
            self.seed,
        );
        s.optimizer = self.optimizer;
        s.hflip = self.hflip;
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidArgument("epochs must be at least 1".into()));
        }
        self.arch.validate()?;
        self.optimizer.validate()
    }
}

/// Trains a fresh model with standard i.i.d. SGD. `on_epoch(e, model)` runs
/// once for the untrained model (`e = 0`) and after every epoch.
/// Divergence is reported as `Error::Diverged`.
pub fn fit_reference<F>(config: &TrainConfig, data: &Dataset, mut on_epoch: F) -> Result<Model>
where
    F: FnMut(usize, &Model) -> Result<ControlFlow<()>>,
{
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset(data.name.clone()));
    }
    let settings = config.settings(data.len());
    let spe = config.steps_per_epoch(data.len());
    if on_epoch(0, &Model::init(&config.arch, config.seed)?)?.is_break() {
        return Model::init(&config.arch, config.seed);
    }
    let outcome = run_standard_loop(&settings, data, |t, model| {
        if t % spe == 0 {
            on_epoch(t / spe, model)
        } else {
            Ok(ControlFlow::Continue(()))
        }
    })?;
    match outcome.status {
        RunStatus::Completed => Ok(outcome.model),
        RunStatus::Failed { reason } => Err(Error::Diverged(reason)),
    }
}
