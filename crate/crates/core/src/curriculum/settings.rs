use serde::{Deserialize, Serialize};

use super::order::Order;
use crate::error::{Error, Result};
use crate::nn::{ArchSpec, OptimizerConfig};
use crate::pacing::PacingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Shuffled passes over the current pool, reshuffled when the pool
    /// changes size or a pass runs out. Pools smaller than a batch are drawn
    /// with replacement.
    #[default]
    WithoutReplacement,
    /// Every batch drawn uniformly with replacement from the pool.
    WithReplacement,
}

/// Everything a training run needs besides the data and the ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSettings {
    pub arch: ArchSpec,
    pub total_steps: usize,
    pub batch_size: usize,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    /// Validation cadence in steps; `None` means `max(1, T / 100)`.
    #[serde(default)]
    pub eval_every: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub sampling: Sampling,
    /// Random horizontal flips; image inputs only.
    #[serde(default)]
    pub hflip: bool,
    /// Record a prediction trace on the clean training set every this many
    /// steps (and at `T`).
    #[serde(default)]
    pub trace_every: Option<usize>,
}

impl TrainSettings {
    pub fn new(arch: ArchSpec, total_steps: usize, batch_size: usize, seed: u64) -> Self {
        TrainSettings {
            arch,
            total_steps,
            batch_size,
            optimizer: OptimizerConfig::default(),
            eval_every: None,
            seed,
            sampling: Sampling::WithoutReplacement,
            hflip: false,
            trace_every: None,
        }
    }

    pub fn eval_every(&self) -> usize {
        self.eval_every
            .unwrap_or_else(|| (self.total_steps / 100).max(1))
    }

    pub fn validate(&self) -> Result<()> {
        self.arch.validate()?;
        self.optimizer.validate()?;
        if self.total_steps == 0 || self.batch_size == 0 {
            return Err(Error::InvalidArgument(
                "total_steps and batch_size must be >= 1".into(),
            ));
        }
        if self.eval_every == Some(0) || self.trace_every == Some(0) {
            return Err(Error::InvalidArgument(
                "eval_every and trace_every must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// One curriculum run: ordering, pacing and the shared training settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurriculumConfig {
    pub order: Order,
    pub pacing: PacingSpec,
    pub settings: TrainSettings,
}

impl CurriculumConfig {
    pub fn validate(&self, train_len: usize) -> Result<()> {
        self.settings.validate()?;
        self.pacing.validate()?;
        if self.pacing.n != train_len {
            return Err(Error::InvalidArgument(format!(
                "pacing N = {} but the training set has {train_len} examples",
                self.pacing.n
            )));
        }
        if self.pacing.total_steps != self.settings.total_steps {
            return Err(Error::InvalidArgument(format!(
                "pacing T = {} but total_steps = {}",
                self.pacing.total_steps, self.settings.total_steps
            )));
        }
        Ok(())
    }
}
