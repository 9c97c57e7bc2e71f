use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curriculum::{Order, Sampling};
use crate::data::{
    gen_synthetic, inject_label_noise, load_cifar_bin, load_idx, read_clab, split, Dataset,
    NoiseSpec, SplitFractions, SyntheticSpec,
};
use crate::error::{Error, Result};
use crate::nn::{ArchSpec, OptimizerConfig};
use crate::pacing::{pacing_grid, PacingFamily, PacingSpec, DEFAULT_A_VALUES, DEFAULT_B_VALUES};
use crate::rng::derive_seed;
use crate::scoring::{
    estimate_cscore, oracle_score, score_by_learned_epoch, score_by_loss, CScoreMode, ScoreTable,
    TrainConfig,
};

pub const DEFAULT_SEEDS: [u64; 3] = [111, 222, 333];

/// A sweep over orderings, pacing functions and seeds, read from TOML.
/// Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub data: DataConfig,
    pub arch: ArchTemplate,
    pub scoring: ScoringConfig,
    #[serde(default = "default_orders")]
    pub orders: Vec<Order>,
    #[serde(default)]
    pub pacing: PacingGridConfig,
    pub total_steps: usize,
    pub batch_size: usize,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub eval_every: Option<usize>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub hflip: bool,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Defaults to `#pacing specs * #seeds`.
    #[serde(default)]
    pub standard_replicates: Option<usize>,
    /// Worker threads; overridden by `CLAB_WORKERS`. Not part of the hash.
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

fn default_name() -> String {
    "sweep".into()
}

fn default_orders() -> Vec<Order> {
    Order::ALL.to_vec()
}

fn default_seeds() -> Vec<u64> {
    DEFAULT_SEEDS.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    #[serde(default = "default_split")]
    pub split: SplitFractions,
    #[serde(default)]
    pub split_seed: u64,
    /// Applied to the train and validation splits; test labels stay clean.
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
}

fn default_split() -> SplitFractions {
    SplitFractions::new(0.8, 0.1, 0.1)
}

/// Where examples come from. Relative paths resolve against the config
/// file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    Synthetic(SyntheticSpec),
    Clab { path: PathBuf },
    Idx { images: PathBuf, labels: PathBuf },
    Cifar { files: Vec<PathBuf> },
}

impl DataSource {
    pub fn load(&self, base: &Path) -> Result<Dataset> {
        let at = |p: &PathBuf| base.join(p);
        match self {
            DataSource::Synthetic(spec) => gen_synthetic(spec),
            DataSource::Clab { path } => read_clab(at(path)),
            DataSource::Idx { images, labels } => load_idx(at(images), at(labels)),
            DataSource::Cifar { files } => {
                load_cifar_bin(&files.iter().map(at).collect::<Vec<_>>())
            }
        }
    }
}

/// Train, validation and test splits after noise injection.
#[derive(Debug, Clone)]
pub struct Splits {
    pub train: Dataset,
    pub val: Dataset,
    pub test: Dataset,
}

impl DataConfig {
    pub fn load(&self, base: &Path) -> Result<Splits> {
        let full = self.source.load(base)?;
        let (mut train, mut val, test) = split(&full, self.split, self.split_seed)?;
        if let Some(noise) = &self.noise {
            train = inject_label_noise(&train, noise)?;
            let val_noise = NoiseSpec { seed: derive_seed(noise.seed, 1), ..*noise };
            val = inject_label_noise(&val, &val_noise)?;
        }
        Ok(Splits { train, val, test })
    }
}

/// Architecture with the input and output sizes left to the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArchTemplate {
    Mlp {
        #[serde(default)]
        hidden: Vec<usize>,
    },
    SmallConv {
        conv_channels: Vec<usize>,
        #[serde(default = "default_kernel")]
        kernel_size: usize,
        /// Empty means no pooling.
        #[serde(default)]
        pool: Vec<bool>,
    },
}

fn default_kernel() -> usize {
    3
}

impl ArchTemplate {
    pub fn resolve(&self, data: &Dataset) -> Result<ArchSpec> {
        let arch = match self {
            ArchTemplate::Mlp { hidden } => {
                let mut widths = vec![data.input_dim()];
                widths.extend(hidden);
                widths.push(data.num_classes);
                ArchSpec::mlp(&widths)
            }
            ArchTemplate::SmallConv { conv_channels, kernel_size, pool } => {
                let shape: [usize; 3] = data.input_shape.as_slice().try_into().map_err(|_| {
                    Error::InvalidArch(format!(
                        "small_conv needs [c, h, w] inputs, data has shape {:?}",
                        data.input_shape
                    ))
                })?;
                let pool = if pool.is_empty() { vec![false; conv_channels.len()] } else { pool.clone() };
                ArchSpec::small_conv(shape, conv_channels, *kernel_size, &pool, data.num_classes)
            }
        };
        arch.validate()?;
        Ok(arch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreSource {
    Oracle,
    Loss,
    LearnedEpoch,
    CscoreAcc,
    CscoreLoss,
    /// A previously saved score table.
    File,
}

/// How to obtain difficulty scores for the training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoringConfig {
    pub method: ScoreSource,
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Reference architecture; defaults to the sweep's.
    #[serde(default)]
    pub arch: Option<ArchTemplate>,
    #[serde(default = "default_score_epochs")]
    pub epochs: usize,
    #[serde(default)]
    pub batch_size: Option<usize>,
    #[serde(default)]
    pub optimizer: Option<OptimizerConfig>,
    /// Loss method only; defaults to the last epoch.
    #[serde(default)]
    pub snapshot_epoch: Option<usize>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_score_epochs() -> usize {
    30
}

fn default_alpha() -> f64 {
    0.25
}

fn default_repeats() -> usize {
    2
}

impl ScoringConfig {
    pub fn new(method: ScoreSource) -> Self {
        ScoringConfig {
            method,
            path: None,
            arch: None,
            epochs: default_score_epochs(),
            batch_size: None,
            optimizer: None,
            snapshot_epoch: None,
            alpha: default_alpha(),
            repeats: default_repeats(),
            seed: 0,
        }
    }

    /// Scores every example of `data`. `fallback_arch` and `fallback_batch`
    /// fill in unset reference-model fields.
    pub fn compute(
        &self,
        data: &Dataset,
        fallback_arch: &ArchTemplate,
        fallback_batch: usize,
        base: &Path,
    ) -> Result<ScoreTable> {
        let reference = || -> Result<TrainConfig> {
            let arch = self.arch.as_ref().unwrap_or(fallback_arch).resolve(data)?;
            let mut cfg =
                TrainConfig::new(arch, self.epochs, self.batch_size.unwrap_or(fallback_batch), self.seed);
            if let Some(opt) = self.optimizer {
                cfg.optimizer = opt;
            }
            Ok(cfg)
        };
        let table = match self.method {
            ScoreSource::Oracle => oracle_score(data)?,
            ScoreSource::Loss => {
                score_by_loss(data, &reference()?, self.snapshot_epoch.unwrap_or(self.epochs))?
            }
            ScoreSource::LearnedEpoch => score_by_learned_epoch(data, &reference()?)?,
            ScoreSource::CscoreAcc => {
                estimate_cscore(data, &reference()?, self.alpha, self.repeats, CScoreMode::Acc)?
            }
            ScoreSource::CscoreLoss => {
                estimate_cscore(data, &reference()?, self.alpha, self.repeats, CScoreMode::Loss)?
            }
            ScoreSource::File => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or_else(|| Error::Config("scoring.path is required for method \"file\"".into()))?;
                ScoreTable::load(base.join(path))?
            }
        };
        // Fail early rather than on the first curriculum run.
        table.aligned(data.ids())?;
        Ok(table)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacingGridConfig {
    pub families: Vec<PacingFamily>,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
}

impl Default for PacingGridConfig {
    fn default() -> Self {
        PacingGridConfig {
            families: PacingFamily::ALL.to_vec(),
            a_values: DEFAULT_A_VALUES.to_vec(),
            b_values: DEFAULT_B_VALUES.to_vec(),
        }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SweepConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must not be empty".into()));
        }
        let mut seen = self.seeds.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.seeds.len() {
            return Err(Error::Config("seeds must be distinct".into()));
        }
        if self.total_steps == 0 || self.batch_size == 0 {
            return Err(Error::Config("total_steps and batch_size must be positive".into()));
        }
        if self.eval_every == Some(0) {
            return Err(Error::Config("eval_every must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        self.optimizer.validate()
    }

    /// SHA-256 of the canonical JSON form (excluding `workers`).
    pub fn hash(&self) -> Result<String> {
        let canonical = serde_json::to_vec(self)?;
        Ok(hex::encode(Sha256::digest(&canonical)))
    }

    pub fn pacing_specs(&self, n: usize) -> Result<Vec<PacingSpec>> {
        pacing_grid(
            &self.pacing.a_values,
            &self.pacing.b_values,
            &self.pacing.families,
            n,
            self.total_steps,
        )
    }

    pub fn standard_replicates(&self) -> usize {
        self.standard_replicates.unwrap_or_else(|| {
            self.pacing.families.len()
                * self.pacing.a_values.len()
                * self.pacing.b_values.len()
                * self.seeds.len()
        })
    }
}
