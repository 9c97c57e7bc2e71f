use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::ArchSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMethod {
    Loss,
    LearnedEpoch,
    CscoreAcc,
    CscoreLoss,
    Oracle,
}

/// How a table was produced. Fields that do not apply to the method are
/// `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreMetadata {
    pub arch: Option<ArchSpec>,
    pub epochs: Option<usize>,
    pub steps_per_epoch: Option<usize>,
    pub snapshot_epoch: Option<usize>,
    pub alpha: Option<f64>,
    pub repeats: Option<usize>,
    pub seed: Option<u64>,
}

/// Scores aligned with `ids`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub dataset_name: String,
    pub method: ScoreMethod,
    pub metadata: ScoreMetadata,
    pub ids: Vec<u64>,
    pub scores: Vec<f64>,
}

impl ScoreTable {
    /// # Panics
    /// If `ids` and `scores` differ in length.
    pub fn new(
        dataset_name: impl Into<String>,
        method: ScoreMethod,
        ids: Vec<u64>,
        scores: Vec<f64>,
    ) -> Self {
        assert_eq!(ids.len(), scores.len(), "ids and scores must align");
        ScoreTable {
            dataset_name: dataset_name.into(),
            method,
            metadata: ScoreMetadata::default(),
            ids,
            scores,
        }
    }

    pub fn with_metadata(mut self, metadata: ScoreMetadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.ids.len() != self.scores.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} ids vs {} scores",
                self.ids.len(),
                self.scores.len()
            )));
        }
        if let Some(i) = self.scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "score for id {} is not finite",
                self.ids[i]
            )));
        }
        Ok(())
    }

    pub fn lookup(&self) -> HashMap<u64, f64> {
        self.ids.iter().copied().zip(self.scores.iter().copied()).collect()
    }

    /// Scores in the order of `ids`.
    pub fn aligned(&self, ids: &[u64]) -> Result<Vec<f64>> {
        let map = self.lookup();
        ids.iter()
            .map(|id| map.get(id).copied().ok_or(Error::MissingScore(*id)))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: ScoreTable = serde_json::from_str(text)?;
        table.validate()?;
        Ok(table)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ScoreTable::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Uses the dataset's built-in oracle difficulty as the score.
pub fn oracle_score(dataset: &Dataset) -> Result<ScoreTable> {
    let oracle = dataset
        .oracle_difficulty()
        .ok_or_else(|| Error::OracleUnavailable(dataset.name.clone()))?;
    Ok(ScoreTable::new(
        dataset.name.clone(),
        ScoreMethod::Oracle,
        dataset.ids().to_vec(),
        oracle.to_vec(),
    ))
}
