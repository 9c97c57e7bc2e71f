use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::nn::Batch;

/// Borrowed view of one example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example<'a> {
    pub id: u64,
    pub input: &'a [f32],
    pub label: usize,
}

/// Labeled examples with stable ids.
///
/// Inputs are stored as `f32` rows; batches are widened to `f64` on the way
/// into the model. `input_shape` is `[dim]` for flat data and `[c, h, w]` for
/// images.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub num_classes: usize,
    pub input_shape: Vec<usize>,
    ids: Vec<u64>,
    inputs: Vec<f32>,
    labels: Vec<usize>,
    noise_mask: Option<Vec<bool>>,
    oracle_difficulty: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        num_classes: usize,
        input_shape: Vec<usize>,
        ids: Vec<u64>,
        inputs: Vec<f32>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if num_classes == 0 {
            return Err(Error::InvalidArgument("num_classes must be >= 1".into()));
        }
        let dim: usize = input_shape.iter().product();
        if input_shape.is_empty() || dim == 0 {
            return Err(Error::InvalidArgument("input shape must be nonempty and positive".into()));
        }
        let n = labels.len();
        if ids.len() != n || inputs.len() != n * dim {
            return Err(Error::ShapeMismatch(format!(
                "dataset {name}: {} ids, {n} labels, {} input values (dim {dim})",
                ids.len(),
                inputs.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&y| y >= num_classes) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} outside [0, {num_classes})"
            )));
        }
        let mut seen = HashSet::with_capacity(n);
        if let Some(&dup) = ids.iter().find(|id| !seen.insert(**id)) {
            return Err(Error::InvalidArgument(format!("duplicate example id {dup}")));
        }
        Ok(Dataset {
            name,
            num_classes,
            input_shape,
            ids,
            inputs,
            labels,
            noise_mask: None,
            oracle_difficulty: None,
        })
    }

    pub fn with_noise_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "noise mask length {} != {}",
                mask.len(),
                self.len()
            )));
        }
        self.noise_mask = Some(mask);
        Ok(self)
    }

    pub fn with_oracle_difficulty(mut self, difficulty: Vec<f64>) -> Result<Self> {
        if difficulty.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "oracle difficulty length {} != {}",
                difficulty.len(),
                self.len()
            )));
        }
        self.oracle_difficulty = Some(difficulty);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.input_shape.iter().product()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn inputs(&self) -> &[f32] {
        &self.inputs
    }

    pub fn noise_mask(&self) -> Option<&[bool]> {
        self.noise_mask.as_deref()
    }

    pub fn oracle_difficulty(&self) -> Option<&[f64]> {
        self.oracle_difficulty.as_deref()
    }

    pub fn row(&self, position: usize) -> &[f32] {
        let d = self.input_dim();
        &self.inputs[position * d..(position + 1) * d]
    }

    pub fn example(&self, position: usize) -> Example<'_> {
        Example {
            id: self.ids[position],
            input: self.row(position),
            label: self.labels[position],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Example<'_>> + '_ {
        (0..self.len()).map(|i| self.example(i))
    }

    /// Position of every id.
    pub fn id_positions(&self) -> HashMap<u64, usize> {
        self.ids.iter().enumerate().map(|(p, &id)| (id, p)).collect()
    }

    /// Gathers the given positions into a 64-bit batch.
    ///
    /// # Panics
    /// On an empty position list or an out-of-range position.
    pub fn batch(&self, positions: &[usize]) -> Batch {
        assert!(!positions.is_empty(), "batch needs at least one position");
        let d = self.input_dim();
        let mut inputs = Vec::with_capacity(positions.len() * d);
        for &p in positions {
            inputs.extend(self.row(p).iter().map(|&v| v as f64));
        }
        Batch {
            example_ids: positions.iter().map(|&p| self.ids[p]).collect(),
            inputs,
            labels: positions.iter().map(|&p| self.labels[p]).collect(),
            input_dim: d,
        }
    }

    /// New dataset holding the given positions in the given order. Class
    /// metadata, noise mask and oracle difficulty are carried along.
    pub fn subset(&self, positions: &[usize], name: impl Into<String>) -> Dataset {
        let d = self.input_dim();
        let mut inputs = Vec::with_capacity(positions.len() * d);
        for &p in positions {
            inputs.extend_from_slice(self.row(p));
        }
        Dataset {
            name: name.into(),
            num_classes: self.num_classes,
            input_shape: self.input_shape.clone(),
            ids: positions.iter().map(|&p| self.ids[p]).collect(),
            inputs,
            labels: positions.iter().map(|&p| self.labels[p]).collect(),
            noise_mask: self
                .noise_mask
                .as_ref()
                .map(|m| positions.iter().map(|&p| m[p]).collect()),
            oracle_difficulty: self
                .oracle_difficulty
                .as_ref()
                .map(|o| positions.iter().map(|&p| o[p]).collect()),
        }
    }

    pub(crate) fn with_labels(&self, labels: Vec<usize>, mask: Vec<bool>) -> Dataset {
        let mut out = self.clone();
        out.labels = labels;
        out.noise_mask = Some(mask);
        out
    }

    /// Per-class example counts, indexed by class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }
}
