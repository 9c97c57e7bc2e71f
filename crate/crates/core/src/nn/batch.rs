use crate::error::{Error, Result};

/// A minibatch in 64-bit precision, rows laid out contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub example_ids: Vec<u64>,
    pub inputs: Vec<f64>,
    pub labels: Vec<usize>,
    pub input_dim: usize,
}

impl Batch {
    pub fn new(
        example_ids: Vec<u64>,
        inputs: Vec<f64>,
        labels: Vec<usize>,
        input_dim: usize,
    ) -> Result<Self> {
        let batch = Batch {
            example_ids,
            inputs,
            labels,
            input_dim,
        };
        batch.check()?;
        Ok(batch)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.input_dim..(i + 1) * self.input_dim]
    }

    pub(crate) fn check(&self) -> Result<()> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("batch must hold at least one example".into()));
        }
        if self.example_ids.len() != n || self.inputs.len() != n * self.input_dim {
            return Err(Error::ShapeMismatch(format!(
                "batch leading lengths disagree: ids {}, labels {n}, inputs {} (dim {})",
                self.example_ids.len(),
                self.inputs.len(),
                self.input_dim
            )));
        }
        Ok(())
    }
}
