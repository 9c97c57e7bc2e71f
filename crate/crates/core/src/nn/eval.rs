use super::model::{softmax_cross_entropy, Model};
use crate::data::Dataset;
use crate::error::{Error, Result};

const EVAL_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    pub mean_loss: f64,
    pub correct: Vec<bool>,
    pub losses: Vec<f64>,
}

/// Argmax prediction (lowest index on ties) and cross-entropy for every
/// example, in dataset order.
pub fn evaluate(model: &Model, dataset: &Dataset) -> Result<Evaluation> {
    let n = dataset.len();
    if n == 0 {
        return Err(Error::EmptyDataset(dataset.name.clone()));
    }
    let mut correct = Vec::with_capacity(n);
    let mut losses = Vec::with_capacity(n);
    let positions: Vec<usize> = (0..n).collect();
    for chunk in positions.chunks(EVAL_CHUNK) {
        let batch = dataset.batch(chunk);
        let logits = model.forward(&batch)?;
        for (r, &label) in batch.labels.iter().enumerate() {
            let row = logits.row(r);
            let pred = argmax(row);
            correct.push(pred == label);
            losses.push(softmax_cross_entropy(row, label).0);
        }
    }
    let hits = correct.iter().filter(|&&c| c).count();
    Ok(Evaluation {
        accuracy: hits as f64 / n as f64,
        mean_loss: losses.iter().sum::<f64>() / n as f64,
        correct,
        losses,
    })
}

pub(crate) fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}
