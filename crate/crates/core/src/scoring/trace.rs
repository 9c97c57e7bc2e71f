use serde::{Deserialize, Serialize};

use crate::nn::Evaluation;

/// 0/1 correctness and loss of every example at a sequence of checkpoints.
/// Row `t` holds checkpoint `steps[t]`; columns follow `ids`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionTrace {
    pub ids: Vec<u64>,
    pub steps: Vec<usize>,
    pub correct: Vec<Vec<bool>>,
    pub losses: Vec<Vec<f64>>,
}

impl PredictionTrace {
    pub fn new(ids: Vec<u64>) -> Self {
        PredictionTrace {
            ids,
            steps: Vec::new(),
            correct: Vec::new(),
            losses: Vec::new(),
        }
    }

    pub fn push(&mut self, step: usize, eval: &Evaluation) {
        debug_assert_eq!(eval.correct.len(), self.ids.len());
        self.steps.push(step);
        self.correct.push(eval.correct.clone());
        self.losses.push(eval.losses.clone());
    }

    /// Number of checkpoints `T`.
    pub fn len(&self) -> usize {
        self.correct.len()
    }

    pub fn is_empty(&self) -> bool {
        self.correct.is_empty()
    }

    pub fn num_examples(&self) -> usize {
        self.ids.len()
    }

    /// Learned checkpoint of each example: the smallest 1-based `t*` such that
    /// the example is correct at every checkpoint from `t*` to `T`, or `T + 1`
    /// if it is wrong at the last one.
    pub fn learned_epochs(&self) -> Vec<usize> {
        let t_max = self.len();
        (0..self.num_examples())
            .map(|i| {
                let mut learned = t_max + 1;
                for t in 1..=t_max {
                    if self.correct[t - 1][i] {
                        learned = learned.min(t);
                    } else {
                        learned = t_max + 1;
                    }
                }
                learned
            })
            .collect()
    }

    /// Mean loss of each example across checkpoints.
    pub fn mean_losses(&self) -> Vec<f64> {
        let t_max = self.len().max(1) as f64;
        (0..self.num_examples())
            .map(|i| self.losses.iter().map(|row| row[i]).sum::<f64>() / t_max)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(rows: &[&[bool]]) -> PredictionTrace {
        let n = rows[0].len();
        let mut tr = PredictionTrace::new((0..n as u64).collect());
        for (t, row) in rows.iter().enumerate() {
            tr.steps.push(t + 1);
            tr.correct.push(row.to_vec());
            tr.losses.push(vec![0.5; n]);
        }
        tr
    }

    #[test]
    fn hand_traced_recurrence() {
        // one example: [0,1,0,1,1] -> 4
        let tr = trace(&[&[false], &[true], &[false], &[true], &[true]]);
        assert_eq!(tr.learned_epochs(), vec![4]);
    }

    #[test]
    fn always_correct_and_final_miss() {
        let tr = trace(&[&[true, true], &[true, true], &[true, false]]);
        assert_eq!(tr.learned_epochs(), vec![1, 4]);
    }
}
