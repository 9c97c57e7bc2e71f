use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::order::Order;
use super::settings::TrainSettings;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::{evaluate, Model};
use crate::pacing::PacingSpec;
use crate::scoring::PredictionTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub step: usize,
    pub train_set_size: usize,
    pub lr: f64,
    pub val_accuracy: f64,
    pub val_loss: f64,
    pub test_accuracy: Option<f64>,
    pub test_loss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Failed { reason: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

/// Outcome of one training run.
///
/// The reported test accuracy is the one measured at the evaluation step with
/// the highest validation accuracy (earliest step on ties).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// `None` for standard training.
    pub order: Option<Order>,
    pub pacing: Option<PacingSpec>,
    pub settings: TrainSettings,
    pub series: Vec<EvalPoint>,
    pub best_val_step: Option<usize>,
    pub best_val_accuracy: Option<f64>,
    pub test_accuracy_at_best_val: Option<f64>,
    pub final_train_loss: Option<f64>,
    pub trace: Option<PredictionTrace>,
    pub wall_clock_s: f64,
    pub seed: u64,
    pub status: RunStatus,
}

/// Periodic validation/test evaluation and optional training-set traces,
/// shared by the standard and curriculum loops.
pub(crate) struct Recorder<'a> {
    train: &'a Dataset,
    val: &'a Dataset,
    test: &'a Dataset,
    eval_every: usize,
    trace_every: Option<usize>,
    total_steps: usize,
    pub(crate) series: Vec<EvalPoint>,
    pub(crate) trace: Option<PredictionTrace>,
}

impl<'a> Recorder<'a> {
    pub(crate) fn new(
        settings: &TrainSettings,
        train: &'a Dataset,
        val: &'a Dataset,
        test: &'a Dataset,
    ) -> Result<Self> {
        if val.is_empty() {
            return Err(Error::EmptyDataset(format!("validation set {}", val.name)));
        }
        Ok(Recorder {
            train,
            val,
            test,
            eval_every: settings.eval_every(),
            trace_every: settings.trace_every,
            total_steps: settings.total_steps,
            series: Vec::new(),
            trace: settings.trace_every.map(|_| PredictionTrace::new(train.ids().to_vec())),
        })
    }

    pub(crate) fn after_step(
        &mut self,
        t: usize,
        model: &Model,
        pool_size: usize,
        lr: f64,
    ) -> Result<ControlFlow<()>> {
        let last = t == self.total_steps;
        if t % self.eval_every == 0 || last {
            let val = evaluate(model, self.val)?;
            let test = if self.test.is_empty() {
                None
            } else {
                Some(evaluate(model, self.test)?)
            };
            self.series.push(EvalPoint {
                step: t,
                train_set_size: pool_size,
                lr,
                val_accuracy: val.accuracy,
                val_loss: val.mean_loss,
                test_accuracy: test.as_ref().map(|e| e.accuracy),
                test_loss: test.as_ref().map(|e| e.mean_loss),
            });
        }
        if let (Some(every), Some(trace)) = (self.trace_every, self.trace.as_mut()) {
            if t % every == 0 || last {
                trace.push(t, &evaluate(model, self.train)?);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    pub(crate) fn finish(
        self,
        order: Option<Order>,
        pacing: Option<PacingSpec>,
        settings: &TrainSettings,
        final_train_loss: Option<f64>,
        status: RunStatus,
        wall_clock_s: f64,
    ) -> RunRecord {
        let mut best: Option<&EvalPoint> = None;
        for p in &self.series {
            if best.is_none_or(|b| p.val_accuracy > b.val_accuracy) {
                best = Some(p);
            }
        }
        RunRecord {
            order,
            pacing,
            settings: settings.clone(),
            best_val_step: best.map(|b| b.step),
            best_val_accuracy: best.map(|b| b.val_accuracy),
            test_accuracy_at_best_val: best.and_then(|b| b.test_accuracy),
            series: self.series,
            final_train_loss,
            trace: self.trace,
            wall_clock_s,
            seed: settings.seed,
            status,
        }
    }
}
