//! Minimal deterministic feedforward trainer.
//!
//! Parameters live in one flat `f64` vector; each layer owns a contiguous
//! weight block followed by its bias block. Gradients are computed by a
//! hand-written reverse pass and share the same layout.

mod arch;
mod batch;
mod eval;
mod model;
mod optim;

pub use arch::{Activation, ArchSpec};
pub use batch::Batch;
pub use eval::{evaluate, Evaluation};
pub use model::{LossAndGrad, Logits, Model};
pub use optim::{cosine_lr, OptimizerConfig, OptimizerState};
