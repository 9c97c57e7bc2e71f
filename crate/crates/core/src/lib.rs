//! Curriculum-learning laboratory.
//!
//! The crate bundles everything needed to run ordered-training experiments at
//! desk scale:
//!
//! - [`nn`]: a small deterministic feedforward trainer (dense and convolutional
//!   layers, softmax cross-entropy, SGD with momentum and cosine decay).
//! - [`data`]: datasets, IDX / CIFAR-10 / synthetic loaders, splitting and
//!   label-noise injection.
//! - [`scoring`]: per-example difficulty scores (loss, learned epoch,
//!   estimated c-score).
//! - [`pacing`]: the six pacing-function families and their parameter grids.
//! - [`curriculum`]: ordered training with a dynamically growing training set.
//! - [`analysis`]: Spearman correlations, learned-iteration matrices, baseline
//!   statistics, heatmaps.
//! - [`harness`]: sweep orchestration, the result ledger and report emission.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod analysis;
pub mod curriculum;
pub mod data;
pub mod error;
pub mod harness;
pub mod nn;
pub mod pacing;
pub mod rng;
pub mod scoring;

pub use error::{Error, Result};
