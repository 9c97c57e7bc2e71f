//! Ordered training with a dynamically sized training set.
//!
//! Examples are ranked by a [`ScoreTable`](crate::scoring::ScoreTable),
//! interleaved round-robin across classes, and at step `t` batches are drawn
//! from the first `g(t)` entries of that ranking, where `g` is a
//! [`PacingSpec`](crate::pacing::PacingSpec).

mod order;
mod record;
mod sampler;
mod settings;
mod standard;
mod train;

pub use order::{order_examples, Order, OrderedIndex};
pub use record::{EvalPoint, RunRecord, RunStatus};
pub use settings::{CurriculumConfig, Sampling, TrainSettings};
pub use standard::train_standard;
pub(crate) use standard::run_standard_loop;
pub use train::{train_with_curriculum, train_with_curriculum_observed};
