//! Per-example difficulty scores. Higher scores mean harder examples.

mod cscore;
mod learned;
mod loss;
mod reference;
mod table;
mod trace;

pub use cscore::{cscore_folds, estimate_cscore, CScoreMode};
pub use learned::{learned_epoch_scores, score_by_learned_epoch};
pub use loss::score_by_loss;
pub use reference::{fit_reference, TrainConfig};
pub use table::{oracle_score, ScoreMetadata, ScoreMethod, ScoreTable};
pub use trace::PredictionTrace;
