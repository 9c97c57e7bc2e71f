//! Rank correlations, implicit-curriculum matrices, baselines and sweep
//! summaries. Everything here is a pure function of its inputs.

mod baselines;
mod export;
mod histogram;
mod implicit;
mod rank;
mod select;

pub use baselines::{baselines, BaselineStats};
pub use export::{
    write_heatmap_csv, write_histogram_csv, write_learned_matrix_csv, write_matrix_csv,
};
pub use histogram::{score_histogram, Histogram};
pub use implicit::{learned_iteration_matrix, LearnedIterMatrix};
pub use rank::{fractional_ranks, spearman, spearman_matrix};
pub use select::{
    group_means, heatmap_and_best_pacing, select_best, ConfigKey, GroupStat, HeatmapGrid,
    HeatmapReport, RunSummary, Selection,
};
