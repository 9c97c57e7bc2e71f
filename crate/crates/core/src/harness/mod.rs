//! Sweep configuration, execution, persistence and reporting.

mod config;
mod report;
mod store;
mod sweep;

pub use config::{
    ArchTemplate, DataConfig, DataSource, PacingGridConfig, ScoreSource, ScoringConfig, Splits,
    SweepConfig, DEFAULT_SEEDS,
};
pub use report::{analyze_rows, analyze_store, write_report, BestPacing, OrderBest, Report, SummaryRow};
pub use store::{
    read_ledger, read_manifest, LedgerRow, Manifest, ResultStore, LEDGER_COLUMNS, LEDGER_FILE,
    LEDGER_VERSION, MANIFEST_FILE, RUNS_DIR, SCORES_FILE,
};
pub use sweep::{plan_jobs, resolve_workers, run_sweep, Job, JobKind, SweepOptions, SweepOutcome, WORKERS_ENV};
