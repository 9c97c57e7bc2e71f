use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use super::config::SweepConfig;
use super::store::{ResultStore, SCORES_FILE};
use crate::curriculum::{
    train_standard, train_with_curriculum, CurriculumConfig, Order, RunRecord, RunStatus,
    TrainSettings,
};
use crate::error::{Error, Result};
use crate::nn::ArchSpec;
use crate::pacing::PacingSpec;
use crate::rng::derive_seed;
use crate::scoring::ScoreTable;

/// Environment variable that overrides the configured worker count.
pub const WORKERS_ENV: &str = "CLAB_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub enum JobKind {
    Standard { group: usize },
    Curriculum { order: Order, pacing: PacingSpec },
}

/// One planned run. `seed` is the training seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub run_id: String,
    pub kind: JobKind,
    pub seed: u64,
}

/// Canonical run list: standard replicates in seed-major groups, then
/// curriculum runs ordered by ordering, pacing spec and seed.
///
/// Standard replicate group `g` trains with the configured seeds for `g = 0`
/// and with seeds derived from them otherwise.
pub fn plan_jobs(config: &SweepConfig, specs: &[PacingSpec]) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    let per_group = config.seeds.len();
    for k in 0..config.standard_replicates() {
        let (group, base) = (k / per_group, config.seeds[k % per_group]);
        jobs.push(Job {
            run_id: format!("standard-g{group:04}-s{base}"),
            kind: JobKind::Standard { group },
            seed: if group == 0 { base } else { derive_seed(base, group as u64) },
        });
    }
    for &order in &config.orders {
        for spec in specs {
            for &seed in &config.seeds {
                jobs.push(Job {
                    run_id: format!(
                        "{order}-{}-a{}-b{}-s{seed}",
                        spec.family, spec.a, spec.b
                    ),
                    kind: JobKind::Curriculum { order, pacing: *spec },
                    seed,
                });
            }
        }
    }
    let mut seen = HashSet::new();
    if let Some(dup) = jobs.iter().find(|j| !seen.insert(j.run_id.as_str())) {
        return Err(Error::Config(format!("duplicate run id {}", dup.run_id)));
    }
    Ok(jobs)
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub out_dir: PathBuf,
    /// Directory that relative data and score paths resolve against.
    pub base_dir: PathBuf,
    /// Takes precedence over `CLAB_WORKERS` and the config.
    pub workers: Option<usize>,
    /// Stop after committing this many new runs.
    pub max_runs: Option<usize>,
}

impl SweepOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        SweepOptions {
            out_dir: out_dir.into(),
            base_dir: PathBuf::from("."),
            workers: None,
            max_runs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub planned: usize,
    pub already_done: usize,
    pub executed: usize,
    pub failed: usize,
    pub workers: usize,
    pub stopped_early: bool,
}

pub fn resolve_workers(flag: Option<usize>, config: Option<usize>) -> Result<usize> {
    if let Some(w) = flag {
        return Ok(w.max(1));
    }
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let w: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a positive integer")))?;
        return Ok(w.max(1));
    }
    Ok(config.unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get())))
}

struct RunContext<'a> {
    config: &'a SweepConfig,
    arch: ArchSpec,
    scores: Option<ScoreTable>,
    train: &'a crate::data::Dataset,
    val: &'a crate::data::Dataset,
    test: &'a crate::data::Dataset,
}

impl RunContext<'_> {
    fn settings(&self, seed: u64) -> TrainSettings {
        let c = self.config;
        let mut s = TrainSettings::new(self.arch.clone(), c.total_steps, c.batch_size, seed);
        s.optimizer = c.optimizer;
        s.eval_every = c.eval_every;
        s.sampling = c.sampling;
        s.hflip = c.hflip;
        s
    }

    fn execute(&self, job: &Job) -> RunRecord {
        let settings = self.settings(job.seed);
        let (order, pacing) = match &job.kind {
            JobKind::Standard { .. } => (None, None),
            JobKind::Curriculum { order, pacing } => (Some(*order), Some(*pacing)),
        };
        let result = match (order, pacing, &self.scores) {
            (Some(order), Some(pacing), Some(scores)) => train_with_curriculum(
                &CurriculumConfig { order, pacing, settings: settings.clone() },
                scores,
                self.train,
                self.val,
                self.test,
            ),
            (Some(_), _, None) => Err(Error::Config("no scores for curriculum run".into())),
            _ => train_standard(&settings, self.train, self.val, self.test),
        };
        result.map(|(record, _)| record).unwrap_or_else(|e| RunRecord {
            order,
            pacing,
            settings,
            series: Vec::new(),
            best_val_step: None,
            best_val_accuracy: None,
            test_accuracy_at_best_val: None,
            final_train_loss: None,
            trace: None,
            wall_clock_s: 0.0,
            seed: job.seed,
            status: RunStatus::Failed { reason: e.to_string() },
        })
    }
}

/// Runs every planned job not yet in the store's ledger. Runs execute on a
/// worker pool; ledger lines are committed in canonical order, so an
/// interrupted sweep always leaves a prefix of the full ledger.
pub fn run_sweep(config: &SweepConfig, opts: &SweepOptions) -> Result<SweepOutcome> {
    config.validate()?;
    let splits = config.data.load(&opts.base_dir)?;
    let specs = config.pacing_specs(splits.train.len())?;
    let jobs = plan_jobs(config, &specs)?;
    let store = ResultStore::open(&opts.out_dir, config, jobs.len())?;
    let arch = config.arch.resolve(&splits.train)?;

    let needs_scores = jobs.iter().any(|j| matches!(j.kind, JobKind::Curriculum { .. }));
    let scores = if needs_scores {
        let path = opts.out_dir.join(SCORES_FILE);
        Some(if path.exists() {
            ScoreTable::load(&path)?
        } else {
            let t = config.scoring.compute(&splits.train, &config.arch, config.batch_size, &opts.base_dir)?;
            t.save(&path)?;
            t
        })
    } else {
        None
    };

    let done = store.completed_ids()?;
    let pending: Vec<&Job> = jobs.iter().filter(|j| !done.contains(&j.run_id)).collect();
    let workers = resolve_workers(opts.workers, config.workers)?.min(pending.len().max(1));
    let ctx = RunContext {
        config,
        arch,
        scores,
        train: &splits.train,
        val: &splits.val,
        test: &splits.test,
    };
    let limit = opts.max_runs.unwrap_or(usize::MAX);

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(limit == 0);
    let mut executed = 0;
    let mut failed = 0;
    let mut commit_error = None;
    thread::scope(|s| {
        let (tx, rx) = mpsc::channel::<(usize, RunRecord)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, stop, ctx, pending) = (&next, &stop, &ctx, &pending);
            s.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= pending.len() {
                    break;
                }
                if tx.send((i, ctx.execute(pending[i]))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut buffer = BTreeMap::new();
        let mut next_commit = 0;
        'recv: for (i, record) in rx {
            buffer.insert(i, record);
            while let Some(record) = buffer.remove(&next_commit) {
                if let Err(e) = store.append(&pending[next_commit].run_id, &record) {
                    commit_error = Some(e);
                    stop.store(true, Ordering::Relaxed);
                    break 'recv;
                }
                executed += 1;
                failed += usize::from(!record.status.is_completed());
                next_commit += 1;
                if executed >= limit {
                    stop.store(true, Ordering::Relaxed);
                    break 'recv;
                }
            }
        }
    });
    if let Some(e) = commit_error {
        return Err(e);
    }
    Ok(SweepOutcome {
        planned: jobs.len(),
        already_done: jobs.len() - pending.len(),
        executed,
        failed,
        workers,
        stopped_early: executed < pending.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(extra: &str) -> SweepConfig {
        SweepConfig::from_toml(&format!(
            r#"
{extra}
total_steps = 6
batch_size = 4
seeds = [1, 2]

[data.source]
kind = "synthetic"
num_classes = 2
examples_per_class = 15
input_dim = 3
margin_range = [0.5, 2.0]
seed = 4

[arch]
kind = "mlp"
hidden = [4]

[scoring]
method = "oracle"

[pacing]
families = ["step", "linear"]
a_values = [0.2, 0.8]
b_values = [0.1]
"#
        ))
        .unwrap()
    }

    #[test]
    fn plan_counts_and_canonical_order() {
        let cfg = config("orders = [\"ascending\", \"random\"]");
        let specs = cfg.pacing_specs(24).unwrap();
        let jobs = plan_jobs(&cfg, &specs).unwrap();
        assert_eq!(jobs.len(), 2 * 4 * 2 + 4 * 2);
        assert!(jobs[..8].iter().all(|j| matches!(j.kind, JobKind::Standard { .. })));
        assert_eq!(jobs[0].seed, 1);
        assert_eq!(jobs[1].seed, 2);
        assert_ne!(jobs[2].seed, 1);
        assert_eq!(jobs[8].run_id, "ascending-step-a0.2-b0.1-s1");
    }

    #[test]
    fn single_run_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config("orders = [\"ascending\"]\nstandard_replicates = 0");
        cfg.seeds = vec![5];
        cfg.pacing.families.truncate(1);
        cfg.pacing.a_values.truncate(1);
        let out = run_sweep(&cfg, &SweepOptions::new(dir.path())).unwrap();
        assert_eq!((out.planned, out.executed, out.failed), (1, 1, 0));
        let again = run_sweep(&cfg, &SweepOptions::new(dir.path())).unwrap();
        assert_eq!((again.already_done, again.executed), (1, 0));
    }

    #[test]
    fn store_refuses_a_different_config() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config("orders = []\nstandard_replicates = 1");
        run_sweep(&cfg, &SweepOptions::new(dir.path())).unwrap();
        cfg.total_steps = 7;
        assert!(matches!(run_sweep(&cfg, &SweepOptions::new(dir.path())), Err(Error::Store(_))));
    }
}
