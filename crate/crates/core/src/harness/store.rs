use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use crate::analysis::RunSummary;
use crate::curriculum::RunRecord;
use crate::error::{Error, Result};

pub const LEDGER_FILE: &str = "ledger.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const RUNS_DIR: &str = "runs";
pub const SCORES_FILE: &str = "scores.json";
pub const LEDGER_VERSION: u32 = 1;
pub const LEDGER_COLUMNS: [&str; 13] = [
    "run_id",
    "order",
    "family",
    "a",
    "b",
    "seed",
    "steps",
    "best_val_acc",
    "test_acc_at_best_val",
    "final_train_loss",
    "wall_s",
    "status",
    "config_hash",
];

/// One line of the run ledger. Standard runs have order `standard` and empty
/// pacing fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub run_id: String,
    pub order: String,
    pub family: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub seed: u64,
    pub steps: usize,
    pub best_val_acc: Option<f64>,
    pub test_acc_at_best_val: Option<f64>,
    pub final_train_loss: Option<f64>,
    pub wall_s: f64,
    pub status: String,
    pub config_hash: String,
}

impl LedgerRow {
    pub fn from_record(run_id: &str, record: &RunRecord, config_hash: &str) -> Self {
        LedgerRow {
            run_id: run_id.to_string(),
            order: record.order.map_or("standard", |o| o.name()).to_string(),
            family: record.pacing.map_or("", |p| p.family.name()).to_string(),
            a: record.pacing.map(|p| p.a),
            b: record.pacing.map(|p| p.b),
            seed: record.seed,
            steps: record.settings.total_steps,
            best_val_acc: record.best_val_accuracy,
            test_acc_at_best_val: record.test_accuracy_at_best_val,
            final_train_loss: record.final_train_loss,
            wall_s: record.wall_clock_s,
            status: if record.status.is_completed() { "completed" } else { "failed" }.to_string(),
            config_hash: config_hash.to_string(),
        }
    }

    pub fn is_standard(&self) -> bool {
        self.order == "standard"
    }

    pub fn summary(&self) -> Result<RunSummary> {
        Ok(RunSummary {
            order: if self.is_standard() { None } else { Some(self.order.parse()?) },
            family: if self.family.is_empty() { None } else { Some(self.family.parse()?) },
            a: self.a,
            b: self.b,
            seed: self.seed,
            best_val_accuracy: self.best_val_acc,
            test_accuracy: self.test_acc_at_best_val,
            completed: self.status == "completed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub ledger_version: u32,
    pub ledger_columns: Vec<String>,
    pub config_hash: String,
    pub config: SweepConfig,
    pub planned_runs: usize,
}

/// Append-only run ledger, one JSON document per run, and a manifest.
#[derive(Debug)]
pub struct ResultStore {
    dir: PathBuf,
    config_hash: String,
}

impl ResultStore {
    /// Opens `dir` for `config`, creating it if needed. An existing store
    /// written by a different config is refused. A partially written last
    /// ledger line is dropped.
    pub fn open(dir: impl AsRef<Path>, config: &SweepConfig, planned_runs: usize) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join(RUNS_DIR))?;
        let hash = config.hash()?;
        let manifest_path = dir.join(MANIFEST_FILE);
        if manifest_path.exists() {
            let existing = read_manifest(&dir)?;
            if existing.config_hash != hash {
                return Err(Error::Store(format!(
                    "{} was produced by config {}, not {hash}",
                    dir.display(),
                    existing.config_hash
                )));
            }
        } else {
            let manifest = Manifest {
                ledger_version: LEDGER_VERSION,
                ledger_columns: LEDGER_COLUMNS.iter().map(|s| s.to_string()).collect(),
                config_hash: hash.clone(),
                config: config.clone(),
                planned_runs,
            };
            write_atomic(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        }
        let store = ResultStore { dir, config_hash: hash };
        store.repair_ledger()?;
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn ledger_path(&self) -> PathBuf {
        self.dir.join(LEDGER_FILE)
    }

    fn repair_ledger(&self) -> Result<()> {
        let path = self.ledger_path();
        let mut bytes = if path.exists() { fs::read(&path)? } else { Vec::new() };
        if !bytes.ends_with(b"\n") {
            bytes.truncate(bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1));
            if path.exists() {
                OpenOptions::new().write(true).open(&path)?.set_len(bytes.len() as u64)?;
            }
        }
        if bytes.is_empty() {
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(LEDGER_COLUMNS)?;
            w.flush()?;
        }
        Ok(())
    }

    /// Run ids already in the ledger.
    pub fn completed_ids(&self) -> Result<HashSet<String>> {
        Ok(read_ledger(&self.dir)?.into_iter().map(|r| r.run_id).collect())
    }

    /// Writes the run document, then appends the ledger line.
    pub fn append(&self, run_id: &str, record: &RunRecord) -> Result<LedgerRow> {
        let doc = self.dir.join(RUNS_DIR).join(format!("{run_id}.json"));
        write_atomic(&doc, serde_json::to_string_pretty(record)? + "\n")?;
        let row = LedgerRow::from_record(run_id, record, &self.config_hash);
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.serialize(&row)?;
        let line = w.into_inner().map_err(|e| Error::Store(e.to_string()))?;
        let mut f = OpenOptions::new().append(true).open(self.ledger_path())?;
        f.write_all(&line)?;
        f.flush()?;
        Ok(row)
    }
}

fn write_atomic(path: &Path, contents: String) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn read_manifest(dir: impl AsRef<Path>) -> Result<Manifest> {
    let text = fs::read_to_string(dir.as_ref().join(MANIFEST_FILE))?;
    Ok(serde_json::from_str(&text)?)
}

/// Parses the ledger, ignoring an unterminated last line.
pub fn read_ledger(dir: impl AsRef<Path>) -> Result<Vec<LedgerRow>> {
    let path = dir.as_ref().join(LEDGER_FILE);
    let mut text = fs::read_to_string(&path)?;
    if !text.ends_with('\n') {
        text.truncate(text.rfind('\n').map_or(0, |i| i + 1));
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if !header.is_empty() && header != LEDGER_COLUMNS {
        return Err(Error::Store(format!("unexpected ledger columns {header:?}")));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
