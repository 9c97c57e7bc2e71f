use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::store::{read_ledger, read_manifest, LedgerRow, MANIFEST_FILE};
use crate::analysis::{
    baselines, group_means, heatmap_and_best_pacing, select_best, write_heatmap_csv,
    BaselineStats, ConfigKey, HeatmapReport, RunSummary,
};
use crate::curriculum::Order;
use crate::error::{Error, Result};
use crate::pacing::PacingFamily;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderBest {
    pub order: Order,
    pub key: ConfigKey,
    pub mean_test_accuracy: f64,
    pub seeds_per_group: usize,
    pub groups: usize,
    /// Groups left out of the selection for lacking seeds.
    pub incomplete_groups: Vec<ConfigKey>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestPacing {
    pub order: Order,
    pub family: PacingFamily,
    pub a: f64,
    pub b: f64,
    pub mean_test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub label: String,
    pub mean_test_accuracy: f64,
}

/// Everything `analyze` derives from a ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config_hashes: Vec<String>,
    pub rows: usize,
    pub failed_runs: usize,
    pub baselines: Option<BaselineStats>,
    pub orders: Vec<OrderBest>,
    pub heatmaps: Option<HeatmapReport>,
    pub best_pacing: Vec<BestPacing>,
    /// Baselines followed by the best configuration of each ordering.
    pub summary: Vec<SummaryRow>,
    pub notes: Vec<String>,
}

/// Aggregates ledger rows. `group_size` is the standard-run group used for
/// `standard2`. Rows from more than one config are refused unless `force`.
pub fn analyze_rows(rows: &[LedgerRow], group_size: usize, force: bool) -> Result<Report> {
    if rows.is_empty() {
        return Err(Error::Store("ledger has no runs".into()));
    }
    let hashes: BTreeSet<&str> = rows.iter().map(|r| r.config_hash.as_str()).collect();
    if hashes.len() > 1 && !force {
        return Err(Error::Store(format!(
            "ledger mixes {} config hashes; use force to analyze anyway",
            hashes.len()
        )));
    }
    let summaries: Vec<RunSummary> = rows.iter().map(LedgerRow::summary).collect::<Result<_>>()?;
    let mut notes = Vec::new();
    let mut summary = Vec::new();

    let standard: Vec<f64> = summaries
        .iter()
        .filter(|s| s.order.is_none() && s.completed)
        .filter_map(|s| s.test_accuracy)
        .collect();
    let baselines = match baselines(&standard, group_size) {
        Ok(b) => {
            if b.dropped > 0 {
                notes.push(format!("standard2 dropped {} trailing run(s)", b.dropped));
            }
            summary.extend([
                SummaryRow { label: "standard1".into(), mean_test_accuracy: b.standard1 },
                SummaryRow { label: "standard2".into(), mean_test_accuracy: b.standard2 },
                SummaryRow { label: "standard3".into(), mean_test_accuracy: b.standard3 },
            ]);
            Some(b)
        }
        Err(e) => {
            notes.push(format!("baselines absent: {e}"));
            None
        }
    };

    let mut orders = Vec::new();
    for order in Order::ALL {
        let of_order: Vec<RunSummary> =
            summaries.iter().filter(|s| s.order == Some(order)).cloned().collect();
        let groups = group_means(&of_order);
        let Some(full) = groups.iter().map(|g| g.seeds.len()).max() else {
            continue;
        };
        let incomplete: Vec<ConfigKey> =
            groups.iter().filter(|g| g.seeds.len() < full).map(|g| g.key.clone()).collect();
        let complete: Vec<RunSummary> =
            of_order.into_iter().filter(|s| !incomplete.contains(&s.key())).collect();
        let sel = select_best(&complete, full)?;
        let best = sel.best_group();
        summary.push(SummaryRow {
            label: order.name().into(),
            mean_test_accuracy: best.mean_test_accuracy,
        });
        orders.push(OrderBest {
            order,
            key: best.key.clone(),
            mean_test_accuracy: best.mean_test_accuracy,
            seeds_per_group: full,
            groups: sel.groups.len(),
            incomplete_groups: incomplete,
        });
    }

    let (heatmaps, best_pacing) = if summaries.iter().any(|s| s.order.is_some()) {
        let hm = heatmap_and_best_pacing(&summaries);
        let best = hm
            .grids
            .iter()
            .filter_map(|g| {
                g.best.map(|(a, b, m)| BestPacing {
                    order: g.order,
                    family: g.family,
                    a,
                    b,
                    mean_test_accuracy: m,
                })
            })
            .collect();
        (Some(hm), best)
    } else {
        notes.push("curriculum runs absent".into());
        (None, Vec::new())
    };

    Ok(Report {
        config_hashes: hashes.into_iter().map(str::to_string).collect(),
        rows: rows.len(),
        failed_runs: summaries.iter().filter(|s| !s.completed).count(),
        baselines,
        orders,
        heatmaps,
        best_pacing,
        summary,
        notes,
    })
}

/// Reads a store's ledger; the standard group size is the config's seed count
/// (3 when no manifest is present).
pub fn analyze_store(dir: impl AsRef<Path>, force: bool) -> Result<Report> {
    let dir = dir.as_ref();
    let rows = read_ledger(dir)?;
    let group_size = if dir.join(MANIFEST_FILE).exists() {
        read_manifest(dir)?.config.seeds.len()
    } else {
        3
    };
    analyze_rows(&rows, group_size, force)
}

/// Writes `report.json`, `summary.csv`, `baselines.csv` and, when curriculum
/// runs exist, `heatmap.csv` and `best_pacing.csv`.
pub fn write_report(report: &Report, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(["label", "mean_test_acc"])?;
    for row in &report.summary {
        w.write_record([row.label.clone(), row.mean_test_accuracy.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("baselines.csv"))?;
    w.write_record(["statistic", "value"])?;
    if let Some(b) = &report.baselines {
        for (k, v) in [
            ("standard1", b.standard1.to_string()),
            ("standard2", b.standard2.to_string()),
            ("standard3", b.standard3.to_string()),
            ("n_runs", b.n_runs.to_string()),
            ("group_size", b.group_size.to_string()),
            ("dropped", b.dropped.to_string()),
        ] {
            w.write_record([k.to_string(), v])?;
        }
    }
    w.flush()?;

    if let Some(hm) = &report.heatmaps {
        write_heatmap_csv(&hm.grids, fs::File::create(dir.join("heatmap.csv"))?)?;
        let mut w = csv::Writer::from_path(dir.join("best_pacing.csv"))?;
        w.write_record(["order", "family", "a", "b", "mean_acc"])?;
        for p in &report.best_pacing {
            w.write_record([
                p.order.name().to_string(),
                p.family.name().to_string(),
                p.a.to_string(),
                p.b.to_string(),
                p.mean_test_accuracy.to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_row(i: usize, acc: f64) -> LedgerRow {
        LedgerRow {
            run_id: format!("standard-{i}"),
            order: "standard".into(),
            family: String::new(),
            a: None,
            b: None,
            seed: i as u64,
            steps: 10,
            best_val_acc: Some(acc),
            test_acc_at_best_val: Some(acc),
            final_train_loss: Some(0.1),
            wall_s: 0.0,
            status: "completed".into(),
            config_hash: "h".into(),
        }
    }

    #[test]
    fn six_value_ledger_baselines() {
        let rows: Vec<LedgerRow> =
            [0.1, 0.2, 0.3, 0.4, 0.5, 0.6].iter().enumerate().map(|(i, &a)| standard_row(i, a)).collect();
        let rep = analyze_rows(&rows, 3, false).unwrap();
        let b = rep.baselines.unwrap();
        assert!((b.standard1 - 0.35).abs() < 1e-12);
        assert!((b.standard2 - 0.5).abs() < 1e-12);
        assert!((b.standard3 - 0.5).abs() < 1e-12);
        assert!(rep.heatmaps.is_none() && rep.orders.is_empty());
        assert!(rep.notes.iter().any(|n| n.contains("curriculum runs absent")));
    }

    #[test]
    fn mixed_hashes_need_force() {
        let mut rows: Vec<LedgerRow> = (0..3).map(|i| standard_row(i, 0.5)).collect();
        rows[2].config_hash = "other".into();
        assert!(analyze_rows(&rows, 3, false).is_err());
        assert_eq!(analyze_rows(&rows, 3, true).unwrap().config_hashes.len(), 2);
    }

    #[test]
    fn empty_ledger_is_an_error() {
        assert!(analyze_rows(&[], 3, false).is_err());
    }
}
