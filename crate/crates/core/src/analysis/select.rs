use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curriculum::{Order, RunRecord};
use crate::error::{Error, Result};
use crate::pacing::PacingFamily;

/// The per-run fields needed to aggregate a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub order: Option<Order>,
    pub family: Option<PacingFamily>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub seed: u64,
    pub best_val_accuracy: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub completed: bool,
}

impl From<&RunRecord> for RunSummary {
    fn from(r: &RunRecord) -> Self {
        RunSummary {
            order: r.order,
            family: r.pacing.map(|p| p.family),
            a: r.pacing.map(|p| p.a),
            b: r.pacing.map(|p| p.b),
            seed: r.seed,
            best_val_accuracy: r.best_val_accuracy,
            test_accuracy: r.test_accuracy_at_best_val,
            completed: r.status.is_completed(),
        }
    }
}

impl RunSummary {
    pub fn key(&self) -> ConfigKey {
        ConfigKey {
            order: self.order.map_or("standard", Order::name).to_string(),
            family: self.family.map_or("-", PacingFamily::name).to_string(),
            a: self.a,
            b: self.b,
        }
    }

    fn usable_accuracy(&self) -> Option<f64> {
        self.test_accuracy.filter(|_| self.completed)
    }
}

/// `(order, family, a, b)`; standard runs use order `standard` and family `-`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigKey {
    pub order: String,
    pub family: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

impl Eq for ConfigKey {}

impl Ord for ConfigKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let f = |x: Option<f64>, y: Option<f64>| match (x, y) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            (x, y) => x.is_some().cmp(&y.is_some()),
        };
        self.order
            .cmp(&other.order)
            .then_with(|| self.family.cmp(&other.family))
            .then_with(|| f(self.a, other.a))
            .then_with(|| f(self.b, other.b))
    }
}

impl PartialOrd for ConfigKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for ConfigKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        write!(f, "{}/{}/a={}/b={}", self.order, self.family, opt(self.a), opt(self.b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStat {
    pub key: ConfigKey,
    pub seeds: Vec<u64>,
    pub accuracies: Vec<f64>,
    pub mean_test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Sorted by key.
    pub groups: Vec<GroupStat>,
    /// Index into `groups`.
    pub best: usize,
}

impl Selection {
    pub fn best_group(&self) -> &GroupStat {
        &self.groups[self.best]
    }
}

/// Seed-mean test-at-best-val accuracy per configuration. Failed runs and
/// runs without a test accuracy are left out.
pub fn group_means(runs: &[RunSummary]) -> Vec<GroupStat> {
    let mut groups: BTreeMap<ConfigKey, (Vec<u64>, Vec<f64>)> = BTreeMap::new();
    for r in runs {
        if let Some(acc) = r.usable_accuracy() {
            let g = groups.entry(r.key()).or_default();
            g.0.push(r.seed);
            g.1.push(acc);
        }
    }
    groups
        .into_iter()
        .map(|(key, (seeds, accuracies))| GroupStat {
            mean_test_accuracy: accuracies.iter().sum::<f64>() / accuracies.len() as f64,
            key,
            seeds,
            accuracies,
        })
        .collect()
}

/// Best configuration by seed-mean accuracy; equal means go to the smaller key.
pub fn select_best(runs: &[RunSummary], seeds_per_group: usize) -> Result<Selection> {
    let groups = group_means(runs);
    if groups.is_empty() {
        return Err(Error::InvalidArgument("no completed runs to select from".into()));
    }
    if let Some(g) = groups.iter().find(|g| g.seeds.len() != seeds_per_group) {
        return Err(Error::InvalidArgument(format!(
            "group {} has {} completed seed(s), expected {seeds_per_group}",
            g.key,
            g.seeds.len()
        )));
    }
    let mut best = 0;
    for (i, g) in groups.iter().enumerate().skip(1) {
        if g.mean_test_accuracy > groups[best].mean_test_accuracy {
            best = i;
        }
    }
    Ok(Selection { groups, best })
}

/// Seed-mean accuracy over the `(a, b)` grid of one order and family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapGrid {
    pub order: Order,
    pub family: PacingFamily,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    /// `cells[i][j]` is for `(a_values[i], b_values[j])`; `None` when no
    /// completed run covers the cell.
    pub cells: Vec<Vec<Option<f64>>>,
    pub seed_counts: Vec<Vec<usize>>,
    /// `(a, b, mean)` of the best cell.
    pub best: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapReport {
    pub grids: Vec<HeatmapGrid>,
    /// Cells that are empty or have fewer seeds than the fullest cell.
    pub incomplete: Vec<ConfigKey>,
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn heatmap_and_best_pacing(runs: &[RunSummary]) -> HeatmapReport {
    let mut by_family: BTreeMap<(&str, &str), Vec<&RunSummary>> = BTreeMap::new();
    for r in runs {
        if let (Some(o), Some(f), Some(_), Some(_)) = (r.order, r.family, r.a, r.b) {
            by_family.entry((o.name(), f.name())).or_default().push(r);
        }
    }
    let mut grids = Vec::new();
    let mut incomplete = Vec::new();
    for rs in by_family.into_values() {
        let (order, family) = (rs[0].order.unwrap(), rs[0].family.unwrap());
        let a_values = sorted_unique(rs.iter().filter_map(|r| r.a).collect());
        let b_values = sorted_unique(rs.iter().filter_map(|r| r.b).collect());
        let mut sums = vec![vec![0.0; b_values.len()]; a_values.len()];
        let mut counts = vec![vec![0usize; b_values.len()]; a_values.len()];
        for r in &rs {
            if let Some(acc) = r.usable_accuracy() {
                let i = a_values.iter().position(|&a| Some(a) == r.a).unwrap();
                let j = b_values.iter().position(|&b| Some(b) == r.b).unwrap();
                sums[i][j] += acc;
                counts[i][j] += 1;
            }
        }
        let full = counts.iter().flatten().copied().max().unwrap_or(0);
        let mut cells = vec![vec![None; b_values.len()]; a_values.len()];
        let mut best: Option<(f64, f64, f64)> = None;
        for (i, &a) in a_values.iter().enumerate() {
            for (j, &b) in b_values.iter().enumerate() {
                let c = counts[i][j];
                if c < full || c == 0 {
                    incomplete.push(ConfigKey {
                        order: order.name().into(),
                        family: family.name().into(),
                        a: Some(a),
                        b: Some(b),
                    });
                }
                if c > 0 {
                    let mean = sums[i][j] / c as f64;
                    cells[i][j] = Some(mean);
                    if best.is_none_or(|(_, _, m)| mean > m) {
                        best = Some((a, b, mean));
                    }
                }
            }
        }
        grids.push(HeatmapGrid {
            order,
            family,
            a_values,
            b_values,
            cells,
            seed_counts: counts,
            best,
        });
    }
    HeatmapReport { grids, incomplete }
}
