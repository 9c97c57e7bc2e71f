use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::PredictionTrace;

/// Learned checkpoint of each example (rows) in each run (columns). Rows are
/// sorted by mean ascending, then by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnedIterMatrix {
    pub ids: Vec<u64>,
    pub values: Vec<Vec<usize>>,
    pub row_means: Vec<f64>,
}

impl LearnedIterMatrix {
    pub fn num_runs(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn column(&self, run: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[run] as f64).collect()
    }
}

pub fn learned_iteration_matrix(traces: &[PredictionTrace]) -> Result<LearnedIterMatrix> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidArgument("no traces".into()))?;
    let n = first.num_examples();
    for t in traces {
        if t.ids != first.ids {
            return Err(Error::ShapeMismatch("traces cover different examples".into()));
        }
        if t.is_empty() {
            return Err(Error::ShapeMismatch("trace without checkpoints".into()));
        }
    }
    let cols: Vec<Vec<usize>> = traces.iter().map(PredictionTrace::learned_epochs).collect();
    let mut rows: Vec<(u64, Vec<usize>, f64)> = (0..n)
        .map(|i| {
            let row: Vec<usize> = cols.iter().map(|c| c[i]).collect();
            let mean = row.iter().sum::<usize>() as f64 / row.len() as f64;
            (first.ids[i], row, mean)
        })
        .collect();
    rows.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
    let mut out = LearnedIterMatrix {
        ids: Vec::with_capacity(n),
        values: Vec::with_capacity(n),
        row_means: Vec::with_capacity(n),
    };
    for (id, row, mean) in rows {
        out.ids.push(id);
        out.values.push(row);
        out.row_means.push(mean);
    }
    Ok(out)
}
