use crate::error::{Error, Result};
use crate::scoring::ScoreTable;

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn fractional_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!("{} vs {} values", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("spearman needs at least 2 values".into()));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("spearman input contains NaN".into()));
    }
    let rx = fractional_ranks(x);
    let ry = fractional_ranks(y);
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("spearman of a constant vector".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pairwise Spearman correlations between tables scoring the same ids.
pub fn spearman_matrix(tables: &[ScoreTable]) -> Result<Vec<Vec<f64>>> {
    if tables.len() < 2 {
        return Err(Error::InvalidArgument("need at least two score tables".into()));
    }
    let ids = &tables[0].ids;
    let aligned: Vec<Vec<f64>> = tables
        .iter()
        .map(|t| {
            if t.len() != ids.len() {
                return Err(Error::ShapeMismatch(format!(
                    "table {:?} has {} scores, expected {}",
                    t.method,
                    t.len(),
                    ids.len()
                )));
            }
            t.aligned(ids)
        })
        .collect::<Result<_>>()?;
    let k = tables.len();
    let mut m = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let r = spearman(&aligned[i], &aligned[j])?;
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    Ok(m)
}
