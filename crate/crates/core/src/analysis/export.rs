use std::io::Write;

use super::histogram::Histogram;
use super::implicit::LearnedIterMatrix;
use super::select::HeatmapGrid;
use crate::error::Result;

/// Square matrix with a header row and a leading label column.
pub fn write_matrix_csv<W: Write>(labels: &[String], matrix: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for (label, row) in labels.iter().zip(matrix) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Long format `order,family,a,b,mean_acc,seeds`; empty cells are skipped.
pub fn write_heatmap_csv<W: Write>(grids: &[HeatmapGrid], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["order", "family", "a", "b", "mean_acc", "seeds"])?;
    for g in grids {
        for (i, a) in g.a_values.iter().enumerate() {
            for (j, b) in g.b_values.iter().enumerate() {
                if let Some(m) = g.cells[i][j] {
                    w.write_record([
                        g.order.name().to_string(),
                        g.family.name().to_string(),
                        a.to_string(),
                        b.to_string(),
                        m.to_string(),
                        g.seed_counts[i][j].to_string(),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `edge,count` with the left edge of each bin.
pub fn write_histogram_csv<W: Write>(h: &Histogram, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["edge", "count"])?;
    for (edge, count) in h.edges.iter().zip(&h.counts) {
        w.write_record([edge.to_string(), count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `id,mean,run0,run1,...`
pub fn write_learned_matrix_csv<W: Write>(m: &LearnedIterMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string(), "mean".to_string()];
    header.extend((0..m.num_runs()).map(|k| format!("run{k}")));
    w.write_record(&header)?;
    for ((id, mean), row) in m.ids.iter().zip(&m.row_means).zip(&m.values) {
        let mut rec = vec![id.to_string(), mean.to_string()];
        rec.extend(row.iter().map(usize::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_csv_shape() {
        let h = Histogram { edges: vec![0.0, 0.5, 1.0], counts: vec![3, 4] };
        let mut buf = Vec::new();
        write_histogram_csv(&h, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "edge,count\n0,3\n0.5,4\n");
    }
}
