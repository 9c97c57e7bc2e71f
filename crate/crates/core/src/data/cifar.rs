use std::path::Path;

use super::dataset::Dataset;
use crate::error::{Error, Result};

/// One label byte followed by 1024 bytes each of R, G and B.
pub const CIFAR_RECORD_LEN: usize = 1 + 3 * 32 * 32;

/// Loads CIFAR-10 binary batch files in order; ids run across files.
pub fn load_cifar_bin<P: AsRef<Path>>(paths: &[P]) -> Result<Dataset> {
    let mut inputs = Vec::new();
    let mut labels = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let bytes = std::fs::read(path)?;
        parse_records(&bytes, path, &mut inputs, &mut labels)?;
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset("cifar".into()));
    }
    let n = labels.len() as u64;
    Dataset::new("cifar10", 10, vec![3, 32, 32], (0..n).collect(), inputs, labels)
}

fn parse_records(
    bytes: &[u8],
    path: &Path,
    inputs: &mut Vec<f32>,
    labels: &mut Vec<usize>,
) -> Result<()> {
    if bytes.len() % CIFAR_RECORD_LEN != 0 {
        return Err(Error::Format {
            path: path.to_path_buf(),
            detail: format!(
                "size {} is not a multiple of the {CIFAR_RECORD_LEN}-byte record",
                bytes.len()
            ),
        });
    }
    for (r, record) in bytes.chunks_exact(CIFAR_RECORD_LEN).enumerate() {
        let label = record[0] as usize;
        if label >= 10 {
            return Err(Error::Format {
                path: path.to_path_buf(),
                detail: format!("record {r}: label byte {label} >= 10"),
            });
        }
        labels.push(label);
        inputs.extend(record[1..].iter().map(|&b| b as f32 / 255.0));
    }
    Ok(())
}
