use std::path::Path;

use super::dataset::Dataset;
use crate::error::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

/// Loads an MNIST-style IDX image/label pair. Pixels are scaled to `[0, 1]`,
/// ids follow file order and inputs are shaped `[1, rows, cols]`.
pub fn load_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let images_path = images_path.as_ref();
    let labels_path = labels_path.as_ref();
    let images = std::fs::read(images_path)?;
    let labels = std::fs::read(labels_path)?;
    let name = images_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "idx".into());
    parse_idx(&images, images_path, &labels, labels_path, name)
}

fn be_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap())
}

fn parse_idx(
    images: &[u8],
    images_path: &Path,
    labels: &[u8],
    labels_path: &Path,
    name: String,
) -> Result<Dataset> {
    let format = |path: &Path, detail: String| Error::Format {
        path: path.to_path_buf(),
        detail,
    };
    if images.len() < 16 {
        return Err(format(images_path, "truncated image header".into()));
    }
    if labels.len() < 8 {
        return Err(format(labels_path, "truncated label header".into()));
    }
    let magic = be_u32(images, 0);
    if magic != IMAGES_MAGIC {
        return Err(format(images_path, format!("bad magic {magic:#010x}")));
    }
    let magic = be_u32(labels, 0);
    if magic != LABELS_MAGIC {
        return Err(format(labels_path, format!("bad magic {magic:#010x}")));
    }
    let n_images = be_u32(images, 4) as usize;
    let rows = be_u32(images, 8) as usize;
    let cols = be_u32(images, 12) as usize;
    let n_labels = be_u32(labels, 4) as usize;
    if n_images != n_labels {
        return Err(Error::CountMismatch {
            images: n_images,
            labels: n_labels,
        });
    }
    if n_images == 0 {
        return Err(Error::EmptyDataset(name));
    }
    let dim = rows * cols;
    if dim == 0 {
        return Err(format(images_path, "zero-sized images".into()));
    }
    let pixels = &images[16..];
    if pixels.len() < n_images * dim {
        return Err(format(
            images_path,
            format!("truncated: need {} pixel bytes, found {}", n_images * dim, pixels.len()),
        ));
    }
    let label_bytes = &labels[8..];
    if label_bytes.len() < n_labels {
        return Err(format(
            labels_path,
            format!("truncated: need {n_labels} label bytes, found {}", label_bytes.len()),
        ));
    }
    let inputs = pixels[..n_images * dim].iter().map(|&b| b as f32 / 255.0).collect();
    let labels: Vec<usize> = label_bytes[..n_labels].iter().map(|&b| b as usize).collect();
    let num_classes = labels.iter().max().map_or(10, |&m| (m + 1).max(10));
    Dataset::new(
        name,
        num_classes,
        vec![1, rows, cols],
        (0..n_images as u64).collect(),
        inputs,
        labels,
    )
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn idx_pair(n_images: u32, n_labels: u32, rows: u32, cols: u32) -> (Vec<u8>, Vec<u8>) {
        let mut images = Vec::new();
        images.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
        images.extend_from_slice(&n_images.to_be_bytes());
        images.extend_from_slice(&rows.to_be_bytes());
        images.extend_from_slice(&cols.to_be_bytes());
        for i in 0..(n_images * rows * cols) {
            images.push((i % 256) as u8);
        }
        let mut labels = Vec::new();
        labels.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
        labels.extend_from_slice(&n_labels.to_be_bytes());
        for i in 0..n_labels {
            labels.push((i % 10) as u8);
        }
        (images, labels)
    }

    fn parse(images: &[u8], labels: &[u8]) -> Result<Dataset> {
        parse_idx(images, Path::new("img"), labels, Path::new("lbl"), "t".into())
    }

    #[test]
    fn parses_header_and_scales_pixels() {
        let (img, lbl) = idx_pair(3, 3, 2, 2);
        let ds = parse(&img, &lbl).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.input_shape, vec![1, 2, 2]);
        assert_eq!(ds.num_classes, 10);
        assert_eq!(ds.ids(), &[0, 1, 2]);
        assert_eq!(ds.row(1), &[4.0 / 255.0, 5.0 / 255.0, 6.0 / 255.0, 7.0 / 255.0]);
        assert!(ds.inputs().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn count_mismatch() {
        let (img, lbl) = idx_pair(3, 4, 2, 2);
        assert!(matches!(
            parse(&img, &lbl),
            Err(Error::CountMismatch { images: 3, labels: 4 })
        ));
    }

    #[test]
    fn zero_examples_is_empty() {
        let (img, lbl) = idx_pair(0, 0, 2, 2);
        assert!(matches!(parse(&img, &lbl), Err(Error::EmptyDataset(_))));
    }

    #[test]
    fn bad_magic_and_truncation() {
        let (mut img, lbl) = idx_pair(2, 2, 2, 2);
        img[3] = 0x01;
        assert!(matches!(parse(&img, &lbl), Err(Error::Format { .. })));
        let (img, lbl) = idx_pair(2, 2, 2, 2);
        assert!(matches!(parse(&img[..img.len() - 1], &lbl), Err(Error::Format { .. })));
        assert!(matches!(parse(&img, &lbl[..9]), Err(Error::Format { .. })));
        assert!(matches!(parse(&img[..10], &lbl), Err(Error::Format { .. })));
    }
}
