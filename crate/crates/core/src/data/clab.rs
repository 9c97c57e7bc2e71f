//! Flat binary container for datasets.
//!
//! Little-endian layout:
//!
//! ```text
//! magic  "CLAB"           4 bytes
//! version u32             currently 1
//! N       u64             examples
//! dim     u64             input values per example
//! C       u32             classes
//! inputs  f32 × N·dim     row-major
//! labels  u16 × N
//! flag u8, then N bytes (0/1)      noise mask, present when flag = 1
//! flag u8, then f64 × N            oracle difficulty, present when flag = 1
//! flag u8, then u64 × N            example ids, present when flag = 1
//!                                  (absent means ids 0..N)
//! ```

use std::path::Path;

use super::dataset::Dataset;
use crate::error::{Error, Result};

pub const CLAB_MAGIC: &[u8; 4] = b"CLAB";
pub const CLAB_VERSION: u32 = 1;

pub fn write_clab(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode(dataset)?)?;
    Ok(())
}

pub fn read_clab(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "clab".into());
    decode(&bytes, name).map_err(|detail| Error::Format {
        path: path.to_path_buf(),
        detail,
    })
}

pub(crate) fn encode(ds: &Dataset) -> Result<Vec<u8>> {
    if ds.num_classes > u16::MAX as usize + 1 {
        return Err(Error::InvalidArgument("too many classes for u16 labels".into()));
    }
    let n = ds.len();
    let mut out = Vec::with_capacity(29 + n * (ds.input_dim() * 4 + 2) + 3);
    out.extend_from_slice(CLAB_MAGIC);
    out.extend_from_slice(&CLAB_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(ds.input_dim() as u64).to_le_bytes());
    out.extend_from_slice(&(ds.num_classes as u32).to_le_bytes());
    for v in ds.inputs() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &y in ds.labels() {
        out.extend_from_slice(&(y as u16).to_le_bytes());
    }
    match ds.noise_mask() {
        Some(mask) => {
            out.push(1);
            out.extend(mask.iter().map(|&m| m as u8));
        }
        None => out.push(0),
    }
    match ds.oracle_difficulty() {
        Some(diff) => {
            out.push(1);
            for v in diff {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        None => out.push(0),
    }
    let sequential = ds.ids().iter().enumerate().all(|(i, &id)| id == i as u64);
    if sequential {
        out.push(0);
    } else {
        out.push(1);
        for id in ds.ids() {
            out.extend_from_slice(&id.to_le_bytes());
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8], String> {
        let end = self
            .at
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| format!("truncated while reading {what}"))?;
        let slice = &self.bytes[self.at..end];
        self.at = end;
        Ok(slice)
    }

    fn u8(&mut self, what: &str) -> Result<u8, String> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, String> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

pub(crate) fn decode(bytes: &[u8], name: String) -> Result<Dataset, String> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(4, "magic")? != CLAB_MAGIC {
        return Err("bad magic".into());
    }
    let version = r.u32("version")?;
    if version != CLAB_VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let n = r.u64("N")? as usize;
    let dim = r.u64("dim")? as usize;
    let classes = r.u32("C")? as usize;
    let len = n.checked_mul(dim).ok_or("N * dim overflows")?;
    let inputs = r
        .take(len.checked_mul(4).ok_or("input block overflows")?, "inputs")?
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let labels = r
        .take(n * 2, "labels")?
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let mask = match r.u8("mask flag")? {
        0 => None,
        1 => Some(r.take(n, "mask")?.iter().map(|&b| b != 0).collect()),
        f => return Err(format!("bad mask flag {f}")),
    };
    let difficulty = match r.u8("difficulty flag")? {
        0 => None,
        1 => Some(
            r.take(n * 8, "difficulty")?
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        ),
        f => return Err(format!("bad difficulty flag {f}")),
    };
    let ids = match r.u8("ids flag")? {
        0 => (0..n as u64).collect(),
        1 => r
            .take(n * 8, "ids")?
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
        f => return Err(format!("bad ids flag {f}")),
    };
    if r.at != bytes.len() {
        return Err(format!("{} trailing bytes", bytes.len() - r.at));
    }
    let mut ds =
        Dataset::new(name, classes, vec![dim], ids, inputs, labels).map_err(|e| e.to_string())?;
    if let Some(m) = mask {
        ds = ds.with_noise_mask(m).map_err(|e| e.to_string())?;
    }
    if let Some(d) = difficulty {
        ds = ds.with_oracle_difficulty(d).map_err(|e| e.to_string())?;
    }
    Ok(ds)
}
