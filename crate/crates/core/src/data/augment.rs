use rand::Rng;

use crate::error::{Error, Result};
use crate::nn::Batch;

/// Mirrors each image in the batch left-to-right with probability 1/2.
/// `shape` must be `[channels, height, width]`.
pub fn hflip_batch<R: Rng>(batch: &mut Batch, shape: &[usize], rng: &mut R) -> Result<()> {
    let &[c, h, w] = shape else {
        return Err(Error::InvalidArgument(format!(
            "horizontal flip needs an image shape [c, h, w], got {shape:?}"
        )));
    };
    if c * h * w != batch.input_dim {
        return Err(Error::ShapeMismatch(format!(
            "image shape {shape:?} does not match input dim {}",
            batch.input_dim
        )));
    }
    let dim = batch.input_dim;
    for row in batch.inputs.chunks_mut(dim) {
        if rng.random_bool(0.5) {
            for line in row.chunks_mut(w) {
                line.reverse();
            }
        }
    }
    Ok(())
}
