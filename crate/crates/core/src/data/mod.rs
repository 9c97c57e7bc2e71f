//! Datasets and the ways to obtain them.

mod augment;
mod cifar;
mod clab;
mod dataset;
mod idx;
mod noise;
mod split;
mod synthetic;

pub use augment::hflip_batch;
pub use cifar::{load_cifar_bin, CIFAR_RECORD_LEN};
pub use clab::{read_clab, write_clab, CLAB_MAGIC, CLAB_VERSION};
pub use dataset::{Dataset, Example};
pub use idx::load_idx;
pub use noise::{inject_label_noise, NoiseMode, NoiseSpec};
pub use split::{split, SplitFractions};
pub use synthetic::{gen_synthetic, SyntheticSpec};
