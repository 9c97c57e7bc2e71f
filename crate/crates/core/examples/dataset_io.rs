//! Generates a dataset, splits it, adds label noise and round-trips it
//! through the binary dataset format.

use curriculum_lab::data::{
    gen_synthetic, inject_label_noise, read_clab, split, write_clab, NoiseSpec, SplitFractions,
    SyntheticSpec,
};

fn main() -> curriculum_lab::Result<()> {
    let data = gen_synthetic(&SyntheticSpec {
        num_classes: 4,
        examples_per_class: 250,
        input_dim: 8,
        margin_range: (0.2, 3.0),
        noise_std: 1.0,
        seed: 3,
    })?;
    let (train, val, test) = split(&data, SplitFractions::new(0.8, 0.1, 0.1), 0)?;
    println!("split sizes {} / {} / {}", train.len(), val.len(), test.len());
    println!("train class counts {:?}", train.class_counts());

    let noisy = inject_label_noise(&train, &NoiseSpec::new(0.2, 11))?;
    let flipped = noisy.noise_mask().map_or(0, |m| m.iter().filter(|&&x| x).count());
    println!("{flipped} labels resampled");

    let path = std::env::temp_dir().join("noisy_train.clab");
    write_clab(&noisy, &path)?;
    let back = read_clab(&path)?;
    assert_eq!(back.ids(), noisy.ids());
    assert_eq!(back.labels(), noisy.labels());
    assert_eq!(back.inputs(), noisy.inputs());
    assert_eq!(back.noise_mask(), noisy.noise_mask());
    println!("round-tripped {} examples via {}", back.len(), path.display());
    Ok(())
}
