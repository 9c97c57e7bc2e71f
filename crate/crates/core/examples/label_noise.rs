//! Corrupts 40% of labels, scores with held-out loss, and trains with step
//! pacing so that the noisiest examples are never admitted.

use curriculum_lab::curriculum::{train_standard, train_with_curriculum, CurriculumConfig, Order, TrainSettings};
use curriculum_lab::data::{gen_synthetic, inject_label_noise, split, NoiseSpec, SplitFractions, SyntheticSpec};
use curriculum_lab::nn::ArchSpec;
use curriculum_lab::pacing::{PacingFamily, PacingSpec};
use curriculum_lab::scoring::{estimate_cscore, CScoreMode, TrainConfig};

fn main() -> curriculum_lab::Result<()> {
    let data = gen_synthetic(&SyntheticSpec {
        num_classes: 10,
        examples_per_class: 300,
        input_dim: 20,
        margin_range: (0.5, 4.0),
        noise_std: 1.0,
        seed: 7,
    })?;
    let (train, val, test) = split(&data, SplitFractions::new(0.7, 0.15, 0.15), 0)?;
    let train = inject_label_noise(&train, &NoiseSpec::new(0.4, 1))?;
    let val = inject_label_noise(&val, &NoiseSpec::new(0.4, 2))?;

    let mut reference = TrainConfig::new(ArchSpec::mlp(&[20, 32, 10]), 10, 32, 0);
    reference.optimizer.lr = 0.05;
    let scores = estimate_cscore(&train, &reference, 0.25, 2, CScoreMode::Loss)?;

    let mask = train.noise_mask().unwrap_or_default();
    let mut ranked: Vec<(f64, bool)> = scores.scores.iter().copied().zip(mask.iter().copied()).collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    let noisy_total = mask.iter().filter(|&&m| m).count();
    let noisy_top = ranked[..ranked.len() / 2].iter().filter(|r| r.1).count();
    println!("noisy labels in the top half of scores: {noisy_top}/{noisy_total}");

    let steps = 2000;
    let mut settings = TrainSettings::new(ArchSpec::mlp(&[20, 32, 10]), steps, 32, 0);
    settings.optimizer.lr = 0.05;
    let (std_run, _) = train_standard(&settings, &train, &val, &test)?;
    println!("standard      {:.3}", std_run.test_accuracy_at_best_val.unwrap_or(0.0));
    for order in [Order::Ascending, Order::Descending] {
        let cfg = CurriculumConfig {
            order,
            pacing: PacingSpec::new(PacingFamily::Step, 0.8, 0.6, train.len(), steps)?,
            settings: settings.clone(),
        };
        let (run, _) = train_with_curriculum(&cfg, &scores, &train, &val, &test)?;
        println!("{:<13} {:.3}", order.name(), run.test_accuracy_at_best_val.unwrap_or(0.0));
    }
    Ok(())
}
