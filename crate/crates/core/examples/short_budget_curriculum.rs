//! Easy-first, hard-first and standard training on a short step budget.

use curriculum_lab::curriculum::{train_standard, train_with_curriculum, CurriculumConfig, Order, TrainSettings};
use curriculum_lab::data::{gen_synthetic, split, SplitFractions, SyntheticSpec};
use curriculum_lab::nn::ArchSpec;
use curriculum_lab::pacing::{PacingFamily, PacingSpec};
use curriculum_lab::scoring::oracle_score;

fn main() -> curriculum_lab::Result<()> {
    let data = gen_synthetic(&SyntheticSpec {
        num_classes: 10,
        examples_per_class: 200,
        input_dim: 20,
        margin_range: (0.5, 4.0),
        noise_std: 1.0,
        seed: 7,
    })?;
    let (train, val, test) = split(&data, SplitFractions::new(0.7, 0.15, 0.15), 0)?;
    let scores = oracle_score(&train)?;
    let steps = 200;

    for seed in 0..3 {
        let mut settings = TrainSettings::new(ArchSpec::mlp(&[20, 32, 10]), steps, 32, seed);
        settings.optimizer.lr = 0.01;
        let (std_run, _) = train_standard(&settings, &train, &val, &test)?;
        print!("seed {seed}: standard {:.3}", std_run.test_accuracy_at_best_val.unwrap_or(0.0));
        for order in [Order::Ascending, Order::Descending, Order::Random] {
            let cfg = CurriculumConfig {
                order,
                pacing: PacingSpec::new(PacingFamily::Exp, 0.3, 0.1, train.len(), steps)?,
                settings: settings.clone(),
            };
            let (run, _) = train_with_curriculum(&cfg, &scores, &train, &val, &test)?;
            print!("  {} {:.3}", order.name(), run.test_accuracy_at_best_val.unwrap_or(0.0));
        }
        println!();
    }
    Ok(())
}
