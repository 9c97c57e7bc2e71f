//! Scores a synthetic dataset four ways and compares the rankings with the
//! generator's own difficulty.

use curriculum_lab::analysis::{score_histogram, spearman};
use curriculum_lab::data::{gen_synthetic, SyntheticSpec};
use curriculum_lab::nn::ArchSpec;
use curriculum_lab::scoring::{
    estimate_cscore, oracle_score, score_by_learned_epoch, score_by_loss, CScoreMode, TrainConfig,
};

fn main() -> curriculum_lab::Result<()> {
    let data = gen_synthetic(&SyntheticSpec {
        num_classes: 5,
        examples_per_class: 100,
        input_dim: 10,
        margin_range: (0.3, 3.0),
        noise_std: 1.0,
        seed: 1,
    })?;
    let mut reference = TrainConfig::new(ArchSpec::mlp(&[10, 32, 5]), 10, 32, 0);
    reference.optimizer.lr = 0.05;

    let oracle = oracle_score(&data)?;
    let tables = [
        ("loss", score_by_loss(&data, &reference, 5)?),
        ("learned epoch", score_by_learned_epoch(&data, &reference)?),
        ("c-score (acc)", estimate_cscore(&data, &reference, 0.25, 2, CScoreMode::Acc)?),
        ("c-score (loss)", estimate_cscore(&data, &reference, 0.25, 2, CScoreMode::Loss)?),
    ];
    for (name, table) in &tables {
        let rho = spearman(&oracle.scores, &table.aligned(&oracle.ids)?)?;
        println!("{name:>15}: spearman vs oracle {rho:+.3}");
    }
    let hist = score_histogram(&tables[3].1, 8)?;
    println!("c-score (loss) histogram: {:?}", hist.counts);
    Ok(())
}
