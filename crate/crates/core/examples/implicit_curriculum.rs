//! Records when each example is learned across several training runs and
//! writes the learned-iteration matrix, sorted by mean, as CSV.

use std::ops::ControlFlow;

use curriculum_lab::analysis::{learned_iteration_matrix, spearman, write_learned_matrix_csv};
use curriculum_lab::data::{gen_synthetic, SyntheticSpec};
use curriculum_lab::nn::{evaluate, ArchSpec};
use curriculum_lab::scoring::{fit_reference, learned_epoch_scores, PredictionTrace, TrainConfig};

fn main() -> curriculum_lab::Result<()> {
    let data = gen_synthetic(&SyntheticSpec {
        num_classes: 10,
        examples_per_class: 100,
        input_dim: 16,
        margin_range: (0.5, 4.0),
        noise_std: 1.0,
        seed: 21,
    })?;
    let mut traces = Vec::new();
    for seed in 0..4 {
        let mut cfg = TrainConfig::new(ArchSpec::mlp(&[16, 32, 10]), 20, 32, seed);
        cfg.optimizer.lr = 0.05;
        let mut trace = PredictionTrace::new(data.ids().to_vec());
        fit_reference(&cfg, &data, |epoch, model| {
            if epoch > 0 {
                trace.push(epoch, &evaluate(model, &data)?);
            }
            Ok(ControlFlow::Continue(()))
        })?;
        traces.push(trace);
    }
    let scores: Vec<Vec<f64>> = traces.iter().map(learned_epoch_scores).collect();
    for j in 1..scores.len() {
        println!("run 0 vs run {j}: spearman {:.3}", spearman(&scores[0], &scores[j])?);
    }
    let matrix = learned_iteration_matrix(&traces)?;
    let path = std::env::temp_dir().join("learned_iterations.csv");
    write_learned_matrix_csv(&matrix, std::fs::File::create(&path)?)?;
    println!(
        "{} examples x {} runs written to {}",
        matrix.ids.len(),
        matrix.num_runs(),
        path.display()
    );
    Ok(())
}
