//! Runs a small sweep into a temporary result store, then analyzes it.

use curriculum_lab::harness::{analyze_store, run_sweep, write_report, SweepConfig, SweepOptions};

const CONFIG: &str = r#"
name = "mini"
total_steps = 100
batch_size = 8
seeds = [1, 2]

[data]
split = { train = 0.6, val = 0.2, test = 0.2 }
[data.source]
kind = "synthetic"
num_classes = 3
examples_per_class = 50
input_dim = 6
margin_range = [0.3, 3.0]
seed = 4

[arch]
kind = "mlp"
hidden = [8]

[scoring]
method = "oracle"

[pacing]
families = ["linear", "step"]
a_values = [0.2, 0.8]
b_values = [0.1, 0.4]
"#;

fn main() -> curriculum_lab::Result<()> {
    let config = SweepConfig::from_toml(CONFIG)?;
    let dir = std::env::temp_dir().join("clab-mini-sweep");
    let outcome = run_sweep(&config, &SweepOptions::new(&dir))?;
    println!(
        "planned {} runs, {} already done, {} executed on {} workers",
        outcome.planned, outcome.already_done, outcome.executed, outcome.workers
    );
    let report = analyze_store(&dir, false)?;
    if let Some(b) = &report.baselines {
        println!(
            "standard baselines: {:.3} / {:.3} / {:.3}",
            b.standard1, b.standard2, b.standard3
        );
    }
    for best in &report.orders {
        println!("best {:<10} {} -> {:.3}", best.order.name(), best.key, best.mean_test_accuracy);
    }
    write_report(&report, dir.join("report"))?;
    println!("report written to {}", dir.join("report").display());
    Ok(())
}
