//! Prints the pool size of every pacing family at a few checkpoints and
//! writes the full curves to `pacing_curves.csv`.

use curriculum_lab::pacing::{pacing_grid, write_schedule_csv, PacingFamily};

fn main() -> curriculum_lab::Result<()> {
    let (n, steps) = (1000, 200);
    let specs = pacing_grid(&[0.5], &[0.2], &PacingFamily::ALL, n, steps)?;
    println!("{:>8} {:>6} {:>6} {:>6} {:>6}", "family", "t=1", "t=50", "t=100", "t=200");
    for spec in &specs {
        let g = spec.schedule();
        println!("{:>8} {:>6} {:>6} {:>6} {:>6}", spec.family.name(), g[0], g[49], g[99], g[199]);
    }
    let path = std::env::temp_dir().join("pacing_curves.csv");
    write_schedule_csv(&specs, std::fs::File::create(&path)?)?;
    println!("curves written to {}", path.display());
    Ok(())
}
