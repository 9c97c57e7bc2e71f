use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use curriculum_lab::data::{
    gen_synthetic, inject_label_noise, load_cifar_bin, load_idx, read_clab, write_clab, Dataset,
    NoiseSpec, SyntheticSpec,
};
use curriculum_lab::harness::{
    analyze_store, run_sweep, write_report, ArchTemplate, ScoreSource, ScoringConfig, SweepConfig,
    SweepOptions,
};
use curriculum_lab::pacing::{pacing_grid, write_schedule_csv, PacingFamily, PacingSpec};
use curriculum_lab::{Error, Result};

#[derive(Parser)]
#[command(name = "clab", version, about = "Curriculum-learning experiment toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic classification set with oracle difficulty.
    GenData(GenData),
    /// Corrupt a fraction of labels and record the noise mask.
    Noise(NoiseArgs),
    /// Score every example of a dataset.
    Score(ScoreArgs),
    /// Run (or resume) a sweep described by a TOML config.
    Sweep(SweepArgs),
    /// Summarise a sweep's result store.
    Analyze(AnalyzeArgs),
    /// Write pacing curves as CSV.
    PacingPlot(PacingPlotArgs),
}

#[derive(clap::Args)]
struct GenData {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10)]
    classes: usize,
    #[arg(long, default_value_t = 100)]
    per_class: usize,
    #[arg(long, default_value_t = 20)]
    dim: usize,
    #[arg(long, default_value_t = 0.1)]
    margin_min: f64,
    #[arg(long, default_value_t = 3.0)]
    margin_max: f64,
    #[arg(long, default_value_t = 1.0)]
    noise_std: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args)]
struct NoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Auto,
    Clab,
    Idx,
    Cifar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Loss,
    LearnedEpoch,
    /// Uses `--mode`.
    Cscore,
    CscoreAcc,
    CscoreLoss,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Acc,
    Loss,
}

#[derive(clap::Args)]
struct ScoreArgs {
    /// Dataset file(s); several CIFAR batch files may be given.
    #[arg(long, num_args = 1.., required = true)]
    data: Vec<PathBuf>,
    /// IDX label file (implies the IDX format).
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Mode::Acc)]
    mode: Mode,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value_t = 2)]
    repeats: usize,
    #[arg(long, default_value_t = 30)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long)]
    lr: Option<f64>,
    /// Hidden widths of the reference MLP.
    #[arg(long, value_delimiter = ',', default_value = "64")]
    hidden: Vec<usize>,
    /// Use a small conv net with these channel counts instead of an MLP.
    #[arg(long, value_delimiter = ',')]
    conv_channels: Option<Vec<usize>>,
    #[arg(long)]
    snapshot_epoch: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Result store directory; defaults to `runs/<name>` next to the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated training seeds, replacing the config's.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// Worker threads; beats `CLAB_WORKERS` and the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Stop after this many new runs.
    #[arg(long)]
    max_runs: Option<usize>,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    #[arg(long)]
    store: PathBuf,
    /// Report directory; defaults to `<store>/report`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Analyze ledgers that mix config hashes.
    #[arg(long)]
    force: bool,
}

#[derive(clap::Args)]
struct PacingPlotArgs {
    /// Training-set size.
    #[arg(long)]
    n: usize,
    /// Total steps.
    #[arg(long)]
    steps: usize,
    /// Families to plot; all six by default.
    #[arg(long, value_delimiter = ',')]
    family: Vec<PacingFamily>,
    #[arg(long, default_value_t = 0.8)]
    a: f64,
    #[arg(long, default_value_t = 0.2)]
    b: f64,
    /// Plot the full default grid instead of a single (a, b).
    #[arg(long)]
    grid: bool,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_dataset(args: &ScoreArgs) -> Result<Dataset> {
    let first = &args.data[0];
    let format = match args.format {
        Format::Auto if args.labels.is_some() => Format::Idx,
        Format::Auto if first.extension().is_some_and(|e| e == "bin") => Format::Cifar,
        Format::Auto => Format::Clab,
        f => f,
    };
    match format {
        Format::Idx => {
            let labels = args
                .labels
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("IDX data needs --labels".into()))?;
            load_idx(first, labels)
        }
        Format::Cifar => load_cifar_bin(&args.data),
        _ => read_clab(first),
    }
}

fn score(args: ScoreArgs) -> Result<serde_json::Value> {
    let data = load_dataset(&args)?;
    let method = match (args.method, args.mode) {
        (Method::Oracle, _) => ScoreSource::Oracle,
        (Method::Loss, _) => ScoreSource::Loss,
        (Method::LearnedEpoch, _) => ScoreSource::LearnedEpoch,
        (Method::CscoreAcc, _) | (Method::Cscore, Mode::Acc) => ScoreSource::CscoreAcc,
        (Method::CscoreLoss, _) | (Method::Cscore, Mode::Loss) => ScoreSource::CscoreLoss,
    };
    let mut cfg = ScoringConfig::new(method);
    cfg.epochs = args.epochs;
    cfg.batch_size = Some(args.batch_size);
    cfg.snapshot_epoch = args.snapshot_epoch;
    cfg.alpha = args.alpha;
    cfg.repeats = args.repeats;
    cfg.seed = args.seed;
    if let Some(lr) = args.lr {
        cfg.optimizer = Some(curriculum_lab::nn::OptimizerConfig { lr, ..Default::default() });
    }
    let arch = match args.conv_channels {
        Some(conv_channels) => ArchTemplate::SmallConv { conv_channels, kernel_size: 3, pool: Vec::new() },
        None => ArchTemplate::Mlp { hidden: args.hidden },
    };
    let table = cfg.compute(&data, &arch, args.batch_size, Path::new("."))?;
    table.save(&args.out)?;
    Ok(json!({ "written": args.out, "method": table.method, "n": table.len() }))
}

fn sweep(args: SweepArgs) -> Result<serde_json::Value> {
    let mut config = SweepConfig::load(&args.config)?;
    if let Some(seeds) = args.seed_list {
        config.seeds = seeds;
        config.validate()?;
    }
    let base = args.config.parent().map(Path::to_path_buf).unwrap_or_default();
    let out = args.out.unwrap_or_else(|| base.join("runs").join(&config.name));
    let mut opts = SweepOptions::new(&out);
    opts.base_dir = base;
    opts.workers = args.workers;
    opts.max_runs = args.max_runs;
    let o = run_sweep(&config, &opts)?;
    Ok(json!({
        "store": out,
        "planned": o.planned,
        "already_done": o.already_done,
        "executed": o.executed,
        "failed": o.failed,
        "workers": o.workers,
        "stopped_early": o.stopped_early,
    }))
}

fn run(cli: Cli) -> Result<serde_json::Value> {
    match cli.command {
        Command::GenData(a) => {
            let ds = gen_synthetic(&SyntheticSpec {
                num_classes: a.classes,
                examples_per_class: a.per_class,
                input_dim: a.dim,
                margin_range: (a.margin_min, a.margin_max),
                noise_std: a.noise_std,
                seed: a.seed,
            })?;
            write_clab(&ds, &a.out)?;
            Ok(json!({ "written": a.out, "n": ds.len() }))
        }
        Command::Noise(a) => {
            let ds = read_clab(&a.input)?;
            let noisy = inject_label_noise(&ds, &NoiseSpec::new(a.fraction, a.seed))?;
            write_clab(&noisy, &a.out)?;
            let flipped = noisy.noise_mask().map_or(0, |m| m.iter().filter(|&&x| x).count());
            Ok(json!({ "written": a.out, "n": noisy.len(), "masked": flipped }))
        }
        Command::Score(a) => score(a),
        Command::Sweep(a) => sweep(a),
        Command::Analyze(a) => {
            let report = analyze_store(&a.store, a.force)?;
            let out = a.out.unwrap_or_else(|| a.store.join("report"));
            write_report(&report, &out)?;
            Ok(json!({ "report": out, "rows": report.rows, "notes": report.notes }))
        }
        Command::PacingPlot(a) => {
            let families = if a.family.is_empty() { PacingFamily::ALL.to_vec() } else { a.family };
            let specs: Vec<PacingSpec> = if a.grid {
                pacing_grid(
                    &curriculum_lab::pacing::DEFAULT_A_VALUES,
                    &curriculum_lab::pacing::DEFAULT_B_VALUES,
                    &families,
                    a.n,
                    a.steps,
                )?
            } else {
                pacing_grid(&[a.a], &[a.b], &families, a.n, a.steps)?
            };
            match &a.out {
                Some(path) => write_schedule_csv(&specs, std::fs::File::create(path)?)?,
                None => write_schedule_csv(&specs, std::io::stdout().lock())?,
            }
            Ok(json!({ "curves": specs.len(), "rows": specs.len() * a.steps }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = json!({ "error": { "kind": "usage", "message": e.to_string().trim() } });
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let to_stdout = !matches!(&cli.command, Command::PacingPlot(a) if a.out.is_none());
    match run(cli) {
        Ok(summary) => {
            if to_stdout {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
