//! Command-line harness: single runs, seed-matrix batches and the
//! exhaustive oracle.
//!
//! Exit codes: 0 success, 1 configuration/validation error, 2 data error.

mod config_file;

use asofs::batch::{aggregate_csv, run_batch, summary_table};
use asofs::data::{load_csv, LabelColumn};
use asofs::error::Error;
use asofs::eval::FitnessWeights;
use asofs::oracle::exhaustive_oracle;
use asofs::search::{run, Method, OptimizerConfig};
use asofs::transfer::FlipPolicy;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "asofs",
    about = "Wrapper feature selection with binary atom search optimization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One optimization run; writes a JSON report and a convergence CSV.
    Run(RunArgs),
    /// A (dataset x method x seed) matrix with per-run reports and an aggregate file.
    Batch(BatchArgs),
    /// Exhaustive evaluation of every feature subset (up to 20 features).
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Asos,
    Asov,
    #[value(name = "asos-sa")]
    AsosSa,
    #[value(name = "asov-sa")]
    AsovSa,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Asos => Method::Asos,
            MethodArg::Asov => Method::Asov,
            MethodArg::AsosSa => Method::AsosSa,
            MethodArg::AsovSa => Method::AsovSa,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FlipModeArg {
    Fixed,
    Sampled,
}

/// Optimizer knobs shared by `run` and (as file overrides) `batch`.
#[derive(Args, Debug)]
struct TuningArgs {
    /// Population size
    #[arg(long)]
    pop: Option<usize>,
    /// Iteration budget
    #[arg(long)]
    iters: Option<usize>,
    /// Fitness weight between error and subset size
    #[arg(long)]
    omega: Option<f64>,
    /// Neighbors used by the KNN evaluator
    #[arg(long)]
    k: Option<usize>,
    /// Interaction-force depth weight
    #[arg(long)]
    alpha: Option<f64>,
    /// Constraint-force multiplier weight
    #[arg(long)]
    beta: Option<f64>,
    /// Upper limit of the scaled distance
    #[arg(long)]
    u: Option<f64>,
    /// Base of the scaled-distance lower limit
    #[arg(long)]
    g0: Option<f64>,
    /// Annealing stop temperature
    #[arg(long)]
    stop_temp: Option<f64>,
    /// Flip threshold mode: fixed (0.5) or sampled per bit
    #[arg(long, value_enum)]
    flip_mode: Option<FlipModeArg>,
    /// Training fraction of the split
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Evaluate and move atoms on a thread pool (results unchanged)
    #[arg(long)]
    parallel: bool,
}

impl TuningArgs {
    fn apply(&self, cfg: &mut OptimizerConfig) {
        if let Some(v) = self.pop {
            cfg.population_size = v;
        }
        if let Some(v) = self.iters {
            cfg.dynamics.iterations = v;
        }
        if let Some(v) = self.omega {
            cfg.weights.omega = v;
        }
        if let Some(v) = self.k {
            cfg.knn_k = v;
        }
        if let Some(v) = self.alpha {
            cfg.dynamics.alpha = v;
        }
        if let Some(v) = self.beta {
            cfg.dynamics.beta = v;
        }
        if let Some(v) = self.u {
            cfg.dynamics.u = v;
        }
        if let Some(v) = self.g0 {
            cfg.dynamics.g0 = v;
        }
        if let Some(v) = self.stop_temp {
            cfg.stop_temp = v;
        }
        if let Some(m) = self.flip_mode {
            cfg.flip = match m {
                FlipModeArg::Fixed => FlipPolicy::Fixed(0.5),
                FlipModeArg::Sampled => FlipPolicy::Sampled,
            };
        }
        if let Some(v) = self.train_fraction {
            cfg.train_fraction = v;
        }
        if self.parallel {
            cfg.parallel = true;
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Dataset CSV (optional header; labels may be strings)
    #[arg(long)]
    data: PathBuf,
    /// Label column as a name or zero-based index (default: last column)
    #[arg(long)]
    label_col: Option<String>,
    /// Method variant
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Master seed; drives the split and every random draw
    #[arg(long)]
    seed: u64,
    /// Report output path (JSON); a sibling .convergence.csv is written too
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    tuning: TuningArgs,
}

#[derive(Args, Debug)]
struct BatchArgs {
    /// Flat key=value config file (data, methods, seeds plus run keys)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for per-run reports and aggregate.csv
    #[arg(long)]
    out_dir: PathBuf,
    /// Label column override
    #[arg(long)]
    label_col: Option<String>,
    #[command(flatten)]
    tuning: TuningArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Dataset CSV; at most 20 feature columns
    #[arg(long)]
    data: PathBuf,
    /// Label column as a name or zero-based index (default: last column)
    #[arg(long)]
    label_col: Option<String>,
    /// Fitness weight between error and subset size
    #[arg(long, default_value_t = 0.99)]
    omega: f64,
    /// Neighbors used by the KNN evaluator
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Split seed (same pipeline as `run` with this seed)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Training fraction of the split
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,
    /// Optional JSON output path (stdout otherwise)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn label_column(arg: &Option<String>) -> LabelColumn {
    match arg {
        Some(s) => LabelColumn::parse(s),
        None => LabelColumn::Last,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents)
        .map_err(|e| Error::data(format!("cannot write {}: {}", path.display(), e)))
}

fn convergence_path(report_path: &Path) -> PathBuf {
    report_path.with_extension("convergence.csv")
}

fn cmd_run(args: &RunArgs) -> Result<(), Error> {
    let dataset = load_csv(&args.data, &label_column(&args.label_col))?;
    let mut cfg = OptimizerConfig::for_method(args.method.into(), args.seed);
    args.tuning.apply(&mut cfg);

    let report = run(&cfg, &dataset)?;
    write_file(&args.out, &report.to_json())?;
    write_file(&convergence_path(&args.out), &report.convergence_csv())?;

    println!(
        "{} {} seed={}: accuracy {:.4}, {} of {} features, fitness {:.6} ({:.0} ms)",
        report.dataset,
        report.method,
        report.seed,
        report.test_accuracy,
        report.selected_count,
        dataset.feature_count(),
        report.best_fitness,
        report.wall_time_ms
    );
    println!("report: {}", args.out.display());
    Ok(())
}

fn cmd_batch(args: &BatchArgs) -> Result<(), Error> {
    let file = config_file::BatchConfig::load(&args.config)?;

    let mut base = OptimizerConfig::default();
    file.apply_tuning(&mut base)?;
    args.tuning.apply(&mut base); // flags override the file

    let label = match &args.label_col {
        Some(s) => LabelColumn::parse(s),
        None => file.label_column(),
    };
    let datasets = file
        .data
        .iter()
        .map(|p| load_csv(p, &label))
        .collect::<Result<Vec<_>, _>>()?;
    if datasets.is_empty() {
        return Err(Error::config("batch config lists no datasets"));
    }
    let methods = file.methods()?;
    let seeds = file.seeds();

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Error::data(format!("cannot create {}: {}", args.out_dir.display(), e)))?;

    let mut write_error: Option<Error> = None;
    let result = run_batch(&datasets, &methods, &seeds, &base, |report| {
        let stem = format!("{}_{}_seed{}", report.dataset, report.method, report.seed);
        let json_path = args.out_dir.join(format!("{stem}.json"));
        if let Err(e) = write_file(&json_path, &report.to_json())
            .and_then(|()| write_file(&convergence_path(&json_path), &report.convergence_csv()))
        {
            write_error.get_or_insert(e);
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }

    write_file(&args.out_dir.join("aggregate.csv"), &aggregate_csv(&result.cells))?;
    print!("{}", summary_table(&result.cells));
    for f in &result.failures {
        eprintln!(
            "failed: {} {} seed={}: {}",
            f.dataset, f.method, f.seed, f.message
        );
    }
    println!("aggregate: {}", args.out_dir.join("aggregate.csv").display());
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), Error> {
    let dataset = load_csv(&args.data, &label_column(&args.label_col))?;
    let weights = FitnessWeights { omega: args.omega };
    let split = asofs::data::SplitSpec {
        train_fraction: args.train_fraction,
        stratified: true,
        seed: args.seed,
    };
    let result = exhaustive_oracle(&dataset, weights, args.k, &split)?;
    let json = serde_json::json!({
        "dataset": dataset.name,
        "mask": result.mask.to_bit_string(),
        "selected_count": result.value.selected_count,
        "fitness": result.value.fitness,
        "error_rate": result.value.error_rate,
        "test_accuracy": 1.0 - result.value.error_rate,
        "masks_evaluated": result.masks_evaluated,
        "omega": args.omega,
        "k": args.k,
        "seed": args.seed,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&json).expect("serializes"));
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            println!(
                "oracle optimum: fitness {:.6} with {} features over {} masks -> {}",
                result.value.fitness,
                result.value.selected_count,
                result.masks_evaluated,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version pseudo-errors exit cleanly
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) => 1,
                Error::Data(_) => 2,
            };
            std::process::exit(code);
        }
    }
}
