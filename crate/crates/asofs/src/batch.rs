//! Seed-matrix experiments: every (method, dataset, seed) cell runs the
//! optimizer once; per-cell statistics summarize the seeds.

use crate::data::Dataset;
use crate::report::RunReport;
use crate::search::{run, Method, OptimizerConfig};

/// Aggregated statistics for one (dataset, method) cell.
#[derive(Debug, Clone)]
pub struct CellSummary {
    pub dataset: String,
    pub method: String,
    pub runs: usize,
    pub failures: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub best_accuracy: f64,
    pub mean_selected: f64,
    pub mean_fitness: f64,
}

#[derive(Debug, Clone)]
pub struct BatchFailure {
    pub dataset: String,
    pub method: String,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Default)]
pub struct BatchResult {
    pub cells: Vec<CellSummary>,
    pub reports: Vec<RunReport>,
    pub failures: Vec<BatchFailure>,
}

/// Run the full matrix. A failed cell entry is recorded and the batch
/// continues. `on_report` fires after each successful run so callers can
/// stream per-run artifacts to disk.
pub fn run_batch(
    datasets: &[Dataset],
    methods: &[Method],
    seeds: &[u64],
    base: &OptimizerConfig,
    mut on_report: impl FnMut(&RunReport),
) -> BatchResult {
    let mut result = BatchResult::default();
    for dataset in datasets {
        for &method in methods {
            let mut accuracies = Vec::with_capacity(seeds.len());
            let mut selected = Vec::with_capacity(seeds.len());
            let mut fitnesses = Vec::with_capacity(seeds.len());
            let mut failures = 0usize;
            for &seed in seeds {
                let mut cfg = base.clone();
                cfg.transfer = method.transfer();
                cfg.sa_enabled = method.sa_enabled();
                cfg.seed = seed;
                match run(&cfg, dataset) {
                    Ok(report) => {
                        accuracies.push(report.test_accuracy);
                        selected.push(report.selected_count as f64);
                        fitnesses.push(report.best_fitness);
                        on_report(&report);
                        result.reports.push(report);
                    }
                    Err(e) => {
                        failures += 1;
                        result.failures.push(BatchFailure {
                            dataset: dataset.name.clone(),
                            method: method.label().to_string(),
                            seed,
                            message: e.to_string(),
                        });
                    }
                }
            }
            result.cells.push(CellSummary {
                dataset: dataset.name.clone(),
                method: method.label().to_string(),
                runs: accuracies.len(),
                failures,
                mean_accuracy: mean(&accuracies),
                std_accuracy: sample_std(&accuracies),
                best_accuracy: accuracies.iter().copied().fold(f64::NAN, f64::max),
                mean_selected: mean(&selected),
                mean_fitness: mean(&fitnesses),
            });
        }
    }
    result
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1); zero for fewer than two points.
fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Aggregate file contents: one CSV row per cell.
pub fn aggregate_csv(cells: &[CellSummary]) -> String {
    let mut out = String::from(
        "dataset,method,runs,failures,mean_accuracy,std_accuracy,best_accuracy,mean_selected,mean_fitness\n",
    );
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            c.dataset,
            c.method,
            c.runs,
            c.failures,
            c.mean_accuracy,
            c.std_accuracy,
            c.best_accuracy,
            c.mean_selected,
            c.mean_fitness
        ));
    }
    out
}

/// Plain-text summary for terminals.
pub fn summary_table(cells: &[CellSummary]) -> String {
    let mut out = format!(
        "{:<16} {:<8} {:>5} {:>9} {:>8} {:>8} {:>9}\n",
        "dataset", "method", "runs", "mean acc", "std", "best", "mean |X|"
    );
    for c in cells {
        out.push_str(&format!(
            "{:<16} {:<8} {:>5} {:>9.4} {:>8.4} {:>8.4} {:>9.2}\n",
            c.dataset, c.method, c.runs, c.mean_accuracy, c.std_accuracy, c.best_accuracy,
            c.mean_selected
        ));
    }
    out
}
