//! Run reports: JSON serialization, convergence CSV and recomputation.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::search::{build_context, OptimizerConfig};
use serde::{Deserialize, Serialize};

/// Everything a single run produced. The config echo plus the dataset are
/// sufficient to recompute the accuracy and fitness of the stored mask.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub method: String,
    pub seed: u64,
    /// Best mask as a bit string, feature 0 first.
    pub best_mask: String,
    pub selected_count: usize,
    pub test_accuracy: f64,
    pub best_fitness: f64,
    /// Global best fitness after each iteration; non-increasing.
    pub convergence: Vec<f64>,
    /// Measured wall time. The only field that varies between identical
    /// runs; everything else is bit-reproducible.
    pub wall_time_ms: f64,
    pub config: OptimizerConfig,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RunReport> {
        serde_json::from_str(text).map_err(|e| Error::data(format!("bad report json: {e}")))
    }

    /// Two-column CSV of the convergence curve, for plotting.
    pub fn convergence_csv(&self) -> String {
        let mut out = String::from("iteration,best_fitness\n");
        for (i, v) in self.convergence.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, v));
        }
        out
    }

    /// The report with the wall clock zeroed, for byte comparisons.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }
}

/// Recompute a report's result fields from its stored mask, config echo
/// and the dataset, and require exact agreement.
pub fn verify(report: &RunReport, dataset: &Dataset) -> Result<()> {
    let cfg = &report.config;
    let ctx = build_context(dataset, cfg.knn_k, cfg.weights, &cfg.split_spec())?;
    let mask = FeatureMask::from_bit_string(&report.best_mask)
        .ok_or_else(|| Error::data("report mask is not a bit string"))?;
    if mask.len() != ctx.feature_count() {
        return Err(Error::data(format!(
            "mask length {} != feature count {}",
            mask.len(),
            ctx.feature_count()
        )));
    }
    let value = ctx.evaluate_strict(&mask)?;

    if value.selected_count != report.selected_count {
        return Err(Error::data(format!(
            "selected count mismatch: report {}, recomputed {}",
            report.selected_count, value.selected_count
        )));
    }
    if 1.0 - value.error_rate != report.test_accuracy {
        return Err(Error::data(format!(
            "accuracy mismatch: report {}, recomputed {}",
            report.test_accuracy,
            1.0 - value.error_rate
        )));
    }
    if value.fitness != report.best_fitness {
        return Err(Error::data(format!(
            "fitness mismatch: report {}, recomputed {}",
            report.best_fitness, value.fitness
        )));
    }
    if report.convergence.len() != cfg.dynamics.iterations {
        return Err(Error::data("convergence length != iteration budget"));
    }
    if report.convergence.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::data("convergence curve increases"));
    }
    if report.convergence.last() != Some(&report.best_fitness) {
        return Err(Error::data("final convergence entry != best fitness"));
    }
    Ok(())
}
