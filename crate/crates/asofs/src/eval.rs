//! Fitness evaluation: weighted classification error plus subset size,
//! with a transparent per-mask cache.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::knn::Classifier;
use crate::mask::FeatureMask;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Weight between classification error and subset size in the fitness.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitnessWeights {
    pub omega: f64,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        // accuracy-dominant weighting, the convention for wrapper selection
        FitnessWeights { omega: 0.99 }
    }
}

impl FitnessWeights {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::config(format!(
                "omega must be in [0, 1], got {}",
                self.omega
            )));
        }
        Ok(())
    }
}

/// Score of one evaluated mask. Lower fitness is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessValue {
    pub fitness: f64,
    pub error_rate: f64,
    pub selected_count: usize,
}

/// The scalarized objective: `omega * error + (1 - omega) * selected/total`.
/// An empty subset is not a valid argument; repair happens upstream.
pub fn fitness(error: f64, selected: usize, total: usize, weights: &FitnessWeights) -> f64 {
    assert!(selected > 0, "fitness of an empty feature subset is undefined");
    assert!(selected <= total);
    assert!((0.0..=1.0).contains(&error));
    weights.omega * error + (1.0 - weights.omega) * (selected as f64 / total as f64)
}

/// Evaluation state shared by a whole run: the normalized partitions, the
/// classifier, the fitness weights and the mask cache. Evaluations of
/// distinct masks may run concurrently; the cache behaves as one
/// atomic read-check-write per key.
pub struct EvaluationContext {
    train: Dataset,
    eval: Dataset,
    classifier: Box<dyn Classifier>,
    weights: FitnessWeights,
    cache: Mutex<HashMap<FeatureMask, FitnessValue>>,
    misses: AtomicUsize,
}

impl EvaluationContext {
    pub fn new(
        train: Dataset,
        eval: Dataset,
        classifier: Box<dyn Classifier>,
        weights: FitnessWeights,
    ) -> Result<Self> {
        if train.feature_count() != eval.feature_count() {
            return Err(Error::data("partitions disagree on feature count"));
        }
        weights.validate()?;
        Ok(EvaluationContext {
            train,
            eval,
            classifier,
            weights,
            cache: Mutex::new(HashMap::new()),
            misses: AtomicUsize::new(0),
        })
    }

    pub fn feature_count(&self) -> usize {
        self.train.feature_count()
    }

    pub fn train(&self) -> &Dataset {
        &self.train
    }

    pub fn eval(&self) -> &Dataset {
        &self.eval
    }

    pub fn weights(&self) -> &FitnessWeights {
        &self.weights
    }

    /// Number of classifier invocations so far (cache misses).
    pub fn classifier_calls(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn describe_classifier(&self) -> String {
        self.classifier.describe()
    }

    /// Misclassified fraction of the evaluation partition under `mask`.
    pub fn error_rate(&self, mask: &FeatureMask) -> Result<f64> {
        if mask.is_empty() {
            return Err(Error::config("cannot classify with an empty feature mask"));
        }
        let selected = mask.selected_indices();
        Ok(self.classifier.error_rate(&self.train, &self.eval, &selected))
    }

    /// Evaluate a mask, repairing an all-zero mask first by setting one
    /// random bit (the caller sees the repaired mask). Cached.
    pub fn evaluate<R: Rng>(&self, mask: &mut FeatureMask, rng: &mut R) -> FitnessValue {
        if mask.is_empty() {
            mask.set_random_bit(rng);
        }
        self.evaluate_nonempty(mask)
    }

    /// Evaluate a known-nonempty mask. Errors on an empty mask instead of
    /// repairing it.
    pub fn evaluate_strict(&self, mask: &FeatureMask) -> Result<FitnessValue> {
        if mask.is_empty() {
            return Err(Error::config("cannot evaluate an empty feature mask"));
        }
        Ok(self.evaluate_nonempty(mask))
    }

    fn evaluate_nonempty(&self, mask: &FeatureMask) -> FitnessValue {
        if let Some(hit) = self.cache.lock().unwrap().get(mask) {
            return *hit;
        }
        let selected = mask.selected_indices();
        let error = self.classifier.error_rate(&self.train, &self.eval, &selected);
        self.misses.fetch_add(1, Ordering::Relaxed);
        let value = FitnessValue {
            fitness: fitness(error, selected.len(), self.feature_count(), &self.weights),
            error_rate: error,
            selected_count: selected.len(),
        };
        self.cache.lock().unwrap().insert(mask.clone(), value);
        value
    }
}
