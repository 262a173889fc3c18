//! Exhaustive enumeration of feature subsets — the ground-truth reference
//! for small dimensionalities.

use crate::data::{Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::eval::{FitnessValue, FitnessWeights};
use crate::mask::FeatureMask;
use crate::search::build_context;

/// Hard ceiling on the enumerable dimensionality (2^20 - 1 masks).
pub const MAX_ORACLE_FEATURES: usize = 20;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub mask: FeatureMask,
    pub value: FitnessValue,
    pub masks_evaluated: u64,
}

/// Evaluate every non-empty mask through the same split/normalize/score
/// pipeline the optimizer uses and return the minimum-fitness mask.
/// Fitness ties go to fewer selected features, then to the
/// lexicographically smallest bit string.
pub fn exhaustive_oracle(
    dataset: &Dataset,
    weights: FitnessWeights,
    knn_k: usize,
    split_spec: &SplitSpec,
) -> Result<OracleResult> {
    let d = dataset.feature_count();
    if d > MAX_ORACLE_FEATURES {
        return Err(Error::config(format!(
            "exhaustive oracle refuses {} features (limit {})",
            d, MAX_ORACLE_FEATURES
        )));
    }
    let ctx = build_context(dataset, knn_k, weights, split_spec)?;

    let total: u64 = (1u64 << d) - 1;
    let mut best: Option<(FeatureMask, FitnessValue)> = None;
    for raw in 1..=total {
        let mask = FeatureMask::from_index(raw, d);
        let value = ctx
            .evaluate_strict(&mask)
            .expect("enumerated masks are non-empty");
        let better = match &best {
            None => true,
            Some((best_mask, best_value)) => {
                match value.fitness.total_cmp(&best_value.fitness) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => {
                        (value.selected_count, &mask) < (best_value.selected_count, best_mask)
                    }
                }
            }
        };
        if better {
            best = Some((mask, value));
        }
    }
    let (mask, value) = best.expect("at least one mask exists");
    Ok(OracleResult {
        mask,
        value,
        masks_evaluated: total,
    })
}
