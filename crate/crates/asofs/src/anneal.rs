//! Per-atom simulated-annealing refinement.
//!
//! After each optimizer iteration every atom can take a short annealing
//! walk: perturb the mask, evaluate the neighbor, accept improvements of
//! the walk's best outright and worse moves with Boltzmann probability,
//! cooling geometrically until the stop temperature. The walk returns the
//! best mask it saw, so refinement never loses ground.
//!
//! Note the acceptance test compares a neighbor against the *best* fitness
//! seen during the walk, not against the current position as textbook
//! annealing would. `compare_to_current` switches to the textbook rule.

use crate::error::Result;
use crate::eval::{EvaluationContext, FitnessValue};
use crate::mask::FeatureMask;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Geometric cooling schedule.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnnealSchedule {
    /// Starting temperature; twice the feature count by default.
    pub initial_temp: f64,
    pub cooling_factor: f64,
    pub stop_temp: f64,
    /// Textbook acceptance (compare against the current position) instead
    /// of comparing against the walk's best.
    pub compare_to_current: bool,
}

impl AnnealSchedule {
    /// Default schedule for a `d`-feature dataset: start at `2 d`, cool by
    /// 0.93, stop at 1.
    pub fn for_feature_count(d: usize) -> Self {
        AnnealSchedule {
            initial_temp: 2.0 * d as f64,
            cooling_factor: 0.93,
            stop_temp: 1.0,
            compare_to_current: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use crate::error::Error;
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::config(format!(
                "cooling factor must be in (0, 1), got {}",
                self.cooling_factor
            )));
        }
        if self.stop_temp <= 0.0 || self.stop_temp.is_nan() {
            return Err(Error::config(format!(
                "stop temperature must be > 0, got {}",
                self.stop_temp
            )));
        }
        Ok(())
    }

    /// Exact number of neighbor evaluations the walk will perform.
    pub fn neighbor_budget(&self) -> usize {
        if self.initial_temp <= self.stop_temp {
            return 0;
        }
        ((self.initial_temp / self.stop_temp).ln() / (1.0 / self.cooling_factor).ln()).ceil()
            as usize
    }
}

/// Result of one annealing walk.
#[derive(Debug, Clone)]
pub struct AnnealOutcome {
    pub mask: FeatureMask,
    pub value: FitnessValue,
    pub neighbors_evaluated: usize,
    pub accepted_worse: usize,
}

/// Boltzmann acceptance probability: 1 for non-worse candidates, else
/// `exp(-(cur - best) / temp)`.
pub fn boltzmann_p(cur_fitness: f64, best_fitness: f64, temp: f64) -> f64 {
    debug_assert!(temp > 0.0);
    (-(cur_fitness - best_fitness) / temp).exp().min(1.0)
}

/// One acceptance decision for a candidate with fitness `cur_fitness`.
pub fn boltzmann_accept<R: Rng>(
    cur_fitness: f64,
    best_fitness: f64,
    temp: f64,
    rng: &mut R,
) -> bool {
    let p = boltzmann_p(cur_fitness, best_fitness, temp);
    p >= 1.0 || rng.gen::<f64>() < p
}

/// Neighbor move: negate each bit independently with probability `1/d`;
/// if nothing changed, negate one uniformly random bit. The result always
/// differs from the input in at least one position.
pub fn perturb<R: Rng>(mask: &FeatureMask, rng: &mut R) -> FeatureMask {
    let d = mask.len();
    debug_assert!(d >= 1);
    let rate = 1.0 / d as f64;
    let mut out = mask.clone();
    let mut changed = false;
    for i in 0..d {
        if rng.gen::<f64>() < rate {
            out.negate(i);
            changed = true;
        }
    }
    if !changed {
        out.negate(rng.gen_range(0..d));
    }
    out
}

/// Anneal one atom's mask. `start_value` must be the evaluation of
/// `start_mask`. Returns the best (mask, fitness) seen on the walk, which
/// is never worse than the input.
pub fn anneal<R: Rng>(
    start_mask: &FeatureMask,
    start_value: FitnessValue,
    ctx: &EvaluationContext,
    schedule: &AnnealSchedule,
    rng: &mut R,
) -> AnnealOutcome {
    let mut current_mask = start_mask.clone();
    let mut current_value = start_value;
    let mut best_mask = start_mask.clone();
    let mut best_value = start_value;
    let mut neighbors_evaluated = 0usize;
    let mut accepted_worse = 0usize;

    let mut temp = schedule.initial_temp;
    while temp > schedule.stop_temp {
        let mut neighbor = perturb(&current_mask, rng);
        let value = ctx.evaluate(&mut neighbor, rng);
        neighbors_evaluated += 1;

        if value.fitness < best_value.fitness {
            best_mask = neighbor.clone();
            best_value = value;
            current_mask = neighbor;
            current_value = value;
        } else {
            let reference = if schedule.compare_to_current {
                current_value.fitness
            } else {
                best_value.fitness
            };
            if boltzmann_accept(value.fitness, reference, temp, rng) {
                if value.fitness > reference {
                    accepted_worse += 1;
                }
                current_mask = neighbor;
                current_value = value;
            }
        }
        temp *= schedule.cooling_factor;
    }

    AnnealOutcome {
        mask: best_mask,
        value: best_value,
        neighbors_evaluated,
        accepted_worse,
    }
}
