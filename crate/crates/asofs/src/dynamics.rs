//! Continuous atom-search dynamics over binary positions.
//!
//! Positions are bitmasks but all forces, accelerations and velocities are
//! real vectors. An atom is attracted to (or repelled from) each of the
//! `K(t)` currently-best atoms through a Lennard-Jones-shaped pair force
//! whose depth decays over the schedule, plus a constraint pull toward the
//! best solution found so far. Iterations are 1-based: `t` runs `1..=T`.

use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Weights and limits of the interaction dynamics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DynamicsParams {
    /// Depth weight of the pair force.
    pub alpha: f64,
    /// Multiplier weight of the constraint force.
    pub beta: f64,
    /// Upper limit of the scaled distance.
    pub u: f64,
    /// Base of the scaled-distance lower limit; the drift term is added on top.
    pub g0: f64,
    /// Iteration budget.
    pub iterations: usize,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        DynamicsParams {
            alpha: 50.0,
            beta: 0.2,
            u: 1.24,
            g0: 1.1,
            iterations: 30,
        }
    }
}

impl DynamicsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::config(format!("beta must be >= 0, got {}", self.beta)));
        }
        if !(self.g0 > 0.0 && self.u > self.g0) {
            return Err(Error::config(format!(
                "need u > g0 > 0, got u={} g0={}",
                self.u, self.g0
            )));
        }
        // the drift term reaches 0.1 at t = T, where the bounds would cross
        if self.g0 + 0.1 >= self.u {
            return Err(Error::config(format!(
                "g0 + 0.1 must stay below u (bounds cross at the last iteration): g0={} u={}",
                self.g0, self.u
            )));
        }
        if self.iterations < 1 {
            return Err(Error::config("iteration budget must be >= 1"));
        }
        Ok(())
    }
}

/// One member of the population.
#[derive(Debug, Clone)]
pub struct Atom {
    pub position: FeatureMask,
    pub velocity: Vec<f64>,
    /// Lower is better. Infinite until first evaluation.
    pub fitness: f64,
    /// Normalized mass in (0, 1]; recomputed each iteration.
    pub mass: f64,
}

impl Atom {
    /// Random atom: Bernoulli(0.5) bits, velocity components Uniform[-1, 1].
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let position = FeatureMask::bernoulli(dim, rng);
        let velocity = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Atom {
            position,
            velocity,
            fitness: f64::INFINITY,
            mass: 0.0,
        }
    }
}

/// Best solution observed so far in a run.
#[derive(Debug, Clone)]
pub struct BestSolution {
    pub mask: FeatureMask,
    pub fitness: f64,
}

impl BestSolution {
    /// Fold an observed (mask, fitness) pair in. Strict improvement only,
    /// so the earliest observation wins ties.
    pub fn observe(&mut self, mask: &FeatureMask, fitness: f64) {
        if fitness < self.fitness {
            self.mask = mask.clone();
            self.fitness = fitness;
        }
    }
}

/// Population state: the atoms plus the monotone global best.
#[derive(Debug, Clone)]
pub struct Population {
    pub atoms: Vec<Atom>,
    pub best: BestSolution,
    /// Last completed iteration (0 before the loop starts).
    pub iteration: usize,
}

impl Population {
    pub fn new(atoms: Vec<Atom>) -> Self {
        debug_assert!(atoms.len() >= 2, "population needs at least 2 atoms");
        let best = BestSolution {
            mask: atoms[0].position.clone(),
            fitness: f64::INFINITY,
        };
        Population {
            atoms,
            best,
            iteration: 0,
        }
    }

    /// Indices of the `k` lowest-fitness atoms, ties broken by lower index.
    pub fn kbest_indices(&self, k: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.atoms.len()).collect();
        order.sort_by(|&a, &b| {
            self.atoms[a]
                .fitness
                .total_cmp(&self.atoms[b].fitness)
                .then(a.cmp(&b))
        });
        order.truncate(k);
        order
    }
}

/// Depth function: decaying scale of the interaction force.
pub fn depth_eta(t: usize, params: &DynamicsParams) -> f64 {
    debug_assert!(t >= 1 && t <= params.iterations);
    let t_max = params.iterations as f64;
    let t = t as f64;
    params.alpha * (1.0 - (t - 1.0) / t_max).powi(3) * (-20.0 * t / t_max).exp()
}

/// Drift: grows the lower clamp of the scaled distance, shifting the
/// search from exploration toward exploitation.
pub fn drift_g(t: usize, t_max: usize) -> f64 {
    debug_assert!(t >= 1 && t <= t_max);
    0.1 * (std::f64::consts::FRAC_PI_2 * (t as f64 / t_max as f64)).sin()
}

/// Lower and upper clamp for the scaled distance at iteration `t`.
pub fn h_bounds(t: usize, params: &DynamicsParams) -> (f64, f64) {
    let h_min = params.g0 + drift_g(t, params.iterations);
    let h_max = params.u;
    debug_assert!(h_min < h_max, "scaled-distance bounds crossed; invalid params");
    (h_min, h_max)
}

/// Distance from an atom's position to the componentwise mean of the
/// current K-best positions; the length scale of the pair force.
pub fn length_scale_sigma(position: &FeatureMask, kbest_mean: &[f64]) -> f64 {
    debug_assert_eq!(position.len(), kbest_mean.len());
    kbest_mean
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let d = position.coord(i) - m;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Componentwise mean of the K-best atoms' positions (bits as 0.0/1.0).
pub fn kbest_mean(atoms: &[Atom], kbest: &[usize]) -> Vec<f64> {
    let dim = atoms[0].position.len();
    let mut mean = vec![0.0; dim];
    for &j in kbest {
        for (d, m) in mean.iter_mut().enumerate() {
            *m += atoms[j].position.coord(d);
        }
    }
    let k = kbest.len() as f64;
    for m in &mut mean {
        *m /= k;
    }
    mean
}

/// Scaled distance, clamped into `[h_min, h_max]`. A zero length scale
/// means the K-best have collapsed onto the atom; the clamp floor is the
/// conservative continuation.
pub fn scaled_h(r: f64, sigma: f64, h_min: f64, h_max: f64) -> f64 {
    debug_assert!(r >= 0.0 && h_min < h_max);
    if sigma == 0.0 {
        return h_min;
    }
    (r / sigma).clamp(h_min, h_max)
}

/// Scalar pair force at scaled distance `h`: negative (attraction) above
/// the equilibrium point `2^(-1/6)`, positive (repulsion) below it.
pub fn pair_force_scalar(h: f64, eta: f64) -> f64 {
    debug_assert!(h > 0.0 && eta >= 0.0);
    -eta * (2.0 * h.powi(13) - h.powi(7))
}

/// Total interaction force on atom `i` from the K-best atoms.
///
/// One uniform weight is drawn per contributing pair `j`, in the order
/// `kbest` lists them (a draw also happens for coincident pairs, whose
/// directed contribution is zero because the direction is undefined).
pub fn total_force<R: Rng>(
    atom_index: usize,
    atoms: &[Atom],
    kbest: &[usize],
    t: usize,
    params: &DynamicsParams,
    rng: &mut R,
) -> Vec<f64> {
    let atom = &atoms[atom_index];
    let dim = atom.position.len();
    let mut force = vec![0.0; dim];

    let eta = depth_eta(t, params);
    let (h_min, h_max) = h_bounds(t, params);
    let mean = kbest_mean(atoms, kbest);
    let sigma = length_scale_sigma(&atom.position, &mean);

    for &j in kbest {
        if j == atom_index {
            continue;
        }
        let weight: f64 = rng.gen();
        let other = &atoms[j];
        let r = atom.position.euclidean(&other.position);
        if r == 0.0 {
            continue;
        }
        let h = scaled_h(r, sigma, h_min, h_max);
        let scalar = weight * pair_force_scalar(h, eta);
        for (d, f) in force.iter_mut().enumerate() {
            *f += scalar * (other.position.coord(d) - atom.position.coord(d)) / r;
        }
    }
    force
}

/// Lagrangian multiplier of the constraint force.
pub fn lagrangian_lambda(t: usize, params: &DynamicsParams) -> f64 {
    params.beta * (-20.0 * t as f64 / params.iterations as f64).exp()
}

/// Constraint force: pull toward the best position found so far.
pub fn constraint_force(
    atom: &Atom,
    best_position: &FeatureMask,
    t: usize,
    params: &DynamicsParams,
) -> Vec<f64> {
    debug_assert_eq!(atom.position.len(), best_position.len());
    let lambda = lagrangian_lambda(t, params);
    (0..atom.position.len())
        .map(|d| lambda * (best_position.coord(d) - atom.position.coord(d)))
        .collect()
}

/// Normalized masses from the current fitness values. The best atom gets
/// the largest mass; all masses are in (0, 1] and sum to 1. When every
/// fitness is equal the masses are uniform.
pub fn compute_masses(fitnesses: &[f64]) -> Vec<f64> {
    debug_assert!(!fitnesses.is_empty());
    debug_assert!(fitnesses.iter().all(|f| f.is_finite()));
    let best = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = if worst == best {
        vec![1.0; fitnesses.len()]
    } else {
        fitnesses
            .iter()
            .map(|&f| (-(f - best) / (worst - best)).exp())
            .collect()
    };
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|m| m / total).collect()
}

/// Number of interaction neighbors at iteration `t`: shrinks from about
/// `N` down to exactly 2 at the final iteration. Round half-up, clamped
/// into `[2, N]`.
pub fn neighbor_count(t: usize, t_max: usize, population: usize) -> usize {
    debug_assert!(t >= 1 && t <= t_max && population >= 2);
    let n = population as f64;
    let raw = n - (n - 2.0) * (t as f64 / t_max as f64).sqrt();
    let rounded = (raw + 0.5).floor() as usize;
    rounded.clamp(2, population)
}

/// Acceleration of atom `i`: (interaction + constraint force) / mass.
/// Masses must already be computed for this iteration.
pub fn acceleration<R: Rng>(
    atom_index: usize,
    atoms: &[Atom],
    kbest: &[usize],
    best_position: &FeatureMask,
    t: usize,
    params: &DynamicsParams,
    rng: &mut R,
) -> Vec<f64> {
    let force = total_force(atom_index, atoms, kbest, t, params, rng);
    let constraint = constraint_force(&atoms[atom_index], best_position, t, params);
    let mass = atoms[atom_index].mass;
    debug_assert!(mass > 0.0, "acceleration requires a positive mass");
    force
        .iter()
        .zip(&constraint)
        .map(|(f, g)| (f + g) / mass)
        .collect()
}

/// Velocity update: each component keeps a uniformly-random fraction of
/// its old value and adds the acceleration, then is clamped to `±cap`.
/// One fresh draw per dimension.
pub fn update_velocity<R: Rng>(velocity: &[f64], accel: &[f64], cap: f64, rng: &mut R) -> Vec<f64> {
    debug_assert_eq!(velocity.len(), accel.len());
    velocity
        .iter()
        .zip(accel)
        .map(|(&v, &a)| {
            let r: f64 = rng.gen();
            (r * v + a).clamp(-cap, cap)
        })
        .collect()
}
