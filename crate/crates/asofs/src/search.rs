//! The optimization loop: atom population, per-iteration dynamics,
//! binarization and the optional annealing stage.

use crate::anneal::{anneal, AnnealSchedule};
use crate::data::{normalize, split, Dataset, SplitSpec};
use crate::dynamics::{
    acceleration, compute_masses, neighbor_count, update_velocity, Atom, DynamicsParams,
    Population,
};
use crate::error::{Error, Result};
use crate::eval::{EvaluationContext, FitnessWeights};
use crate::knn::KnnClassifier;
use crate::report::RunReport;
use crate::rng::{substream, Phase};
use crate::transfer::{apply_flip, FlipPolicy, TransferKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// The four shipped method variants: transfer-function shape with or
/// without the annealing stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Asos,
    Asov,
    AsosSa,
    AsovSa,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Asos, Method::Asov, Method::AsosSa, Method::AsovSa];

    pub fn transfer(self) -> TransferKind {
        match self {
            Method::Asos | Method::AsosSa => TransferKind::SShaped,
            Method::Asov | Method::AsovSa => TransferKind::VShaped,
        }
    }

    pub fn sa_enabled(self) -> bool {
        matches!(self, Method::AsosSa | Method::AsovSa)
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Asos => "asos",
            Method::Asov => "asov",
            Method::AsosSa => "asos-sa",
            Method::AsovSa => "asov-sa",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.label() == s)
    }

    pub fn from_parts(kind: TransferKind, sa_enabled: bool) -> Method {
        match (kind, sa_enabled) {
            (TransferKind::SShaped, false) => Method::Asos,
            (TransferKind::VShaped, false) => Method::Asov,
            (TransferKind::SShaped, true) => Method::AsosSa,
            (TransferKind::VShaped, true) => Method::AsovSa,
        }
    }
}

/// Full configuration of one run. Everything that influences the result
/// lives here, so the config echo in a report is enough to reproduce it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub population_size: usize,
    pub dynamics: DynamicsParams,
    pub transfer: TransferKind,
    pub sa_enabled: bool,
    pub flip: FlipPolicy,
    pub weights: FitnessWeights,
    pub velocity_cap: f64,
    pub knn_k: usize,
    pub cooling_factor: f64,
    pub stop_temp: f64,
    /// Annealing start temperature; twice the feature count when absent.
    pub initial_temp: Option<f64>,
    /// Textbook annealing acceptance instead of walk-best comparison.
    pub compare_to_current: bool,
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
    /// Evaluate and move atoms on the rayon pool. Results are identical
    /// to the sequential path; every atom draws from its own substream.
    pub parallel: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population_size: 20,
            dynamics: DynamicsParams::default(),
            transfer: TransferKind::SShaped,
            sa_enabled: false,
            flip: FlipPolicy::default(),
            weights: FitnessWeights::default(),
            velocity_cap: 6.0,
            knn_k: 5,
            cooling_factor: 0.93,
            stop_temp: 1.0,
            initial_temp: None,
            compare_to_current: false,
            train_fraction: 0.8,
            stratified: true,
            seed: 0,
            parallel: false,
        }
    }
}

impl OptimizerConfig {
    pub fn for_method(method: Method, seed: u64) -> Self {
        OptimizerConfig {
            transfer: method.transfer(),
            sa_enabled: method.sa_enabled(),
            seed,
            ..OptimizerConfig::default()
        }
    }

    pub fn method(&self) -> Method {
        Method::from_parts(self.transfer, self.sa_enabled)
    }

    pub fn split_spec(&self) -> SplitSpec {
        SplitSpec {
            train_fraction: self.train_fraction,
            stratified: self.stratified,
            seed: self.seed,
        }
    }

    fn schedule(&self, feature_count: usize) -> AnnealSchedule {
        AnnealSchedule {
            initial_temp: self
                .initial_temp
                .unwrap_or(2.0 * feature_count as f64),
            cooling_factor: self.cooling_factor,
            stop_temp: self.stop_temp,
            compare_to_current: self.compare_to_current,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config(format!(
                "population size must be >= 2, got {}",
                self.population_size
            )));
        }
        self.dynamics.validate()?;
        self.weights.validate()?;
        if self.velocity_cap <= 0.0 || self.velocity_cap.is_nan() {
            return Err(Error::config("velocity cap must be > 0"));
        }
        if let FlipPolicy::Fixed(value) = self.flip {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::config(format!(
                    "fixed flip threshold must be in [0, 1], got {value}"
                )));
            }
        }
        if self.knn_k == 0 {
            return Err(Error::config("knn k must be >= 1"));
        }
        self.schedule(1).validate()?;
        self.split_spec().validate()?;
        Ok(())
    }
}

/// Split, normalize and wrap a dataset into an evaluation context. Shared
/// by the optimizer and the exhaustive oracle so both score masks through
/// the identical pipeline.
pub fn build_context(
    dataset: &Dataset,
    knn_k: usize,
    weights: FitnessWeights,
    split_spec: &SplitSpec,
) -> Result<EvaluationContext> {
    let (train, test) = split(dataset, split_spec)?;
    if knn_k > train.instances() {
        return Err(Error::config(format!(
            "knn k={} exceeds the {} training instances",
            knn_k,
            train.instances()
        )));
    }
    let (train, test) = normalize(&train, &test);
    EvaluationContext::new(train, test, Box::new(KnnClassifier::new(knn_k)?), weights)
}

fn for_each_atom<F>(atoms: &mut [Atom], parallel: bool, f: F)
where
    F: Fn(usize, &mut Atom) + Sync + Send,
{
    if parallel {
        atoms.par_iter_mut().enumerate().for_each(|(i, a)| f(i, a));
    } else {
        atoms.iter_mut().enumerate().for_each(|(i, a)| f(i, a));
    }
}

fn map_indices<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// Run one optimization on `dataset` and return the report.
///
/// Per iteration: evaluate every atom, fold the observations into the
/// global best, compute masses, pick the K(t) best as force sources, move
/// every atom (acceleration, velocity, transfer-function bit flips) and,
/// when enabled, anneal every atom and adopt the walk's best. The
/// recorded convergence value is the global best after the iteration.
pub fn run(cfg: &OptimizerConfig, dataset: &Dataset) -> Result<RunReport> {
    cfg.validate()?;
    let started = Instant::now();

    let ctx = build_context(dataset, cfg.knn_k, cfg.weights, &cfg.split_spec())?;
    let dim = ctx.feature_count();
    let schedule = cfg.schedule(dim);
    let t_max = cfg.dynamics.iterations;
    let n = cfg.population_size;
    let seed = cfg.seed;

    let atoms: Vec<Atom> = (0..n)
        .map(|i| {
            let mut rng = substream(seed, Phase::Init, 0, i as u64);
            Atom::random(dim, &mut rng)
        })
        .collect();
    let mut pop = Population::new(atoms);
    let mut convergence = Vec::with_capacity(t_max);

    for t in 1..=t_max {
        // fitness of the current positions (cache makes repeats free)
        for_each_atom(&mut pop.atoms, cfg.parallel, |i, atom| {
            let mut rng = substream(seed, Phase::Eval, t as u64, i as u64);
            let value = ctx.evaluate(&mut atom.position, &mut rng);
            atom.fitness = value.fitness;
        });
        let Population { atoms, best, .. } = &mut pop;
        for atom in atoms.iter() {
            best.observe(&atom.position, atom.fitness);
        }

        let masses = compute_masses(
            &pop.atoms.iter().map(|a| a.fitness).collect::<Vec<_>>(),
        );
        for (atom, mass) in pop.atoms.iter_mut().zip(masses) {
            atom.mass = mass;
        }

        let k = neighbor_count(t, t_max, n);
        let kbest = pop.kbest_indices(k);

        // motion: forces and flips read the pre-move state of all atoms
        let moved: Vec<(Vec<f64>, crate::mask::FeatureMask)> = {
            let atoms = &pop.atoms;
            let best_mask = &pop.best.mask;
            map_indices(n, cfg.parallel, |i| {
                let mut force_rng = substream(seed, Phase::Force, t as u64, i as u64);
                let accel = acceleration(
                    i,
                    atoms,
                    &kbest,
                    best_mask,
                    t,
                    &cfg.dynamics,
                    &mut force_rng,
                );
                let mut vel_rng = substream(seed, Phase::Velocity, t as u64, i as u64);
                let velocity =
                    update_velocity(&atoms[i].velocity, &accel, cfg.velocity_cap, &mut vel_rng);
                let mut flip_rng = substream(seed, Phase::Flip, t as u64, i as u64);
                let position =
                    apply_flip(&atoms[i].position, &velocity, cfg.transfer, cfg.flip, &mut flip_rng);
                (velocity, position)
            })
        };
        for (atom, (velocity, position)) in pop.atoms.iter_mut().zip(moved) {
            atom.velocity = velocity;
            atom.position = position;
        }

        if cfg.sa_enabled {
            for_each_atom(&mut pop.atoms, cfg.parallel, |i, atom| {
                let mut rng = substream(seed, Phase::Anneal, t as u64, i as u64);
                let start = ctx.evaluate(&mut atom.position, &mut rng);
                let outcome = anneal(&atom.position, start, &ctx, &schedule, &mut rng);
                atom.position = outcome.mask;
                atom.fitness = outcome.value.fitness;
            });
            let Population { atoms, best, .. } = &mut pop;
            for atom in atoms.iter() {
                best.observe(&atom.position, atom.fitness);
            }
        }

        pop.iteration = t;
        convergence.push(pop.best.fitness);
    }

    let error = ctx.error_rate(&pop.best.mask)?;
    Ok(RunReport {
        dataset: dataset.name.clone(),
        method: cfg.method().label().to_string(),
        seed: cfg.seed,
        best_mask: pop.best.mask.to_bit_string(),
        selected_count: pop.best.mask.count_ones(),
        test_accuracy: 1.0 - error,
        best_fitness: pop.best.fitness,
        convergence,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        config: cfg.clone(),
    })
}
