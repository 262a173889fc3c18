//! Wrapper feature selection driven by binary atom search optimization.
//!
//! The search moves a population of atoms through the space of feature
//! subsets. Each atom carries a bitmask (its position) and a real-valued
//! velocity; attraction/repulsion forces between atoms and a constraint
//! pull toward the best solution produce accelerations, velocities are
//! mapped back to bit flips through an S-shaped or V-shaped transfer
//! function, and an optional simulated-annealing stage refines every atom
//! after each iteration. Subsets are scored by a wrapped classifier
//! (KNN ships) combining classification error with subset size.
//!
//! Entry points:
//! - [`data::load_csv`] / [`data::split`] / [`data::normalize`] for datasets,
//! - [`search::run`] for a single optimization run producing a [`report::RunReport`],
//! - [`oracle::exhaustive_oracle`] for the brute-force reference on small `d`,
//! - [`batch::run_batch`] for seed-matrix experiments.

pub mod anneal;
pub mod batch;
pub mod data;
pub mod dynamics;
pub mod error;
pub mod eval;
pub mod knn;
pub mod mask;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod search;
pub mod synth;
pub mod transfer;

pub use error::Error;
pub use mask::FeatureMask;
