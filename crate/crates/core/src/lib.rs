//! Coevolutionary evaluation methods on the majority-function cellular automaton.
//!
//! Solutions are radius-`r` CA rules, tests are initial conditions of an `n`-cell ring.
//! A rule solves a test when it drives the ring to the homogeneous state of the test's
//! majority bit. On top of that interaction the crate provides four subjective
//! fitness methods (AS, WS, AI, WI), a GA baseline and a two-population coevolution
//! loop, exhaustive objective fitness with objective fitness correlation (OFC),
//! and the statistics and batch driver used to compare the methods.

pub mod bits;
pub mod ca;
pub mod error;
pub mod evaluation;
pub mod evolution;
pub mod experiment;
pub mod interaction;
pub mod metrics;
pub mod report;
pub mod stats;

pub use bits::BitString;
pub use ca::{ca_step, interact, CaConfig, Lattice, RuleTable};
pub use error::{Error, Result};
pub use evaluation::{evaluate, BlendWeights, FitnessAssignment, Method};
pub use interaction::{build_interaction_matrix, Axis, InteractionMatrix};
