//! Single-population GA baseline and two-population coevolution.

mod operators;
mod run;

pub use operators::{
    crossover_at, init_population_unique, linear_rank_select, mutate, next_generation,
    one_point_crossover, BreedParams, Individual, RankSelector,
};
pub use run::{run_coevolution, run_coevolution_with, run_ga, Algorithm, EvoParams, RunConfig, RunRecord, TestPopulation};
