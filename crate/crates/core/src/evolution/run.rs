use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::operators::{init_population_unique, next_generation, BreedParams, Individual};
use crate::ca::{CaConfig, Lattice, RuleTable};
use crate::error::{Error, Result};
use crate::evaluation::{eval_average_score, evaluate, BlendWeights, Method};
use crate::interaction::build_packed;
use crate::metrics::{enumerate_all_tests, generation_record, GenerationRecord, ObjectiveEvaluator, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvoParams {
    pub max_generation: usize,
    pub pop_size_tests: usize,
    pub pop_size_solutions: usize,
    pub elite_fraction: f64,
    pub mutation_rate: f64,
    /// See [`BreedParams::rank_bias`].
    pub rank_bias: f64,
    pub seed: u64,
}

impl Default for EvoParams {
    fn default() -> Self {
        EvoParams {
            max_generation: 200,
            pop_size_tests: 64,
            pop_size_solutions: 100,
            elite_fraction: 0.2,
            mutation_rate: 0.01,
            rank_bias: 1.0,
            seed: 0,
        }
    }
}

impl EvoParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_generation == 0 {
            return Err(Error::config("max_generation must be at least 1"));
        }
        if self.pop_size_tests < 2 || self.pop_size_solutions < 2 {
            return Err(Error::config("population sizes must be at least 2"));
        }
        if !(0.0..1.0).contains(&self.elite_fraction) {
            return Err(Error::config(format!(
                "elite fraction {} outside [0, 1)",
                self.elite_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config(format!(
                "mutation rate {} outside [0, 1]",
                self.mutation_rate
            )));
        }
        if !(self.rank_bias >= 0.0 && self.rank_bias.is_finite()) {
            return Err(Error::config("rank bias must be a nonnegative number"));
        }
        Ok(())
    }

    pub fn breed_params(&self) -> BreedParams {
        BreedParams {
            elite_fraction: self.elite_fraction,
            mutation_rate: self.mutation_rate,
            rank_bias: self.rank_bias,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub ca: CaConfig,
    pub evo: EvoParams,
    pub blend: BlendWeights,
    pub enumeration_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ca: CaConfig::default(),
            evo: EvoParams::default(),
            blend: BlendWeights::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.ca.validate()?;
        self.evo.validate()?;
        self.blend.validate()?;
        if self.ca.n > self.enumeration_cap {
            return Err(Error::config(format!(
                "lattice length {} exceeds the enumeration cap {}",
                self.ca.n, self.enumeration_cap
            )));
        }
        if self.evo.pop_size_tests > 1usize << self.ca.n.min(63) {
            return Err(Error::config(format!(
                "{} distinct tests do not exist for lattice length {}",
                self.evo.pop_size_tests, self.ca.n
            )));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.evo.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ga,
    Coevolution,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Ga => "GA",
            Algorithm::Coevolution => "CO",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub method: Method,
    pub seed: u64,
    pub generations: Vec<GenerationRecord>,
}

/// Where the coevolution loop draws its tests from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestPopulation {
    /// An evolving population of `pop_size_tests` initial conditions.
    Coevolving,
    /// The fixed set of all `2^n` initial conditions.
    Exhaustive,
}

/// Baseline GA: solutions are scored by average score against every possible test.
/// That score is the objective fitness, so no separate measurement is made.
pub fn run_ga(config: &RunConfig) -> Result<RunRecord> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.evo.seed);
    let tests = all_tests_packed(config)?;
    let mut solutions =
        init_population_unique(config.evo.pop_size_solutions, config.ca.rule_len(), &mut rng)?;
    let breed = config.evo.breed_params();

    let mut interactions = 0u64;
    let mut generations = Vec::with_capacity(config.evo.max_generation);
    for generation in 0..config.evo.max_generation {
        let matrix = build_packed(&tests, &pack_rules(&solutions), &config.ca);
        interactions += matrix.interaction_count();
        let fitness = eval_average_score(&matrix).solutions;
        assign(&mut solutions, &fitness);
        generations.push(generation_record(generation, interactions, &fitness, &fitness)?);

        if generation + 1 < config.evo.max_generation {
            solutions = next_generation(&solutions, &breed, &mut rng);
        }
    }
    Ok(RunRecord {
        algorithm: Algorithm::Ga,
        method: Method::AverageScore,
        seed: config.evo.seed,
        generations,
    })
}

pub fn run_coevolution(config: &RunConfig, method: Method) -> Result<RunRecord> {
    run_coevolution_with(config, method, TestPopulation::Coevolving)
}

/// Two-population coevolution. Both populations are evaluated with `method` and bred
/// with the same operators. Objective fitness is measured out of band against every
/// possible test and is not counted in `interactions_cum`.
pub fn run_coevolution_with(
    config: &RunConfig,
    method: Method,
    test_source: TestPopulation,
) -> Result<RunRecord> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.evo.seed);
    let objective = ObjectiveEvaluator::new(&config.ca, config.enumeration_cap)?;

    let mut tests = match test_source {
        TestPopulation::Coevolving => {
            init_population_unique(config.evo.pop_size_tests, config.ca.n, &mut rng)?
        }
        TestPopulation::Exhaustive => enumerate_all_tests(config.ca.n, config.enumeration_cap)?
            .into_iter()
            .map(|l| Individual::new(l.0))
            .collect(),
    };
    let mut solutions =
        init_population_unique(config.evo.pop_size_solutions, config.ca.rule_len(), &mut rng)?;
    let breed = config.evo.breed_params();

    let mut interactions = 0u64;
    let mut generations = Vec::with_capacity(config.evo.max_generation);
    for generation in 0..config.evo.max_generation {
        let rules = rules_of(&solutions);
        let matrix = build_packed(&pack_tests(&tests), &pack_rules(&solutions), &config.ca);
        interactions += matrix.interaction_count();

        let fitness = evaluate(&matrix, method, config.blend);
        assign(&mut tests, &fitness.tests);
        assign(&mut solutions, &fitness.solutions);

        let objective = objective.evaluate(&rules)?;
        generations.push(generation_record(
            generation,
            interactions,
            &fitness.solutions,
            &objective,
        )?);

        if generation + 1 < config.evo.max_generation {
            if test_source == TestPopulation::Coevolving {
                tests = next_generation(&tests, &breed, &mut rng);
            }
            solutions = next_generation(&solutions, &breed, &mut rng);
        }
    }
    Ok(RunRecord {
        algorithm: Algorithm::Coevolution,
        method,
        seed: config.evo.seed,
        generations,
    })
}

fn assign(population: &mut [Individual], fitness: &[f64]) {
    for (ind, &f) in population.iter_mut().zip(fitness) {
        ind.fitness = f;
    }
}

fn all_tests_packed(config: &RunConfig) -> Result<Vec<u64>> {
    Ok(enumerate_all_tests(config.ca.n, config.enumeration_cap)?
        .iter()
        .map(Lattice::pack)
        .collect())
}

fn pack_tests(tests: &[Individual]) -> Vec<u64> {
    tests.iter().map(|t| Lattice(t.genome.clone()).pack()).collect()
}

fn pack_rules(solutions: &[Individual]) -> Vec<u128> {
    solutions.iter().map(|s| RuleTable(s.genome.clone()).pack()).collect()
}

fn rules_of(solutions: &[Individual]) -> Vec<RuleTable> {
    solutions.iter().map(|s| RuleTable(s.genome.clone())).collect()
}
