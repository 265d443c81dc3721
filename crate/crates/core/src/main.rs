use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use coevo::ca::CaConfig;
use coevo::evaluation::BlendWeights;
use coevo::evolution::{EvoParams, RunConfig};
use coevo::experiment::{run_experiment_suite, ExperimentConfig, ExperimentId};
use coevo::metrics::DEFAULT_ENUMERATION_CAP;

/// Compare coevolutionary evaluation methods on the majority-function CA.
///
/// Every flag can also be set through the environment variable shown in its help.
#[derive(Debug, Parser)]
#[command(name = "coevo", version)]
struct Cli {
    /// Experiments to run, comma separated (GAAS, COAS, COWS, COAI, COWI) or "all".
    #[arg(long, env = "COEVO_EXPERIMENT", default_value = "all", value_delimiter = ',')]
    experiment: Vec<String>,

    /// Independent runs per experiment.
    #[arg(long, env = "COEVO_RUNS", default_value_t = 10)]
    runs: usize,

    /// Base seed; run k uses seed + k.
    #[arg(long, env = "COEVO_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, env = "COEVO_GENERATIONS", default_value_t = 200)]
    generations: usize,

    /// Lattice length (odd).
    #[arg(long, env = "COEVO_N", default_value_t = 9)]
    n: usize,

    /// Neighborhood radius.
    #[arg(long, env = "COEVO_R", default_value_t = 2)]
    r: usize,

    /// CA updates per interaction [default: 2n].
    #[arg(long, env = "COEVO_MAX_STEPS")]
    max_steps: Option<usize>,

    /// Distinction and score weights for AI/WI, as "d,s".
    #[arg(long, env = "COEVO_BLEND_WEIGHTS", default_value = "0.3,0.7")]
    blend_weights: String,

    #[arg(long, env = "COEVO_POP_TESTS", default_value_t = 64)]
    pop_tests: usize,

    #[arg(long, env = "COEVO_POP_SOLUTIONS", default_value_t = 100)]
    pop_solutions: usize,

    #[arg(long, env = "COEVO_ELITE_FRACTION", default_value_t = 0.2)]
    elite_fraction: f64,

    /// Per-bit mutation probability.
    #[arg(long, env = "COEVO_MUTATION_RATE", default_value_t = 0.01)]
    mutation_rate: f64,

    /// Linear ranking slope: 1 selects proportionally to rank, 0 uniformly.
    #[arg(long, env = "COEVO_RANK_BIAS", default_value_t = 1.0)]
    rank_bias: f64,

    /// Largest lattice length for exhaustive objective evaluation.
    #[arg(long, env = "COEVO_ENUMERATION_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: usize,

    /// Output directory.
    #[arg(long, env = "COEVO_OUT", default_value = "results")]
    out: PathBuf,

    /// Worker threads [default: all cores].
    #[arg(long, env = "COEVO_THREADS")]
    threads: Option<usize>,
}

impl Cli {
    fn into_config(self) -> coevo::Result<ExperimentConfig> {
        let experiments = if self.experiment.iter().any(|e| e.eq_ignore_ascii_case("all")) {
            ExperimentId::ALL.to_vec()
        } else {
            self.experiment
                .iter()
                .map(|e| e.parse())
                .collect::<coevo::Result<Vec<_>>>()?
        };
        let ca = CaConfig::with_max_steps(self.n, self.r, self.max_steps.unwrap_or(2 * self.n))?;
        Ok(ExperimentConfig {
            experiments,
            run: RunConfig {
                ca,
                evo: EvoParams {
                    max_generation: self.generations,
                    pop_size_tests: self.pop_tests,
                    pop_size_solutions: self.pop_solutions,
                    elite_fraction: self.elite_fraction,
                    mutation_rate: self.mutation_rate,
                    rank_bias: self.rank_bias,
                    seed: self.seed,
                },
                blend: self.blend_weights.parse::<BlendWeights>()?,
                enumeration_cap: self.enumeration_cap,
            },
            runs: self.runs,
            base_seed: self.seed,
            out_dir: self.out,
            threads: self.threads,
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();

    let result = cli.into_config().and_then(|config| run_experiment_suite(&config).map(|r| (config, r)));
    match result {
        Ok((config, suite)) => {
            for notice in &suite.report.notices {
                log::warn!("{notice}");
            }
            println!(
                "wrote {} run file(s) and the report to {}",
                suite.runs.values().map(Vec::len).sum::<usize>(),
                config.out_dir.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("coevo: {e}");
            ExitCode::FAILURE
        }
    }
}
