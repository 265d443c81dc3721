//! Batch driver for the experiment matrix: one GA baseline and four coevolution
//! variants, each repeated over consecutive seeds.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::info;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluation::Method;
use crate::evolution::{run_coevolution, run_ga, Algorithm, RunConfig, RunRecord};
use crate::report::{emit_report, ReportSummary};
use crate::stats::{aggregate_runs, MethodCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentId {
    Gaas,
    Coas,
    Cows,
    Coai,
    Cowi,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 5] = [
        ExperimentId::Gaas,
        ExperimentId::Coas,
        ExperimentId::Cows,
        ExperimentId::Coai,
        ExperimentId::Cowi,
    ];

    pub fn algorithm(self) -> Algorithm {
        match self {
            ExperimentId::Gaas => Algorithm::Ga,
            _ => Algorithm::Coevolution,
        }
    }

    pub fn method(self) -> Method {
        match self {
            ExperimentId::Gaas | ExperimentId::Coas => Method::AverageScore,
            ExperimentId::Cows => Method::WeightedScore,
            ExperimentId::Coai => Method::AverageInformativeness,
            ExperimentId::Cowi => Method::WeightedInformativeness,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ExperimentId::Gaas => "GAAS",
            ExperimentId::Coas => "COAS",
            ExperimentId::Cows => "COWS",
            ExperimentId::Coai => "COAI",
            ExperimentId::Cowi => "COWI",
        }
    }

    /// The coevolution experiment using `method`.
    pub fn coevolution(method: Method) -> Self {
        match method {
            Method::AverageScore => ExperimentId::Coas,
            Method::WeightedScore => ExperimentId::Cows,
            Method::AverageInformativeness => ExperimentId::Coai,
            Method::WeightedInformativeness => ExperimentId::Cowi,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase();
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.label() == wanted)
            .ok_or_else(|| {
                Error::usage(format!(
                    "unknown experiment {s:?} (expected GAAS, COAS, COWS, COAI or COWI)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiments: Vec<ExperimentId>,
    /// Shared problem and evolution settings; the seed is replaced per run.
    pub run: RunConfig,
    pub runs: usize,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    /// Worker count; `None` uses every available core.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiments: ExperimentId::ALL.to_vec(),
            run: RunConfig::default(),
            runs: 10,
            base_seed: 0,
            out_dir: PathBuf::from("results"),
            threads: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.run.validate()?;
        if self.experiments.is_empty() {
            return Err(Error::config("no experiments selected"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads must be at least 1"));
        }
        if self.base_seed.checked_add(self.runs as u64 - 1).is_none() {
            return Err(Error::config("base seed + run index overflows"));
        }
        Ok(())
    }

    pub fn seed_for(&self, run: usize) -> u64 {
        self.base_seed + run as u64
    }
}

pub fn run_experiment(id: ExperimentId, config: &RunConfig) -> Result<RunRecord> {
    match id.algorithm() {
        Algorithm::Ga => run_ga(config),
        Algorithm::Coevolution => run_coevolution(config, id.method()),
    }
}

/// Everything a suite produced, keyed by experiment, runs in index order.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub runs: BTreeMap<ExperimentId, Vec<RunRecord>>,
    pub curves: BTreeMap<ExperimentId, MethodCurve>,
    pub report: ReportSummary,
}

/// Runs every (experiment, run) cell, then writes per-run CSVs, per-experiment
/// aggregates and the report under `config.out_dir`.
pub fn run_experiment_suite(config: &ExperimentConfig) -> Result<SuiteResult> {
    config.validate()?;
    prepare_output(&config.out_dir)?;

    let mut experiments = config.experiments.clone();
    experiments.sort();
    experiments.dedup();

    let jobs: Vec<(ExperimentId, usize)> = experiments
        .iter()
        .flat_map(|&id| (0..config.runs).map(move |run| (id, run)))
        .collect();
    info!("running {} jobs", jobs.len());

    let execute = || {
        jobs.par_iter()
            .map(|&(id, run)| {
                let seed = config.seed_for(run);
                let record = run_experiment(id, &config.run.with_seed(seed))?;
                info!("{id} run {run} (seed {seed}) done");
                Ok((id, record))
            })
            .collect::<Result<Vec<_>>>()
    };
    let finished = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?
            .install(execute)?,
        None => execute()?,
    };

    let mut runs: BTreeMap<ExperimentId, Vec<RunRecord>> = BTreeMap::new();
    for (id, record) in finished {
        runs.entry(id).or_default().push(record);
    }

    let runs_dir = config.out_dir.join("runs");
    let aggregate_dir = config.out_dir.join("aggregate");
    create_dir(&runs_dir)?;
    create_dir(&aggregate_dir)?;

    let mut curves = BTreeMap::new();
    for (&id, records) in &runs {
        for (run, record) in records.iter().enumerate() {
            let path = runs_dir.join(format!("{id}_run{run:02}.csv"));
            write_file(&path, &run_csv(id, run, record))?;
        }
        let curve = aggregate_runs(id.label(), records)?;
        write_file(&aggregate_dir.join(format!("{id}.csv")), &aggregate_csv(id, &curve))?;
        curves.insert(id, curve);
    }

    let report = emit_report(&curves, &config.out_dir.join("report"))?;
    Ok(SuiteResult {
        runs,
        curves,
        report,
    })
}

pub const RUN_CSV_HEADER: &str =
    "experiment,method,run,seed,generation,interactions_cum,best_objective,mean_objective,ofc,ofc_degenerate";

/// One run as CSV with [`RUN_CSV_HEADER`] columns; floats use shortest round-trip notation.
pub fn run_csv(id: ExperimentId, run: usize, record: &RunRecord) -> String {
    let mut out = String::with_capacity(64 * (record.generations.len() + 1));
    out.push_str(RUN_CSV_HEADER);
    out.push('\n');
    for g in &record.generations {
        let _ = writeln!(
            out,
            "{id},{},{run},{},{},{},{},{},{},{}",
            record.method,
            record.seed,
            g.generation,
            g.interactions_cum,
            g.best_objective,
            g.mean_objective,
            g.ofc,
            g.ofc_degenerate
        );
    }
    out
}

pub const AGGREGATE_CSV_HEADER: &str =
    "experiment,generation,interactions_cum,runs,best_objective,mean_objective,ofc,ofc_excluded";

pub fn aggregate_csv(id: ExperimentId, curve: &MethodCurve) -> String {
    let mut out = String::new();
    out.push_str(AGGREGATE_CSV_HEADER);
    out.push('\n');
    for g in 0..curve.len() {
        let _ = writeln!(
            out,
            "{id},{g},{},{},{},{},{},{}",
            curve.interactions[g],
            curve.runs,
            curve.best_objective[g],
            curve.mean_objective[g],
            curve.ofc[g],
            curve.ofc_excluded[g]
        );
    }
    out
}

/// Creates the output directory and proves it is writable before any run starts.
fn prepare_output(dir: &Path) -> Result<()> {
    create_dir(dir)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
