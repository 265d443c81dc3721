//! Exhaustive objective fitness, objective fitness correlation (OFC) and the
//! per-generation record.

use rayon::prelude::*;

use crate::bits::BitString;
use crate::ca::{interact_packed, CaConfig, Lattice, RuleTable};
use crate::error::{Error, Result};

/// Default cap on the lattice length for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Interactions spent by the evolutionary loop so far, this generation included.
    pub interactions_cum: u64,
    pub best_objective: f64,
    pub mean_objective: f64,
    /// OFC of the solution population; 0 when `ofc_degenerate`.
    pub ofc: f64,
    pub ofc_degenerate: bool,
}

/// Every initial condition of length `n`, in lexicographic order.
pub fn enumerate_all_tests(n: usize, cap: usize) -> Result<Vec<Lattice>> {
    if n > cap {
        return Err(Error::config(format!(
            "cannot enumerate 2^{n} initial conditions (cap is 2^{cap})"
        )));
    }
    if n > 63 {
        return Err(Error::config(format!("lattice length {n} too large to enumerate")));
    }
    Ok((0..1u64 << n)
        .map(|code| Lattice(BitString::from_u64(code, n)))
        .collect())
}

/// Fraction of all `2^n` initial conditions each solution classifies correctly.
pub fn objective_fitness(solutions: &[RuleTable], config: &CaConfig) -> Result<Vec<f64>> {
    ObjectiveEvaluator::new(config, DEFAULT_ENUMERATION_CAP)?.evaluate(solutions)
}

/// Holds the enumerated test space so repeated objective measurements do not rebuild it.
#[derive(Debug, Clone)]
pub struct ObjectiveEvaluator {
    config: CaConfig,
    tests: Vec<u64>,
}

impl ObjectiveEvaluator {
    pub fn new(config: &CaConfig, cap: usize) -> Result<Self> {
        config.validate()?;
        let tests = enumerate_all_tests(config.n, cap)?
            .iter()
            .map(Lattice::pack)
            .collect();
        Ok(ObjectiveEvaluator {
            config: *config,
            tests,
        })
    }

    pub fn test_count(&self) -> usize {
        self.tests.len()
    }

    pub fn evaluate(&self, solutions: &[RuleTable]) -> Result<Vec<f64>> {
        if let Some(s) = solutions.iter().find(|s| s.len() != self.config.rule_len()) {
            return Err(Error::config(format!(
                "rule has {} entries, expected {}",
                s.len(),
                self.config.rule_len()
            )));
        }
        let total = self.tests.len() as f64;
        Ok(solutions
            .par_iter()
            .map(|rule| {
                let packed = rule.pack();
                let solved = self
                    .tests
                    .iter()
                    .filter(|&&ic| interact_packed(packed, ic, &self.config))
                    .count();
                solved as f64 / total
            })
            .collect())
    }
}

/// Pearson correlation with an explicit flag for the zero-variance case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ofc {
    pub value: f64,
    pub degenerate: bool,
}

/// Pearson correlation between subjective and objective fitness of one population.
/// A zero-variance input yields `0` with the degenerate flag set.
pub fn ofc(subjective: &[f64], objective: &[f64]) -> Result<Ofc> {
    if subjective.len() != objective.len() {
        return Err(Error::usage(format!(
            "OFC inputs differ in length ({} vs {})",
            subjective.len(),
            objective.len()
        )));
    }
    if subjective.len() < 2 {
        return Err(Error::usage("OFC needs at least two individuals"));
    }
    let n = subjective.len() as f64;
    let mean_x = subjective.iter().sum::<f64>() / n;
    let mean_y = objective.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in subjective.iter().zip(objective) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Ofc {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(Ofc {
        value: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

pub fn generation_record(
    generation: usize,
    interactions_cum: u64,
    subjective: &[f64],
    objective: &[f64],
) -> Result<GenerationRecord> {
    let corr = ofc(subjective, objective)?;
    let best = objective.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = objective.iter().sum::<f64>() / objective.len() as f64;
    Ok(GenerationRecord {
        generation,
        interactions_cum,
        best_objective: best,
        // Summation rounding must not push the mean above the max.
        mean_objective: mean.min(best),
        ofc: corr.value,
        ofc_degenerate: corr.degenerate,
    })
}
