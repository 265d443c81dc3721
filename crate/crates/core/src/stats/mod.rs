//! Aggregation over repeated runs and one-tailed paired t-tests between methods.

mod special;
mod ttest;

pub use special::{beta_inc, ln_beta, ln_gamma};
pub use ttest::{paired_t_test_one_tailed, student_t_upper_tail, TTest};

use crate::error::{Error, Result};
use crate::evolution::RunRecord;

/// Significance level used to flag preference-matrix entries.
pub const ALPHA: f64 = 0.05;

/// Generation-wise means over runs of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodCurve {
    pub label: String,
    pub runs: usize,
    /// Evolution-budget interactions at each generation (identical across runs).
    pub interactions: Vec<u64>,
    pub best_objective: Vec<f64>,
    pub mean_objective: Vec<f64>,
    /// Mean OFC over the non-degenerate runs; NaN when every run was degenerate.
    pub ofc: Vec<f64>,
    /// Degenerate OFC values left out of each generation's mean.
    pub ofc_excluded: Vec<usize>,
}

impl MethodCurve {
    pub fn len(&self) -> usize {
        self.best_objective.len()
    }

    pub fn is_empty(&self) -> bool {
        self.best_objective.is_empty()
    }

    pub fn measure(&self, measure: Measure) -> &[f64] {
        match measure {
            Measure::Objective => &self.best_objective,
            Measure::Ofc => &self.ofc,
        }
    }
}

pub fn aggregate_runs(label: impl Into<String>, runs: &[RunRecord]) -> Result<MethodCurve> {
    let first = runs
        .first()
        .ok_or_else(|| Error::usage("cannot aggregate zero runs"))?;
    let len = first.generations.len();
    if runs.iter().any(|r| r.generations.len() != len) {
        return Err(Error::usage("runs differ in generation count"));
    }
    let count = runs.len() as f64;
    let mut curve = MethodCurve {
        label: label.into(),
        runs: runs.len(),
        interactions: first.generations.iter().map(|g| g.interactions_cum).collect(),
        best_objective: Vec::with_capacity(len),
        mean_objective: Vec::with_capacity(len),
        ofc: Vec::with_capacity(len),
        ofc_excluded: Vec::with_capacity(len),
    };
    for g in 0..len {
        let at = || runs.iter().map(move |r| &r.generations[g]);
        curve
            .best_objective
            .push(at().map(|rec| rec.best_objective).sum::<f64>() / count);
        curve
            .mean_objective
            .push(at().map(|rec| rec.mean_objective).sum::<f64>() / count);
        let valid: Vec<f64> = at().filter(|rec| !rec.ofc_degenerate).map(|rec| rec.ofc).collect();
        curve.ofc_excluded.push(runs.len() - valid.len());
        curve.ofc.push(if valid.is_empty() {
            f64::NAN
        } else {
            valid.iter().sum::<f64>() / valid.len() as f64
        });
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Objective,
    Ofc,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Objective => "objective",
            Measure::Ofc => "ofc",
        }
    }
}

/// `p[i][j]` is the one-tailed p-value for "curve i < curve j" over generation-paired means.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix {
    pub measure: Measure,
    pub labels: Vec<String>,
    pub p: Vec<Vec<f64>>,
}

impl PreferenceMatrix {
    /// Upper-triangle entries `(i, j, p)` with `i < j`, in label order.
    pub fn upper_triangle(&self) -> Vec<(usize, usize, f64)> {
        let k = self.labels.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.p[i][j]))
            .collect()
    }

    /// p-value for "`lower` < `upper`" looked up by label.
    pub fn get(&self, lower: &str, upper: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == lower)?;
        let j = self.labels.iter().position(|l| l == upper)?;
        Some(self.p[i][j])
    }

    pub fn significant(&self, lower: &str, upper: &str) -> bool {
        self.get(lower, upper).is_some_and(|p| p < ALPHA)
    }
}

/// Paired one-tailed tests between every ordered pair of curves. Generations where
/// either curve is NaN are dropped from that pair; fewer than two remaining pairs gives NaN.
pub fn preference_matrix(curves: &[MethodCurve], measure: Measure) -> Result<PreferenceMatrix> {
    if let Some(first) = curves.first() {
        if curves.iter().any(|c| c.len() != first.len()) {
            return Err(Error::usage("curves differ in length"));
        }
    }
    let p = curves
        .iter()
        .map(|lower| {
            curves
                .iter()
                .map(|upper| {
                    let (x, y): (Vec<f64>, Vec<f64>) = lower
                        .measure(measure)
                        .iter()
                        .zip(upper.measure(measure))
                        .filter(|(a, b)| !a.is_nan() && !b.is_nan())
                        .map(|(a, b)| (*a, *b))
                        .unzip();
                    paired_t_test_one_tailed(&x, &y).map_or(f64::NAN, |r| r.p)
                })
                .collect()
        })
        .collect();
    Ok(PreferenceMatrix {
        measure,
        labels: curves.iter().map(|c| c.label.clone()).collect(),
        p,
    })
}
