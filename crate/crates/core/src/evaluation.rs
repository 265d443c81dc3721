//! Subjective fitness assignment from an interaction matrix.
//!
//! Four methods are provided: average score (AS), weighted score (WS), average
//! informativeness (AI) and weighted informativeness (WI). Each assigns a value in
//! `[0, 1]` to every test and every solution, higher is better for both.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interaction::{distinction_counts, weighted_distinction_counts, Axis, InteractionMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    AverageScore,
    WeightedScore,
    AverageInformativeness,
    WeightedInformativeness,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::AverageScore,
        Method::WeightedScore,
        Method::AverageInformativeness,
        Method::WeightedInformativeness,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::AverageScore => "AS",
            Method::WeightedScore => "WS",
            Method::AverageInformativeness => "AI",
            Method::WeightedInformativeness => "WI",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AS" => Ok(Method::AverageScore),
            "WS" => Ok(Method::WeightedScore),
            "AI" => Ok(Method::AverageInformativeness),
            "WI" => Ok(Method::WeightedInformativeness),
            other => Err(Error::usage(format!(
                "unknown evaluation method {other:?} (expected AS, WS, AI or WI)"
            ))),
        }
    }
}

/// Mix of normalized distinction score and average score used by AI and WI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendWeights {
    pub distinction: f64,
    pub score: f64,
}

impl BlendWeights {
    pub fn new(distinction: f64, score: f64) -> Result<Self> {
        let weights = BlendWeights { distinction, score };
        weights.validate()?;
        Ok(weights)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.distinction.is_finite()
            && self.score.is_finite()
            && self.distinction >= 0.0
            && self.score >= 0.0
            && (self.distinction + self.score - 1.0).abs() <= 1e-9;
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!(
                "blend weights ({}, {}) must be nonnegative and sum to 1",
                self.distinction, self.score
            )))
        }
    }
}

impl Default for BlendWeights {
    fn default() -> Self {
        BlendWeights {
            distinction: 0.3,
            score: 0.7,
        }
    }
}

impl FromStr for BlendWeights {
    type Err = Error;

    /// Parses `"distinction,score"`, e.g. `"0.3,0.7"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [d, a] = parts.as_slice() else {
            return Err(Error::usage(format!("blend weights {s:?} must look like 0.3,0.7")));
        };
        let parse = |v: &str| {
            v.parse::<f64>()
                .map_err(|e| Error::usage(format!("bad blend weight {v:?}: {e}")))
        };
        BlendWeights::new(parse(d)?, parse(a)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitnessAssignment {
    pub tests: Vec<f64>,
    pub solutions: Vec<f64>,
    pub method: Method,
}

/// Fraction of solutions a test defeats, and fraction of tests a solution solves.
pub fn eval_average_score(matrix: &InteractionMatrix) -> FitnessAssignment {
    FitnessAssignment {
        tests: average_score(matrix, Axis::Tests),
        solutions: average_score(matrix, Axis::Solutions),
        method: Method::AverageScore,
    }
}

fn average_score(matrix: &InteractionMatrix, axis: Axis) -> Vec<f64> {
    match axis {
        Axis::Tests => {
            let m = matrix.n_solutions() as f64;
            matrix
                .row_sums()
                .into_iter()
                .map(|r| 1.0 - r as f64 / m)
                .collect()
        }
        Axis::Solutions => {
            let n = matrix.n_tests() as f64;
            matrix
                .col_sums()
                .into_iter()
                .map(|c| c as f64 / n)
                .collect()
        }
    }
}

/// Inverse sums normalized to 1. An individual with zero sum gets raw weight 1.
fn normalized_inverse_weights(sums: &[usize]) -> Vec<f64> {
    let raw: Vec<f64> = sums
        .iter()
        .map(|&s| if s == 0 { 1.0 } else { 1.0 / s as f64 })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Normalized per-test and per-solution weights used by the weighted score.
pub fn weighted_score_weights(matrix: &InteractionMatrix) -> (Vec<f64>, Vec<f64>) {
    (
        normalized_inverse_weights(&matrix.row_sums()),
        normalized_inverse_weights(&matrix.col_sums()),
    )
}

/// Average score where beating a rarely-beaten opponent counts for more.
pub fn eval_weighted_score(matrix: &InteractionMatrix) -> FitnessAssignment {
    let (test_weights, solution_weights) = weighted_score_weights(matrix);

    let mut solutions = vec![0.0; matrix.n_solutions()];
    for (i, w) in test_weights.iter().enumerate() {
        for (f, &b) in solutions.iter_mut().zip(matrix.row(i)) {
            if b {
                *f += w;
            }
        }
    }
    let tests = (0..matrix.n_tests())
        .map(|i| {
            let lost: f64 = matrix
                .row(i)
                .iter()
                .zip(&solution_weights)
                .filter(|(&b, _)| b)
                .map(|(_, w)| w)
                .sum();
            clamp_unit(1.0 - lost)
        })
        .collect();

    FitnessAssignment {
        tests,
        solutions: solutions.into_iter().map(clamp_unit).collect(),
        method: Method::WeightedScore,
    }
}

/// Min–max normalization onto `[0, 1]`. A constant vector maps to all zeros.
pub fn normalize_minmax(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if !(range > 0.0) {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - min) / range).collect()
}

/// Blend of normalized distinction score and average score, for both populations.
/// `weighted` selects inverse-frequency weighting of each distinction (WI) over raw counts (AI).
pub fn eval_informativeness(
    matrix: &InteractionMatrix,
    weighted: bool,
    blend: BlendWeights,
) -> FitnessAssignment {
    let informativeness = |axis: Axis| {
        let distinctions: Vec<f64> = if weighted {
            weighted_distinction_counts(matrix, axis)
        } else {
            distinction_counts(matrix, axis)
                .into_iter()
                .map(|d| d as f64)
                .collect()
        };
        normalize_minmax(&distinctions)
            .into_iter()
            .zip(average_score(matrix, axis))
            .map(|(d, s)| clamp_unit(blend.distinction * d + blend.score * s))
            .collect::<Vec<_>>()
    };

    FitnessAssignment {
        tests: informativeness(Axis::Tests),
        solutions: informativeness(Axis::Solutions),
        method: if weighted {
            Method::WeightedInformativeness
        } else {
            Method::AverageInformativeness
        },
    }
}

pub fn evaluate(matrix: &InteractionMatrix, method: Method, blend: BlendWeights) -> FitnessAssignment {
    match method {
        Method::AverageScore => eval_average_score(matrix),
        Method::WeightedScore => eval_weighted_score(matrix),
        Method::AverageInformativeness => eval_informativeness(matrix, false, blend),
        Method::WeightedInformativeness => eval_informativeness(matrix, true, blend),
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m(rows: &[&[u8]]) -> InteractionMatrix {
        InteractionMatrix::from_rows(rows).unwrap()
    }

    fn assert_vec_eq(actual: &[f64], expected: &[f64]) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert_relative_eq!(*a, *e, epsilon = 1e-12);
        }
    }

    #[test]
    fn average_score_extremes() {
        let ones = m(&[&[1, 1], &[1, 1]]);
        let f = eval_average_score(&ones);
        assert_eq!(f.solutions, vec![1.0, 1.0]);
        assert_eq!(f.tests, vec![0.0, 0.0]);

        let zeros = m(&[&[0, 0], &[0, 0]]);
        let f = eval_average_score(&zeros);
        assert_eq!(f.solutions, vec![0.0, 0.0]);
        assert_eq!(f.tests, vec![1.0, 1.0]);
    }

    #[test]
    fn average_score_example() {
        let f = eval_average_score(&m(&[&[1, 0], &[0, 0], &[1, 1]]));
        assert_vec_eq(&f.solutions, &[2.0 / 3.0, 1.0 / 3.0]);
        assert_vec_eq(&f.tests, &[0.5, 1.0, 0.0]);
    }

    #[test]
    fn weighted_score_example() {
        let f = eval_weighted_score(&m(&[&[1, 1], &[1, 0], &[0, 0]]));
        assert_vec_eq(&f.solutions, &[0.6, 0.2]);
        assert_vec_eq(&f.tests, &[0.0, 2.0 / 3.0, 1.0]);
    }

    #[test]
    fn weighted_score_degenerate_cases() {
        let f = eval_weighted_score(&m(&[&[0, 0, 0], &[0, 0, 0]]));
        assert_eq!(f.solutions, vec![0.0; 3]);
        assert_eq!(f.tests, vec![1.0; 2]);

        let f = eval_weighted_score(&m(&[&[1]]));
        assert_eq!(f.solutions, vec![1.0]);
        assert_eq!(f.tests, vec![0.0]);
    }

    #[test]
    fn minmax_examples() {
        assert_eq!(normalize_minmax(&[0.0, 1.0, 0.0]), vec![0.0, 1.0, 0.0]);
        assert_eq!(normalize_minmax(&[5.0, 5.0, 5.0]), vec![0.0, 0.0, 0.0]);
        assert_vec_eq(&normalize_minmax(&[2.0, 4.0, 8.0]), &[0.0, 1.0 / 3.0, 1.0]);
    }

    #[test]
    fn informativeness_on_constant_matrix_is_scaled_average_score() {
        let im = m(&[&[1, 1, 1], &[1, 1, 1]]);
        let blend = BlendWeights::default();
        let avg = eval_average_score(&im);
        for weighted in [false, true] {
            let f = eval_informativeness(&im, weighted, blend);
            let scaled: Vec<f64> = avg.solutions.iter().map(|s| 0.7 * s).collect();
            assert_vec_eq(&f.solutions, &scaled);
            let scaled: Vec<f64> = avg.tests.iter().map(|s| 0.7 * s).collect();
            assert_vec_eq(&f.tests, &scaled);
        }
    }

    #[test]
    fn informativeness_example() {
        let im = m(&[&[1, 1], &[1, 0], &[0, 0]]);
        let ai = eval_informativeness(&im, false, BlendWeights::default());
        assert_vec_eq(&ai.tests, &[0.0, 0.65, 0.7]);
        let wi = eval_informativeness(&im, true, BlendWeights::default());
        assert_vec_eq(&wi.tests, &ai.tests);
        assert_eq!(ai.method, Method::AverageInformativeness);
        assert_eq!(wi.method, Method::WeightedInformativeness);
    }

    #[test]
    fn dispatch() {
        let im = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let blend = BlendWeights::default();
        assert_eq!(evaluate(&im, Method::AverageScore, blend), eval_average_score(&im));
        assert_eq!(evaluate(&im, Method::WeightedScore, blend), eval_weighted_score(&im));

        let zeros = m(&[&[0, 0], &[0, 0]]);
        let wi = evaluate(&zeros, Method::WeightedInformativeness, blend);
        assert_eq!(wi.solutions, vec![0.0, 0.0]);
    }

    #[test]
    fn method_labels() {
        for method in Method::ALL {
            assert_eq!(method.label().parse::<Method>().unwrap(), method);
        }
        assert!(matches!("XY".parse::<Method>(), Err(Error::Usage(_))));
    }

    #[test]
    fn blend_weights_parse_and_validate() {
        assert_eq!("0.3,0.7".parse::<BlendWeights>().unwrap(), BlendWeights::default());
        assert!("0.5,0.7".parse::<BlendWeights>().is_err());
        assert!("-0.1,1.1".parse::<BlendWeights>().is_err());
        assert!("0.3".parse::<BlendWeights>().is_err());
    }
}
