//! Interaction matrices between a test population and a solution population,
//! and the distinction counts derived from them.

use std::fmt;

use rayon::prelude::*;

use crate::ca::{interact_packed, CaConfig, Lattice, RuleTable};
use crate::error::{Error, Result};

/// Binary outcomes of every test × solution pair. Rows are tests, columns are solutions;
/// entry `(i, j)` is `true` iff solution `j` solves test `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct InteractionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
}

/// Which population a per-individual vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Tests,
    Solutions,
}

impl InteractionMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::usage("interaction matrix needs at least one row and column"));
        }
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Ok(InteractionMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from 0/1 rows. Any nonzero value counts as 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::usage("ragged interaction matrix rows"));
        }
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0)
    }

    /// Number of tests (rows).
    pub fn n_tests(&self) -> usize {
        self.rows
    }

    /// Number of solutions (columns).
    pub fn n_solutions(&self) -> usize {
        self.cols
    }

    /// Interactions it took to fill this matrix.
    pub fn interaction_count(&self) -> u64 {
        (self.rows * self.cols) as u64
    }

    #[inline]
    pub fn get(&self, test: usize, solution: usize) -> bool {
        self.entries[test * self.cols + solution]
    }

    pub fn row(&self, test: usize) -> &[bool] {
        &self.entries[test * self.cols..(test + 1) * self.cols]
    }

    /// Number of solutions that solve each test.
    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| self.row(i).iter().filter(|&&b| b).count())
            .collect()
    }

    /// Number of tests each solution solves.
    pub fn col_sums(&self) -> Vec<usize> {
        let mut sums = vec![0usize; self.cols];
        for i in 0..self.rows {
            for (s, &b) in sums.iter_mut().zip(self.row(i)) {
                *s += b as usize;
            }
        }
        sums
    }

    pub fn total(&self) -> usize {
        self.entries.iter().filter(|&&b| b).count()
    }

    pub fn transpose(&self) -> Self {
        InteractionMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: (0..self.rows * self.cols)
                .map(|k| self.get(k % self.rows, k / self.rows))
                .collect(),
        }
    }
}

impl fmt::Debug for InteractionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "InteractionMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = self.row(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

/// Plays every solution against every test. Rows are computed in parallel; the
/// result does not depend on scheduling.
pub fn build_interaction_matrix(
    tests: &[Lattice],
    solutions: &[RuleTable],
    config: &CaConfig,
) -> Result<InteractionMatrix> {
    if tests.is_empty() || solutions.is_empty() {
        return Err(Error::usage("cannot interact an empty population"));
    }
    config.validate()?;
    if let Some(t) = tests.iter().find(|t| t.len() != config.n) {
        return Err(Error::config(format!(
            "test has {} cells, expected {}",
            t.len(),
            config.n
        )));
    }
    if let Some(s) = solutions.iter().find(|s| s.len() != config.rule_len()) {
        return Err(Error::config(format!(
            "rule has {} entries, expected {}",
            s.len(),
            config.rule_len()
        )));
    }
    let packed_tests: Vec<u64> = tests.iter().map(Lattice::pack).collect();
    let packed_rules: Vec<u128> = solutions.iter().map(RuleTable::pack).collect();
    Ok(build_packed(&packed_tests, &packed_rules, config))
}

pub(crate) fn build_packed(tests: &[u64], rules: &[u128], config: &CaConfig) -> InteractionMatrix {
    let cols = rules.len();
    let mut entries = vec![false; tests.len() * cols];
    entries
        .par_chunks_mut(cols)
        .zip(tests.par_iter())
        .for_each(|(row, &ic)| {
            for (cell, &rule) in row.iter_mut().zip(rules) {
                *cell = interact_packed(rule, ic, config);
            }
        });
    InteractionMatrix {
        rows: tests.len(),
        cols,
        entries,
    }
}

/// Raw distinction counts. For [`Axis::Tests`], entry `i` is the number of ordered
/// solution pairs `(k, l)` with `I(i,k) = 1` and `I(i,l) = 0`; for
/// [`Axis::Solutions`] the same over ordered test pairs within a column.
pub fn distinction_counts(matrix: &InteractionMatrix, axis: Axis) -> Vec<u64> {
    match axis {
        Axis::Tests => {
            let m = matrix.n_solutions() as u64;
            matrix
                .row_sums()
                .into_iter()
                .map(|r| r as u64 * (m - r as u64))
                .collect()
        }
        Axis::Solutions => {
            let n = matrix.n_tests() as u64;
            matrix
                .col_sums()
                .into_iter()
                .map(|c| c as u64 * (n - c as u64))
                .collect()
        }
    }
}

/// Distinction counts where each distinction is worth the inverse of the number
/// of individuals that make it. Every distinguished pair hands out a total credit of 1.
pub fn weighted_distinction_counts(matrix: &InteractionMatrix, axis: Axis) -> Vec<f64> {
    match axis {
        Axis::Tests => weighted_over_rows(matrix),
        Axis::Solutions => weighted_over_rows(&matrix.transpose()),
    }
}

fn weighted_over_rows(matrix: &InteractionMatrix) -> Vec<f64> {
    let n = matrix.n_tests();
    let m = matrix.n_solutions();
    let words = n.div_ceil(64);

    // Column bitsets over rows.
    let mut columns = vec![0u64; m * words];
    for i in 0..n {
        for (j, &b) in matrix.row(i).iter().enumerate() {
            if b {
                columns[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }
    let column = |j: usize| &columns[j * words..(j + 1) * words];

    // weight[k][l]: inverse number of rows that distinguish column k from column l.
    // Undistinguished pairs get weight 1; they never contribute.
    let mut weight = vec![1.0f64; m * m];
    for k in 0..m {
        for l in 0..m {
            let count: u32 = column(k)
                .iter()
                .zip(column(l))
                .map(|(a, b)| (a & !b).count_ones())
                .sum();
            if count > 0 {
                weight[k * m + l] = 1.0 / count as f64;
            }
        }
    }

    (0..n)
        .map(|i| {
            let row = matrix.row(i);
            let mut total = 0.0;
            for k in (0..m).filter(|&k| row[k]) {
                for l in (0..m).filter(|&l| !row[l]) {
                    total += weight[k * m + l];
                }
            }
            total
        })
        .collect()
}
