//! Plot series and preference matrices for a finished suite.
//!
//! Files written under the report directory:
//! - `interactions_<EXP>.dat`: cumulative interactions vs run-averaged best objective fitness
//! - `interactions_aligned.csv`: every experiment at each coevolution budget point, with
//!   the GA baseline step-aligned to the largest GA budget not exceeding that point
//! - `generations_<EXP>.dat`: generation vs run-averaged best objective fitness
//! - `ofc_<EXP>.dat`: generation vs run-averaged OFC (coevolution only)
//! - `preference_objective.csv`, `preference_ofc.csv`: one-tailed paired p-values
//! - `summary.txt`: both matrices in table form with significance flags

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::evaluation::Method;
use crate::experiment::{create_dir, write_file, ExperimentId};
use crate::stats::{preference_matrix, Measure, MethodCurve, PreferenceMatrix, ALPHA};

#[derive(Debug, Clone, Default)]
pub struct ReportSummary {
    pub objective: Option<PreferenceMatrix>,
    pub ofc: Option<PreferenceMatrix>,
    pub notices: Vec<String>,
}

/// Value of a step curve at `budget`: the last point whose budget is `<= budget`.
/// `None` before the first point.
pub fn step_align(budgets: &[u64], values: &[f64], budget: u64) -> Option<f64> {
    let k = budgets.partition_point(|&b| b <= budget);
    k.checked_sub(1).map(|i| values[i])
}

pub fn emit_report(curves: &BTreeMap<ExperimentId, MethodCurve>, dir: &Path) -> Result<ReportSummary> {
    create_dir(dir)?;
    let mut summary = ReportSummary::default();

    for (id, curve) in curves {
        let by_interactions = two_column(curve.interactions.iter().map(|&b| b as f64), &curve.best_objective);
        write_file(&dir.join(format!("interactions_{id}.dat")), &by_interactions)?;
        let by_generation = two_column((0..curve.len()).map(|g| g as f64), &curve.best_objective);
        write_file(&dir.join(format!("generations_{id}.dat")), &by_generation)?;
        if *id != ExperimentId::Gaas {
            let ofc = two_column((0..curve.len()).map(|g| g as f64), &curve.ofc);
            write_file(&dir.join(format!("ofc_{id}.dat")), &ofc)?;
        }
    }
    write_file(&dir.join("interactions_aligned.csv"), &aligned_csv(curves))?;

    let coevolution: Vec<MethodCurve> = Method::ALL
        .iter()
        .filter_map(|&m| curves.get(&ExperimentId::coevolution(m)))
        .map(|c| MethodCurve {
            label: method_of(c).to_string(),
            ..c.clone()
        })
        .collect();

    if coevolution.len() < 2 {
        summary.notices.push(format!(
            "preference matrices skipped: {} coevolution experiment(s) present, need at least 2",
            coevolution.len()
        ));
    } else {
        for measure in [Measure::Objective, Measure::Ofc] {
            let matrix = preference_matrix(&coevolution, measure)?;
            write_file(
                &dir.join(format!("preference_{}.csv", measure.name())),
                &preference_csv(&matrix),
            )?;
            match measure {
                Measure::Objective => summary.objective = Some(matrix),
                Measure::Ofc => summary.ofc = Some(matrix),
            }
        }
    }

    write_file(&dir.join("summary.txt"), &summary_text(curves, &summary))?;
    Ok(summary)
}

fn method_of(curve: &MethodCurve) -> &'static str {
    curve
        .label
        .parse::<ExperimentId>()
        .map(|id| id.method().label())
        .unwrap_or("?")
}

fn two_column(xs: impl Iterator<Item = f64>, ys: &[f64]) -> String {
    let mut out = String::new();
    for (x, y) in xs.zip(ys) {
        if !y.is_nan() {
            let _ = writeln!(out, "{x} {y}");
        }
    }
    out
}

fn aligned_csv(curves: &BTreeMap<ExperimentId, MethodCurve>) -> String {
    let ids: Vec<ExperimentId> = curves.keys().copied().collect();
    // Budget points: every coevolution generation, or the GA points when no coevolution ran.
    let mut budgets: Vec<u64> = curves
        .iter()
        .filter(|(id, _)| **id != ExperimentId::Gaas)
        .flat_map(|(_, c)| c.interactions.iter().copied())
        .collect();
    if budgets.is_empty() {
        budgets = curves.values().flat_map(|c| c.interactions.iter().copied()).collect();
    }
    budgets.sort_unstable();
    budgets.dedup();

    let mut out = String::from("interactions");
    for id in &ids {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for b in budgets {
        let _ = write!(out, "{b}");
        for id in &ids {
            let c = &curves[id];
            match step_align(&c.interactions, &c.best_objective, b) {
                Some(v) => {
                    let _ = write!(out, ",{v}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

fn preference_csv(matrix: &PreferenceMatrix) -> String {
    let mut out = String::from("lower,upper,p_value,significant\n");
    for (i, j, p) in matrix.upper_triangle() {
        let _ = writeln!(
            out,
            "{},{},{p},{}",
            matrix.labels[i],
            matrix.labels[j],
            p < ALPHA
        );
    }
    out
}

fn summary_text(curves: &BTreeMap<ExperimentId, MethodCurve>, summary: &ReportSummary) -> String {
    let mut out = String::new();
    out.push_str("Experiments\n");
    for (id, c) in curves {
        let last = c.len().saturating_sub(1);
        let _ = writeln!(
            out,
            "  {id}: {} run(s), {} generations, final best objective {:.4}, final OFC {:.4}",
            c.runs,
            c.len(),
            c.best_objective.get(last).copied().unwrap_or(f64::NAN),
            c.ofc.get(last).copied().unwrap_or(f64::NAN),
        );
    }
    for id in ExperimentId::ALL {
        if !curves.contains_key(&id) {
            let _ = writeln!(out, "  {id}: absent");
        }
    }

    for (title, matrix) in [
        ("objective fitness", &summary.objective),
        ("OFC", &summary.ofc),
    ] {
        let _ = writeln!(out, "\nPaired one-tailed t-tests on {title}: p-value for i < j (* = p < {ALPHA})");
        let Some(matrix) = matrix else {
            out.push_str("  skipped\n");
            continue;
        };
        let _ = writeln!(out, "  {:<4}{:>14}{:>14}{:>14}", "", "WS", "AI", "WI");
        for (r, lower) in ["AS", "WS", "AI"].iter().enumerate() {
            let _ = write!(out, "  {lower:<4}");
            for (c, upper) in ["WS", "AI", "WI"].iter().enumerate() {
                if c < r {
                    let _ = write!(out, "{:>14}", "");
                    continue;
                }
                let cell = match matrix.get(lower, upper) {
                    Some(p) => format!("{p:.2e}{}", if p < ALPHA { "*" } else { " " }),
                    None => "absent".to_string(),
                };
                let _ = write!(out, "{cell:>14}");
            }
            out.push('\n');
        }
    }
    for notice in &summary.notices {
        let _ = writeln!(out, "\nnote: {notice}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_alignment_never_interpolates() {
        let budgets = [51_200, 102_400, 153_600];
        let values = [0.5, 0.6, 0.7];
        assert_eq!(step_align(&budgets, &values, 6_400), None);
        assert_eq!(step_align(&budgets, &values, 51_200), Some(0.5));
        assert_eq!(step_align(&budgets, &values, 102_399), Some(0.5));
        assert_eq!(step_align(&budgets, &values, 102_400), Some(0.6));
        assert_eq!(step_align(&budgets, &values, 10_000_000), Some(0.7));
    }
}
