//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.
//!
//! The full-protocol criteria run the standard 10-run suites (N = 9 with all five
//! experiments, N = 11 with the four coevolution experiments) at base seed 0.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coevo::ca::{CaConfig, RuleTable};
use coevo::evaluation::{eval_average_score, evaluate, weighted_score_weights, BlendWeights, Method};
use coevo::evolution::{run_coevolution_with, EvoParams, RunConfig, TestPopulation};
use coevo::experiment::{run_experiment_suite, ExperimentConfig, ExperimentId, SuiteResult};
use coevo::interaction::{distinction_counts, weighted_distinction_counts, Axis, InteractionMatrix};
use coevo::metrics::{objective_fitness, ofc};
use coevo::report::step_align;
use coevo::stats::{student_t_upper_tail, PreferenceMatrix, ALPHA};

const BASE_SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn suite(n: usize, experiments: &[ExperimentId], out: &Path) -> SuiteResult {
    let config = ExperimentConfig {
        experiments: experiments.to_vec(),
        run: RunConfig {
            ca: CaConfig::new(n, 2).unwrap(),
            ..RunConfig::default()
        },
        runs: 10,
        base_seed: BASE_SEED,
        out_dir: out.to_path_buf(),
        threads: None,
    };
    let start = Instant::now();
    let result = run_experiment_suite(&config).expect("suite runs");
    println!("  (N={n} suite: {:.1}s)", start.elapsed().as_secs_f64());
    result
}

/// Checks that every `(lower, upper)` preference is significant; lists the p-values.
fn preferences(matrix: &PreferenceMatrix, required: &[(&str, &str)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(lower, upper) in required {
        let p = matrix.get(lower, upper).unwrap_or(f64::NAN);
        let ok = p < ALPHA;
        pass &= ok;
        let note = if ok {
            String::new()
        } else {
            let reverse = matrix.get(upper, lower).unwrap_or(f64::NAN);
            format!(" (not significant; reverse p={reverse:.2e})")
        };
        parts.push(format!("{upper}>{lower} p={p:.2e}{note}"));
    }
    outcome(pass, parts.join(", "))
}

fn objective_ordering(n9: &SuiteResult) -> Outcome {
    let matrix = n9.report.objective.as_ref().expect("objective matrix");
    let mut result = preferences(
        matrix,
        &[("AI", "WI"), ("WS", "WI"), ("AS", "WI"), ("AS", "AI"), ("AS", "WS")],
    );
    let ws_ai = matrix.get("WS", "AI").unwrap_or(f64::NAN);
    result.detail.push_str(&format!("; AI vs WS p={ws_ai:.2e} (not constrained)"));
    result
}

fn ofc_ordering(n9: &SuiteResult) -> Outcome {
    preferences(
        n9.report.ofc.as_ref().expect("OFC matrix"),
        &[("AI", "WI"), ("WS", "WI"), ("AS", "WI"), ("WS", "AI"), ("AS", "AI"), ("AS", "WS")],
    )
}

/// Coevolution above the GA baseline at every shared budget point within the first
/// quartile of the GA budget, GA step-aligned.
fn baseline_shape(n9: &SuiteResult) -> Outcome {
    let ga = &n9.curves[&ExperimentId::Gaas];
    let quartile = ga.interactions.last().copied().unwrap_or(0) / 4;
    let mut pass = true;
    let mut parts = Vec::new();
    for method in Method::ALL {
        let co = &n9.curves[&ExperimentId::coevolution(method)];
        let mut compared = 0;
        let mut violations = Vec::new();
        for (g, &budget) in co.interactions.iter().enumerate() {
            if budget > quartile {
                break;
            }
            let Some(baseline) = step_align(&ga.interactions, &ga.best_objective, budget) else {
                continue;
            };
            compared += 1;
            if co.best_objective[g] <= baseline {
                violations.push(budget);
            }
        }
        pass &= violations.is_empty() && compared > 0;
        match violations.first() {
            None => parts.push(format!("{method}: above at all {compared} points")),
            Some(first) => parts.push(format!(
                "{method}: not above at {}/{compared} points (first at {first} interactions)",
                violations.len()
            )),
        }
    }
    outcome(pass, format!("window <= {quartile} interactions; {}", parts.join("; ")))
}

fn baseline_ofc_identity() -> Outcome {
    let config = RunConfig {
        evo: EvoParams {
            seed: BASE_SEED,
            ..EvoParams::default()
        },
        ..RunConfig::default()
    };
    let record = run_coevolution_with(&config, Method::AverageScore, TestPopulation::Exhaustive).unwrap();
    let bad: Vec<usize> = record
        .generations
        .iter()
        .filter(|g| g.ofc != 1.0 || g.ofc_degenerate)
        .map(|g| g.generation)
        .collect();
    outcome(
        bad.is_empty() && record.generations.len() == 200,
        format!("{} generations, {} with OFC != 1", record.generations.len(), bad.len()),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng) -> InteractionMatrix {
    let n = rng.gen_range(1..=12);
    let m = rng.gen_range(1..=12);
    let density = rng.gen::<f64>();
    let bits: Vec<bool> = (0..n * m).map(|_| rng.gen_bool(density)).collect();
    InteractionMatrix::from_fn(n, m, |i, j| bits[i * m + j]).unwrap()
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures: Vec<String> = Vec::new();
    for case in 0..1000 {
        let im = random_matrix(&mut rng);
        let (n, m) = (im.n_tests(), im.n_solutions());

        let mut brute = vec![0u64; n];
        let mut distinguished = 0usize;
        for k in 0..m {
            for l in 0..m {
                let mut any = false;
                for (i, count) in brute.iter_mut().enumerate() {
                    if im.get(i, k) && !im.get(i, l) {
                        *count += 1;
                        any = true;
                    }
                }
                distinguished += any as usize;
            }
        }
        if distinction_counts(&im, Axis::Tests) != brute {
            failures.push(format!("case {case}: closed form != triple loop"));
        }
        let credit: f64 = weighted_distinction_counts(&im, Axis::Tests).iter().sum();
        if (credit - distinguished as f64).abs() > 1e-9 {
            failures.push(format!("case {case}: weighted credit {credit} != {distinguished}"));
        }
        let avg = eval_average_score(&im);
        let sum = avg.solutions.iter().sum::<f64>() / m as f64 + avg.tests.iter().sum::<f64>() / n as f64;
        if (sum - 1.0).abs() > 1e-12 {
            failures.push(format!("case {case}: AS means sum to {sum}"));
        }
        let (wt, ws) = weighted_score_weights(&im);
        if (wt.iter().sum::<f64>() - 1.0).abs() > 1e-12 || (ws.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            failures.push(format!("case {case}: WS weights not normalized"));
        }
        for method in Method::ALL {
            let f = evaluate(&im, method, BlendWeights::default());
            if f.tests.iter().chain(&f.solutions).any(|v| !(0.0..=1.0).contains(v)) {
                failures.push(format!("case {case}: {method} left [0,1]"));
            }
        }
    }
    let zero = objective_fitness(&[RuleTable::constant(2, false)], &CaConfig::new(9, 2).unwrap()).unwrap();
    if zero != vec![0.5] {
        failures.push(format!("zero-rule objective {zero:?} != 0.5"));
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "1000 random matrices up to 12x12, zero failures; zero-rule objective = 0.5".to_string()
        } else {
            format!("{} failure(s): {}", failures.len(), failures.iter().take(3).cloned().collect::<Vec<_>>().join("; "))
        },
    )
}

fn numerics() -> Outcome {
    let mut worst_closed = 0.0f64;
    for k in -80..=80 {
        let t = k as f64 * 0.25;
        let cauchy = 0.5 - t.atan() / std::f64::consts::PI;
        let df2 = 0.5 - t / (2.0 * (2.0 + t * t).sqrt());
        worst_closed = worst_closed
            .max((student_t_upper_tail(t, 1.0) - cauchy).abs())
            .max((student_t_upper_tail(t, 2.0) - df2).abs());
    }
    let table = [
        (1.0, 6.314, 0.05),
        (2.0, 2.920, 0.05),
        (3.0, 3.182, 0.025),
        (5.0, 2.015, 0.05),
        (5.0, 4.032, 0.005),
        (10.0, 1.812, 0.05),
        (10.0, 2.764, 0.01),
        (15.0, 1.341, 0.10),
        (20.0, 2.086, 0.025),
        (30.0, 2.457, 0.01),
        (60.0, 1.671, 0.05),
        (120.0, 1.980, 0.025),
    ];
    let worst_table = table
        .iter()
        .map(|&(df, t, p)| (student_t_upper_tail(t, df) - p).abs())
        .fold(0.0, f64::max);

    let x = [0.1, 0.4, 0.3, 0.9];
    let neg: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
    let pearson_err = [
        (ofc(&x, &x).unwrap().value - 1.0).abs(),
        (ofc(&neg, &x).unwrap().value + 1.0).abs(),
        (ofc(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap().value - 9.0 / (2.0 * 21f64.sqrt())).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    outcome(
        worst_closed <= 1e-10 && worst_table <= 1e-3 && pearson_err <= 1e-10,
        format!(
            "closed forms max err {worst_closed:.1e} (<=1e-10), table max err {worst_table:.1e} (<=1e-3), Pearson max err {pearson_err:.1e} (<=1e-10)"
        ),
    )
}

fn determinism(scratch: &Path) -> Outcome {
    let mut mismatches = Vec::new();
    for (id, seed) in [(ExperimentId::Cowi, 7u64), (ExperimentId::Gaas, 3)] {
        let mut files = Vec::new();
        for (k, threads) in [Some(1), Some(1), Some(4), None].into_iter().enumerate() {
            let out = scratch.join(format!("det_{id}_{k}"));
            let config = ExperimentConfig {
                experiments: vec![id],
                runs: 1,
                base_seed: seed,
                out_dir: out.clone(),
                threads,
                ..ExperimentConfig::default()
            };
            run_experiment_suite(&config).unwrap();
            files.push(fs::read(out.join(format!("runs/{id}_run00.csv"))).unwrap());
        }
        if files.iter().any(|f| f != &files[0]) {
            mismatches.push(id.to_string());
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "COWI seed 7 and GAAS seed 3 byte-identical over reruns at 1, 4 and default threads".to_string()
        } else {
            format!("CSV differs for {}", mismatches.join(", "))
        },
    )
}

fn n11_variant(n11: &SuiteResult) -> Outcome {
    let mut result = preferences(
        n11.report.ofc.as_ref().expect("OFC matrix"),
        &[("AS", "AI"), ("AS", "WI"), ("WS", "AI"), ("WS", "WI")],
    );
    let obj = n11.report.objective.as_ref().expect("objective matrix");
    result.detail = format!(
        "OFC: {}; objective (unconstrained): WS>AS p={:.2e}, AI>AS p={:.2e}, AI>WS p={:.2e}",
        result.detail,
        obj.get("AS", "WS").unwrap_or(f64::NAN),
        obj.get("AS", "AI").unwrap_or(f64::NAN),
        obj.get("WS", "AI").unwrap_or(f64::NAN),
    );
    result
}

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("scratch dir");
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    results.push(("5 oracle equivalences", property_suite()));
    results.push(("6 numerics", numerics()));
    results.push(("4 baseline OFC identity", baseline_ofc_identity()));
    results.push(("7 determinism", determinism(scratch.path())));

    let n9 = suite(9, &ExperimentId::ALL, &scratch.path().join("n9"));
    results.push(("1 objective ordering (N=9)", objective_ordering(&n9)));
    results.push(("2 OFC ordering (N=9)", ofc_ordering(&n9)));
    results.push(("3 baseline shape (N=9)", baseline_shape(&n9)));

    let coevolution: Vec<ExperimentId> = Method::ALL.iter().map(|&m| ExperimentId::coevolution(m)).collect();
    let n11 = suite(11, &coevolution, &scratch.path().join("n11"));
    results.push(("8 N=11 OFC separation", n11_variant(&n11)));

    results.sort_by_key(|(name, _)| name.split(' ').next().and_then(|k| k.parse::<u32>().ok()));
    let mut failed = 0;
    for (name, result) in &results {
        println!("[{}] criterion {name}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
        failed += !result.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
