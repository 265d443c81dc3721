use crate::error::{Error, Result};

use super::special::beta_inc;

/// `P(T >= t)` for Student's t with `df` degrees of freedom.
pub fn student_t_upper_tail(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t == 0.0 {
        return 0.5;
    }
    // P(|T| >= |t|) = I_{df/(df+t²)}(df/2, 1/2)
    let x = df / (df + t * t);
    let two_sided = beta_inc(0.5 * df, 0.5, x);
    if t > 0.0 {
        0.5 * two_sided
    } else {
        1.0 - 0.5 * two_sided
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    pub p: f64,
}

/// One-tailed paired t-test of `H1: mean(y - x) > 0`.
///
/// When the differences have zero variance the statistic is undefined; `p` is then
/// 0.5, 0 or 1 for a zero, positive or negative mean difference, and `t` is 0 or ±∞.
pub fn paired_t_test_one_tailed(x: &[f64], y: &[f64]) -> Result<TTest> {
    if x.len() != y.len() {
        return Err(Error::usage(format!(
            "paired samples differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::usage("paired t-test needs at least two pairs"));
    }
    let len = x.len() as f64;
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - a).collect();
    let mean = diffs.iter().sum::<f64>() / len;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (len - 1.0);
    let df = x.len() - 1;

    if var == 0.0 {
        let (t, p) = if mean > 0.0 {
            (f64::INFINITY, 0.0)
        } else if mean < 0.0 {
            (f64::NEG_INFINITY, 1.0)
        } else {
            (0.0, 0.5)
        };
        return Ok(TTest { t, df, p });
    }
    let t = mean / (var / len).sqrt();
    Ok(TTest {
        t,
        df,
        p: student_t_upper_tail(t, df as f64),
    })
}
