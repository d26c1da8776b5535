//! Evaluation statistics: approximation ratios, mean/standard error, and
//! the Wilcoxon signed-rank test.
//!
//! The Wilcoxon p-values are exact (full null distribution over sign
//! assignments, computed by dynamic programming) for up to 20 nonzero
//! differences, and use the normal approximation with tie and continuity
//! corrections beyond that. Midranks handle ties in |d|.

use crate::error::{Error, Result};

/// `c / c_opt`; errors when the reference optimum is zero.
pub fn approx_ratio(c: f64, c_opt: f64) -> Result<f64> {
    if c_opt == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(c / c_opt)
}

/// Sample mean and standard error of the mean (sample std / √N).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Result of a Wilcoxon signed-rank test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Rank sum of positive differences (midranks on ties).
    pub w_plus: f64,
    /// One-sided p-value for the alternative `a > b`.
    pub p_one_sided: f64,
    pub p_two_sided: f64,
    /// Nonzero differences used.
    pub n_used: usize,
    /// Whether the exact null distribution was used.
    pub exact: bool,
}

const EXACT_LIMIT: usize = 20;

/// Wilcoxon signed-rank test on paired observations `(a, b)`.
///
/// Zero differences are dropped; |d| is ranked with midranks; `W` is the
/// rank sum of positive differences. One-sided alternative: `a > b`.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<WilcoxonResult> {
    let diffs: Vec<f64> = pairs
        .iter()
        .map(|&(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    let k = diffs.len();
    if k == 0 {
        return Err(Error::DegenerateTest(
            "all paired differences are zero".into(),
        ));
    }

    let ranks = midranks(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
    // fold from +0.0: an empty `Sum` would yield -0.0.
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .fold(0.0, |acc, r| acc + r);

    if k <= EXACT_LIMIT {
        let (p_one, p_two) = exact_p(&ranks, w_plus);
        Ok(WilcoxonResult {
            w_plus,
            p_one_sided: p_one,
            p_two_sided: p_two,
            n_used: k,
            exact: true,
        })
    } else {
        let (p_one, p_two) = normal_p(&ranks, w_plus, k);
        Ok(WilcoxonResult {
            w_plus,
            p_one_sided: p_one,
            p_two_sided: p_two,
            n_used: k,
            exact: false,
        })
    }
}

/// Ascending ranks with the average rank assigned within tie groups.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share the midrank
        let mid = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Exact tail probabilities of `W⁺` under independent random signs.
///
/// Ranks are multiples of ½, so doubling them gives integers; the null
/// distribution is a subset-sum count computed by DP, identical to
/// enumerating all 2^k sign patterns.
fn exact_p(ranks: &[f64], w_plus: f64) -> (f64, f64) {
    let doubled: Vec<u64> = ranks.iter().map(|r| (2.0 * r).round() as u64).collect();
    let total: u64 = doubled.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s as usize] += counts[(s - r) as usize];
        }
    }
    let patterns = (1u64 << ranks.len()) as f64;
    let w2 = (2.0 * w_plus).round() as u64;
    let ge: u64 = counts[w2 as usize..].iter().sum();
    let le: u64 = counts[..=w2 as usize].iter().sum();
    let p_one = ge as f64 / patterns;
    let p_two = (2.0 * (ge.min(le) as f64) / patterns).min(1.0);
    (p_one, p_two)
}

/// Large-sample normal approximation with tie correction and a continuity
/// correction of ½.
fn normal_p(ranks: &[f64], w_plus: f64, k: usize) -> (f64, f64) {
    let kf = k as f64;
    let mean = kf * (kf + 1.0) / 4.0;
    let mut var = kf * (kf + 1.0) * (2.0 * kf + 1.0) / 24.0;
    // Tie groups by shared midrank.
    let mut sorted = ranks.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        var -= t * (t * t - 1.0) / 48.0;
        i = j + 1;
    }
    let sd = var.sqrt();
    let z_one = (w_plus - mean - 0.5) / sd;
    let p_one = 1.0 - normal_cdf(z_one);
    let z_two = ((w_plus - mean).abs() - 0.5).max(0.0) / sd;
    let p_two = (2.0 * (1.0 - normal_cdf(z_two))).min(1.0);
    (p_one, p_two)
}

/// Standard normal CDF via a Chebyshev-fitted erfc approximation
/// (absolute error below 1.2e-7, ample for reported p-values).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t * (-z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587
                                    + t * (-0.82215223 + t * 0.17087277)))))))))
        .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}
