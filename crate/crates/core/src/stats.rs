//! Confidence intervals, goodness of fit, binomial tails and deterministic
//! summation for Monte Carlo aggregation.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

/// Pairwise summation. The result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Two-sided standard normal quantile for `confidence`, e.g. 1.96 for 0.95.
pub fn normal_quantile(confidence: f64) -> f64 {
    let std = Normal::standard();
    std.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(domain(format!("need 0 <= successes <= trials, trials >= 1 ({successes}/{trials})")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(domain(format!("confidence must lie in (0, 1) (got {confidence})")));
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z = normal_quantile(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
    /// Bin lower edges; the last bin is open-ended.
    pub bin_edges: Vec<u64>,
}

/// Chi-square goodness of fit of `samples` against Poisson(`lambda`).
///
/// Bins are grown from 0 upwards until each holds an expected count of at
/// least 5; a short right tail is folded into the last bin.
pub fn poisson_gof(samples: &[u64], lambda: f64) -> Result<GofResult> {
    if samples.len() < 100 {
        return Err(domain(format!("need at least 100 samples (got {})", samples.len())));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain(format!("lambda must be positive (got {lambda})")));
    }
    let total = samples.len() as f64;
    let max_seen = samples.iter().copied().max().unwrap_or(0);

    // Expected mass per value, up to well past both the data and the bulk.
    let upper = max_seen.max((lambda + 20.0 * lambda.sqrt() + 20.0) as u64);
    let mut pmf = Vec::with_capacity(upper as usize + 1);
    for j in 0..=upper {
        let lp = j as f64 * lambda.ln() - lambda - ln_gamma(j as f64 + 1.0);
        pmf.push(lp.exp());
    }

    let mut edges = vec![0u64];
    let mut acc = 0.0;
    for j in 0..=upper {
        acc += pmf[j as usize] * total;
        if acc >= 5.0 && j < upper {
            edges.push(j + 1);
            acc = 0.0;
        }
    }
    // The open tail [last edge, inf) must itself carry >= 5 expected.
    let tail_mass = |from: u64| 1.0 - pmf[..from as usize].iter().sum::<f64>();
    while edges.len() > 1 && tail_mass(*edges.last().unwrap()) * total < 5.0 {
        edges.pop();
    }
    if edges.len() < 2 {
        return Err(domain("too few samples to form two bins with expected count >= 5"));
    }

    let bin_of = |x: u64| edges.partition_point(|&e| e <= x) - 1;
    let mut observed = vec![0u64; edges.len()];
    for &x in samples {
        observed[bin_of(x)] += 1;
    }
    let mut statistic = 0.0;
    for (b, &obs) in observed.iter().enumerate() {
        let lo = edges[b];
        let mass = if b + 1 < edges.len() {
            pmf[lo as usize..edges[b + 1] as usize].iter().sum::<f64>()
        } else {
            tail_mass(lo)
        };
        let expected = mass * total;
        statistic += (obs as f64 - expected).powi(2) / expected;
    }
    let dof = edges.len() as u32 - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| domain(e.to_string()))?;
    let p_value = chi.sf(statistic);
    Ok(GofResult { statistic, dof, p_value, bin_edges: edges })
}

/// Natural log of `C(n, i)`.
fn ln_choose(n: u64, i: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(i as f64 + 1.0) - ln_gamma((n - i) as f64 + 1.0)
}

/// `P(Bin(trials, p) >= r)`.
///
/// Sums whichever tail is shorter relative to the mean. Terms are built by
/// the ratio recurrence for moderate `trials` and in log-space otherwise.
pub fn binomial_upper_tail(trials: u64, p: f64, r: u64) -> f64 {
    if r == 0 || p >= 1.0 {
        return if r <= trials { 1.0 } else { 0.0 };
    }
    if r > trials || p <= 0.0 {
        return 0.0;
    }
    let mean = trials as f64 * p;
    let upper_side = r as f64 > mean;
    let (from, to) = if upper_side { (r, trials) } else { (0, r - 1) };
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let terms: Vec<f64> = if trials <= 1000 {
        // term(i) = C(n,i) p^i q^(n-i), stepped from `from`.
        let ln_c: f64 = (1..=from).map(|i| ((trials - i + 1) as f64 / i as f64).ln()).sum();
        let mut t = (ln_c + from as f64 * ln_p + (trials - from) as f64 * ln_q).exp();
        let odds = p / (1.0 - p);
        let mut out = Vec::with_capacity((to - from + 1) as usize);
        for i in from..=to {
            if i > from {
                t *= (trials - i + 1) as f64 / i as f64 * odds;
            }
            out.push(t);
        }
        out
    } else {
        (from..=to)
            .map(|i| (ln_choose(trials, i) + i as f64 * ln_p + (trials - i) as f64 * ln_q).exp())
            .collect()
    };
    let s = pairwise_sum(&terms);
    if upper_side {
        s.clamp(0.0, 1.0)
    } else {
        (1.0 - s).clamp(0.0, 1.0)
    }
}
