//! Closed-form probabilities for `G_{n,k}` and the Chernoff bounds used
//! alongside them. These serve as oracles for Monte Carlo estimates.

use crate::error::{domain, Result};

/// Exponents beyond this are evaluated in log-space.
const LOG_SPACE_THRESHOLD: f64 = 700.0;

fn pow_ratio(ratio: f64, exponent: u32) -> f64 {
    if ratio == 0.0 {
        return if exponent == 0 { 1.0 } else { 0.0 };
    }
    if (exponent as f64) * ratio.ln().abs() > LOG_SPACE_THRESHOLD {
        (exponent as f64 * ratio.ln()).exp()
    } else {
        ratio.powi(exponent as i32)
    }
}

/// `P(d_in(x) = 0) = ((x - 1) / (n - 1))^k`: no later vertex selects `x`.
pub fn prob_in_degree_zero(x: u32, n: u32, k: u32) -> Result<f64> {
    if n < 2 || x == 0 || x > n {
        return Err(domain(format!("need 1 <= x <= n and n >= 2 (x={x}, n={n})")));
    }
    Ok(pow_ratio((x - 1) as f64 / (n - 1) as f64, k))
}

/// `P(d_out(x) = k - 1) = C(k, 2) (x - 1)_{k-1} / (x - 1)^k`: exactly one
/// coincidence among the `k` selections of `x`.
pub fn prob_out_degree_k_minus_1(x: u32, k: u32) -> Result<f64> {
    if k < 2 || x < k {
        return Err(domain(format!("need x >= k >= 2 (x={x}, k={k})")));
    }
    let m = (x - 1) as f64;
    let pairs = k as f64 * (k - 1) as f64 / 2.0;
    // (m)_{k-1} / m^{k-1}, one factor at a time; the extra 1/m is applied last.
    let mut ratio = 1.0f64;
    let mut log_ratio = 0.0f64;
    for i in 0..(k - 1) {
        let factor = (m - i as f64) / m;
        if factor <= 0.0 {
            return Ok(0.0);
        }
        ratio *= factor;
        log_ratio += factor.ln();
    }
    if ratio > 0.0 && ratio.is_normal() {
        Ok(pairs * ratio / m)
    } else {
        Ok((pairs.ln() + log_ratio - m.ln()).exp())
    }
}

/// Lower-tail Chernoff bound `P(X <= mu - t) <= exp(-t^2 / (2 mu))`.
pub fn chernoff_lower(mu: f64, t: f64) -> Result<f64> {
    BoundParams::new(mu, t, 1.0).map(|b| b.lower_tail())
}

/// Two-sided Chernoff bound `P(|X - mu| >= eps mu) <= 2 exp(-eps^2 mu / 3)`
/// for `0 < eps <= 3/2`.
pub fn chernoff_two_sided(mu: f64, epsilon: f64) -> Result<f64> {
    BoundParams::new(mu, 1.0, epsilon).map(|b| b.two_sided())
}

/// Parameters of a Chernoff bound for a sum of independent Bernoulli variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub mu: f64,
    pub t: f64,
    pub epsilon: f64,
}

impl BoundParams {
    pub fn new(mu: f64, t: f64, epsilon: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain(format!("mu must be positive (got {mu})")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(format!("t must be positive (got {t})")));
        }
        if !(epsilon > 0.0 && epsilon <= 1.5) {
            return Err(domain(format!("epsilon must lie in (0, 3/2] (got {epsilon})")));
        }
        Ok(BoundParams { mu, t, epsilon })
    }

    pub fn lower_tail(&self) -> f64 {
        (-self.t * self.t / (2.0 * self.mu)).exp()
    }

    pub fn two_sided(&self) -> f64 {
        2.0 * (-self.epsilon * self.epsilon * self.mu / 3.0).exp()
    }
}

/// Limiting fraction of vertices with total degree `k + j`:
/// `(1 / (k + 1)) (k / (k + 1))^j`.
pub fn geometric_degree_fraction(j: u32, k: u32) -> f64 {
    let q = k as f64 / (k as f64 + 1.0);
    pow_ratio(q, j) / (k as f64 + 1.0)
}
