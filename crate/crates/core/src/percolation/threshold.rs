//! Threshold quantities, the ℓ-ary tree recurrence and the expected number
//! of witness graphs. All logarithms are natural.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::stats::binomial_upper_tail;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdQuantities {
    pub n: u64,
    pub r: u32,
    /// The value used below: the override when given, else the formula
    /// `(3 log⁽³⁾n · log⁽⁴⁾n)^{r/(r-1)}`.
    pub omega: f64,
    /// The formula value, when `log⁽⁴⁾n > 0`.
    pub omega_upper: Option<f64>,
    /// `ω (log n)^{-r/(r-1)}`, clamped to 1.
    pub p_upper: f64,
    pub p_upper_clamped: bool,
    /// `ω^{-1} (log n)^{-r/(r-1)}`.
    pub p_lower: f64,
    /// `ω^{1/2} (log n)^{r/(r-1)}`.
    pub n0: f64,
    /// `⌊ω^{(r-1)/r} / log ω⌋`; absent when it is not a positive integer.
    pub nu: Option<u64>,
    /// `⌈log n / ν⌉`.
    pub ell: Option<u64>,
    /// `log n`.
    pub t0: f64,
}

fn exponent(r: u32) -> f64 {
    r as f64 / (r as f64 - 1.0)
}

/// `(3 log⁽³⁾n · log⁽⁴⁾n)^{r/(r-1)}`, or `None` when an iterated log is not positive.
fn omega_formula(n: f64, r: u32) -> Option<f64> {
    let l1 = n.ln();
    let l2 = (l1 > 0.0).then(|| l1.ln())?;
    let l3 = (l2 > 0.0).then(|| l2.ln())?;
    let l4 = (l3 > 0.0).then(|| l3.ln())?;
    (l4 > 0.0).then(|| (3.0 * l3 * l4).powf(exponent(r)))
}

/// Computes the threshold quantities for `r >= 2`. Without an override the
/// formula needs `log⁽⁴⁾n > 0`, i.e. `n > e^{e^e} ≈ 3.8·10^6`.
pub fn threshold_quantities(n: u64, r: u32, omega_override: Option<f64>) -> Result<ThresholdQuantities> {
    if r < 2 {
        return Err(domain(format!("threshold quantities need r >= 2 (got {r})")));
    }
    if n < 3 {
        return Err(domain(format!("threshold quantities need n >= 3 (got {n})")));
    }
    let nf = n as f64;
    let omega_upper = omega_formula(nf, r);
    let omega = match (omega_override, omega_upper) {
        (Some(w), _) if w > 0.0 && w.is_finite() => w,
        (Some(w), _) => return Err(domain(format!("omega must be positive and finite (got {w})"))),
        (None, Some(w)) => w,
        (None, None) => {
            return Err(domain(format!("log⁽⁴⁾n is not positive at n={n}; supply omega_override")));
        }
    };
    let e = exponent(r);
    let log_n = nf.ln();
    let scale = log_n.powf(e);
    let raw_upper = omega / scale;
    let nu = if omega > 1.0 {
        let v = (omega.powf(1.0 / e) / omega.ln()).floor();
        (v >= 1.0 && v < u64::MAX as f64).then_some(v as u64)
    } else {
        None
    };
    Ok(ThresholdQuantities {
        n,
        r,
        omega,
        omega_upper,
        p_upper: raw_upper.min(1.0),
        p_upper_clamped: raw_upper > 1.0,
        p_lower: (1.0 / omega / scale).min(1.0),
        n0: omega.sqrt() * scale,
        nu,
        ell: nu.map(|v| (log_n / v as f64).ceil() as u64),
        t0: log_n,
    })
}

/// `p_ν = p_initial`, `p_{j-1} = P(Bin(ℓ, p_j) >= r)`; returns `[p_ν, ..., p_0]`.
pub fn binomial_recurrence(ell: u64, r: u32, p_initial: f64, nu: u64) -> Result<Vec<f64>> {
    if r == 0 || ell < r as u64 {
        return Err(domain(format!("need ell >= r >= 1 (got ell={ell}, r={r})")));
    }
    if !(0.0..=1.0).contains(&p_initial) {
        return Err(domain(format!("p_initial must lie in [0, 1] (got {p_initial})")));
    }
    if nu == 0 {
        return Err(domain("nu must be at least 1"));
    }
    let mut out = Vec::with_capacity(nu as usize + 1);
    out.push(p_initial);
    for _ in 0..nu {
        let p = *out.last().unwrap();
        out.push(binomial_upper_tail(ell, p, r as u64));
    }
    Ok(out)
}

/// `𝓔_{t,ℓ} = p^ℓ (log n)^{t+ℓ-1} (t/n0)^{(r-1)t-ℓ+1} (2Ke²)^{rt}`, `K = max(k, 3)`.
pub fn expected_witness_bound(t: u64, ell: u64, n: f64, n0: f64, p: f64, k: u32, r: u32) -> Result<f64> {
    if t == 0 || r == 0 || ell < r as u64 {
        return Err(domain(format!("need t >= 1 and ell >= r >= 1 (got t={t}, ell={ell}, r={r})")));
    }
    if !(n0 >= 2.0) || !(n > 1.0) || !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("need n0 >= 2, n > 1, p in [0, 1] (got n0={n0}, n={n}, p={p})")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let (t_f, ell_f, r_f) = (t as f64, ell as f64, r as f64);
    let big_k = k.max(3) as f64;
    let ln = ell_f * p.ln()
        + (t_f + ell_f - 1.0) * n.ln().ln()
        + ((r_f - 1.0) * t_f - ell_f + 1.0) * (t_f / n0).ln()
        + r_f * t_f * (2.0 * big_k).ln()
        + 2.0 * r_f * t_f;
    Ok(ln.exp())
}

/// `n0 Σ_{t=1}^{⌊log n⌋} Σ_{ℓ=r}^{(r-1)t+1} 𝓔_{t,ℓ}` at `p = ω^{-1}(log n)^{-r/(r-1)}`.
pub fn summed_witness_bound(n: u64, k: u32, r: u32, omega: f64) -> Result<f64> {
    let q = threshold_quantities(n, r, Some(omega))?;
    let t_max = q.t0.floor() as u64;
    let mut terms = Vec::new();
    for t in 1..=t_max {
        for ell in r as u64..=(r as u64 - 1) * t + 1 {
            terms.push(q.n0 * expected_witness_bound(t, ell, n as f64, q.n0, q.p_lower, k, r)?);
        }
    }
    Ok(crate::stats::pairwise_sum(&terms))
}
