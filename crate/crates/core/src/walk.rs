//! Exact distributions of the simple random walk on the simple view, and
//! the conductance bound on their distance from stationarity.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph::{SimpleGraphView, Vertex};

/// `step_distribution` refuses work beyond this many edge relaxations.
pub const WORK_CAP: u64 = 20_000_000_000;

/// Probability vectors here are indexed by `vertex - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkState {
    pub distribution: Vec<f64>,
    pub step: u64,
    pub lazy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
}

/// `π(j) = deg(j) / (2|E|)`.
pub fn stationary(sv: &SimpleGraphView) -> Result<StationaryDistribution> {
    if sv.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    let total = 2.0 * sv.edge_count() as f64;
    Ok(StationaryDistribution { pi: sv.vertices().map(|v| sv.degree(v) as f64 / total).collect() })
}

/// One exact step of the walk; `lazy` holds with probability 1/2.
pub fn step(sv: &SimpleGraphView, p: &[f64], lazy: bool, out: &mut [f64]) {
    for v in sv.vertices() {
        let i = v as usize - 1;
        let inflow: f64 = sv.neighbors(v).iter().map(|&w| p[w as usize - 1] / sv.degree(w) as f64).sum();
        out[i] = if lazy { 0.5 * (p[i] + inflow) } else { inflow };
    }
}

fn check_walk(sv: &SimpleGraphView, start: Vertex) -> Result<()> {
    if start == 0 || start > sv.n() {
        return Err(domain(format!("start vertex {start} outside 1..={}", sv.n())));
    }
    if sv.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    if !sv.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn check_work(sv: &SimpleGraphView, t: u64) -> Result<()> {
    let per_step = sv.n() as u64 + 2 * sv.edge_count();
    if t.saturating_mul(per_step) > WORK_CAP {
        return Err(Error::RuntimeCap(format!("{t} steps on {} vertices exceed {WORK_CAP} operations", sv.n())));
    }
    Ok(())
}

fn point_mass(n: u32, v: Vertex) -> Vec<f64> {
    let mut p = vec![0.0; n as usize];
    p[v as usize - 1] = 1.0;
    p
}

/// `P^t(· | start)`.
pub fn step_distribution(sv: &SimpleGraphView, start: Vertex, t: u64, lazy: bool) -> Result<WalkState> {
    check_walk(sv, start)?;
    check_work(sv, t)?;
    let mut p = point_mass(sv.n(), start);
    let mut next = vec![0.0; p.len()];
    for _ in 0..t {
        step(sv, &p, lazy, &mut next);
        std::mem::swap(&mut p, &mut next);
    }
    Ok(WalkState { distribution: p, step: t, lazy })
}

/// `½ Σ |p_i - q_i|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(domain(format!("length mismatch: {} vs {}", p.len(), q.len())));
    }
    for (name, v) in [("p", p), ("q", q)] {
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(domain(format!("{name} sums to {s}, not 1")));
        }
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `sqrt(π_j / π_i) (1 - φ² / 8)^t`.
pub fn sinclair_jerrum_bound(pi_i: f64, pi_j: f64, phi: f64, t: u64) -> Result<f64> {
    if !(pi_i > 0.0 && pi_i <= 1.0 && pi_j > 0.0 && pi_j <= 1.0) {
        return Err(domain(format!("stationary masses must lie in (0, 1] ({pi_i}, {pi_j})")));
    }
    if !(0.0..=1.0).contains(&phi) {
        return Err(domain(format!("phi must lie in [0, 1] (got {phi})")));
    }
    let decay = 1.0 - phi * phi / 8.0;
    Ok((pi_j / pi_i).sqrt() * (t as f64 * decay.ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingRow {
    pub t: u64,
    /// `max_j |P^t(j | i) - π(j)|`.
    pub max_dev: f64,
    /// `max_j` of the bound, i.e. with the largest `π(j)`.
    pub bound: f64,
    /// True when some `j` has deviation above its own bound.
    pub violated: bool,
}

/// Deviation from stationarity against the bound for `t = 0..=t_max`.
///
/// The bound is checked per target vertex `j`; `bound` reports the largest
/// per-vertex bound.
pub fn mixing_profile(sv: &SimpleGraphView, start: Vertex, t_max: u64, phi: f64, lazy: bool) -> Result<Vec<MixingRow>> {
    check_walk(sv, start)?;
    check_work(sv, t_max)?;
    let pi = stationary(sv)?.pi;
    let pi_i = pi[start as usize - 1];
    let pi_max = pi.iter().cloned().fold(0.0, f64::max);
    let mut p = point_mass(sv.n(), start);
    let mut next = vec![0.0; p.len()];
    let mut rows = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let scale = sinclair_jerrum_bound(pi_i, pi_max, phi, t)? / (pi_max / pi_i).sqrt();
        let mut max_dev = 0.0f64;
        let mut violated = false;
        for (&pj, &pij) in p.iter().zip(&pi) {
            let dev = (pj - pij).abs();
            max_dev = max_dev.max(dev);
            let bound_j = (pij / pi_i).sqrt() * scale;
            if dev > bound_j + 1e-12 {
                violated = true;
            }
        }
        rows.push(MixingRow { t, max_dev, bound: (pi_max / pi_i).sqrt() * scale, violated });
        if t < t_max {
            step(sv, &p, lazy, &mut next);
            std::mem::swap(&mut p, &mut next);
        }
    }
    Ok(rows)
}

/// `t,max_dev,bound` rows.
pub fn mixing_csv(rows: &[MixingRow]) -> String {
    let mut out = String::from("t,max_dev,bound\n");
    for r in rows {
        out.push_str(&format!("{},{:.16e},{:.16e}\n", r.t, r.max_dev, r.bound));
    }
    out
}
