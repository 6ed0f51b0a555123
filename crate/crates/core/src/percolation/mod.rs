//! Bootstrap percolation on the simple view: synchronous rounds, traces
//! with provenance, coupled runs and the Monte Carlo estimators built on
//! them.
//!
//! A vertex becomes infected in round `i` when it has at least `r`
//! neighbours infected by round `i - 1`. `B_0` is the initial set and
//! `B_i` the set newly infected in round `i`.

mod threshold;
mod witness;

pub use threshold::{
    binomial_recurrence, expected_witness_bound, summed_witness_bound, threshold_quantities, ThresholdQuantities,
};
pub use witness::{extract_witness, verify_witness, WitnessCertificate, WitnessVerdict};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{AttachmentGraph, SimpleGraphView, Vertex};
use crate::rng::{mix, Rng};
use crate::stats::{pairwise_sum, wilson_interval};
use crate::trials::run_trials;

/// `round_of` marker for vertices never infected.
pub const UNINFECTED: u32 = u32::MAX;

/// Label attached to results with `r` outside `2..=k-1`.
pub const OUTSIDE_THEOREM_RANGE: &str = "outside theorem range";

fn range_note(k: u32, r: u32) -> Option<&'static str> {
    (r < 2 || r + 1 > k).then_some(OUTSIDE_THEOREM_RANGE)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PercolationConfig {
    pub r: u32,
    pub p: f64,
    pub seed: u64,
}

impl PercolationConfig {
    pub fn new(r: u32, p: f64, seed: u64) -> Result<Self> {
        if r == 0 {
            return Err(domain("r must be at least 1"));
        }
        check_p(p)?;
        Ok(PercolationConfig { r, p, seed })
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("p must lie in [0, 1] (got {p})")));
    }
    Ok(())
}

/// Full record of one bootstrap run.
#[derive(Debug, Clone, PartialEq)]
pub struct PercolationTrace {
    n: u32,
    r: u32,
    rounds: Vec<Vec<Vertex>>,
    round_of: Vec<u32>,
    provenance: Vec<Vertex>,
}

impl PercolationTrace {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `B_0, B_1, ...`, each ascending. Only `B_0` may be empty.
    pub fn rounds(&self) -> &[Vec<Vertex>] {
        &self.rounds
    }

    /// Index of the last round that infected anything.
    pub fn last_round(&self) -> u32 {
        self.rounds.len() as u32 - 1
    }

    pub fn round_of(&self, v: Vertex) -> Option<u32> {
        let i = self.round_of[v as usize];
        (i != UNINFECTED).then_some(i)
    }

    pub fn is_infected(&self, v: Vertex) -> bool {
        self.round_of[v as usize] != UNINFECTED
    }

    pub fn initial(&self) -> &[Vertex] {
        &self.rounds[0]
    }

    /// The `r` smallest neighbours infected before `v`, for `v` in `B_i`, `i >= 1`.
    pub fn provenance(&self, v: Vertex) -> Option<&[Vertex]> {
        match self.round_of(v) {
            Some(i) if i > 0 => {
                let r = self.r as usize;
                Some(&self.provenance[v as usize * r..(v as usize + 1) * r])
            }
            _ => None,
        }
    }

    /// `A_final`, ascending.
    pub fn final_set(&self) -> Vec<Vertex> {
        (1..=self.n).filter(|&v| self.is_infected(v)).collect()
    }

    pub fn final_size(&self) -> u32 {
        self.rounds.iter().map(|b| b.len() as u32).sum()
    }

    pub fn fully_infected(&self) -> bool {
        self.final_size() == self.n
    }

    /// Smallest vertex never infected.
    pub fn smallest_uninfected(&self) -> Option<Vertex> {
        (1..=self.n).find(|&v| !self.is_infected(v))
    }
}

/// Each vertex of `[n]` independently with probability `p`.
///
/// Vertex `v` is included when the `v`-th uniform drawn from `Rng::new(seed)`
/// is below `p`, so sets for different `p` and the same seed are nested.
pub fn sample_initial(n: u32, p: f64, seed: u64) -> Result<Vec<Vertex>> {
    check_p(p)?;
    let mut rng = Rng::new(seed);
    Ok((1..=n).filter(|_| rng.unit() < p).collect())
}

/// The uniforms behind [`sample_initial`], indexed by `vertex - 1`.
pub fn initial_uniforms(n: u32, seed: u64) -> Vec<f64> {
    let mut rng = Rng::new(seed);
    (0..n).map(|_| rng.unit()).collect()
}

/// Runs synchronous bootstrap percolation with threshold `r` from `initial`.
pub fn run_bootstrap(sv: &SimpleGraphView, r: u32, initial: &[Vertex]) -> Result<PercolationTrace> {
    if r == 0 {
        return Err(domain("r must be at least 1"));
    }
    let n = sv.n();
    let mut b0: Vec<Vertex> = initial.to_vec();
    b0.sort_unstable();
    b0.dedup();
    if let Some(&v) = b0.iter().find(|&&v| v == 0 || v > n) {
        return Err(domain(format!("initial vertex {v} outside 1..={n}")));
    }
    let slots = n as usize + 1;
    let ru = r as usize;
    let mut round_of = vec![UNINFECTED; slots];
    let mut provenance = vec![0; slots * ru];
    let mut hits = vec![0u32; slots];
    for &v in &b0 {
        round_of[v as usize] = 0;
    }
    let mut rounds = vec![b0];
    loop {
        let round = rounds.len() as u32;
        let mut next = Vec::new();
        for &x in rounds.last().unwrap() {
            for &w in sv.neighbors(x) {
                let w_us = w as usize;
                if round_of[w_us] != UNINFECTED {
                    continue;
                }
                hits[w_us] += 1;
                if hits[w_us] == r {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        for &v in &next {
            let slot = &mut provenance[v as usize * ru..(v as usize + 1) * ru];
            let earlier = sv.neighbors(v).iter().filter(|&&w| round_of[w as usize] < round);
            for (s, &w) in slot.iter_mut().zip(earlier) {
                *s = w;
            }
        }
        for &v in &next {
            round_of[v as usize] = round;
        }
        rounds.push(next);
    }
    Ok(PercolationTrace { n, r, rounds, round_of, provenance })
}

/// Re-checks a trace against the graph by an independent scan. Returns a
/// description of the first problem found.
pub fn verify_trace(sv: &SimpleGraphView, trace: &PercolationTrace) -> std::result::Result<(), String> {
    let n = sv.n();
    if trace.n != n {
        return Err(format!("trace has n={} but graph has n={n}", trace.n));
    }
    let mut seen = vec![UNINFECTED; n as usize + 1];
    for (i, b) in trace.rounds.iter().enumerate() {
        if i > 0 && b.is_empty() {
            return Err(format!("round {i} is empty"));
        }
        for &v in b {
            if seen[v as usize] != UNINFECTED {
                return Err(format!("vertex {v} appears in rounds {} and {i}", seen[v as usize]));
            }
            seen[v as usize] = i as u32;
        }
    }
    if seen != trace.round_of {
        return Err("round_of disagrees with rounds".into());
    }
    let r = trace.r as usize;
    for v in sv.vertices() {
        let infected_before = |i: u32| sv.neighbors(v).iter().filter(|&&w| seen[w as usize] < i).count();
        match seen[v as usize] {
            UNINFECTED => {
                if infected_before(UNINFECTED) >= r {
                    return Err(format!("uninfected vertex {v} has {} infected neighbours", infected_before(UNINFECTED)));
                }
            }
            0 => {}
            i => {
                if infected_before(i) < r || infected_before(i - 1) >= r {
                    return Err(format!("vertex {v} infected in the wrong round {i}"));
                }
                let prov = trace.provenance(v).unwrap();
                let expect: Vec<Vertex> =
                    sv.neighbors(v).iter().copied().filter(|&w| seen[w as usize] < i).take(r).collect();
                if prov != expect.as_slice() {
                    return Err(format!("vertex {v} has provenance {prov:?}, expected {expect:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Runs both thresholds `p1 <= p2` on the initial sets `{v : u_v < p}`.
/// The final set for `p1` is contained in the one for `p2`.
pub fn coupled_monotone_run(
    sv: &SimpleGraphView,
    r: u32,
    uniforms: &[f64],
    p1: f64,
    p2: f64,
) -> Result<(PercolationTrace, PercolationTrace)> {
    if uniforms.len() != sv.n() as usize {
        return Err(domain(format!("need {} uniforms, got {}", sv.n(), uniforms.len())));
    }
    if uniforms.iter().any(|u| !(0.0..1.0).contains(u)) {
        return Err(domain("uniforms must lie in [0, 1)"));
    }
    check_p(p1)?;
    check_p(p2)?;
    if p1 > p2 {
        return Err(domain(format!("need p1 <= p2 (got {p1} > {p2})")));
    }
    let initial = |p: f64| -> Vec<Vertex> {
        uniforms.iter().enumerate().filter(|(_, &u)| u < p).map(|(i, _)| i as Vertex + 1).collect()
    };
    Ok((run_bootstrap(sv, r, &initial(p1))?, run_bootstrap(sv, r, &initial(p2))?))
}

/// Full-infection estimate at one value of `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfectionEstimate {
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub full_prob: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_final_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub rows: Vec<InfectionEstimate>,
    /// Interpolated `p` where the full-infection probability first reaches ½.
    pub crossing: Option<f64>,
    pub note: Option<&'static str>,
}

/// Seeds of trial `trial_seed`: the graph uses `mix(s, 0)`, the initial
/// uniforms `mix(s, 1)`.
pub fn percolation_trial_seeds(trial_seed: u64) -> (u64, u64) {
    (mix(trial_seed, 0), mix(trial_seed, 1))
}

fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(domain("p grid is empty"));
    }
    for &p in p_grid {
        check_p(p)?;
    }
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("p grid must be strictly increasing"));
    }
    Ok(())
}

/// Full-infection probability and mean final fraction at every grid point.
///
/// Each trial draws one graph and one vector of uniforms and reuses them
/// across the grid, so per-trial outcomes are monotone in `p`.
pub fn threshold_scan(n: u32, k: u32, r: u32, p_grid: &[f64], trials: u64, master_seed: u64) -> Result<ScanResult> {
    check_grid(p_grid)?;
    if trials == 0 {
        return Err(domain("trials must be at least 1"));
    }
    if r == 0 {
        return Err(domain("r must be at least 1"));
    }
    let per_trial = run_trials(trials, master_seed, |_, s| {
        let (graph_seed, init_seed) = percolation_trial_seeds(s);
        let g = AttachmentGraph::generate(n, k, graph_seed)?;
        let sv = g.simple_view();
        let u = initial_uniforms(n, init_seed);
        p_grid
            .iter()
            .map(|&p| {
                let initial: Vec<Vertex> =
                    u.iter().enumerate().filter(|(_, &x)| x < p).map(|(i, _)| i as Vertex + 1).collect();
                let t = run_bootstrap(sv, r, &initial)?;
                Ok((t.fully_infected(), t.final_size() as f64 / n as f64))
            })
            .collect::<Result<Vec<(bool, f64)>>>()
    })?;
    let mut rows = Vec::with_capacity(p_grid.len());
    for (j, &p) in p_grid.iter().enumerate() {
        let successes = per_trial.iter().filter(|o| o[j].0).count() as u64;
        let fractions: Vec<f64> = per_trial.iter().map(|o| o[j].1).collect();
        let (ci_lo, ci_hi) = wilson_interval(successes, trials, 0.95)?;
        rows.push(InfectionEstimate {
            p,
            trials,
            successes,
            full_prob: successes as f64 / trials as f64,
            ci_lo,
            ci_hi,
            mean_final_fraction: pairwise_sum(&fractions) / trials as f64,
        });
    }
    let crossing = half_crossing(&rows);
    Ok(ScanResult { n, k, r, rows, crossing, note: range_note(k, r) })
}

fn half_crossing(rows: &[InfectionEstimate]) -> Option<f64> {
    rows.windows(2).find(|w| w[0].full_prob < 0.5 && w[1].full_prob >= 0.5).map(|w| {
        let (a, b) = (&w[0], &w[1]);
        a.p + (0.5 - a.full_prob) / (b.full_prob - a.full_prob) * (b.p - a.p)
    })
}

/// Fraction of trials (fresh graph and initial set each) ending fully infected.
pub fn full_infection_probability(
    n: u32,
    k: u32,
    r: u32,
    p: f64,
    trials: u64,
    master_seed: u64,
) -> Result<InfectionEstimate> {
    Ok(threshold_scan(n, k, r, &[p], trials, master_seed)?.rows.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallVertexCheck {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub omega: f64,
    pub p: f64,
    pub n0: f64,
    pub trials: u64,
    /// Fraction of trials in which no vertex of `[⌈n0⌉]` is ever infected.
    pub fraction: f64,
    /// Fraction of trials in which no vertex of `[⌈n0⌉]` is infected in a
    /// round `>= 1`; initial infections there are ignored.
    pub spread_free_fraction: f64,
    /// Set when `n0 >= n`, so that `[⌈n0⌉]` is the whole vertex set.
    pub vacuous: bool,
    pub note: Option<&'static str>,
}

/// Runs trials at `p = ω^{-1} (log n)^{-r/(r-1)}` and reports how often
/// `[⌈n0⌉]`, `n0 = ω^{1/2} (log n)^{r/(r-1)}`, stays uninfected.
pub fn no_small_vertex_infected_check(
    n: u32,
    k: u32,
    r: u32,
    omega: f64,
    trials: u64,
    master_seed: u64,
) -> Result<SmallVertexCheck> {
    if !(omega > 1.0) {
        return Err(domain(format!("omega must exceed 1 (got {omega})")));
    }
    if trials == 0 {
        return Err(domain("trials must be at least 1"));
    }
    let q = threshold_quantities(n as u64, r, Some(omega))?;
    let (p, n0) = (q.p_lower, q.n0);
    if !(0.0..=1.0).contains(&p) || !n0.is_finite() {
        return Err(domain(format!("p={p} or n0={n0} outside the usable range")));
    }
    let vacuous = n0 >= n as f64;
    let limit = n0.ceil().min(n as f64) as Vertex;
    let outcomes = run_trials(trials, master_seed, |_, s| {
        let (graph_seed, init_seed) = percolation_trial_seeds(s);
        let g = AttachmentGraph::generate(n, k, graph_seed)?;
        let t = run_bootstrap(g.simple_view(), r, &sample_initial(n, p, init_seed)?)?;
        let strict = (1..=limit).all(|v| !t.is_infected(v));
        let spread_free = (1..=limit).all(|v| t.round_of(v).is_none_or(|i| i == 0));
        Ok((strict, spread_free))
    })?;
    let frac = |f: fn(&(bool, bool)) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / trials as f64;
    Ok(SmallVertexCheck {
        n,
        k,
        r,
        omega,
        p,
        n0,
        trials,
        fraction: frac(|o| o.0),
        spread_free_fraction: frac(|o| o.1),
        vacuous,
        note: range_note(k, r),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadOutcome {
    pub all_infected: bool,
    pub smallest_uninfected: Option<Vertex>,
    pub rounds: u32,
}

/// Infects `[m]` and reports whether the infection reaches every vertex.
pub fn seed_first_m_spread(g: &AttachmentGraph, r: u32, m: u32) -> Result<SpreadOutcome> {
    if m == 0 || m > g.n() {
        return Err(domain(format!("need 1 <= m <= n (got m={m}, n={})", g.n())));
    }
    if r == 0 || r >= g.k() {
        return Err(domain(format!("need 1 <= r <= k-1 (got r={r}, k={})", g.k())));
    }
    let initial: Vec<Vertex> = (1..=m).collect();
    let t = run_bootstrap(g.simple_view(), r, &initial)?;
    Ok(SpreadOutcome { all_infected: t.fully_infected(), smallest_uninfected: t.smallest_uninfected(), rounds: t.last_round() })
}
