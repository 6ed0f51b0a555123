//! Experiment orchestration: one configuration in, one summary table out.
//!
//! Trial `i` of every experiment uses the seed `mix(master_seed, i)`; the
//! same trial seeds are reused across grid points. Aggregates are summed in
//! trial order, so a rerun of the same configuration produces identical
//! bytes regardless of the number of worker threads.

mod config;
mod table;

pub use config::{ConfigError, Experiment, ExperimentConfig, Format};
pub use table::{Cell, ColumnKind, SummaryTable};

use crate::error::{Error, Result};
use crate::expansion::{expansion_report, rho_star, solve_rho, EXHAUSTIVE_LIMIT};
use crate::graph::{AttachmentGraph, Vertex};
use crate::oracles::{prob_in_degree_zero, prob_out_degree_k_minus_1};
use crate::percolation::{
    extract_witness, percolation_trial_seeds, run_bootstrap, sample_initial, threshold_quantities, threshold_scan,
    verify_witness, WitnessCertificate, WitnessVerdict,
};
use crate::stats::{mean, poisson_gof, wilson_interval};
use crate::structure::{diameter, min_degree, special_set, vertex_connectivity};
use crate::trials::{run_trials, trial_seed};
use crate::walk::mixing_profile;

use ColumnKind::{Bool, Int, Real, Text};

/// Trials needed before `stats` reports a goodness-of-fit p-value.
pub const GOF_MIN_TRIALS: u64 = 100;

/// Failure of [`run_experiment`]: a bad configuration or a runtime error.
#[derive(Debug)]
pub enum HarnessError {
    Config(ConfigError),
    Runtime(Error),
}

impl std::fmt::Display for HarnessError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HarnessError::Config(e) => e.fmt(f),
            HarnessError::Runtime(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<ConfigError> for HarnessError {
    fn from(e: ConfigError) -> Self {
        HarnessError::Config(e)
    }
}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        HarnessError::Runtime(e)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> std::result::Result<SummaryTable, HarnessError> {
    cfg.validate()?;
    let mut table = match cfg.experiment {
        Experiment::Stats => stats(cfg)?,
        Experiment::Expansion => expansion(cfg)?,
        Experiment::Rho => rho()?,
        Experiment::Walk => walk(cfg)?,
        Experiment::Percolate => percolate(cfg)?,
        Experiment::Scan => scan(cfg)?,
        Experiment::Oracle => oracle(cfg)?,
        Experiment::Witness => witness(cfg)?,
    };
    table.set_meta("config", cfg);
    Ok(table)
}

fn fraction(flags: impl Iterator<Item = bool>, trials: u64) -> f64 {
    flags.filter(|&b| b).count() as f64 / trials as f64
}

fn stats(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[
        ("n", Int),
        ("k", Int),
        ("trials", Int),
        ("p_min_degree_eq_k", Real),
        ("mean_min_degree", Real),
        ("mean_special_set", Real),
        ("special_set_gof_p", Real),
        ("mean_max_degree", Real),
        ("mean_edges", Real),
        ("p_kappa_eq_delta", Real),
        ("mean_diameter_lower", Real),
    ]);
    let k = cfg.k;
    for &n in &cfg.n_grid {
        let per = run_trials(cfg.trials, cfg.master_seed, |_, s| {
            let g = AttachmentGraph::generate(n, k, mix0(s))?;
            let sv = g.simple_view();
            let delta = min_degree(sv);
            let kappa = if cfg.connectivity && n >= 2 { Some(vertex_connectivity(sv)?) } else { None };
            let special = if k >= 2 { Some(special_set(&g)?.len() as u64) } else { None };
            Ok((delta, special, sv.max_degree(), sv.edge_count(), kappa, diameter(sv).lower()))
        })?;
        let col = |f: &dyn Fn(&(u32, Option<u64>, u32, u64, Option<u32>, Option<u32>)) -> f64| -> f64 {
            mean(&per.iter().map(f).collect::<Vec<_>>())
        };
        let specials: Option<Vec<u64>> = per.iter().map(|p| p.1).collect();
        let gof = match &specials {
            Some(s) if cfg.trials >= GOF_MIN_TRIALS && k >= 2 => poisson_gof(s, (k as f64 - 1.0) / 2.0)?.p_value,
            _ => f64::NAN,
        };
        let kappa_eq = if cfg.connectivity && n >= 2 {
            fraction(per.iter().map(|p| p.4 == Some(p.0)), cfg.trials)
        } else {
            f64::NAN
        };
        t.push(vec![
            n.into(),
            k.into(),
            cfg.trials.into(),
            fraction(per.iter().map(|p| p.0 == k), cfg.trials).into(),
            col(&|p| p.0 as f64).into(),
            col(&|p| p.1.map_or(f64::NAN, |v| v as f64)).into(),
            gof.into(),
            col(&|p| p.2 as f64).into(),
            col(&|p| p.3 as f64).into(),
            kappa_eq.into(),
            col(&|p| p.5.map_or(f64::NAN, |v| v as f64)).into(),
        ]);
    }
    Ok(t)
}

fn mix0(s: u64) -> u64 {
    percolation_trial_seeds(s).0
}

fn expansion(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[
        ("n", Int),
        ("k", Int),
        ("trials", Int),
        ("mean_phi_sweep", Real),
        ("mean_phi_sweep_log_n", Real),
        ("mean_spectral_gap", Real),
        ("mean_phi_exact", Real),
        ("mean_rho_exact", Real),
    ]);
    for &n in &cfg.n_grid {
        let per = run_trials(cfg.trials, cfg.master_seed, |_, s| {
            let g = AttachmentGraph::generate(n, cfg.k, mix0(s))?;
            expansion_report(g.simple_view())
        })?;
        let avg = |f: &dyn Fn(&crate::expansion::ExpansionReport) -> f64| mean(&per.iter().map(f).collect::<Vec<_>>());
        let phi = avg(&|r| r.phi_sweep);
        t.push(vec![
            n.into(),
            cfg.k.into(),
            cfg.trials.into(),
            phi.into(),
            (phi * (n as f64).ln()).into(),
            avg(&|r| r.spectral_gap).into(),
            avg(&|r| r.phi_exact.unwrap_or(f64::NAN)).into(),
            avg(&|r| r.rho_exact.unwrap_or(f64::NAN)).into(),
        ]);
    }
    Ok(t)
}

fn rho() -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[("k", Text), ("rho", Real), ("residual", Real)]);
    for k in 2..=7 {
        let s = solve_rho(k)?;
        t.push(vec![k.to_string().into(), s.rho_k.into(), s.residual.into()]);
    }
    t.push(vec!["*".into(), rho_star().into(), crate::expansion::g_of_rho(rho_star())?.into()]);
    Ok(t)
}

fn walk(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[
        ("n", Int),
        ("t", Int),
        ("mean_max_dev", Real),
        ("mean_bound", Real),
        ("violations", Int),
    ]);
    let mut phi_source = serde_json::Map::new();
    for &n in &cfg.n_grid {
        let exact = n <= EXHAUSTIVE_LIMIT;
        phi_source.insert(n.to_string(), (if exact { "exact" } else { "sweep" }).into());
        let per = run_trials(cfg.trials, cfg.master_seed, |_, s| {
            let g = AttachmentGraph::generate(n, cfg.k, mix0(s))?;
            let sv = g.simple_view();
            let phi = if exact {
                crate::expansion::conductance_exact(sv)?
            } else {
                crate::expansion::conductance_sweep(sv)?.phi_sweep
            };
            mixing_profile(sv, n, cfg.t_max, phi.min(1.0), true)
        })?;
        for step in 0..=cfg.t_max as usize {
            let devs: Vec<f64> = per.iter().map(|rows| rows[step].max_dev).collect();
            let bounds: Vec<f64> = per.iter().map(|rows| rows[step].bound).collect();
            let violations = per.iter().filter(|rows| rows[step].violated).count();
            t.push(vec![n.into(), (step as u64).into(), mean(&devs).into(), mean(&bounds).into(), violations.into()]);
        }
    }
    t.set_meta("start_vertex", "n");
    t.set_meta("phi_source", phi_source);
    Ok(t)
}

/// Graph and trace of the single run described by `cfg`.
pub fn single_trace(cfg: &ExperimentConfig) -> Result<(AttachmentGraph, crate::percolation::PercolationTrace)> {
    let n = cfg.n_grid[0];
    let p = cfg.p_grid.as_ref().map_or(0.0, |g| g[0]);
    let (graph_seed, init_seed) = percolation_trial_seeds(trial_seed(cfg.master_seed, 0));
    let g = AttachmentGraph::generate(n, cfg.k, graph_seed)?;
    let trace = run_bootstrap(g.simple_view(), cfg.r.unwrap_or(1), &sample_initial(n, p, init_seed)?)?;
    Ok((g, trace))
}

fn percolate(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let (g, trace) = single_trace(cfg)?;
    let mut t = SummaryTable::new(&[("round", Int), ("newly_infected", Int), ("infected_total", Int)]);
    let mut total = 0usize;
    for (i, b) in trace.rounds().iter().enumerate() {
        total += b.len();
        t.push(vec![i.into(), b.len().into(), total.into()]);
    }
    t.set_meta("fully_infected", trace.fully_infected());
    t.set_meta("final_fraction", trace.final_size() as f64 / g.n() as f64);
    t.set_meta("note", range_note(cfg));
    if let Some(root) = cfg.root {
        let cert = extract_witness(&trace, g.simple_view(), root)?;
        t.set_meta("witness", &cert);
    }
    Ok(t)
}

fn range_note(cfg: &ExperimentConfig) -> Option<&'static str> {
    let r = cfg.r.unwrap_or(1);
    (r < 2 || r >= cfg.k).then_some(crate::percolation::OUTSIDE_THEOREM_RANGE)
}

/// `[ω^{-1}, ω] · (log n)^{-r/(r-1)}` when no explicit grid is given.
fn scan_grid(cfg: &ExperimentConfig, n: u32) -> Result<Vec<f64>> {
    if let Some(g) = &cfg.p_grid {
        return Ok(g.clone());
    }
    let q = threshold_quantities(n as u64, cfg.r.unwrap_or(2), cfg.omega)?;
    Ok(vec![q.p_lower, q.p_upper])
}

fn scan(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[
        ("n", Int),
        ("p", Real),
        ("full_prob", Real),
        ("ci_lo", Real),
        ("ci_hi", Real),
        ("mean_final_fraction", Real),
    ]);
    let mut crossings = serde_json::Map::new();
    for &n in &cfg.n_grid {
        let grid = scan_grid(cfg, n)?;
        let s = threshold_scan(n, cfg.k, cfg.r.unwrap_or(2), &grid, cfg.trials, cfg.master_seed)?;
        for row in &s.rows {
            t.push(vec![
                n.into(),
                row.p.into(),
                row.full_prob.into(),
                row.ci_lo.into(),
                row.ci_hi.into(),
                row.mean_final_fraction.into(),
            ]);
        }
        crossings.insert(n.to_string(), s.crossing.into());
    }
    t.set_meta("crossing", crossings);
    t.set_meta("note", range_note(cfg));
    Ok(t)
}

fn oracle(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[
        ("n", Int),
        ("k", Int),
        ("x", Int),
        ("quantity", Text),
        ("successes", Int),
        ("trials", Int),
        ("empirical", Real),
        ("exact", Real),
        ("ci_lo", Real),
        ("ci_hi", Real),
        ("inside", Bool),
    ]);
    let k = cfg.k;
    for &n in &cfg.n_grid {
        let xs: Vec<Vertex> = [n / 4, n / 2, 3 * n / 4].iter().map(|&x| x.max(2).min(n)).collect();
        let per = run_trials(cfg.trials, cfg.master_seed, |_, s| {
            let g = AttachmentGraph::generate(n, k, mix0(s))?;
            let (d_out, d_in) = g.out_in_degrees();
            Ok(xs.iter().map(|&x| (d_in[x as usize] == 0, d_out[x as usize] == k - 1)).collect::<Vec<_>>())
        })?;
        for (j, &x) in xs.iter().enumerate() {
            let mut quantities = vec![("in_degree_zero", prob_in_degree_zero(x, n, k)?, 0)];
            if k >= 2 {
                quantities.push(("out_degree_k_minus_1", prob_out_degree_k_minus_1(x, k)?, 1));
            }
            for (name, exact, slot) in quantities {
                let hits = per.iter().filter(|o| if slot == 0 { o[j].0 } else { o[j].1 }).count() as u64;
                let (lo, hi) = wilson_interval(hits, cfg.trials, 0.99)?;
                t.push(vec![
                    n.into(),
                    k.into(),
                    x.into(),
                    name.into(),
                    hits.into(),
                    cfg.trials.into(),
                    (hits as f64 / cfg.trials as f64).into(),
                    exact.into(),
                    lo.into(),
                    hi.into(),
                    (lo <= exact && exact <= hi).into(),
                ]);
            }
        }
    }
    t.set_meta("confidence", 0.99);
    Ok(t)
}

fn witness(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    let mut t = SummaryTable::new(&[
        ("n", Int),
        ("trial", Int),
        ("infected", Int),
        ("certificates", Int),
        ("valid", Int),
        ("first_failure", Text),
    ]);
    let r = cfg.r.unwrap_or(2);
    let p = cfg.p_grid.as_ref().map_or(0.0, |g| g[0]);
    for &n in &cfg.n_grid {
        let per = run_trials(cfg.trials, cfg.master_seed, |_, s| {
            let (graph_seed, init_seed) = percolation_trial_seeds(s);
            let g = AttachmentGraph::generate(n, cfg.k, graph_seed)?;
            let sv = g.simple_view();
            let trace = run_bootstrap(sv, r, &sample_initial(n, p, init_seed)?)?;
            let mut certs = 0usize;
            let mut valid = 0usize;
            let mut first = String::new();
            for v in sv.vertices().filter(|&v| trace.round_of(v).is_some_and(|i| i > 0)) {
                certs += 1;
                let verdict = verify_witness(&extract_witness(&trace, sv, v)?, sv, &trace);
                if verdict.valid {
                    valid += 1;
                } else if first.is_empty() {
                    first = format!("{v}: {}", verdict.clause.unwrap_or(""));
                }
            }
            Ok((trace.final_size(), certs, valid, first))
        })?;
        for (i, (infected, certs, valid, first)) in per.into_iter().enumerate() {
            t.push(vec![n.into(), i.into(), infected.into(), certs.into(), valid.into(), first.into()]);
        }
    }
    Ok(t)
}

/// Verifies a certificate against the run described by `cfg`.
pub fn verify_certificate(cfg: &ExperimentConfig, cert: &WitnessCertificate) -> Result<WitnessVerdict> {
    if cfg.n_grid.is_empty() || cfg.r.is_none() {
        return Err(crate::error::domain("verification needs n and r to rebuild the run"));
    }
    let (g, trace) = single_trace(cfg)?;
    Ok(verify_witness(cert, g.simple_view(), &trace))
}
