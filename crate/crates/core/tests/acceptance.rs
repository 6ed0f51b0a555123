//! Acceptance report: one `[PASS]` or `[FAIL]` line per criterion.
//!
//! `cargo test --test acceptance -- 3 7` runs criteria 3 and 7 only. The
//! process exits 0 after printing the report; set `UALAB_ACCEPTANCE_STRICT=1`
//! to exit 1 when any criterion fails.

use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use ualab::expansion::{conductance_exact, conductance_sweep, rho_star, solve_rho};
use ualab::graph::{families, AttachmentGraph, SimpleGraphView};
use ualab::harness::{run_experiment, Experiment, ExperimentConfig};
use ualab::oracles::{geometric_degree_fraction, prob_in_degree_zero, prob_out_degree_k_minus_1};
use ualab::percolation::{
    binomial_recurrence, extract_witness, full_infection_probability, no_small_vertex_infected_check,
    run_bootstrap, sample_initial, threshold_quantities, verify_witness, WitnessCertificate,
};
use ualab::rng::Rng;
use ualab::stats::{mean, poisson_gof, wilson_interval};
use ualab::structure::{min_degree, special_set, vertex_connectivity};
use ualab::trials::run_trials;
use ualab::walk::mixing_profile;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// Criteria 1 and 2 share the same 2,000 graphs.
struct MinDegreeRun {
    min_is_k: u64,
    special: Vec<u64>,
}

fn min_degree_run() -> &'static MinDegreeRun {
    static RUN: OnceLock<MinDegreeRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let per = run_trials(2000, 1001, |_, s| {
            let g = AttachmentGraph::generate(100_000, 3, s)?;
            Ok((min_degree(g.simple_view()) == 3, special_set(&g)?.len() as u64))
        })
        .unwrap();
        MinDegreeRun {
            min_is_k: per.iter().filter(|o| o.0).count() as u64,
            special: per.iter().map(|o| o.1).collect(),
        }
    })
}

fn c1() -> Outcome {
    let run = min_degree_run();
    let f = run.min_is_k as f64 / 2000.0;
    let target = (-1.0f64).exp();
    outcome((f - target).abs() <= 0.03, format!("P(δ=3) = {f:.4}, target {target:.5} ± 0.03"))
}

fn c2() -> Outcome {
    let run = min_degree_run();
    let gof = poisson_gof(&run.special, 1.0).unwrap();
    outcome(
        gof.p_value > 0.01,
        format!(
            "|S_n| mean {:.4}, chi-square {:.3} on {} dof, p-value {:.4}",
            mean(&run.special.iter().map(|&x| x as f64).collect::<Vec<_>>()),
            gof.statistic,
            gof.dof,
            gof.p_value
        ),
    )
}

fn c3() -> Outcome {
    let n = 100u32;
    let trials = 100_000u64;
    let xs = [25u32, 50, 75];
    let mut pass = true;
    let mut worst = String::new();
    let mut worst_z = -1.0f64;
    for k in [2u32, 3] {
        let per = run_trials(trials, 3000 + k as u64, |_, s| {
            let g = AttachmentGraph::generate(n, k, s)?;
            let (d_out, d_in) = g.out_in_degrees();
            Ok(xs.map(|x| (d_in[x as usize] == 0, d_out[x as usize] == k - 1)))
        })
        .unwrap();
        for (i, &x) in xs.iter().enumerate() {
            let cases = [
                ("d_in=0", per.iter().filter(|o| o[i].0).count() as u64, prob_in_degree_zero(x, n, k).unwrap()),
                ("d_out=k-1", per.iter().filter(|o| o[i].1).count() as u64, prob_out_degree_k_minus_1(x, k).unwrap()),
            ];
            for (what, hits, exact) in cases {
                let (lo, hi) = wilson_interval(hits, trials, 0.99).unwrap();
                let inside = lo <= exact && exact <= hi;
                pass &= inside;
                let phat = hits as f64 / trials as f64;
                let z = (phat - exact).abs() / (hi - lo).max(f64::MIN_POSITIVE);
                if !inside || z > worst_z {
                    worst_z = z;
                    worst = format!("k={k} x={x} {what}: {phat:.5} vs {exact:.5}, 99% CI [{lo:.5}, {hi:.5}]");
                }
            }
        }
    }
    outcome(pass, format!("12 probabilities; least comfortable {worst}"))
}

fn c4() -> Outcome {
    let (n, k, graphs) = (100_000u32, 3u32, 10u64);
    let counts = run_trials(graphs, 4000, |_, s| {
        let g = AttachmentGraph::generate(n, k, s)?;
        let mut c = [0u64; 4];
        for d in g.simple_view().degrees() {
            if let Some(j) = d.checked_sub(k).filter(|&j| j < 4) {
                c[j as usize] += 1;
            }
        }
        Ok(c)
    })
    .unwrap();
    let total = (n as u64 * graphs) as f64;
    let mut pass = true;
    let mut parts = Vec::new();
    for j in 0..4u32 {
        let f = counts.iter().map(|c| c[j as usize]).sum::<u64>() as f64 / total;
        let target = geometric_degree_fraction(j, k);
        let se = (target * (1.0 - target) / total).sqrt();
        let z = (f - target) / se;
        pass &= z.abs() <= 3.0;
        parts.push(format!("j={j}: {f:.5} vs {target:.5} ({z:+.2} se)"));
    }
    outcome(pass, parts.join("; "))
}

/// Smallest vertex set whose removal disconnects the graph, by enumeration.
fn separator_oracle(sv: &SimpleGraphView) -> u32 {
    let n = sv.n();
    let adj: Vec<u32> =
        (1..=n).map(|v| sv.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << (w - 1))).collect();
    let full = (1u32 << n) - 1;
    let connected = |alive: u32| {
        let start = alive.trailing_zeros();
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros();
            frontier &= frontier - 1;
            let new = adj[v as usize] & alive & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == alive
    };
    let mut best = n - 1;
    for removed in 0..full {
        let size = removed.count_ones();
        let alive = full & !removed;
        if size < best && alive.count_ones() >= 2 && !connected(alive) {
            best = size;
        }
    }
    best
}

fn c5() -> Outcome {
    let per = run_trials(500, 5000, |_, s| {
        let g = AttachmentGraph::generate(10_000, 3, s)?;
        let sv = g.simple_view();
        Ok(vertex_connectivity(sv)? == min_degree(sv))
    })
    .unwrap();
    let equal = per.iter().filter(|&&b| b).count();
    let mut rng = Rng::new(5001);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = 2 + rng.below(8);
        let k = 1 + rng.below(4);
        let g = AttachmentGraph::generate(n, k, rng.next_u64()).unwrap();
        let sv = g.simple_view();
        if vertex_connectivity(sv).unwrap() != separator_oracle(sv) {
            mismatches += 1;
        }
    }
    outcome(
        equal >= 475 && mismatches == 0,
        format!("κ=δ in {equal}/500 (need 475); flow vs separator enumeration: {mismatches} mismatches in 1000"),
    )
}

fn c6() -> Outcome {
    let table = [(2u32, 0.076), (3, 0.114), (4, 0.141), (5, 0.160), (6, 0.173), (7, 0.183)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, want) in table {
        let got = solve_rho(k).unwrap().rho_k;
        let ok = (got - want).abs() <= 0.001;
        pass &= ok;
        parts.push(format!("ρ({k})={got:.6}{}", if ok { "" } else { " (off)" }));
    }
    let star = rho_star();
    let ok = (star - 0.252).abs() <= 0.001;
    pass &= ok;
    parts.push(format!("ρ*={star:.6}{}", if ok { "" } else { " (off)" }));
    outcome(pass, parts.join(", "))
}

fn sweep_matches_exact(sv: &SimpleGraphView) -> bool {
    let exact = conductance_exact(sv).unwrap();
    let sweep = conductance_sweep(sv).unwrap().phi_sweep;
    (sweep - exact).abs() <= 1e-12 * exact.max(1.0)
}

fn c7() -> Outcome {
    let mut means = Vec::new();
    let mut all = Vec::new();
    for e in 13u32..=17 {
        let n = 1u32 << e;
        let scaled = run_trials(20, 7000 + e as u64, |_, s| {
            let g = AttachmentGraph::generate(n, 3, s)?;
            Ok(conductance_sweep(g.simple_view())?.phi_sweep * (n as f64).ln())
        })
        .unwrap();
        all.extend_from_slice(&scaled);
        means.push(mean(&scaled));
    }
    let band = |xs: &[f64]| {
        xs.iter().cloned().fold(f64::MIN, f64::max) / xs.iter().cloned().fold(f64::MAX, f64::min)
    };

    let mut suite: Vec<(String, SimpleGraphView)> = Vec::new();
    for n in 3..=12 {
        suite.push((format!("P{n}"), families::path(n)));
        suite.push((format!("C{n}"), families::cycle(n)));
        suite.push((format!("K{n}"), families::complete(n)));
        suite.push((format!("star{}", n - 1), families::star(n - 1)));
    }
    for m in 2..=6 {
        suite.push((format!("barbell{m}"), families::barbell(m)));
        suite.push((format!("ladder{m}"), families::ladder(m)));
        suite.push((format!("K{m},{m}"), families::complete_bipartite(m, m)));
    }
    let failed: Vec<&str> =
        suite.iter().filter(|(_, g)| !sweep_matches_exact(g)).map(|(name, _)| name.as_str()).collect();

    let mut rng = Rng::new(7100);
    let random = 1000;
    let agree = (0..random)
        .filter(|_| {
            let n = 3 + rng.below(10);
            let k = 1 + rng.below(4);
            sweep_matches_exact(AttachmentGraph::generate(n, k, rng.next_u64()).unwrap().simple_view())
        })
        .count();

    let trend = band(&means);
    outcome(
        trend <= 4.0 && failed.is_empty(),
        format!(
            "φ·ln n means {:?}, band {trend:.3} (per-trial band {:.3}); sweep = exact on {}/{} test graphs{}; \
             random n≤12 instances agree {agree}/{random}",
            means.iter().map(|m| (m * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            band(&all),
            suite.len() - failed.len(),
            suite.len(),
            if failed.is_empty() { String::new() } else { format!(" (differ: {})", failed.join(" ")) },
        ),
    )
}

fn c8() -> Outcome {
    let mut rng = Rng::new(8000);
    let mut instances = 0;
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    while instances < 500 {
        let n = 2 + rng.below(23);
        let k = 1 + rng.below(4);
        let g = AttachmentGraph::generate(n, k, rng.next_u64()).unwrap();
        let sv = g.simple_view();
        if !sv.is_connected() {
            continue;
        }
        instances += 1;
        let phi = conductance_exact(sv).unwrap();
        for start in sv.vertices() {
            for row in mixing_profile(sv, start, 1000, phi, true).unwrap() {
                if row.violated {
                    violations += 1;
                }
                if row.max_dev > 1e-9 {
                    tightest = tightest.min(row.bound / row.max_dev);
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("{instances} instances, every start, t ≤ 1000: {violations} violations; smallest bound/deviation {tightest:.3}"),
    )
}

fn c9() -> Outcome {
    let (n, k, r, omega) = (100_000u32, 5u32, 2u32, 20.0);
    let l2 = (n as f64).ln().powi(2);
    let high = full_infection_probability(n, k, r, (omega / l2).min(1.0), 200, 9000).unwrap();
    let low = full_infection_probability(n, k, r, 1.0 / (omega * l2), 200, 9000).unwrap();
    let gap = high.full_prob - low.full_prob;
    let check = no_small_vertex_infected_check(n, k, r, omega, 200, 9001).unwrap();
    let q = threshold_quantities(n as u64, r, Some(omega)).unwrap();
    let cap = (1.0 - q.p_lower).powf(q.n0.ceil());
    outcome(
        gap >= 0.5 && check.fraction >= 0.9,
        format!(
            "full infection {:.3} at p={:.5} vs {:.3} at p={:.3e}, gap {gap:.3} (need 0.5); \
             no vertex of [{}] infected in {:.3} of trials (need 0.9; the initial draw alone leaves [{}] clean \
             with probability {cap:.3}); no spread into [{}] in {:.3}",
            high.full_prob,
            high.p,
            low.full_prob,
            low.p,
            q.n0.ceil(),
            check.fraction,
            q.n0.ceil(),
            q.n0.ceil(),
            check.spread_free_fraction,
        ),
    )
}

fn c10() -> Outcome {
    let mut rng = Rng::new(10_000);
    let mut checked = 0u64;
    let mut rejected = 0u64;
    for _ in 0..1000 {
        let n = 2 + rng.below(199);
        let k = 1 + rng.below(5);
        let r = 1 + rng.below(k.min(3));
        let g = AttachmentGraph::generate(n, k, rng.next_u64()).unwrap();
        let sv = g.simple_view();
        let p = 0.02 + 0.4 * rng.unit();
        let t = run_bootstrap(sv, r, &sample_initial(n, p, rng.next_u64()).unwrap()).unwrap();
        for v in sv.vertices().filter(|&v| t.round_of(v).is_some_and(|i| i > 0)) {
            checked += 1;
            let w = extract_witness(&t, sv, v).unwrap();
            if !verify_witness(&w, sv, &t).valid {
                rejected += 1;
            }
        }
    }

    // Path 1-2-3-4 with chords 1-3 and 2-4, threshold 2, initial {1, 2}:
    // 3 is infected in round 1 and 4 in round 2.
    let sv = SimpleGraphView::from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4)]).unwrap();
    let t = run_bootstrap(&sv, 2, &[1, 2]).unwrap();
    let good = extract_witness(&t, &sv, 4).unwrap();
    let base_ok = verify_witness(&good, &sv, &t).valid;
    let mutate = |f: &dyn Fn(&mut WitnessCertificate)| {
        let mut w = good.clone();
        f(&mut w);
        verify_witness(&w, &sv, &t).clause
    };
    let fixtures: [(&str, Option<&str>); 3] = [
        ("non-edge", mutate(&|w| w.edges.push([4, 1]))),
        ("missing child", mutate(&|w| w.edges.retain(|e| *e != [3, 1]))),
        ("cycle", mutate(&|w| w.edges.push([1, 3]))),
    ];
    let expected = ["edges exist", "(II) child count", "acyclic"];
    let fixtures_ok = fixtures.iter().zip(expected).all(|((_, got), want)| *got == Some(want));
    let shown: Vec<String> = fixtures.iter().map(|(name, c)| format!("{name} → {}", c.unwrap_or("accepted"))).collect();
    outcome(
        rejected == 0 && checked > 0 && base_ok && fixtures_ok,
        format!("{checked} certificates, {rejected} rejected; invalid fixtures: {}", shown.join(", ")),
    )
}

/// `P(Bin(ell, p) >= r)` from exact binomial coefficients.
fn exact_tail(ell: u64, p: f64, r: u64) -> f64 {
    let mut c: u128 = 1;
    let mut total = 0.0;
    for i in 0..=ell {
        if i >= r {
            total += c as f64 * p.powi(i as i32) * (1.0 - p).powi((ell - i) as i32);
        }
        c = c * (ell - i) as u128 / (i + 1) as u128;
    }
    total.min(1.0)
}

fn c11() -> Outcome {
    let ells = [2u64, 3, 4, 6, 9, 14, 22, 35, 60, 100];
    let ps = [0.001, 0.01, 0.03, 0.06, 0.1, 0.15, 0.2, 0.3, 0.5, 0.8];
    let r = 2u32;
    let mut max_err = 0.0f64;
    let mut grid = vec![vec![vec![Vec::new(); 10]; ps.len()]; ells.len()];
    for (a, &ell) in ells.iter().enumerate() {
        for (b, &p) in ps.iter().enumerate() {
            for nu in 1..=10u64 {
                let got = binomial_recurrence(ell, r, p, nu).unwrap();
                let mut want = p;
                for (j, &g) in got.iter().enumerate() {
                    if j > 0 {
                        want = exact_tail(ell, want, r as u64);
                    }
                    max_err = max_err.max((g - want).abs());
                }
                grid[a][b][nu as usize - 1] = got;
            }
        }
    }
    let mut breaks = 0;
    for a in 0..ells.len() {
        for b in 0..ps.len() {
            for v in 0..10 {
                for j in 0..grid[a][b][v].len() {
                    let x = grid[a][b][v][j];
                    if b + 1 < ps.len() && x > grid[a][b + 1][v][j] {
                        breaks += 1;
                    }
                    if a + 1 < ells.len() && x > grid[a + 1][b][v][j] {
                        breaks += 1;
                    }
                }
            }
        }
    }
    outcome(
        max_err <= 1e-12 && breaks == 0,
        format!("1000 grid points, largest deviation {max_err:.2e}; {breaks} monotonicity breaks"),
    )
}

fn config(experiment: Experiment, lines: &str) -> ExperimentConfig {
    let cfg = ExperimentConfig::parse(lines, Some(experiment)).unwrap();
    cfg.validate().unwrap();
    cfg
}

fn c12() -> Outcome {
    let configs = [
        config(Experiment::Stats, "n = 2000\nn = 5000\ntrials = 12\nseed = 1\n"),
        config(Experiment::Expansion, "n = 20\nn = 500\ntrials = 4\nseed = 2\n"),
        config(Experiment::Rho, ""),
        config(Experiment::Walk, "n = 12\ntrials = 3\nt_max = 50\nseed = 3\n"),
        config(Experiment::Percolate, "n = 2000\nk = 5\nr = 2\np = 0.03\nseed = 4\n"),
        config(Experiment::Scan, "n = 2000\nk = 5\nr = 2\np = 0.005, 0.02, 0.05\ntrials = 10\nseed = 5\n"),
        config(Experiment::Oracle, "n = 60\nk = 3\ntrials = 2000\nseed = 6\n"),
        config(Experiment::Witness, "n = 300\nk = 4\nr = 2\np = 0.1\ntrials = 5\nseed = 7\n"),
    ];
    let mut differing = Vec::new();
    for cfg in &configs {
        let a = run_experiment(cfg).unwrap();
        let b = run_experiment(cfg).unwrap();
        if a.to_csv() != b.to_csv() || a.to_json() != b.to_json() || a.metadata_json() != b.metadata_json() {
            differing.push(cfg.experiment.name().to_string());
        }
    }
    let cli = ["stats", "--n", "3000", "--trials", "8", "--seed", "9"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ualab")).args(cli).env("UALAB_THREADS", threads).output().unwrap().stdout
    };
    let (x, y, z) = (run("1"), run("1"), run("3"));
    if x.is_empty() || x != y || x != z {
        differing.push("cli stats".into());
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            "8 experiments rerun through the library, CSV/JSON/metadata byte-identical; CLI identical across thread counts".into()
        } else {
            format!("reruns differ: {}", differing.join(", "))
        },
    )
}

const CRITERIA: [(u32, &str, fn() -> Outcome); 12] = [
    (1, "min-degree limit", c1),
    (2, "special set Poisson limit", c2),
    (3, "exact degree oracles", c3),
    (4, "geometric degrees", c4),
    (5, "connectivity", c5),
    (6, "rho(k) table", c6),
    (7, "conductance trend and sweep", c7),
    (8, "mixing bound", c8),
    (9, "percolation dichotomy", c9),
    (10, "witness soundness", c10),
    (11, "binomial recurrence", c11),
    (12, "determinism", c12),
];

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (id, name, check) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        ran += 1;
        let started = Instant::now();
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:>2} {name}: {} ({:.1} s)", o.detail, started.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(id);
        }
    }
    println!("acceptance: {} of {ran} criteria passed; failed: {failed:?}", ran - failed.len());
    if !failed.is_empty() && std::env::var_os("UALAB_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
