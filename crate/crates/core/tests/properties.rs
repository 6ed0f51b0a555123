use proptest::prelude::*;

use ualab::expansion::{conductance_exact, conductance_of, conductance_sweep, vertex_expansion_exact};
use ualab::graph::{deserialize, serialize, AttachmentGraph};
use ualab::percolation::{
    binomial_recurrence, coupled_monotone_run, extract_witness, initial_uniforms, run_bootstrap, sample_initial,
    verify_trace, verify_witness,
};
use ualab::stats::wilson_interval;
use ualab::structure::{min_degree, vertex_connectivity};
use ualab::walk::{stationary, step, tv_distance};

fn graph() -> impl Strategy<Value = AttachmentGraph> {
    (1u32..120, 1u32..6, any::<u64>()).prop_map(|(n, k, s)| AttachmentGraph::generate(n, k, s).unwrap())
}

fn small_graph() -> impl Strategy<Value = AttachmentGraph> {
    (3u32..13, 1u32..5, any::<u64>()).prop_map(|(n, k, s)| AttachmentGraph::generate(n, k, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn selections_point_backwards(g in graph()) {
        for u in 2..=g.n() {
            prop_assert_eq!(g.selections_of(u).len(), g.k() as usize);
            prop_assert!(g.selections_of(u).iter().all(|&v| v >= 1 && v < u));
        }
    }

    #[test]
    fn simple_view_is_symmetric_and_sorted(g in graph()) {
        let sv = g.simple_view();
        let mut twice = 0u64;
        for v in sv.vertices() {
            let nb = sv.neighbors(v);
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nb.contains(&v));
            prop_assert!(nb.iter().all(|&w| sv.neighbors(w).binary_search(&v).is_ok()));
            twice += nb.len() as u64;
        }
        prop_assert_eq!(twice, 2 * sv.edge_count());
        prop_assert!(sv.is_connected());
    }

    #[test]
    fn generation_is_deterministic(n in 1u32..200, k in 1u32..5, s in any::<u64>()) {
        prop_assert_eq!(AttachmentGraph::generate(n, k, s).unwrap(), AttachmentGraph::generate(n, k, s).unwrap());
    }

    #[test]
    fn text_round_trip(g in graph()) {
        prop_assert_eq!(deserialize(&serialize(&g)).unwrap(), g);
    }

    #[test]
    fn connectivity_at_most_min_degree(g in graph()) {
        let sv = g.simple_view();
        if sv.n() >= 2 {
            let kappa = vertex_connectivity(sv).unwrap();
            prop_assert!(kappa <= min_degree(sv));
            prop_assert!(kappa >= 1);
        }
    }

    #[test]
    fn sweep_bounds_exact_conductance(g in small_graph()) {
        let sv = g.simple_view();
        let exact = conductance_exact(sv).unwrap();
        let sweep = conductance_sweep(sv).unwrap();
        prop_assert!(sweep.phi_sweep >= exact - 1e-12);
        // Cheeger: gap >= Φ_std² / 8 and Φ <= Φ_std.
        prop_assert!(sweep.spectral_gap >= exact * exact / 8.0 - 1e-12);
        prop_assert!(exact > 0.0 && exact <= 1.0);
        prop_assert!(vertex_expansion_exact(sv).unwrap() > 0.0);
    }

    #[test]
    fn conductance_is_symmetric(g in small_graph(), mask in any::<u16>()) {
        let sv = g.simple_view();
        let set: Vec<u32> = sv.vertices().filter(|v| mask & (1 << (v - 1)) != 0).collect();
        let rest: Vec<u32> = sv.vertices().filter(|v| mask & (1 << (v - 1)) == 0).collect();
        prop_assert_eq!(conductance_of(sv, &set), conductance_of(sv, &rest));
    }

    #[test]
    fn walk_step_preserves_mass(g in graph(), start in 0u32..1000, lazy in any::<bool>()) {
        let sv = g.simple_view();
        prop_assume!(sv.edge_count() > 0);
        let mut p = vec![0.0; sv.n() as usize];
        p[(start % sv.n()) as usize] = 1.0;
        let mut out = vec![0.0; p.len()];
        for _ in 0..5 {
            step(sv, &p, lazy, &mut out);
            std::mem::swap(&mut p, &mut out);
        }
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        let pi = stationary(sv).unwrap().pi;
        let tv = tv_distance(&p, &pi).unwrap();
        prop_assert!((0.0..=1.0).contains(&tv));
    }

    #[test]
    fn traces_are_well_formed(g in graph(), r in 1u32..5, p in 0.0f64..0.6, s in any::<u64>()) {
        let sv = g.simple_view();
        let t = run_bootstrap(sv, r, &sample_initial(g.n(), p, s).unwrap()).unwrap();
        prop_assert!(verify_trace(sv, &t).is_ok());
        prop_assert!(t.last_round() <= g.n());
    }

    #[test]
    fn threshold_one_infects_everything(g in graph(), v in 0u32..1000) {
        let t = run_bootstrap(g.simple_view(), 1, &[1 + v % g.n()]).unwrap();
        prop_assert!(t.fully_infected());
    }

    #[test]
    fn coupling_is_monotone(g in graph(), r in 1u32..4, a in 0.0f64..1.0, b in 0.0f64..1.0, s in any::<u64>()) {
        let (p1, p2) = if a <= b { (a, b) } else { (b, a) };
        let u = initial_uniforms(g.n(), s);
        let (low, high) = coupled_monotone_run(g.simple_view(), r, &u, p1, p2).unwrap();
        prop_assert!(low.final_set().iter().all(|&v| high.is_infected(v)));
    }

    #[test]
    fn witnesses_are_sound(g in graph(), r in 1u32..4, p in 0.05f64..0.5, s in any::<u64>()) {
        let sv = g.simple_view();
        let t = run_bootstrap(sv, r, &sample_initial(g.n(), p, s).unwrap()).unwrap();
        for v in sv.vertices().filter(|&v| t.round_of(v).is_some_and(|i| i > 0)) {
            let w = extract_witness(&t, sv, v).unwrap();
            let verdict = verify_witness(&w, sv, &t);
            prop_assert!(verdict.valid, "{:?}", verdict);
            prop_assert!(w.layers[0].len() >= r as usize);
        }
    }

    #[test]
    fn recurrence_is_monotone(ell in 2u64..60, r in 1u32..4, p in 0.0f64..1.0, dp in 0.0f64..0.2, nu in 1u64..12) {
        prop_assume!(ell >= r as u64);
        let q = (p + dp).min(1.0);
        let a = binomial_recurrence(ell, r, p, nu).unwrap();
        let b = binomial_recurrence(ell, r, q, nu).unwrap();
        let c = binomial_recurrence(ell + 1, r, p, nu).unwrap();
        for j in 0..a.len() {
            prop_assert!(a[j] <= b[j] + 1e-15);
            prop_assert!(a[j] <= c[j] + 1e-15);
            prop_assert!((0.0..=1.0).contains(&a[j]));
        }
    }

    #[test]
    fn wilson_contains_estimate(trials in 1u64..5000, frac in 0.0f64..=1.0) {
        let s = (frac * trials as f64).round() as u64;
        let (lo, hi) = wilson_interval(s, trials, 0.95).unwrap();
        let phat = s as f64 / trials as f64;
        prop_assert!(lo <= phat + 1e-15 && phat <= hi + 1e-15);
        prop_assert!(0.0 <= lo && hi <= 1.0);
    }
}
