mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use idea_evo_core::engine::{init_run, run, simulate, SimConfig};
use idea_evo_core::landscape::{
    apply_bias, build_table, derive_individual, generate_representatives, hamming, interpolate, Idea, LandscapeBundle,
    TableKind,
};
use idea_evo_core::metrics::{convergence, entropy, PooledPopulation};
use idea_evo_core::network::{random_graph, scale_free, Topology};
use idea_evo_core::population::OperatorKind;
use idea_evo_core::stats::mann_whitney;
use idea_evo_core::SimRng;

proptest! {
    #[test]
    fn hamming_is_a_metric(a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
        let (a, b, c) = (Idea::new(a, 10).unwrap(), Idea::new(b, 10).unwrap(), Idea::new(c, 10).unwrap());
        let ab = hamming(a, b).unwrap();
        prop_assert_eq!(ab, hamming(b, a).unwrap());
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(hamming(a, c).unwrap() <= ab + hamming(b, c).unwrap());
    }

    #[test]
    fn idea_bits_round_trip(index in 0u32..(1 << 12), len in 12u32..=20) {
        let idea = Idea::new(index, len).unwrap();
        prop_assert_eq!(Idea::from_bits(&idea.bits()).unwrap(), idea);
        prop_assert_eq!(Idea::parse(&idea.to_string()).unwrap(), idea);
    }

    #[test]
    fn interpolation_stays_within_representative_range(seed: u64, m in 2u32..=10, v in 0u32..1024) {
        let mut rng = SimRng::seed_from_u64(seed);
        let n = 10usize.min(1 << m);
        let set = generate_representatives(&mut rng, m, n).unwrap();
        let biased = apply_bias(&set, rng.gen(), &mut rng).unwrap();
        let us: Vec<f64> = biased.entries().iter().map(|e| e.1).collect();
        let lo = us.iter().copied().fold(f64::MAX, f64::min);
        let hi = us.iter().copied().fold(f64::MIN, f64::max);
        let u = interpolate(&biased, Idea::new(v % (1 << m), m).unwrap()).unwrap();
        prop_assert!(u >= lo - 1e-15 && u <= hi + 1e-15);
    }

    #[test]
    fn individual_noise_is_bounded(seed: u64, beta in 0.0f64..=1.0, xi in 0.0f64..=1.0) {
        let mut rng = SimRng::seed_from_u64(seed);
        let b = LandscapeBundle::generate(&mut rng, 8, 10, beta, xi, 2).unwrap();
        for table in &b.individual_tables {
            for (u, m) in table.values().iter().zip(b.master_table.values()) {
                prop_assert!((u - m).abs() <= xi + 1e-15);
                prop_assert!((0.0..=1.0).contains(u));
            }
        }
    }

    #[test]
    fn entropy_ignores_labels_and_scale(counts in prop::collection::vec(0u64..50, 1..40), k in 1u64..20, shift in 0u32..64) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let base = PooledPopulation::from_counts(6, counts.iter().enumerate().map(|(i, &c)| (i as u32, c))).unwrap();
        let relabeled = PooledPopulation::from_counts(
            6,
            counts.iter().enumerate().map(|(i, &c)| (((i as u32) * 37 + shift) % 64, c)),
        ).unwrap();
        let scaled = PooledPopulation::from_counts(6, counts.iter().enumerate().map(|(i, &c)| (i as u32, c * k))).unwrap();
        let h = entropy(&base).unwrap();
        prop_assert!((h - entropy(&relabeled).unwrap()).abs() < 1e-12);
        prop_assert!((h - entropy(&scaled).unwrap()).abs() < 1e-12);
        let c = convergence(h, 6).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn mann_whitney_identities(
        a in prop::collection::vec(-5.0f64..5.0, 1..30),
        b in prop::collection::vec(-5.0f64..5.0, 1..30),
    ) {
        let r = mann_whitney(&a, &b).unwrap();
        prop_assert!((r.u + r.u_other - (a.len() * b.len()) as f64).abs() < 1e-9);
        prop_assert!(r.p > 0.0 && r.p <= 1.0);
        prop_assert_eq!(r.p, mann_whitney(&b, &a).unwrap().p);
        let t = |x: &f64| (x * 0.7).exp() + 3.0;
        let ta: Vec<f64> = a.iter().map(t).collect();
        let tb: Vec<f64> = b.iter().map(t).collect();
        prop_assert!((mann_whitney(&ta, &tb).unwrap().p - r.p).abs() < 1e-12);
    }

    #[test]
    fn graphs_have_average_degree_four(seed: u64, n in 5usize..200) {
        let mut rng = SimRng::seed_from_u64(seed);
        for topo in Topology::NETWORKS {
            let g = topo.generate(n, &mut rng).unwrap();
            prop_assert_eq!(g.edge_count(), 2 * n);
            prop_assert!(g.edges().iter().all(|&(u, v)| u < v));
        }
    }

    #[test]
    fn operators_touch_only_the_neighbourhood(seed: u64, n in 5usize..40, p in 0.0f64..=1.0) {
        let cfg = SimConfig { n_agents: n, topology: Topology::SmallWorld, selection: p, seed, ..SimConfig::default() };
        let mut rng = SimRng::seed_from_u64(seed);
        let mut state = init_run(&cfg, &mut rng).unwrap();
        for _ in 0..3 {
            state.step(&mut rng).unwrap();
        }
        let actor = rng.gen_range(0..n);
        let before = state.agents.clone();
        let kind = OperatorKind::ALL[rng.gen_range(0..5)];
        state.act(kind, actor, &mut rng).unwrap();
        let hood = state.graph.neighbors(actor);
        for (j, (old, new)) in before.iter().zip(&state.agents).enumerate() {
            if j != actor && !hood.contains(&j) {
                prop_assert_eq!(old, new);
            }
        }
    }
}

#[test]
fn pooled_deltas_follow_operator_rules() {
    support::invariants::check_operator_deltas(100_000, 31).unwrap();
}

#[test]
fn generators_keep_degree_four() {
    let checked = support::invariants::check_graph_invariants(0..20, &[5, 20, 640]).unwrap();
    assert_eq!(checked, 20 * 3 * 3);
}

#[test]
fn action_count_and_bookkeeping_hold_for_whole_runs() {
    for seed in 0..20 {
        for (n, topo) in [(5, Topology::Complete), (40, Topology::Random), (40, Topology::ScaleFree)] {
            let cfg = SimConfig {
                n_agents: n,
                topology: topo,
                seed,
                selection: (seed % 11) as f64 / 10.0,
                ..SimConfig::default()
            };
            let state = simulate(&cfg).unwrap();
            assert_eq!(state.actions, (n * cfg.iterations) as u64);
            assert_eq!(state.pooled().total() as i64, (n * cfg.initial_ideas) as i64 + state.pooled_delta);
        }
    }
}

#[test]
fn runs_are_reproducible() {
    for seed in [0, 1, u64::MAX] {
        let cfg = SimConfig { n_agents: 80, topology: Topology::SmallWorld, bias: 0.3, seed, ..SimConfig::default() };
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
    }
}

#[test]
fn neighbouring_ideas_have_similar_utility() {
    let mut rng = SimRng::seed_from_u64(17);
    let mut near = 0.0;
    let mut far = 0.0;
    for _ in 0..20 {
        let set = generate_representatives(&mut rng, 10, 10).unwrap();
        let t = build_table(&set, TableKind::True);
        let v = t.values();
        let mut sum = 0.0;
        let mut count = 0.0;
        for i in 0..1024usize {
            for bit in 0..10 {
                let j = i ^ (1 << bit);
                if j > i {
                    sum += (v[i] - v[j]).abs();
                    count += 1.0;
                }
            }
        }
        near += sum / count;
        let pairs = 20_000;
        far += (0..pairs).map(|_| (v[rng.gen_range(0..1024)] - v[rng.gen_range(0..1024)]).abs()).sum::<f64>()
            / pairs as f64;
    }
    assert!(near < far, "neighbour gap {near} vs random gap {far}");
}

#[test]
fn scale_free_grows_hubs() {
    for n in [320, 640] {
        for seed in 0..100 {
            let mut rng = SimRng::seed_from_u64(seed);
            let sf = scale_free(n, &mut rng).unwrap();
            let rd = random_graph(n, &mut rng).unwrap();
            let mut degrees: Vec<usize> = (0..n).map(|i| rd.degree(i)).collect();
            degrees.sort_unstable();
            let p99 = degrees[(0.99 * (n - 1) as f64).round() as usize];
            let hub = (0..n).map(|i| sf.degree(i)).max().unwrap();
            assert!(hub > p99, "n={n} seed={seed}: hub {hub} vs p99 {p99}");
        }
    }
}

#[test]
fn individual_tables_with_zero_noise_equal_master() {
    let mut rng = SimRng::seed_from_u64(3);
    let set = generate_representatives(&mut rng, 10, 10).unwrap();
    let master = build_table(&apply_bias(&set, 0.5, &mut rng).unwrap(), TableKind::Master);
    let ind = derive_individual(&master, 0.0, &mut rng).unwrap();
    assert_eq!(ind.values(), master.values());
}

#[test]
fn seeded_run_matches_recorded_value() {
    // Recorded from both a native and a wasm32 build.
    let cfg = SimConfig { n_agents: 80, topology: Topology::SmallWorld, bias: 0.3, seed: 1, ..SimConfig::default() };
    let r = run(&cfg).unwrap();
    assert_eq!(r.convergence, 0.17706771508807595);
    assert_eq!((r.mode_idea_index, r.pooled_total, r.distinct_types), (920, 18495, 796));
}
