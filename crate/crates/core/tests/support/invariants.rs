//! Bookkeeping checks shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};

use idea_evo_core::engine::{init_run, SimConfig};
use idea_evo_core::network::Topology;
use idea_evo_core::population::{apply, decide, OperatorKind, OperatorParams, Outcome};
use idea_evo_core::SimRng;

/// Applies `actions` random operators to random agents of scale-free groups
/// and checks every pooled-count change against the operator's rule.
pub fn check_operator_deltas(actions: usize, seed: u64) -> Result<(), String> {
    let params = OperatorParams::default();
    let mut rng = SimRng::seed_from_u64(seed);
    let mut done = 0;
    while done < actions {
        let cfg = SimConfig { n_agents: 20, topology: Topology::ScaleFree, seed: rng.gen(), ..SimConfig::default() };
        let mut state = init_run(&cfg, &mut SimRng::seed_from_u64(cfg.seed)).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            if done == actions {
                break;
            }
            let actor = rng.gen_range(0..cfg.n_agents);
            if state.agents[actor].ideas.is_empty() {
                continue;
            }
            let kind = OperatorKind::ALL[rng.gen_range(0..5)];
            let hood = state.graph.neighbors(actor).to_vec();
            let outcome = decide(kind, &state.agents[actor], &params, &mut rng).map_err(|e| e.to_string())?;
            let group = (1 + hood.len()) as i64;
            let expected = match (&outcome, kind) {
                (Outcome::Add(ideas), OperatorKind::Recombination) if ideas.len() == 2 => 2 * group,
                (
                    Outcome::Add(ideas),
                    OperatorKind::Replication | OperatorKind::RandomMutation | OperatorKind::IntelligentMutation,
                ) if ideas.len() == 1 => group,
                (Outcome::Remove(idea), OperatorKind::SubtractiveSelection) => {
                    let holders = hood.iter().filter(|&&j| state.agents[j].ideas.count(*idea) > 0).count();
                    -(1 + holders as i64)
                }
                other => return Err(format!("unexpected outcome {other:?}")),
            };
            let before = state.pooled().total() as i64;
            let delta = apply(&outcome, &mut state.agents, actor, &hood);
            let after = state.pooled().total() as i64;
            if delta != expected || after != before + delta {
                return Err(format!("{kind:?}: delta {delta}, expected {expected}, pool {before} -> {after}"));
            }
            done += 1;
        }
    }
    Ok(())
}

/// Checks edge count `2N`, average degree 4 and simplicity for every
/// generator over the given seeds and sizes.
pub fn check_graph_invariants(seeds: std::ops::Range<u64>, sizes: &[usize]) -> Result<usize, String> {
    let mut checked = 0;
    for seed in seeds {
        let mut rng = SimRng::seed_from_u64(seed);
        for &n in sizes {
            for topo in Topology::NETWORKS {
                let g = topo.generate(n, &mut rng).map_err(|e| e.to_string())?;
                let simple = g.edges().iter().all(|&(u, v)| u < v) && g.edges().windows(2).all(|w| w[0] < w[1]);
                if g.edge_count() != 2 * n || g.average_degree() != 4.0 || !simple {
                    return Err(format!("{topo} n={n} seed={seed}: {} edges, simple={simple}", g.edge_count()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}
