//! Browser bindings for the static demo in `www/`. Each export takes plain
//! numbers and returns a JSON string so the page needs no glue beyond the
//! generated loader.

use rand::SeedableRng;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use idea_evo_core::engine::{simulate, SimConfig};
use idea_evo_core::landscape::LandscapeBundle;
use idea_evo_core::network::Topology;
use idea_evo_core::SimRng;

const TOP_IDEAS: usize = 12;

fn topology(code: &str) -> Result<Topology, String> {
    code.parse().map_err(|e: idea_evo_core::Error| e.to_string())
}

/// True, master and one individual utility table for a seeded landscape.
#[wasm_bindgen]
pub fn landscape(seed: u64, beta: f64, xi: f64) -> Result<String, String> {
    let cfg = SimConfig::default();
    let mut rng = SimRng::seed_from_u64(seed);
    let b =
        LandscapeBundle::generate(&mut rng, cfg.bits, cfg.representatives, beta, xi, 1).map_err(|e| e.to_string())?;
    Ok(json!({
        "true": b.true_table.values(),
        "master": b.master_table.values(),
        "individual": b.individual_tables[0].values(),
    })
    .to_string())
}

/// Edge list of one generated network.
#[wasm_bindgen]
pub fn network(topology_code: &str, n: usize, seed: u64) -> Result<String, String> {
    let mut rng = SimRng::seed_from_u64(seed);
    let g = topology(topology_code)?.generate(n, &mut rng).map_err(|e| e.to_string())?;
    Ok(json!({ "n": g.n_nodes(), "edges": g.edges() }).to_string())
}

/// One full run: the network it ran on, the most supported ideas of the
/// final pooled population and the run result. The result matches
/// `engine::run` for the same parameters.
#[wasm_bindgen]
pub fn simulate_run(topology_code: &str, n: usize, beta: f64, xi: f64, p: f64, seed: u64) -> Result<String, String> {
    let cfg = SimConfig {
        topology: topology(topology_code)?,
        n_agents: n,
        bias: beta,
        noise: xi,
        selection: p,
        seed,
        ..SimConfig::default()
    };
    let state = simulate(&cfg).map_err(|e| e.to_string())?;
    let result = state.result().map_err(|e| e.to_string())?;
    let counts = state.pooled().counts().to_vec();
    let mut ranked: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    ranked.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let top: Vec<_> = ranked
        .into_iter()
        .take(TOP_IDEAS)
        .map(|i| json!({ "index": i, "copies": counts[i], "true_utility": state.true_table.values()[i] }))
        .collect();
    Ok(json!({ "edges": state.graph.edges(), "top_ideas": top, "result": result }).to_string())
}
