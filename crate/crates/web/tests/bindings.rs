use serde_json::Value;

use idea_evo_core::engine::{run, SimConfig};
use idea_evo_core::network::Topology;
use idea_evo_web::{landscape, network, simulate_run};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn landscape_has_three_full_tables() {
    let v = parse(landscape(4, 0.3, 0.2).unwrap());
    for key in ["true", "master", "individual"] {
        assert_eq!(v[key].as_array().unwrap().len(), 1024);
    }
    assert!(landscape(4, 1.5, 0.2).is_err());
}

#[test]
fn network_has_two_edges_per_node() {
    for code in ["rd", "sw", "sf", "complete"] {
        let v = parse(network(code, 12, 9).unwrap());
        let expected = if code == "complete" { 66 } else { 24 };
        assert_eq!(v["edges"].as_array().unwrap().len(), expected, "{code}");
    }
    assert!(network("mesh", 12, 9).is_err());
}

#[test]
fn simulated_run_matches_engine() {
    let v = parse(simulate_run("sw", 40, 0.2, 0.3, 0.6, 11).unwrap());
    let cfg = SimConfig {
        topology: Topology::SmallWorld,
        n_agents: 40,
        bias: 0.2,
        noise: 0.3,
        selection: 0.6,
        seed: 11,
        ..SimConfig::default()
    };
    let expected = serde_json::to_value(run(&cfg).unwrap()).unwrap();
    assert_eq!(v["result"], expected);
    let top = v["top_ideas"].as_array().unwrap();
    assert!(!top.is_empty() && top.len() <= 12);
    assert_eq!(top[0]["index"], expected["mode_idea_index"]);
    assert_eq!(top[0]["true_utility"], expected["mode_utility"]);
    assert!(top.windows(2).all(|w| w[0]["copies"].as_u64() >= w[1]["copies"].as_u64()));
    assert_eq!(v["edges"].as_array().unwrap().len(), 80);
}
