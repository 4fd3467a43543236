//! Social network generators. Every generator yields a simple undirected
//! graph with exactly `2N` edges, so the average degree is always 4.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::draw_index;
use crate::error::{invalid, Error, Result};

/// Fraction of lattice links rewired in the small-world generator.
pub const REWIRE_FRACTION: f64 = 0.1;
/// Size of the fully connected core grown by preferential attachment.
pub const SCALE_FREE_SEED: usize = 5;
const REWIRE_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from edge pairs, rejecting self-loops, duplicates and
    /// out-of-range nodes.
    pub fn from_edges(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n_nodes || v >= n_nodes {
                return invalid(format!("edge ({u}, {v}) outside {n_nodes} nodes"));
            }
            if u == v {
                return invalid(format!("self-loop at node {u}"));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return invalid(format!("duplicate edge ({u}, {v})"));
            }
        }
        Ok(Self::from_set(n_nodes, set))
    }

    fn from_set(n_nodes: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n_nodes];
        for &(u, v) in &set {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph { n_nodes, edges: set.into_iter().collect(), neighbors }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n_nodes as f64
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Writes one `u v` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return invalid(format!("complete graph needs at least 2 nodes, got {n}"));
    }
    let set = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok(Graph::from_set(n, set))
}

/// `2N` distinct links between uniformly drawn pairs.
pub fn random_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < 5 {
        return invalid(format!("{} links do not fit in a simple graph on {n} nodes", 2 * n));
    }
    let mut set = BTreeSet::new();
    while set.len() < 2 * n {
        let u = draw_index(rng, n);
        let v = draw_index(rng, n);
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    Ok(Graph::from_set(n, set))
}

/// Ring where every node links to its nearest and second-nearest neighbours.
pub fn ring_lattice(n: usize) -> Result<Graph> {
    if n < 5 {
        return invalid(format!("ring lattice needs at least 5 nodes, got {n}"));
    }
    let set = (0..n).flat_map(|i| [1, 2].map(|k| (i, (i + k) % n))).map(|(u, v)| (u.min(v), u.max(v))).collect();
    Ok(Graph::from_set(n, set))
}

pub fn small_world<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    small_world_with(n, REWIRE_FRACTION, rng).map(|(g, _)| g)
}

/// Ring lattice with `round(fraction * 2N)` distinct links rewired. For each
/// selected link one endpoint, chosen by a fair coin, moves to a random node;
/// targets that would create a self-loop or duplicate are redrawn, and a
/// link with no acceptable target after a bounded number of tries stays put.
///
/// Returns the graph and the number of links actually rewired.
pub fn small_world_with<R: Rng + ?Sized>(n: usize, fraction: f64, rng: &mut R) -> Result<(Graph, usize)> {
    if !(0.0..=1.0).contains(&fraction) {
        return invalid(format!("rewire fraction {fraction} outside [0, 1]"));
    }
    let lattice = ring_lattice(n)?;
    let mut edges = lattice.edges;
    let mut set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let count = (fraction * edges.len() as f64).round() as usize;
    let mut rewired = 0;
    for slot in index::sample(rng, edges.len(), count).into_vec() {
        let (a, b) = edges[slot];
        let anchor = if rng.gen_bool(0.5) { a } else { b };
        for _ in 0..REWIRE_ATTEMPTS {
            let target = draw_index(rng, n);
            let new = (anchor.min(target), anchor.max(target));
            if target == anchor || set.contains(&new) {
                continue;
            }
            set.remove(&(a, b));
            set.insert(new);
            edges[slot] = new;
            rewired += 1;
            break;
        }
    }
    Ok((Graph::from_set(n, set), rewired))
}

/// Preferential attachment grown from a fully connected core of five nodes.
/// Each newcomer links to two distinct existing nodes drawn in turn with
/// probability proportional to their degree when the newcomer arrives.
pub fn scale_free<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < SCALE_FREE_SEED {
        return invalid(format!("scale-free graph needs at least {SCALE_FREE_SEED} nodes, got {n}"));
    }
    let core = complete_graph(SCALE_FREE_SEED)?;
    let mut set: BTreeSet<(usize, usize)> = core.edges.iter().copied().collect();
    let mut degree = vec![0usize; n];
    for &(u, v) in &set {
        degree[u] += 1;
        degree[v] += 1;
    }
    for node in SCALE_FREE_SEED..n {
        let first = pick_by_degree(&degree[..node], None, rng);
        let second = pick_by_degree(&degree[..node], Some(first), rng);
        for target in [first, second] {
            set.insert((target, node));
            degree[target] += 1;
            degree[node] += 1;
        }
    }
    Ok(Graph::from_set(n, set))
}

fn pick_by_degree<R: Rng + ?Sized>(degree: &[usize], exclude: Option<usize>, rng: &mut R) -> usize {
    let weight = |i: usize| if Some(i) == exclude { 0 } else { degree[i] };
    let total: usize = (0..degree.len()).map(weight).sum();
    let mut ticket = draw_index(rng, total);
    for i in 0..degree.len() {
        let w = weight(i);
        if ticket < w {
            return i;
        }
        ticket -= w;
    }
    unreachable!("ticket exceeds total weight")
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n_nodes == 0 {
        return true;
    }
    let mut seen = vec![false; g.n_nodes];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &g.neighbors[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == g.n_nodes
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Topology {
    #[serde(rename = "complete")]
    Complete,
    #[serde(rename = "rd")]
    Random,
    #[serde(rename = "sw")]
    SmallWorld,
    #[serde(rename = "sf")]
    ScaleFree,
}

impl Topology {
    pub const NETWORKS: [Topology; 3] = [Topology::Random, Topology::SmallWorld, Topology::ScaleFree];

    pub fn generate<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Result<Graph> {
        match self {
            Topology::Complete => complete_graph(n),
            Topology::Random => random_graph(n, rng),
            Topology::SmallWorld => small_world(n, rng),
            Topology::ScaleFree => scale_free(n, rng),
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Topology::Complete => "complete",
            Topology::Random => "rd",
            Topology::SmallWorld => "sw",
            Topology::ScaleFree => "sf",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" => Ok(Topology::Complete),
            "rd" | "random" => Ok(Topology::Random),
            "sw" | "small-world" | "small_world" => Ok(Topology::SmallWorld),
            "sf" | "scale-free" | "scale_free" => Ok(Topology::ScaleFree),
            other => invalid(format!("unknown topology {other:?}")),
        }
    }
}
