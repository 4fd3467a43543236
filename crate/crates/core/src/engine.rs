//! A single simulation run: initialization, the shuffled round-robin loop,
//! and scoring of the final pooled population.
//!
//! All randomness comes from one generator seeded by [`SimConfig::seed`],
//! consumed in a fixed order: landscape, network, initial ideas, then per
//! iteration the agent permutation followed by each agent's action draws.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, invalid, Error, Result};
use crate::landscape::{check_bits, space_size, Idea, LandscapeBundle, UtilityTable};
use crate::metrics::{convergence, decision_quality, entropy, mode_idea, PooledPopulation};
use crate::network::{is_connected, Graph, Topology};
use crate::population::{act, choose_action, AgentState, OperatorKind, OperatorParams};
use crate::SimRng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Problem-space dimensionality `M`.
    pub bits: u32,
    /// Representative ideas used to build the landscapes.
    pub representatives: usize,
    pub operators: OperatorParams,
    /// Probability of choosing a selection-oriented operator.
    pub selection: f64,
    pub n_agents: usize,
    pub topology: Topology,
    /// Ideas each agent starts with.
    pub initial_ideas: usize,
    /// Group-level bias `beta`.
    pub bias: f64,
    /// Within-group noise `xi`.
    pub noise: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            bits: 10,
            representatives: 10,
            operators: OperatorParams::default(),
            selection: 0.5,
            n_agents: 5,
            topology: Topology::Complete,
            initial_ideas: 5,
            bias: 0.0,
            noise: 0.2,
            iterations: 60,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        check_bits(self.bits)?;
        if self.representatives < 2 || self.representatives > space_size(self.bits) {
            return invalid(format!(
                "representative count {} must lie in 2..={}",
                self.representatives,
                space_size(self.bits)
            ));
        }
        self.operators.validate()?;
        check_probability("selection probability", self.selection)?;
        check_probability("bias", self.bias)?;
        check_probability("noise", self.noise)?;
        let min_agents = if self.topology == Topology::Complete { 2 } else { 5 };
        if self.n_agents < min_agents {
            return invalid(format!("{} topology needs at least {min_agents} agents", self.topology));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub config: SimConfig,
    /// Hidden from agents; consulted only when scoring.
    pub true_table: UtilityTable,
    pub master_table: UtilityTable,
    pub graph: Graph,
    pub agents: Vec<AgentState>,
    pub iteration: usize,
    /// Actions executed so far.
    pub actions: u64,
    /// Net change of the pooled copy count since initialization.
    pub pooled_delta: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub convergence: f64,
    pub mode_utility: f64,
    pub mode_idea_index: u32,
    pub pooled_total: u64,
    pub distinct_types: usize,
    pub graph_connected: bool,
    pub seed: u64,
}

pub fn init_run(cfg: &SimConfig, rng: &mut SimRng) -> Result<SimState> {
    cfg.validate()?;
    let landscape = LandscapeBundle::generate(rng, cfg.bits, cfg.representatives, cfg.bias, cfg.noise, cfg.n_agents)?;
    let graph = cfg.topology.generate(cfg.n_agents, rng)?;
    let LandscapeBundle { true_table, master_table, individual_tables, .. } = landscape;
    let mut agents: Vec<AgentState> =
        individual_tables.into_iter().enumerate().map(|(id, table)| AgentState::new(id, table)).collect();
    for agent in &mut agents {
        for _ in 0..cfg.initial_ideas {
            agent.ideas.add(Idea::random(rng, cfg.bits));
        }
    }
    Ok(SimState { config: *cfg, true_table, master_table, graph, agents, iteration: 0, actions: 0, pooled_delta: 0 })
}

impl SimState {
    /// One iteration: every agent acts once, in a freshly shuffled order.
    pub fn step(&mut self, rng: &mut SimRng) -> Result<()> {
        if self.iteration >= self.config.iterations {
            return invalid(format!("run already finished {} iterations", self.iteration));
        }
        let mut order: Vec<usize> = (0..self.agents.len()).collect();
        order.shuffle(rng);
        for actor in order {
            let kind = choose_action(self.config.selection, rng)?;
            self.pooled_delta += self.act(kind, actor, rng)?;
            self.actions += 1;
        }
        self.iteration += 1;
        Ok(())
    }

    /// Applies `kind` for `actor`. An agent with no ideas instead invents one
    /// random idea for itself.
    pub fn act(&mut self, kind: OperatorKind, actor: usize, rng: &mut SimRng) -> Result<i64> {
        let neighbors = self.graph.neighbors(actor);
        match act(kind, &mut self.agents, actor, neighbors, &self.config.operators, rng) {
            Err(Error::EmptyPopulation(_)) => {
                self.agents[actor].ideas.add(Idea::random(rng, self.config.bits));
                Ok(1)
            }
            other => other,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.config.iterations
    }

    pub fn pooled(&self) -> PooledPopulation {
        PooledPopulation::pool(self.config.bits, self.agents.iter().map(|a| &a.ideas))
            .expect("agents share the configured idea length")
    }

    pub fn result(&self) -> Result<RunResult> {
        let pool = self.pooled();
        let expected = (self.config.n_agents * self.config.initial_ideas) as i64 + self.pooled_delta;
        debug_assert_eq!(pool.total() as i64, expected, "pooled copy bookkeeping");
        if pool.total() == 0 {
            return invalid("final pooled population is empty");
        }
        let h = entropy(&pool)?;
        Ok(RunResult {
            convergence: convergence(h, self.config.bits)?,
            mode_utility: decision_quality(&pool, &self.true_table)?,
            mode_idea_index: mode_idea(&pool)?.index(),
            pooled_total: pool.total(),
            distinct_types: pool.distinct(),
            graph_connected: is_connected(&self.graph),
            seed: self.config.seed,
        })
    }
}

/// Runs a full simulation from its seed and returns the final state.
pub fn simulate(cfg: &SimConfig) -> Result<SimState> {
    let mut rng = SimRng::seed_from_u64(cfg.seed);
    let mut state = init_run(cfg, &mut rng)?;
    while !state.is_finished() {
        state.step(&mut rng)?;
    }
    debug_assert_eq!(state.actions, (cfg.n_agents * cfg.iterations) as u64);
    Ok(state)
}

pub fn run(cfg: &SimConfig) -> Result<RunResult> {
    simulate(cfg)?.result()
}
