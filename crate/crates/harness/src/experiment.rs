//! Parameter grids and their Monte-Carlo execution.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use idea_evo_core::engine::{run, RunResult, SimConfig};
use idea_evo_core::network::Topology;

use crate::error::{HarnessError, Result};
use crate::seed::seed_for_run;

/// Group sizes swept by the network-size experiment.
pub const DEFAULT_SIZES: [usize; 8] = [5, 10, 20, 40, 80, 160, 320, 640];
pub const DEFAULT_RUNS: usize = 500;
pub const DEFAULT_GRID_STEP: f64 = 0.1;
pub const HISTOGRAM_SIZE: usize = 640;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Exp1,
    Exp2,
    Exp3,
    Hist,
    Run,
    DumpLandscape,
}

impl ExperimentId {
    pub fn code(self) -> &'static str {
        match self {
            ExperimentId::Exp1 => "exp1",
            ExperimentId::Exp2 => "exp2",
            ExperimentId::Exp3 => "exp3",
            ExperimentId::Hist => "hist",
            ExperimentId::Run => "run",
            ExperimentId::DumpLandscape => "dump-landscape",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ExperimentId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        [
            ExperimentId::Exp1,
            ExperimentId::Exp2,
            ExperimentId::Exp3,
            ExperimentId::Hist,
            ExperimentId::Run,
            ExperimentId::DumpLandscape,
        ]
        .into_iter()
        .find(|id| id.code() == s)
        .ok_or_else(|| HarnessError::Config(format!("unknown experiment {s:?}")))
    }
}

/// One swept parameter and the values it takes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Beta(Vec<f64>),
    Xi(Vec<f64>),
    P(Vec<f64>),
    Size(Vec<usize>),
    Topology(Vec<Topology>),
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Beta(_) => "beta",
            Axis::Xi(_) => "xi",
            Axis::P(_) => "p",
            Axis::Size(_) => "size",
            Axis::Topology(_) => "topology",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Beta(v) | Axis::Xi(v) | Axis::P(v) => v.len(),
            Axis::Size(v) => v.len(),
            Axis::Topology(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn set(&self, i: usize, cell: &mut Cell) {
        match self {
            Axis::Beta(v) => cell.beta = v[i],
            Axis::Xi(v) => cell.xi = v[i],
            Axis::P(v) => cell.p = v[i],
            Axis::Size(v) => cell.n_agents = v[i],
            Axis::Topology(v) => cell.topology = v[i],
        }
    }
}

/// `0, step, 2*step, ...` up to 1 inclusive (when 1 is a multiple of `step`).
pub fn unit_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(HarnessError::Config(format!("grid step must lie in (0, 1], got {step}")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    // rounding keeps 0.1 * 3 printing as 0.3
    Ok((0..=count).map(|i| (i as f64 * step * 1e12).round() / 1e12).collect())
}

/// Parameter values of one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub beta: f64,
    pub xi: f64,
    pub p: f64,
    pub n_agents: usize,
    pub topology: Topology,
}

impl Cell {
    pub fn from_base(base: &SimConfig) -> Self {
        Cell { beta: base.bias, xi: base.noise, p: base.selection, n_agents: base.n_agents, topology: base.topology }
    }

    pub fn config(&self, base: &SimConfig, seed: u64) -> SimConfig {
        SimConfig {
            bias: self.beta,
            noise: self.xi,
            selection: self.p,
            n_agents: self.n_agents,
            topology: self.topology,
            seed,
            ..*base
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentId,
    /// Values of every parameter that is not swept.
    pub base: SimConfig,
    /// Swept axes; the first axis varies slowest.
    pub grid: Vec<Axis>,
    pub runs: usize,
    pub master_seed: u64,
    #[serde(skip)]
    pub workers: usize,
}

impl ExperimentSpec {
    fn new(experiment: ExperimentId, base: SimConfig, grid: Vec<Axis>) -> Self {
        ExperimentSpec { experiment, base, grid, runs: DEFAULT_RUNS, master_seed: 1, workers: default_workers() }
    }

    /// Noise against bias on five fully connected agents with balanced
    /// behaviour.
    pub fn exp1(step: f64) -> Result<Self> {
        let values = unit_grid(step)?;
        let base = SimConfig { selection: 0.5, n_agents: 5, topology: Topology::Complete, ..SimConfig::default() };
        Ok(Self::new(ExperimentId::Exp1, base, vec![Axis::Beta(values.clone()), Axis::Xi(values)]))
    }

    /// Selection probability against bias at fixed noise 0.2.
    pub fn exp2(beta_step: f64, p_step: f64) -> Result<Self> {
        let base = SimConfig { noise: 0.2, n_agents: 5, topology: Topology::Complete, ..SimConfig::default() };
        Ok(Self::new(ExperimentId::Exp2, base, vec![Axis::Beta(unit_grid(beta_step)?), Axis::P(unit_grid(p_step)?)]))
    }

    /// Group size against network topology.
    pub fn exp3(sizes: Vec<usize>) -> Self {
        let base = SimConfig { bias: 0.0, noise: 0.2, selection: 0.5, ..SimConfig::default() };
        Self::new(ExperimentId::Exp3, base, vec![Axis::Size(sizes), Axis::Topology(Topology::NETWORKS.to_vec())])
    }

    /// Per-topology outcome distributions at one large group size.
    pub fn hist(size: usize) -> Self {
        let base = SimConfig { bias: 0.0, noise: 0.2, selection: 0.5, n_agents: size, ..SimConfig::default() };
        Self::new(ExperimentId::Hist, base, vec![Axis::Topology(Topology::NETWORKS.to_vec())])
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn swept(&self, name: &str) -> bool {
        self.grid.iter().any(|a| a.name() == name)
    }

    /// Cartesian product of the axes, first axis outermost.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = vec![Cell::from_base(&self.base)];
        for axis in &self.grid {
            cells = cells
                .into_iter()
                .flat_map(|cell| {
                    (0..axis.len()).map(move |i| {
                        let mut c = cell;
                        axis.set(i, &mut c);
                        c
                    })
                })
                .collect();
        }
        cells
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(HarnessError::Config("runs per cell must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(HarnessError::Config("worker count must be at least 1".into()));
        }
        if let Some(axis) = self.grid.iter().find(|a| a.is_empty()) {
            return Err(HarnessError::Config(format!("axis {} has no values", axis.name())));
        }
        for cell in self.cells() {
            cell.config(&self.base, 0).validate()?;
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Outcome of one run, as written to the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: ExperimentId,
    pub beta: f64,
    pub xi: f64,
    pub p: f64,
    pub n_agents: usize,
    pub topology: Topology,
    pub run_index: usize,
    pub seed: u64,
    pub convergence: f64,
    pub mode_utility: f64,
    pub mode_idea_index: u32,
    pub pooled_total: u64,
    pub distinct_types: usize,
    pub graph_connected: bool,
    pub wall_ms: f64,
    #[serde(skip)]
    pub cell: usize,
}

impl ResultRow {
    /// Runs one simulation and records it.
    pub fn simulate(
        experiment: ExperimentId,
        cell_id: usize,
        cell: &Cell,
        base: &SimConfig,
        run_index: usize,
        seed: u64,
    ) -> Result<Self> {
        let start = Instant::now();
        let result = run(&cell.config(base, seed))?;
        let wall_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
        Ok(Self::from_result(experiment, cell_id, cell, run_index, &result, wall_ms))
    }

    pub fn from_result(
        experiment: ExperimentId,
        cell_id: usize,
        cell: &Cell,
        run_index: usize,
        result: &RunResult,
        wall_ms: f64,
    ) -> Self {
        ResultRow {
            experiment,
            beta: cell.beta,
            xi: cell.xi,
            p: cell.p,
            n_agents: cell.n_agents,
            topology: cell.topology,
            run_index,
            seed: result.seed,
            convergence: result.convergence,
            mode_utility: result.mode_utility,
            mode_idea_index: result.mode_idea_index,
            pooled_total: result.pooled_total,
            distinct_types: result.distinct_types,
            graph_connected: result.graph_connected,
            wall_ms,
            cell: cell_id,
        }
    }
}

/// Runs every `(cell, run)` pair of the sweep on `spec.workers` threads.
/// Rows come back ordered by cell, then run index, whatever the worker count.
pub fn execute(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let cells = spec.cells();
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..spec.runs).map(move |r| (c, r))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(c, r)| {
                let seed = seed_for_run(spec.master_seed, c as u64, r as u64);
                ResultRow::simulate(spec.experiment, c, &cells[c], &spec.base, r, seed)
            })
            .collect()
    })
}
