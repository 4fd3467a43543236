//! Aggregation of result rows and the files an experiment leaves behind.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use idea_evo_core::engine::SimConfig;
use idea_evo_core::landscape::LandscapeBundle;
use idea_evo_core::network::Topology;
use idea_evo_core::stats::{mann_whitney, summarize, SampleSummary};
use idea_evo_core::SimRng;

use crate::error::{HarnessError, Result};
use crate::experiment::{execute, Cell, ExperimentId, ExperimentSpec, ResultRow};

pub const CSV_HEADER: &str = "experiment,beta,xi,p,n_agents,topology,run_index,seed,convergence,mode_utility,mode_idea_index,pooled_total,distinct_types,graph_connected,wall_ms";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: Cell,
    pub convergence: SampleSummary,
    pub mode_utility: SampleSummary,
    /// Share of runs whose mode idea has true utility exactly 1.
    pub optimal_fraction: f64,
    pub connected_fraction: f64,
}

/// Per-cell statistics, in cell order. Cells without rows are skipped.
pub fn summarize_cells(cells: &[Cell], rows: &[ResultRow]) -> Result<Vec<CellSummary>> {
    let mut out = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        let mine: Vec<&ResultRow> = rows.iter().filter(|r| r.cell == i).collect();
        if mine.is_empty() {
            continue;
        }
        let conv: Vec<f64> = mine.iter().map(|r| r.convergence).collect();
        let util: Vec<f64> = mine.iter().map(|r| r.mode_utility).collect();
        let n = mine.len() as f64;
        out.push(CellSummary {
            cell: *cell,
            convergence: summarize(&conv)?,
            mode_utility: summarize(&util)?,
            optimal_fraction: util.iter().filter(|&&u| u == 1.0).count() as f64 / n,
            connected_fraction: mine.iter().filter(|r| r.graph_connected).count() as f64 / n,
        });
    }
    Ok(out)
}

/// Pairwise Mann-Whitney comparison of mode-idea utilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyComparison {
    pub first: Topology,
    pub second: Topology,
    pub u: f64,
    pub p: f64,
    pub first_median: f64,
    pub second_median: f64,
    pub first_mean: f64,
    pub second_mean: f64,
}

/// Compares SW with RD, SW with SF, and RD with SF.
pub fn compare_topologies(rows: &[ResultRow]) -> Result<Vec<TopologyComparison>> {
    let utilities =
        |t: Topology| -> Vec<f64> { rows.iter().filter(|r| r.topology == t).map(|r| r.mode_utility).collect() };
    let pairs = [
        (Topology::SmallWorld, Topology::Random),
        (Topology::SmallWorld, Topology::ScaleFree),
        (Topology::Random, Topology::ScaleFree),
    ];
    pairs
        .into_iter()
        .map(|(first, second)| {
            let (a, b) = (utilities(first), utilities(second));
            let test = mann_whitney(&a, &b)?;
            let (sa, sb) = (summarize(&a)?, summarize(&b)?);
            Ok(TopologyComparison {
                first,
                second,
                u: test.u,
                p: test.p,
                first_median: sa.median,
                second_median: sb.median,
                first_mean: sa.mean,
                second_mean: sb.mean,
            })
        })
        .collect()
}

/// Everything produced by one sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub spec: ExperimentSpec,
    pub version: String,
    pub cells: Vec<CellSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparisons: Option<Vec<TopologyComparison>>,
    #[serde(skip)]
    pub rows: Vec<ResultRow>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let rows = execute(spec)?;
    let cells = summarize_cells(&spec.cells(), &rows)?;
    let comparisons = match spec.experiment {
        ExperimentId::Hist => Some(compare_topologies(&rows)?),
        _ => None,
    };
    Ok(ExperimentOutput {
        spec: spec.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        cells,
        comparisons,
        rows,
    })
}

impl ExperimentOutput {
    /// Writes the results CSV at `path` and a JSON sidecar next to it.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        write_rows(path, &self.rows)?;
        let sidecar = sidecar_path(path);
        let file = File::create(&sidecar).map_err(|e| HarnessError::io(&sidecar, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, self).map_err(|e| HarnessError::io(&sidecar, e))?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| HarnessError::io(&sidecar, e))?;
        Ok(sidecar)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

pub fn write_rows(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_rows_to(BufWriter::new(file), rows).map_err(|e| HarnessError::io(path, e))
}

pub fn write_rows_to<W: Write>(out: W, rows: &[ResultRow]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

pub fn read_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::io(path, e))?;
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(|e| HarnessError::io(path, e))
}

/// Writes the true, master and first individual table of one seeded
/// landscape.
pub fn dump_landscape<W: Write>(cfg: &SimConfig, out: W) -> Result<()> {
    cfg.validate()?;
    let mut rng = SimRng::seed_from_u64(cfg.seed);
    let bundle = LandscapeBundle::generate(&mut rng, cfg.bits, cfg.representatives, cfg.bias, cfg.noise, 1)?;
    bundle.write_csv(out).map_err(|e| HarnessError::io("<landscape output>", e))
}
