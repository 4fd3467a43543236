use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use idea_evo_core::engine::{simulate, SimConfig};
use idea_evo_core::network::Topology;
use idea_evo_harness::experiment::{DEFAULT_GRID_STEP, DEFAULT_SIZES, HISTOGRAM_SIZE};
use idea_evo_harness::report::dump_landscape;
use idea_evo_harness::{
    run_experiment, Cell, ExperimentId, ExperimentOutput, ExperimentSpec, HarnessError, Result, ResultRow,
};

#[derive(Parser)]
#[command(name = "idea-evo", version, about = "Collective decision making as idea evolution on social networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep group-level bias against within-group noise.
    Exp1(Common),
    /// Sweep selection probability against group-level bias.
    Exp2 {
        #[command(flatten)]
        common: Common,
        /// Grid step for p; defaults to --grid-step.
        #[arg(long)]
        p_step: Option<f64>,
    },
    /// Sweep group size against network topology.
    Exp3 {
        #[command(flatten)]
        common: Common,
        /// Group sizes to sweep.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Outcome distributions per topology at one group size, with
    /// Mann-Whitney comparisons.
    Hist(Common),
    /// A single run, printed as one JSON result row.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write the run's network as an edge list.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Write the true, master and one individual utility table as CSV.
    DumpLandscape(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Runs per grid cell.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// rd, sw, sf or complete.
    #[arg(long)]
    topology: Option<Topology>,
    /// Number of agents.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    /// Probability of selection-oriented actions.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
}

impl Common {
    fn apply_to_config(&self, cfg: &mut SimConfig) {
        if let Some(v) = self.beta {
            cfg.bias = v;
        }
        if let Some(v) = self.xi {
            cfg.noise = v;
        }
        if let Some(v) = self.p {
            cfg.selection = v;
        }
        if let Some(v) = self.size {
            cfg.n_agents = v;
        }
        if let Some(v) = self.topology {
            cfg.topology = v;
        }
        if let Some(v) = self.iters {
            cfg.iterations = v;
        }
        cfg.seed = self.seed;
    }

    fn apply_to_spec(&self, mut spec: ExperimentSpec) -> Result<ExperimentSpec> {
        let overrides = [
            ("beta", self.beta.is_some()),
            ("xi", self.xi.is_some()),
            ("p", self.p.is_some()),
            ("size", self.size.is_some()),
            ("topology", self.topology.is_some()),
        ];
        if let Some((name, _)) = overrides.iter().find(|(name, set)| *set && spec.swept(name)) {
            return Err(HarnessError::Config(format!("{name} is swept by {} and cannot be fixed", spec.experiment)));
        }
        self.apply_to_config(&mut spec.base);
        spec.master_seed = self.seed;
        if let Some(runs) = self.runs {
            spec.runs = runs;
        }
        if let Some(workers) = self.workers {
            spec.workers = workers;
        }
        Ok(spec)
    }

    fn step(&self) -> f64 {
        self.grid_step.unwrap_or(DEFAULT_GRID_STEP)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("idea-evo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Exp1(c) => sweep(c.apply_to_spec(ExperimentSpec::exp1(c.step())?)?, c.out),
        Command::Exp2 { common: c, p_step } => {
            let spec = ExperimentSpec::exp2(c.step(), p_step.unwrap_or(c.step()))?;
            sweep(c.apply_to_spec(spec)?, c.out)
        }
        Command::Exp3 { common: c, sizes } => {
            let spec = ExperimentSpec::exp3(sizes.unwrap_or_else(|| DEFAULT_SIZES.to_vec()));
            sweep(c.apply_to_spec(spec)?, c.out)
        }
        Command::Hist(c) => {
            let spec = ExperimentSpec::hist(c.size.unwrap_or(HISTOGRAM_SIZE));
            let c = Common { size: None, ..c };
            sweep(c.apply_to_spec(spec)?, c.out)
        }
        Command::Run { common, edges } => single_run(&common, edges.as_deref()),
        Command::DumpLandscape(c) => {
            let mut cfg = SimConfig::default();
            c.apply_to_config(&mut cfg);
            match &c.out {
                Some(path) => {
                    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
                    let mut w = BufWriter::new(file);
                    dump_landscape(&cfg, &mut w)?;
                    w.flush().map_err(|e| HarnessError::io(path, e))
                }
                None => dump_landscape(&cfg, io::stdout().lock()),
            }
        }
    }
}

fn sweep(spec: ExperimentSpec, out: Option<PathBuf>) -> Result<()> {
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", spec.experiment)));
    spec.validate()?;
    File::create(&out).map_err(|e| HarnessError::io(&out, e))?;
    let cells = spec.cells().len();
    eprintln!("{}: {cells} cells x {} runs on {} workers", spec.experiment, spec.runs, spec.workers);
    let start = Instant::now();
    let output = run_experiment(&spec)?;
    let sidecar = output.write(&out)?;
    print_summary(&output);
    eprintln!(
        "wrote {} rows to {} and {} in {:.1}s",
        output.rows.len(),
        out.display(),
        sidecar.display(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn print_summary(output: &ExperimentOutput) {
    println!("beta\txi\tp\tN\ttopology\tconvergence\tmode_utility\toptimal_fraction");
    for s in &output.cells {
        let c = &s.cell;
        println!(
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.3}",
            c.beta, c.xi, c.p, c.n_agents, c.topology, s.convergence.mean, s.mode_utility.mean, s.optimal_fraction
        );
    }
    for cmp in output.comparisons.iter().flatten() {
        println!(
            "mann-whitney {} vs {}: U={} p={:.3e} (medians {:.4} vs {:.4})",
            cmp.first, cmp.second, cmp.u, cmp.p, cmp.first_median, cmp.second_median
        );
    }
}

fn single_run(c: &Common, edges: Option<&Path>) -> Result<()> {
    let mut cfg = SimConfig::default();
    c.apply_to_config(&mut cfg);
    let start = Instant::now();
    let state = simulate(&cfg)?;
    let result = state.result()?;
    let wall_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    if let Some(path) = edges {
        let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
        let mut w = BufWriter::new(file);
        state.graph.write_edge_list(&mut w).and_then(|_| w.flush()).map_err(|e| HarnessError::io(path, e))?;
    }
    let row = ResultRow::from_result(ExperimentId::Run, 0, &Cell::from_base(&cfg), 0, &result, wall_ms);
    let json = serde_json::to_string(&row).map_err(|e| HarnessError::io("<stdout>", e))?;
    println!("{json}");
    Ok(())
}
