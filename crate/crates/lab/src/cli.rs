//! `distcc-lab` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use distcc_core::Execution;
use serde_json::{json, Map, Value};

use crate::experiments::{self, Report, SweepOptions};
use crate::grid::Grid;
use crate::manifest::{PointRecord, RunManifest};
use crate::{LabError, LabResult};

#[derive(Debug, Parser)]
#[command(name = "distcc-lab", version, about = "Distinguishability trade-off experiments")]
pub struct Cli {
    #[command(flatten)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// CSV destination (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the run manifest as JSON on stdout (needs --out).
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run grid points and restarts on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random access codes: minimal distinguishability per success target.
    Rac {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "0.5:1:0.05")]
        grid: String,
        /// Hierarchy level; repeat for several columns.
        #[arg(long = "level", default_values_t = [2])]
        levels: Vec<usize>,
        /// Hilbert-space dimension for the see-saw.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
    },
    /// Connected graphs on 3 and 4 vertices: classical frontier against the hierarchy.
    GraphScan {
        #[arg(long, default_value = "0.5:1:0.02")]
        grid: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Odd cycles with the regular-polygon strategy.
    Cycle {
        #[arg(long = "n", value_delimiter = ',', default_values_t = [5, 7, 9, 11])]
        ns: Vec<usize>,
    },
    /// Pair distinguishability; --grid adds a see-saw trade-off sweep.
    Pairdist {
        #[arg(long = "n", value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
        ns: Vec<usize>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
    },
    /// Hadamard graphs: log10 advantage ratio and exact small-d checks.
    Hadamard {
        #[arg(long = "d", value_delimiter = ',', default_values_t = [2, 4, 6, 8, 10, 12, 16, 201, 1124, 1128, 1462, 32768])]
        ds: Vec<usize>,
    },
    /// Noisy qubit RAC: distinguishability advantage without dimension advantage.
    Obs3,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let parsed = match Cli::try_parse_from(&args) {
        Ok(p) => p,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match execute(&args, parsed, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: &[OsString], w: Cli, stdout: &mut dyn Write) -> LabResult<()> {
    let out = &w.output;
    if out.json && out.out.is_none() {
        return Err(LabError::Args("--json prints the manifest on stdout, so the table needs --out".into()));
    }
    let execution = if out.sequential { Execution::Sequential } else { Execution::Parallel };
    let started = Instant::now();
    let mut settings = Map::new();
    let mut grid_spec = None;
    let (name, report): (&str, Report) = match &w.command {
        Command::Rac { n, d, grid, levels, dim, restarts, iterations } => {
            let g = Grid::parse(grid)?;
            let opts = SweepOptions { dim: *dim, seed: out.seed, restarts: *restarts, max_iters: *iterations, execution };
            settings.insert("n".into(), json!(n));
            settings.insert("d".into(), json!(d));
            settings.insert("levels".into(), json!(levels));
            settings.insert("dim".into(), json!(dim));
            settings.insert("restarts".into(), json!(restarts));
            settings.insert("iterations".into(), json!(iterations));
            grid_spec = Some(g.spec.clone());
            ("rac", experiments::run_rac_sweep(*n, *d, &g.points, levels, &opts)?)
        }
        Command::GraphScan { grid, level } => {
            let g = Grid::parse(grid)?;
            settings.insert("level".into(), json!(level));
            grid_spec = Some(g.spec.clone());
            ("graph-scan", experiments::run_small_graph_scan(&g.points, *level, execution)?)
        }
        Command::Cycle { ns } => {
            settings.insert("n".into(), json!(ns));
            ("cycle", experiments::run_cycle_ratio(ns)?)
        }
        Command::Pairdist { ns, grid, dim, restarts, iterations } => {
            let g = grid.as_deref().map(Grid::parse).transpose()?;
            let opts = SweepOptions { dim: *dim, seed: out.seed, restarts: *restarts, max_iters: *iterations, execution };
            settings.insert("n".into(), json!(ns));
            settings.insert("dim".into(), json!(dim));
            settings.insert("restarts".into(), json!(restarts));
            settings.insert("iterations".into(), json!(iterations));
            grid_spec = g.as_ref().map(|g| g.spec.clone());
            ("pairdist", experiments::run_pairdist(ns, g.as_ref().map(|g| g.points.as_slice()), &opts)?)
        }
        Command::Hadamard { ds } => {
            settings.insert("d".into(), json!(ds));
            ("hadamard", experiments::run_hadamard_ratio(ds)?)
        }
        Command::Obs3 => ("obs3", experiments::run_obs3_comparison()?),
    };
    settings.insert("execution".into(), Value::String(format!("{execution:?}")));

    match &out.out {
        Some(path) => report.table.write_csv(path)?,
        None => stdout
            .write_all(report.table.to_csv().as_bytes())
            .map_err(|source| LabError::Io { path: "<stdout>".into(), source })?,
    }
    if out.json {
        let manifest = RunManifest {
            command_line: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
            subcommand: name.to_string(),
            task: report.task.clone(),
            grid: grid_spec,
            seed: out.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: started.elapsed().as_secs_f64(),
            output: out.out.as_ref().map(|p| p.display().to_string()),
            settings,
            points: report.statuses().into_iter().enumerate().map(|(row, status)| PointRecord { row, status }).collect(),
            notes: report.notes.clone(),
        };
        writeln!(stdout, "{}", manifest.to_json()).map_err(|source| LabError::Io { path: "<stdout>".into(), source })?;
    }
    Ok(())
}
