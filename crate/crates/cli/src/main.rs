mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqhe::qhe::Mode;
use cqhe::szegedy::{GraphSpec, Level};

/// Homomorphically evaluated quantum walks on a statevector simulator.
#[derive(Debug, Parser)]
#[command(name = "cqhe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a walk circuit to JSON.
    Build(BuildArgs),
    /// Closed-form T-counts of one walk step.
    Tcount(TcountArgs),
    /// Run a JSON circuit under encryption.
    RunQhe(RunQheArgs),
    /// Run walk steps on a graph under encryption and measure register 1.
    RunWalk(RunWalkArgs),
    /// Run the measured (semiclassical) walk under encryption.
    RunSemiclassical(RunSemiclassicalArgs),
    /// Compare two distribution files (or one against uniform).
    Compare(CompareArgs),
    /// Reference distributions from the dense model.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args, Clone)]
struct GraphArgs {
    /// cycle, complete or bipartite
    #[arg(long)]
    graph: String,
    /// Node count (first part for bipartite graphs)
    #[arg(long)]
    nodes: usize,
    /// Second part of a bipartite graph (defaults to --nodes)
    #[arg(long)]
    n2: Option<usize>,
}

impl GraphArgs {
    fn spec(&self) -> anyhow::Result<GraphSpec> {
        Ok(GraphSpec::from_parts(&self.graph, self.nodes, self.n2)?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BuildKind {
    Walk,
    Update,
    Diffusion,
    Semiclassical,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value = "clifford_t", value_parser = parse_level)]
    level: Level,
    #[arg(long, value_enum, default_value = "walk")]
    kind: BuildKind,
    /// Walk steps per measurement (semiclassical only)
    #[arg(long, default_value_t = 1)]
    tq: usize,
    /// Measured steps (semiclassical only)
    #[arg(long, default_value_t = 1)]
    tf: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct TcountArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Per-rotation synthesis error; rotation costs stay symbolic without it
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
struct QheArgs {
    #[arg(long, default_value = "realistic", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, default_value_t = 20000)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Output files are written as PREFIX.encrypted.csv and so on
    #[arg(long)]
    out_prefix: PathBuf,
    /// Also write PREFIX.keys.csv with one row per shot
    #[arg(long)]
    trace_keys: bool,
}

#[derive(Debug, Args)]
struct RunQheArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Gate-only circuit preparing the client's input from |0...0>
    #[arg(long)]
    init_circuit: Option<PathBuf>,
    /// Pad only qubits 0..K (the rest must start in |0>)
    #[arg(long)]
    protected: Option<usize>,
    #[command(flatten)]
    qhe: QheArgs,
}

#[derive(Debug, Args)]
struct RunWalkArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    /// Initial weights on |psi_i>, e.g. `0:0.75,4:0.25`
    #[arg(long)]
    init: String,
    #[command(flatten)]
    qhe: QheArgs,
}

#[derive(Debug, Args)]
struct RunSemiclassicalArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    tq: usize,
    #[arg(long)]
    tf: usize,
    /// Initial node distribution, e.g. `0.75,0.25`
    #[arg(long)]
    p0: String,
    #[command(flatten)]
    qhe: QheArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    first: PathBuf,
    /// A second file, or `uniform`
    second: String,
    #[arg(long, default_value_t = 0.03)]
    threshold: f64,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Register-1 distribution after a number of walk steps.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        init: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Node distribution at every measured step.
    Semiclassical {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        tq: usize,
        #[arg(long)]
        tf: usize,
        #[arg(long)]
        p0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: cqhe::szegedy::SzegedyError| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: cqhe::qhe::QheError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
