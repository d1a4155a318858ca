//! `wgp`: generate gathering instances, schedule them, and check the results.

mod commands;
mod compare;
mod error;
mod generate;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "wgp",
    version,
    about = "Wireless gathering schedules and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file (or a directory of them for `corpus`).
    Generate(generate::GenerateArgs),
    /// Schedule an instance with a greedy algorithm.
    Run(RunArgs),
    /// Solve a small instance exactly.
    Exact(ExactArgs),
    /// Check a schedule against an instance.
    Validate(ValidateArgs),
    /// Per-packet blocking-forest bounds of a greedy run, as CSV.
    Bounds(BoundsArgs),
    /// Greedy schedules against the exact optimum over a directory of instances.
    Compare(compare::CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Fifo,
    PgR,
    SigmaFifo,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Fifo => "fifo",
            Algo::PgR => "pg-r",
            Algo::SigmaFifo => "sigma-fifo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Completion,
    Flow,
}

#[derive(Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Speed for sigma-fifo; defaults to the smallest integer >= gamma/gamma0 + 1.
    #[arg(long)]
    pub sigma: Option<u32>,
    /// Print a per-packet table.
    #[arg(long)]
    pub verbose: bool,
    /// Schedule output file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    pub instance: PathBuf,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Search-node budget; overrides WGP_NODE_BUDGET.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 5)]
    pub max_packets: usize,
    #[arg(long, default_value_t = 12)]
    pub max_nodes: usize,
    /// Disable the ball-entry subset bound during search.
    #[arg(long)]
    pub no_ball_pruning: bool,
}

#[derive(Args)]
pub struct ExactArgs {
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Completion)]
    pub objective: ObjectiveArg,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Optimal schedule output file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    pub instance: PathBuf,
}

#[derive(Args)]
pub struct ValidateArgs {
    pub instance: PathBuf,
    pub schedule: PathBuf,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = Algo::Fifo)]
    pub algo: Algo,
    #[arg(long)]
    pub sigma: Option<u32>,
    /// CSV output file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    pub instance: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate::run(&a),
        Command::Run(a) => commands::run(&a),
        Command::Exact(a) => commands::exact(&a),
        Command::Validate(a) => commands::validate(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Compare(a) => compare::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
