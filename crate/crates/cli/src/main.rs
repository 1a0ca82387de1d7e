//! `qheat`: run engine protocols, verify the inequalities behind the work
//! bounds, compute discord of a state, and sweep Werner states.
//!
//! Exit status is 0 when every checked bound holds, 1 on a violation and 2 on
//! a usage, input or parse error.

mod commands;
mod format;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qheat", version, about = "Discord-driven measurement-feedback heat engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a bundled scenario or a protocol document and report the ledger and bounds.
    Run(RunArgs),
    /// Randomized inequality suites and protocol sweep.
    Verify(VerifyArgs),
    /// Discord, classical correlation and mutual information of a state file.
    Discord(DiscordArgs),
    /// Scan a state family and emit one CSV row per parameter value.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    SzilardBell,
    SzilardProduct,
    SzilardClassical,
}

impl Scenario {
    fn name(self) -> &'static str {
        match self {
            Scenario::SzilardBell => "szilard-bell",
            Scenario::SzilardProduct => "szilard-product",
            Scenario::SzilardClassical => "szilard-classical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Inverse temperature; when given, energies are reported in absolute units.
    #[arg(long)]
    beta: Option<f64>,
    /// Points per angle in the discord grid scan.
    #[arg(long, default_value_t = qheat_core::infomeasures::DEFAULT_GRID_N)]
    grid_n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["scenario", "input"])))]
pub struct RunArgs {
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    /// Protocol document (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Number of random protocols.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Instances per inequality suite.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Reservoir dimension of the random protocols.
    #[arg(long, default_value_t = 2)]
    reservoir_dim: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    /// JSON state: a matrix, or {"matrix": ..., "layout": [...]}.
    #[arg(long)]
    input: PathBuf,
    /// Grid for the unrefined cross-check.
    #[arg(long, default_value_t = 128)]
    oracle_grid_n: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Werner states p |Ψ⁺⟩⟨Ψ⁺| + (1 - p) I/4 for p from 0 to 1.
    #[arg(long, required = true)]
    werner: bool,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => commands::run(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Discord(a) => commands::discord(&a),
        Command::Sweep(a) => commands::sweep(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
