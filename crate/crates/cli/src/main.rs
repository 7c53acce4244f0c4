//! `stablelab`: generate markets and embeddings, solve and verify them, run
//! metered protocols and sweep experiments.

mod analyze;
mod failure;
mod files;
mod generate;
mod protocol;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "stablelab", version, about = "Stable matching laboratory")]
pub struct Cli {
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. Tabular commands default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a market file, optionally with a certificate sidecar.
    Generate(generate::GenerateArgs),
    /// Write the M-optimal stable marriage of a market.
    Solve(analyze::MarketArg),
    /// List every stable marriage of a market within the oracle bound.
    Enumerate(analyze::MarketArg),
    /// Report stability, blocking pairs and distance to stability.
    Verify(analyze::VerifyArgs),
    /// Run a two-party protocol and print its run record.
    Protocol(protocol::ProtocolArgs),
    /// Run many seeded trials and print one row per trial.
    Sweep(sweep::SweepArgs),
    /// Compare deferred-acceptance rejections with verifier evidence.
    OptimalityCheck(analyze::OptimalityArgs),
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let json_only = |name: &str| match cli.format {
        Some(Format::Csv) => Err(Failure::usage(format!("{name} has no csv output"))),
        _ => Ok(()),
    };
    match &cli.command {
        Command::Generate(args) => {
            json_only("generate")?;
            generate::run(cli, args)
        }
        Command::Solve(args) => {
            json_only("solve")?;
            analyze::solve(cli, args)
        }
        Command::Enumerate(args) => {
            json_only("enumerate")?;
            analyze::enumerate(cli, args)
        }
        Command::Verify(args) => {
            json_only("verify")?;
            analyze::verify(cli, args)
        }
        Command::Protocol(args) => {
            json_only("protocol")?;
            protocol::run(cli, args)
        }
        Command::Sweep(args) => sweep::run(cli, args),
        Command::OptimalityCheck(args) => {
            json_only("optimality-check")?;
            analyze::optimality(cli, args)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code)
        }
    }
}
