use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use cli::{execute, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Cigar,
    Bryant,
    SurfaceFlow,
    ConeAngle,
    Verify,
    Wing,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Cigar => Command::Cigar,
            Cmd::Bryant => Command::Bryant,
            Cmd::SurfaceFlow => Command::SurfaceFlow,
            Cmd::ConeAngle => Command::ConeAngle,
            Cmd::Verify => Command::Verify,
            Cmd::Wing => Command::Wing,
        }
    }
}

/// Soliton and Ricci-flow experiments with identity checks.
#[derive(Debug, Parser)]
#[command(name = "soliton-lab", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for randomized stations and directions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = Command::from(args.command);
    match execute(command, args.config.as_deref(), &args.out, args.seed) {
        Ok(outcome) => {
            print!("{}", soliton_verify::summary(&outcome.results.reports));
            println!("wrote {} files to {}", outcome.manifest.len() + 1, args.out.display());
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("soliton-lab {command}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
