use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

mod config;
mod experiments;
mod output;
mod plot;

use config::ConfigFlags;
use experiments::{Figure, Model};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

/// SHA-256 hex digest of a value's compact JSON form.
pub fn hash_json<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("value serializes");
    Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Parser)]
#[command(name = "gmin", version, about = "Grover minimization over group orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Out {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Full state-vector simulation of a batch of trials.
    Run {
        #[command(flatten)]
        flags: ConfigFlags,
        #[command(flatten)]
        out: Out,
    },
    /// Classical Monte Carlo of the noise-free algorithm on addition mod 2^n.
    Mc {
        #[command(flatten)]
        flags: ConfigFlags,
        #[command(flatten)]
        out: Out,
    },
    /// Monte Carlo rate fits over a (beta, gamma) grid.
    Survey {
        #[command(flatten)]
        flags: ConfigFlags,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 0.8, 0.95])]
        betas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.05, 1.1, 1.15, 1.2, 1.25, 1.3])]
        gammas: Vec<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// Refit the rate parameter from a stored curve.csv.
    Fit {
        /// A curve.csv with columns T,P,M,N.
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Block-diagonalize a symmetric Hamiltonian and compare with the dense spectrum.
    Blocks {
        #[arg(long, value_enum, default_value_t = Model::Heisenberg)]
        model: Model,
        /// Bits for `cycle`, sites for the chains.
        #[arg(long, default_value_t = 6)]
        size: u32,
        #[command(flatten)]
        out: Out,
    },
    /// Regenerate the data and plots behind one of the standard figures.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        /// Multiplier on the default trial counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { flags, out } => experiments::run(&flags.resolve()?, &out.out),
        Command::Mc { flags, out } => experiments::mc(&flags.resolve()?, &out.out),
        Command::Survey { flags, betas, gammas, out } => {
            experiments::survey(&flags.resolve()?, &betas, &gammas, &out.out)
        }
        Command::Fit { input, out } => experiments::fit(&input, &out.out),
        Command::Blocks { model, size, out } => experiments::blocks(model, size, &out.out),
        Command::Reproduce { figure, scale, seed, out } => experiments::reproduce(figure, scale, seed, &out.out),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
