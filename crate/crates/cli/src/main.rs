use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Exit status for a reproduction target that did not match.
const EXIT_MISMATCH: u8 = 2;
/// Exit status for unreadable or invalid input.
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "lfsr-crt", version, about = "LFSR combiner spectra and CRT tools")]
struct Cli {
    /// Largest period that will be generated in full.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    period_limit: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate output bits from a generator spec file.
    Gen {
        spec: PathBuf,
        #[arg(short = 'n', long)]
        count: usize,
        /// Write the sequence file here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimal polynomial, linear complexity and DFT support of a sequence file.
    Analyze {
        sequence: PathBuf,
        /// Also write the spectrum CSV here.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Spectrum CSV of a sequence file over its default base.
    Dft {
        sequence: PathBuf,
        /// Field modulus (hex); the base is its canonical order-n element.
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Solve residues given as r/m tokens.
    Crt {
        #[arg(required = true, allow_hyphen_values = true)]
        residues: Vec<String>,
    },
    /// Predict a generator's spectrum from its registers' spectra.
    Predict {
        spec: PathBuf,
        /// Target field modulus (hex). Defaults to the smallest irreducible of degree ord_N(2).
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Recover register fills from a known keystream window.
    Attack {
        spec: PathBuf,
        /// Window as a string of bits.
        #[arg(long, conflicts_with = "sequence", required_unless_present = "sequence")]
        bits: Option<String>,
        /// Window taken from a sequence file.
        #[arg(long)]
        sequence: Option<PathBuf>,
        /// List every matching offset.
        #[arg(long)]
        all: bool,
    },
    /// Run a reproduction target (or `all`).
    Reproduce { id: String },
    /// Time the direct DFT against the CRT route.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 5])]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(commands::Outcome::Ok) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
