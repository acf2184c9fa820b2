//! `relpress`: relative pressure computations on system files.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Outcome;

#[derive(Debug, Parser)]
#[command(name = "relpress", version, about = "Relative pressure of factor codes between shifts of finite type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a system file and report the standing hypotheses.
    Check {
        file: PathBuf,
    },
    /// Normalized log sums on an image word or on the file's point.
    Pressure {
        file: PathBuf,
        /// Image word, e.g. "1 2 2" or "12^3".
        #[arg(long, conflicts_with = "point", required_unless_present = "point")]
        word: Option<String>,
        /// Use the eventually periodic point of the file.
        #[arg(long, requires = "n")]
        point: bool,
        /// Window lengths (comma separated) for `--point`.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Phi)]
        mode: Mode,
    },
    /// Exact values at the periodic point with the given cycle word.
    Periodic {
        file: PathBuf,
        #[arg(long)]
        cycle: String,
    },
    /// Reproduce the five-symbol example with its divergent estimates.
    Example1 {
        #[arg(long, default_value_t = 20)]
        kmax: u32,
        /// Largest k whose exact preimage count is printed.
        #[arg(long, default_value_t = 6)]
        exact_kmax: u32,
    },
    /// Gap experiment on Markov samples (or on the file's point).
    Experiment {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,5000")]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Defaults to the seed of the file's markov section.
        #[arg(long)]
        seed: Option<u64>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "RELPRESS_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Use the file's eventually periodic point instead of sampling.
        #[arg(long)]
        point: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Phi,
    Inf,
    Sup,
    Theta,
    Corollary,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file } => commands::check(&file),
        Command::Pressure {
            file,
            word,
            point,
            n,
            mode,
        } => commands::pressure(&file, word.as_deref(), point, &n, mode.into()),
        Command::Periodic { file, cycle } => commands::periodic(&file, &cycle),
        Command::Example1 { kmax, exact_kmax } => commands::example1(kmax, exact_kmax),
        Command::Experiment {
            file,
            n_grid,
            samples,
            seed,
            out,
            jobs,
            point,
        } => commands::experiment(&commands::ExperimentArgs {
            file,
            n_grid,
            samples,
            seed,
            out,
            jobs,
            point,
        }),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl From<Mode> for relpress_core::pressure::Estimator {
    fn from(m: Mode) -> Self {
        use relpress_core::pressure::Estimator;
        match m {
            Mode::Phi => Estimator::Phi,
            Mode::Inf => Estimator::Psi,
            Mode::Sup => Estimator::PsiTilde,
            Mode::Theta => Estimator::Theta,
            Mode::Corollary => Estimator::Corollary,
        }
    }
}
