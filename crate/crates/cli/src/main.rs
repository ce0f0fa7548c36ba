use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use corrdist_cli::commands::{
    run_axioms, run_frechet, run_gh, run_hausdorff, run_npd, run_theorem_demo,
};
use corrdist_cli::{CliError, Format, FunctionalKind};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionalArg {
    Hausdorff,
    Gh,
    Frechet,
    Npd,
}

impl From<FunctionalArg> for FunctionalKind {
    fn from(f: FunctionalArg) -> FunctionalKind {
        match f {
            FunctionalArg::Hausdorff => FunctionalKind::Hausdorff,
            FunctionalArg::Gh => FunctionalKind::Gh,
            FunctionalArg::Frechet => FunctionalKind::Frechet,
            FunctionalArg::Npd => FunctionalKind::Npd,
        }
    }
}

/// Correspondence-based dissimilarity measures on finite models.
#[derive(Parser)]
#[command(name = "corrdist", version)]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for exhaustive enumerations; the output is identical
    /// for every value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Report rendering.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hausdorff distance between two point sets (kind "points").
    Hausdorff {
        a: PathBuf,
        b: PathBuf,
        /// Also minimize the correspondence functional by brute force and
        /// report the argmin (guarded by the enumeration size limit).
        #[arg(long)]
        via_correspondences: bool,
        /// Write the argmin correspondence as a reusable document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Gromov-Hausdorff distance between two finite metric spaces
    /// (kind "matrix", or "points" for the induced Euclidean matrix).
    Gh {
        a: PathBuf,
        b: PathBuf,
        /// Write the argmin correspondence as a reusable document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Discrete Frechet distance between two polygonal curves (kind "curve").
    Frechet {
        p: PathBuf,
        q: PathBuf,
        /// Cross-check against brute force over all monotone couplings.
        #[arg(long)]
        oracle: bool,
        /// Write the optimal coupling as a reusable document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Natural pseudo-distance between two measured spaces (kind "measured").
    Npd {
        f: PathBuf,
        g: PathBuf,
        /// Cross-check against brute force over all bijections.
        #[arg(long)]
        brute: bool,
        /// Write the argmin bijection as a reusable document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check the functional properties and pseudo-distance axioms over a
    /// directory of documents.
    Axioms {
        #[arg(long, value_enum)]
        functional: FunctionalArg,
        /// Directory of input documents; incompatible kinds are skipped.
        #[arg(long)]
        spaces: PathBuf,
        /// Random morphisms drawn per check.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Tabulate how far the powers of the interval contraction stay from
    /// the identity, and verify the cancellation steps of the divergence
    /// argument.
    TheoremDemo {
        #[arg(long, default_value_t = 60)]
        max_power: u32,
        /// Strictly increasing exponents for the cancellation walkthrough.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        subsequence: Vec<u32>,
        /// Write the highest computed power as a reusable document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format: Format = cli.format.into();
    match cli.command {
        Command::Hausdorff {
            a,
            b,
            via_correspondences,
            emit,
        } => run_hausdorff(&a, &b, via_correspondences, emit.as_deref(), cli.threads, format),
        Command::Gh { a, b, emit } => run_gh(&a, &b, emit.as_deref(), cli.threads, format),
        Command::Frechet { p, q, oracle, emit } => {
            run_frechet(&p, &q, oracle, emit.as_deref(), format)
        }
        Command::Npd { f, g, brute, emit } => run_npd(&f, &g, brute, emit.as_deref(), format),
        Command::Axioms {
            functional,
            spaces,
            trials,
        } => run_axioms(functional.into(), &spaces, trials, cli.seed, format),
        Command::TheoremDemo {
            max_power,
            subsequence,
            emit,
        } => run_theorem_demo(max_power, &subsequence, emit.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(rendered)) => {
            println!("{rendered}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            // The panic message has already gone to stderr.
            eprintln!("error: internal assertion failure");
            ExitCode::from(3)
        }
    }
}
