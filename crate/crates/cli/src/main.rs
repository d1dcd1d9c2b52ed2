//! `steiner`: batch front end for the Steiner hypermatrix library.
//!
//! JSON goes to stdout, tables to stderr under `--verbose`.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 entry budget exceeded,
//! 3 no certificate available, 4 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Steiner distance hypermatrices of trees")]
struct Cli {
    /// Print human-readable tables on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a uniformly random labeled tree as an edge list.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the Steiner k-matrix of a tree.
    Hypermatrix {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce and verify a certificate for the order-k hyperdeterminant.
    Certify {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        k: usize,
    },
    /// Check the order-3 polynomial identities and the inverse distance matrix.
    Identities {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Numeric nullvector search from seeded random starts.
    Search {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Candidates whose points are included in the report.
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Certificates for many random trees and orders.
    Campaign {
        /// Vertex counts, `a-b` or a single value.
        #[arg(long)]
        n_range: String,
        /// Orders, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        k: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trees_per_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct TreeArg {
    /// Edge-list file: a line `n`, then `n - 1` lines `u v` (1-based).
    #[arg(long)]
    tree: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Flat,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let v = cli.verbose;
    match cli.command {
        Command::Gen { n, seed, out } => commands::gen(n as usize, seed, out.as_deref()),
        Command::Hypermatrix { tree, k, format, out } => {
            let fmt = match format {
                Format::Json => steiner_core::hypermatrix::ExportFormat::Json,
                Format::Flat => steiner_core::hypermatrix::ExportFormat::FlatText,
            };
            commands::hypermatrix(&tree.tree, k, fmt, out.as_deref())
        }
        Command::Certify { tree, k } => commands::certify(&tree.tree, k, v),
        Command::Identities { tree } => commands::identities(&tree.tree, v),
        Command::Search { tree, k, seed, restarts, tol, top } => {
            commands::search(&tree.tree, k, seed, restarts, tol, top, v)
        }
        Command::Campaign { n_range, k, trees_per_n, seed, out } => {
            commands::campaign(&n_range, &k, trees_per_n, seed, &out, v)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
