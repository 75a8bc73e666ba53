//! Command-line front end: ingestion, optimization, bounds, screening, and
//! simulation with JSON/CSV outputs.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stubborn_opt::{Error, WalkKind};

#[derive(Parser)]
#[command(
    name = "stubborn-opt",
    about = "Select stubborn-node sets that speed up convergence to consensus",
    version
)]
pub struct Cli {
    /// Edge-list file: one `u v` or `u v w` per line, `#` comments.
    #[arg(long, global = true, value_name = "PATH")]
    pub graph: Option<PathBuf>,

    /// Random-walk kind backing the objective.
    #[arg(long, global = true, value_enum, default_value_t = WalkArg::Uniform)]
    pub walk: WalkArg,

    /// Seed for sampling and simulation starts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output path; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format; defaults to json (csv for simulate).
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WalkArg {
    Uniform,
    Lazy,
    Weighted,
}

impl From<WalkArg> for WalkKind {
    fn from(w: WalkArg) -> WalkKind {
        match w {
            WalkArg::Uniform => WalkKind::Uniform,
            WalkArg::Lazy => WalkKind::Lazy,
            WalkArg::Weighted => WalkKind::Weighted,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate F, hitting-time range, and rank for each set in a file.
    Evaluate {
        /// One set per line, comma-separated node labels.
        sets: PathBuf,
        /// Explicit reference vertex cover (one set line in a file).
        #[arg(long, value_name = "PATH")]
        cover: Option<PathBuf>,
    },
    /// Find a low-F set of cardinality K by greedy extension of a starter
    /// class of near-optimal sets.
    Optimize {
        #[arg(long)]
        k: usize,
        /// Near-optimality level of the starter class, in [0, 1].
        #[arg(long, default_value_t = 0.0)]
        nu: f64,
        /// Starter cardinality (1 or 2).
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Explicit reference vertex cover (one set line in a file).
        #[arg(long, value_name = "PATH")]
        cover: Option<PathBuf>,
    },
    /// Rank K-sets by the degree surrogate without computing F.
    Screen {
        #[arg(long)]
        k: usize,
        /// Number of top sets to report.
        #[arg(long)]
        count: usize,
    },
    /// Upper bounds and their components for one set.
    Bound {
        /// Comma-separated node labels.
        set: String,
    },
    /// Consensus iteration with the set held fixed; emits the error trace.
    Simulate {
        /// Comma-separated node labels.
        set: String,
        #[arg(long)]
        steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse { .. } | Error::InvalidData(_) => 3,
                Error::InvalidArgument(_) => 2,
                Error::Numerical(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}

/// Caps the worker pool from STUBBORN_OPT_THREADS when set.
fn init_thread_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var("STUBBORN_OPT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("STUBBORN_OPT_THREADS must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}
