//! `discrete-gb`: curvature, indices and Euler characteristics of graphs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when neither `--seed` nor `DISCRETE_GB_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_131_115;

#[derive(Debug, Parser)]
#[command(name = "discrete-gb", version, about = "Discrete Gauss-Bonnet and Poincare-Hopf on finite simple graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for every random choice.
    #[arg(long, global = true, env = "DISCRETE_GB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a generated graph.
    Generate {
        /// Generator spec, e.g. `icosahedron`, `cycle:6`, `er:200:0.1@3`.
        spec: String,
        /// Emit the edge-list text instead of JSON.
        #[arg(long)]
        edges: bool,
    },
    /// Euler characteristic by clique counting, curvature sum or index sum.
    Chi {
        graph: String,
        #[arg(long, value_enum, default_value_t = ChiMethod::All)]
        method: ChiMethod,
    },
    /// Exact curvature of every vertex.
    Curvature { graph: String },
    /// Poincaré–Hopf and symmetric indices of one function.
    Index {
        graph: String,
        /// File of `vertex value` lines; values must be distinct.
        #[arg(long, conflicts_with = "random_order")]
        function: Option<PathBuf>,
        /// Use a uniformly random order drawn from `--seed` (default).
        #[arg(long)]
        random_order: bool,
    },
    /// Monte Carlo (and optionally exact) expectation of the index.
    Expectation {
        graph: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Add the exact subset-enumeration value per vertex.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = discrete_gb::expectation::DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        /// Add the average over all n! orders (n <= 8).
        #[arg(long)]
        permutation_oracle: bool,
    },
    /// Clique survival under site or bond decimation.
    Percolation {
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Site)]
        mode: ModeArg,
        /// Keep probability for every trial instead of p ~ U[0,1].
        #[arg(long, conflicts_with = "grid")]
        fixed_p: Option<f64>,
        /// Stratify p over this many equal-width bins.
        #[arg(long)]
        grid: Option<usize>,
        /// Include one row per trial.
        #[arg(long)]
        rows: bool,
    },
    /// Check the identities on one graph or on the built-in corpus.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Graph to check; the built-in corpus when omitted.
        graph: Option<String>,
        /// Random orders per graph.
        #[arg(long, default_value_t = 20)]
        orders: usize,
        #[arg(long, default_value_t = discrete_gb::expectation::DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        #[arg(long, default_value_t = 10_000)]
        percolation_trials: u64,
    },
    /// Time the clique and index routes to χ on random graphs.
    Bench {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        q: f64,
        /// Number of graph seeds, starting at `--seed`.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        /// Clique enumeration steps before a row is marked timeout.
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiMethod {
    Cliques,
    Curvature,
    Index,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Site,
    Bond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SuiteArg {
    GaussBonnet,
    PoincareHopf,
    Transfer,
    Intermediate,
    Stability,
    Expectation,
    Averaging,
    Percolation,
    All,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli.global, &outcome) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
