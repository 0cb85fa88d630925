//! The `citex` command line, callable in-process through [`dispatch`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod output;
mod svg;

pub const DEFAULT_SEED: u64 = 20100101;

#[derive(Parser)]
#[command(name = "citex", version, about = "Journal rankings from cross-citation matrices")]
struct Cli {
    /// Log more (repeatable)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Io {
    /// Citation data
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory
    #[arg(long, env = "CITEX_OUT", default_value = "citex-out")]
    pub out: PathBuf,
    /// matrix-csv or pair-list-csv
    #[arg(long, default_value = "matrix-csv")]
    pub format: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Citing and cited totals with self and within-list proportions
    Describe {
        #[command(flatten)]
        io: Io,
        /// Comma-separated keys counted as within-list (default: all listed journals)
        #[arg(long)]
        stat: Option<String>,
    },
    /// Impact-Factor family index from yearly counts
    Index {
        #[command(flatten)]
        io: Io,
        /// II, IF, IFno or IF5
        #[arg(long, default_value = "IF")]
        kind: String,
    },
    /// Complete-linkage clustering on correlation distance
    Cluster {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0.6)]
        cut: f64,
    },
    /// Eigenfactor and Article Influence scores
    Eigenfactor {
        #[command(flatten)]
        io: Io,
        /// CSV journal,articles
        #[arg(long)]
        articles: Option<PathBuf>,
        #[arg(long, default_value_t = citex_core::eigenfactor::DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Stigler model fit, quasi-standard errors and residual diagnostics
    Stigler {
        #[command(flatten)]
        io: Io,
        /// sum or ref:ABBREV
        #[arg(long, default_value = "sum")]
        constraint: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also write quasi-variances and per-pair approximation errors
        #[arg(long)]
        qvar: bool,
        /// Compare two journals, e.g. Bka,JASA
        #[arg(long)]
        ztest: Option<String>,
        /// Simulated replicates for the residual envelope (0 disables)
        #[arg(long, default_value_t = 99)]
        nsim: usize,
    },
    /// Ranking lasso path with TIC selection
    Lasso {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Compare unit assessment scores with mean journal scores
    Assess {
        /// Output directory
        #[arg(long, env = "CITEX_OUT", default_value = "citex-out")]
        out: PathBuf,
        /// CSV journal,score
        #[arg(long)]
        scores: PathBuf,
        /// CSV unit,journal_raw
        #[arg(long)]
        outputs: PathBuf,
        /// CSV unit,pct4,pct3,pct2,pct1,pctU
        #[arg(long)]
        profiles: PathBuf,
        /// CSV alias,abbrev
        #[arg(long)]
        aliases: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        min_coverage: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Combined table of scores, quasi-standard errors and grouped scores
    Report {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Yearly counts for II/IF/IFno/IF5 rank columns
        #[arg(long)]
        yearly: Option<PathBuf>,
        /// Article counts for the AI rank column
        #[arg(long)]
        articles: Option<PathBuf>,
        #[arg(long, default_value_t = citex_core::eigenfactor::DEFAULT_LAMBDA)]
        lambda: f64,
    },
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code: 0 on success, 2 on usage errors, 1 on computation errors.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    let result = match cli.command {
        Command::Describe { io, stat } => commands::describe(&io, stat.as_deref()),
        Command::Index { io, kind } => commands::index(&io, &kind),
        Command::Cluster { io, cut } => commands::cluster(&io, cut),
        Command::Eigenfactor { io, articles, lambda, tol } => commands::eigenfactor(&io, articles.as_deref(), lambda, tol),
        Command::Stigler { io, constraint, tol, qvar, ztest, nsim } => {
            commands::stigler(&io, &constraint, tol, qvar, ztest.as_deref(), nsim)
        }
        Command::Lasso { io, points, tol } => commands::lasso(&io, points, tol),
        Command::Assess { out, scores, outputs, profiles, aliases, min_coverage, seed } => commands::assess(
            &commands::AssessArgs { out, scores, outputs, profiles, aliases, min_coverage, seed },
        ),
        Command::Report { io, points, yearly, articles, lambda } => {
            commands::report(&io, points, yearly.as_deref(), articles.as_deref(), lambda)
        }
    };
    match result {
        Ok(manifest) => {
            log::info!("manifest {}", manifest.display());
            0
        }
        Err(e) => {
            eprintln!("citex: {e}");
            e.exit_code()
        }
    }
}
