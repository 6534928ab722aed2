//! The `kex` command-line harness: fit priors, extract keyphrases, run
//! benchmarks and analyze their per-document results.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{CommonArgs, RunConfig, STOPWORDS_ENV};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "kex", version, about = "Unsupervised keyword extraction benchmark")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit corpus priors on a dataset and write a priors file.
    Fit(commands::fit::FitArgs),
    /// Extract keyphrases from documents as JSONL.
    Extract(commands::extract::ExtractArgs),
    /// Evaluate methods on datasets and write reports.
    Bench(commands::bench::BenchArgs),
    /// Agreement, significance and Pareto ranking from benchmark outputs.
    Analyze(commands::analyze::AnalyzeArgs),
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let env = std::env::var_os(STOPWORDS_ENV).map(PathBuf::from);
    let config = RunConfig::resolve(&cli.common, env)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Fit(a) => commands::fit::cmd_fit(&config, a),
        Command::Extract(a) => commands::extract::cmd_extract(&config, a),
        Command::Bench(a) => commands::bench::cmd_bench(&config, a),
        Command::Analyze(a) => commands::analyze::cmd_analyze(&config, a),
    })
}
