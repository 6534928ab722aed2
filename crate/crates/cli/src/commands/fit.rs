use std::path::PathBuf;

use clap::Args;
use kex_core::priors::{fit_lda, Priors};

use super::{fit_term_stats, prepare};
use crate::config::RunConfig;
use crate::error::{io_err, CliError, CliResult};

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Dataset directory or JSONL file; defaults to the first configured dataset.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Also fit the LDA topic model.
    #[arg(long)]
    pub lda: bool,
    /// Priors file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also export the priors as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn cmd_fit(config: &RunConfig, args: &FitArgs) -> CliResult<()> {
    let path = args
        .dataset
        .clone()
        .or_else(|| config.datasets.first().cloned())
        .ok_or_else(|| CliError::Usage("fit needs --dataset".into()))?;
    let pipeline = config.pipeline()?;
    let (_, docs) = prepare(&path, &pipeline)?;
    let stats = fit_term_stats(&docs)?;
    println!("documents: {}", stats.doc_count);
    println!("tokens: {}", stats.total_tokens);
    println!("vocabulary: {}", stats.vocab_size());
    let mut priors = Priors::new(stats);
    if args.lda {
        let model = fit_lda(&docs, &config.lda())?;
        println!("topics: {}", model.num_topics());
        priors = priors.with_topics(model);
    }
    priors.save(&args.out)?;
    if let Some(j) = &args.json {
        std::fs::write(j, priors.to_json()?).map_err(|e| io_err(j, e))?;
    }
    Ok(())
}
