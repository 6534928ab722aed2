use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use kex_core::corpus::RawDocument;
use kex_core::extractors::{extract, MethodId, PredictionRecord};
use kex_core::priors::Priors;
use kex_core::textproc::ProcessedDocument;
use rayon::prelude::*;

use super::{create_file, parse_methods, prepare};
use crate::config::RunConfig;
use crate::error::{io_err, CliError, CliResult};

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    /// Method name, comma-separated list, or `all`.
    #[arg(long = "method", default_value = "all")]
    pub methods: String,
    /// Priors file from `kex fit`.
    #[arg(long)]
    pub priors: Option<PathBuf>,
    /// Extract from every document of a dataset.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// JSONL output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plain-text documents; `-` or nothing reads stdin.
    pub inputs: Vec<PathBuf>,
}

fn read_input(path: &Path) -> CliResult<RawDocument> {
    let (id, text) = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| io_err(path, e))?;
        ("stdin".to_string(), s)
    } else {
        let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
        let id =
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string());
        (id, String::from_utf8_lossy(&bytes).into_owned())
    };
    Ok(RawDocument { id, text, gold: Vec::new() })
}

/// Fails early, as a usage error, when a method lacks the priors it needs.
pub fn check_priors(methods: &[MethodId], priors: Option<&Priors>) -> CliResult<()> {
    for &m in methods {
        let missing = (m.needs_term_stats() && priors.is_none())
            || (m.needs_topics() && priors.is_none_or(|p| p.topics.is_none()));
        if missing {
            return Err(CliError::Usage(format!(
                "method requires priors: {m} (pass --priors{})",
                if m.needs_topics() { " fitted with --lda" } else { "" }
            )));
        }
    }
    Ok(())
}

pub fn cmd_extract(config: &RunConfig, args: &ExtractArgs) -> CliResult<()> {
    let methods = parse_methods(&args.methods)?;
    let priors = args.priors.as_deref().map(Priors::load).transpose()?;
    check_priors(&methods, priors.as_ref())?;
    let pipeline = config.pipeline()?;

    let docs: Vec<ProcessedDocument> = if let Some(ds) = &args.dataset {
        prepare(ds, &pipeline)?.1
    } else {
        let inputs = if args.inputs.is_empty() { vec![PathBuf::from("-")] } else { args.inputs.clone() };
        inputs.iter().map(|p| read_input(p).map(|d| pipeline.process(&d))).collect::<CliResult<_>>()?
    };

    let records: Vec<PredictionRecord> = docs
        .par_iter()
        .map(|d| {
            methods
                .iter()
                .map(|&m| {
                    let phrases = extract(m, d, priors.as_ref(), &config.extractor, config.top_n)?;
                    Ok(PredictionRecord::new(&d.id, m, &phrases))
                })
                .collect::<kex_core::Result<Vec<_>>>()
        })
        .collect::<kex_core::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(create_file(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let target = args.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
    for r in &records {
        let line = serde_json::to_string(r).map_err(kex_core::Error::from)?;
        writeln!(out, "{line}").map_err(|e| io_err(&target, e))?;
    }
    out.flush().map_err(|e| io_err(&target, e))
}
