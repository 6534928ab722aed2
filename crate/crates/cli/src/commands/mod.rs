//! Subcommand implementations.

pub mod analyze;
pub mod bench;
pub mod extract;
pub mod fit;

use std::fs;
use std::path::Path;

use kex_core::corpus::{load_dataset, Dataset};
use kex_core::extractors::MethodId;
use kex_core::priors::TermStats;
use kex_core::textproc::{Pipeline, ProcessedDocument};
use log::info;
use rayon::prelude::*;

use crate::error::{io_err, CliError, CliResult};

/// Parses `all` or a comma-separated method list.
pub fn parse_methods(spec: &str) -> CliResult<Vec<MethodId>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(MethodId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: MethodId = part.parse().map_err(|e: kex_core::Error| CliError::Usage(e.to_string()))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    Ok(out)
}

/// Loads a dataset and preprocesses its documents in parallel.
pub fn prepare(path: &Path, pipeline: &Pipeline) -> CliResult<(Dataset, Vec<ProcessedDocument>)> {
    let ds = load_dataset(path)?;
    if ds.is_empty() {
        return Err(kex_core::Error::EmptyDataset.into());
    }
    let docs: Vec<ProcessedDocument> = ds.documents.par_iter().map(|d| pipeline.process(d)).collect();
    info!("{}: {} documents", ds.name, docs.len());
    Ok((ds, docs))
}

/// Term statistics as a parallel associative reduction.
pub fn fit_term_stats(docs: &[ProcessedDocument]) -> CliResult<TermStats> {
    if docs.is_empty() {
        return Err(kex_core::Error::EmptyCorpus.into());
    }
    Ok(docs.par_iter().map(TermStats::of_document).reduce(TermStats::default, TermStats::merge))
}

pub fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

pub fn create_file(path: &Path) -> CliResult<std::io::BufWriter<fs::File>> {
    fs::File::create(path).map(std::io::BufWriter::new).map_err(|e| io_err(path, e))
}
