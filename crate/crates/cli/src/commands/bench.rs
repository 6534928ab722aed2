use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use kex_core::corpus::dataset_stats;
use kex_core::eval::{time_methods, write_doc_csv, write_report_csv, write_timing_csv, EvalReport, Metric};
use kex_core::extractors::{extract, MethodId, PredictionRecord, ScoredPhrase};
use kex_core::priors::{fit_lda, Priors};
use log::warn;
use rayon::prelude::*;

use super::{create_dir, create_file, fit_term_stats, parse_methods, prepare};
use crate::config::RunConfig;
use crate::error::{io_err, CliError, CliResult};
use crate::table;

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Dataset directories or JSONL files; repeatable.
    #[arg(long = "dataset")]
    pub datasets: Vec<PathBuf>,
    /// Method list or `all`; defaults to the configured methods.
    #[arg(long)]
    pub methods: Option<String>,
    /// Also time every method over this many trials.
    #[arg(long = "time", value_name = "TRIALS")]
    pub trials: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything `bench` computes for one dataset.
pub struct DatasetRun {
    pub report: EvalReport,
    /// Full rankings per method, aligned with the dataset's documents.
    pub predictions: BTreeMap<MethodId, Vec<Vec<ScoredPhrase>>>,
    pub doc_ids: Vec<String>,
    pub stats: kex_core::corpus::DatasetStats,
}

/// Runs every method over one dataset with priors fitted on that dataset.
pub fn run_dataset(
    config: &RunConfig,
    path: &std::path::Path,
    methods: &[MethodId],
    trials: Option<usize>,
) -> CliResult<DatasetRun> {
    let pipeline = config.pipeline()?;
    let (ds, docs) = prepare(path, &pipeline)?;
    let priors = if methods.iter().any(|m| m.needs_term_stats() || m.needs_topics()) {
        let mut p = Priors::new(fit_term_stats(&docs)?);
        if methods.iter().any(|m| m.needs_topics()) {
            p = p.with_topics(fit_lda(&docs, &config.lda())?);
        }
        Some(p)
    } else {
        None
    };
    let mut predictions = BTreeMap::new();
    for &m in methods {
        let ranked: Vec<Vec<ScoredPhrase>> = docs
            .par_iter()
            .map(|d| extract(m, d, priors.as_ref(), &config.extractor, usize::MAX))
            .collect::<kex_core::Result<_>>()?;
        predictions.insert(m, ranked);
    }
    let mut report = EvalReport::evaluate(&ds.name, &docs, &predictions)?;
    if !report.excluded.is_empty() {
        warn!(
            "{}: {} of {} documents have no gold keyphrase among the candidates and are not scored",
            ds.name,
            report.excluded.len(),
            docs.len()
        );
    }
    if let Some(n) = trials {
        report.timing = time_methods(&docs, methods, n, &config.extractor, &config.lda(), config.top_n)?;
    }
    let stats = dataset_stats(&ds, &docs)?;
    Ok(DatasetRun { report, predictions, doc_ids: docs.iter().map(|d| d.id.clone()).collect(), stats })
}

pub fn cmd_bench(config: &RunConfig, args: &BenchArgs) -> CliResult<()> {
    let datasets = if args.datasets.is_empty() { config.datasets.clone() } else { args.datasets.clone() };
    if datasets.is_empty() {
        return Err(CliError::Usage("bench needs at least one --dataset".into()));
    }
    let methods = match &args.methods {
        Some(s) => parse_methods(s)?,
        None => config.methods.clone(),
    };
    if args.trials == Some(0) {
        return Err(CliError::Usage("--time needs at least one trial".into()));
    }
    let out_dir = args.out.clone().unwrap_or_else(|| config.output_dir.clone());
    create_dir(&out_dir)?;

    let runs: Vec<DatasetRun> =
        datasets.iter().map(|p| run_dataset(config, p, &methods, args.trials)).collect::<CliResult<_>>()?;
    let header = config.header("bench");
    let reports: Vec<EvalReport> = runs.iter().map(|r| r.report.clone()).collect();

    write_report_csv(create_file(&out_dir.join("report.csv"))?, &reports, &header)?;
    write_doc_csv(create_file(&out_dir.join("per_doc.csv"))?, &reports, &header)?;
    write_predictions(&out_dir.join("predictions.jsonl"), &runs, config.top_n)?;
    write_stats(&out_dir.join("stats.csv"), &runs, &header)?;
    if args.trials.is_some() {
        let rows: Vec<_> = reports.iter().flat_map(|r| r.timing.clone()).collect();
        write_timing_csv(create_file(&out_dir.join("timing.csv"))?, &rows, &header)?;
    }

    let columns: Vec<String> = methods.iter().map(|m| m.to_string()).collect();
    for h in &header {
        println!("# {h}");
    }
    for metric in Metric::ALL {
        let rows: Vec<(String, Vec<Option<f64>>)> =
            reports.iter().map(|r| (r.dataset.clone(), methods.iter().map(|&m| r.mean(m, metric)).collect())).collect();
        println!("{}", table::render(metric.name(), "dataset", &columns, &rows));
    }
    Ok(())
}

fn write_predictions(path: &std::path::Path, runs: &[DatasetRun], top_n: usize) -> CliResult<()> {
    let mut w = create_file(path)?;
    for run in runs {
        for (&m, ranked) in &run.predictions {
            for (id, phrases) in run.doc_ids.iter().zip(ranked) {
                let mut rec = PredictionRecord::new(id, m, &phrases[..phrases.len().min(top_n)]);
                rec.dataset = Some(run.report.dataset.clone());
                let line = serde_json::to_string(&rec).map_err(kex_core::Error::from)?;
                writeln!(w, "{line}").map_err(|e| io_err(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn write_stats(path: &std::path::Path, runs: &[DatasetRun], header: &[String]) -> CliResult<()> {
    let mut w = create_file(path)?;
    let err = |e: std::io::Error| io_err(path, e);
    for h in header {
        writeln!(w, "# {h}").map_err(err)?;
    }
    writeln!(w, "dataset,statistic,value").map_err(err)?;
    for run in runs {
        let s = &run.stats;
        let name = &run.report.dataset;
        let rows = [
            ("size", s.size as f64),
            ("tokens_mean", s.tokens.mean),
            ("tokens_std", s.tokens.std),
            ("unique_tokens_mean", s.unique_tokens.mean),
            ("unique_tokens_std", s.unique_tokens.std),
            ("noun_phrases_mean", s.noun_phrases.mean),
            ("noun_phrases_std", s.noun_phrases.std),
            ("gold_mean", s.gold.mean),
            ("gold_std", s.gold.std),
            ("multiword_gold_mean", s.multiword_gold.mean),
            ("multiword_gold_std", s.multiword_gold.std),
            ("diversity", s.diversity),
            ("gold_discard_rate", s.gold_discard_rate),
        ];
        for (k, v) in rows {
            writeln!(w, "{name},{k},{v}").map_err(err)?;
        }
    }
    w.flush().map_err(err)
}
