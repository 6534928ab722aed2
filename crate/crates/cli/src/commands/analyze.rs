use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use kex_core::eval::{agreement, pareto_rank, read_doc_csv, DocTable, Metric, SignificanceMatrix};
use kex_core::extractors::PredictionRecord;
use log::warn;

use super::{create_dir, create_file};
use crate::config::RunConfig;
use crate::error::{io_err, CliError, CliResult};

/// Name under which documents of all inputs are pooled.
pub const POOLED: &str = "ALL";

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Bench output directories, per-document CSVs or predictions JSONL files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Metrics entering the Pareto ranking.
    #[arg(long, default_value = "P@5,MRR")]
    pub metrics: String,
    /// Significance level; overrides the configured one.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// method -> doc -> value.
type ByMethod<V> = BTreeMap<String, BTreeMap<String, V>>;
/// dataset -> method -> doc -> top-5 stem keys.
type TopSets = BTreeMap<String, ByMethod<BTreeSet<String>>>;
/// Ordered method pairs with their agreement, per dataset.
type Agreements = Vec<(String, Vec<(String, String, Option<f64>)>)>;

#[derive(Debug, Default)]
pub struct Inputs {
    pub scores: DocTable,
    pub top5: TopSets,
}

fn read_predictions(path: &Path, top5: &mut TopSets) -> CliResult<()> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PredictionRecord = serde_json::from_str(&line).map_err(|e| kex_core::Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        let keys = rec.phrases.iter().take(5).map(|p| p.stems.join(" ")).collect();
        top5.entry(rec.dataset.unwrap_or_else(|| "-".into()))
            .or_default()
            .entry(rec.method.to_string())
            .or_default()
            .insert(rec.doc_id, keys);
    }
    Ok(())
}

pub fn load_inputs(paths: &[PathBuf]) -> CliResult<Inputs> {
    let mut inputs = Inputs::default();
    let add_csv = |p: &Path, inputs: &mut Inputs| -> CliResult<()> {
        let f = std::fs::File::open(p).map_err(|e| io_err(p, e))?;
        for (ds, methods) in read_doc_csv(f)? {
            let slot = inputs.scores.entry(ds).or_default();
            for (m, docs) in methods {
                slot.entry(m).or_default().extend(docs);
            }
        }
        Ok(())
    };
    for p in paths {
        if p.is_dir() {
            let csv = p.join("per_doc.csv");
            let jsonl = p.join("predictions.jsonl");
            if !csv.exists() {
                return Err(io_err(&csv, std::io::Error::new(std::io::ErrorKind::NotFound, "missing")));
            }
            add_csv(&csv, &mut inputs)?;
            if jsonl.exists() {
                read_predictions(&jsonl, &mut inputs.top5)?;
            }
        } else if p.extension().is_some_and(|e| e == "jsonl") {
            read_predictions(p, &mut inputs.top5)?;
        } else {
            add_csv(p, &mut inputs)?;
        }
    }
    if inputs.scores.is_empty() && inputs.top5.is_empty() {
        return Err(kex_core::Error::EmptyDataset.into());
    }
    Ok(inputs)
}

/// Adds the pooled dataset when there is more than one.
fn with_pooled<V: Clone>(data: &BTreeMap<String, ByMethod<V>>) -> Vec<(String, ByMethod<V>)> {
    let mut out: Vec<_> = data.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    if data.len() > 1 {
        let mut pooled: ByMethod<V> = BTreeMap::new();
        for (ds, methods) in data {
            for (m, docs) in methods {
                let slot = pooled.entry(m.clone()).or_default();
                for (d, v) in docs {
                    slot.insert(format!("{ds}/{d}"), v.clone());
                }
            }
        }
        out.push((POOLED.to_string(), pooled));
    }
    out
}

/// Analysis of one dataset.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub dataset: String,
    pub methods: Vec<String>,
    /// Documents scored by every method.
    pub docs: usize,
    /// `[method][metric]` means over the shared documents.
    pub means: Vec<Vec<f64>>,
    pub significance: SignificanceMatrix,
    pub fronts: Vec<Vec<String>>,
}

pub fn analyze_scores(
    dataset: &str,
    methods: &BTreeMap<String, BTreeMap<String, [f64; 3]>>,
    pareto_metrics: &[Metric],
    alpha: f64,
) -> CliResult<Analysis> {
    let names: Vec<String> = methods.keys().cloned().collect();
    let shared: Vec<&String> = match methods.values().next() {
        Some(first) => first.keys().filter(|d| methods.values().all(|m| m.contains_key(*d))).collect(),
        None => Vec::new(),
    };
    let all_metrics: Vec<String> = Metric::ALL.iter().map(|m| m.to_string()).collect();
    // [method][metric][doc]
    let scores: Vec<Vec<Vec<f64>>> = names
        .iter()
        .map(|m| Metric::ALL.iter().map(|&k| shared.iter().map(|d| methods[m][*d][k as usize]).collect()).collect())
        .collect();
    let significance = SignificanceMatrix::paired(names.clone(), all_metrics, &scores, alpha)?;
    let means: Vec<Vec<f64>> = scores
        .iter()
        .map(|per_metric| {
            per_metric
                .iter()
                .map(|v| if v.is_empty() { f64::NAN } else { v.iter().sum::<f64>() / v.len() as f64 })
                .collect()
        })
        .collect();

    let mut pareto_sig =
        SignificanceMatrix::new(names.clone(), pareto_metrics.iter().map(|m| m.to_string()).collect(), alpha);
    for (k, &metric) in pareto_metrics.iter().enumerate() {
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if let Some(p) = significance.get(metric as usize, i, j) {
                    pareto_sig.set(k, i, j, p);
                }
            }
        }
    }
    let pareto_means: Vec<Vec<f64>> =
        means.iter().map(|row| pareto_metrics.iter().map(|&m| row[m as usize]).collect()).collect();
    let fronts = pareto_rank(&pareto_means, &pareto_sig);
    Ok(Analysis { dataset: dataset.to_string(), methods: names, docs: shared.len(), means, significance, fronts })
}

/// Agreement for every ordered method pair, diagonal included.
pub fn agreement_matrix(
    methods: &BTreeMap<String, BTreeMap<String, BTreeSet<String>>>,
) -> Vec<(String, String, Option<f64>)> {
    let mut out = Vec::new();
    for (a, da) in methods {
        for (b, db) in methods {
            let docs: Vec<&String> = da.keys().filter(|d| db.contains_key(*d)).collect();
            let xs: Vec<BTreeSet<String>> = docs.iter().map(|d| da[*d].clone()).collect();
            let ys: Vec<BTreeSet<String>> = docs.iter().map(|d| db[*d].clone()).collect();
            out.push((a.clone(), b.clone(), agreement(&xs, &ys).ok()));
        }
    }
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn cmd_analyze(config: &RunConfig, args: &AnalyzeArgs) -> CliResult<()> {
    let alpha = args.alpha.unwrap_or(config.alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Usage(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let pareto_metrics: Vec<Metric> = args
        .metrics
        .split(',')
        .map(|s| s.trim().parse().map_err(|e: kex_core::Error| CliError::Usage(e.to_string())))
        .collect::<CliResult<_>>()?;
    let inputs = load_inputs(&args.inputs)?;
    let out_dir = args.out.clone().unwrap_or_else(|| config.output_dir.clone());
    create_dir(&out_dir)?;
    let header = config.header("analyze");

    let analyses: Vec<Analysis> = with_pooled(&inputs.scores)
        .iter()
        .map(|(ds, methods)| analyze_scores(ds, methods, &pareto_metrics, alpha))
        .collect::<CliResult<_>>()?;
    let agreements: Agreements =
        with_pooled(&inputs.top5).iter().map(|(ds, methods)| (ds.clone(), agreement_matrix(methods))).collect();
    if inputs.top5.is_empty() {
        warn!("no predictions given; agreement matrix skipped");
    }

    let path = out_dir.join("wilcoxon.csv");
    let mut w = create_file(&path)?;
    let err = |e: std::io::Error| io_err(&path, e);
    for h in &header {
        writeln!(w, "# {h}").map_err(err)?;
    }
    writeln!(w, "# alpha: {alpha}").map_err(err)?;
    writeln!(w, "dataset,metric,method_a,method_b,p_value").map_err(err)?;
    for a in &analyses {
        for (k, metric) in Metric::ALL.iter().enumerate() {
            for (i, mi) in a.methods.iter().enumerate() {
                for (j, mj) in a.methods.iter().enumerate() {
                    if i != j {
                        let p = fmt_opt(a.significance.get(k, i, j));
                        writeln!(w, "{},{metric},{mi},{mj},{p}", a.dataset).map_err(err)?;
                    }
                }
            }
        }
    }
    w.flush().map_err(err)?;

    let path = out_dir.join("pareto.csv");
    let mut w = create_file(&path)?;
    let err = |e: std::io::Error| io_err(&path, e);
    for h in &header {
        writeln!(w, "# {h}").map_err(err)?;
    }
    writeln!(w, "dataset,front,method").map_err(err)?;
    for a in &analyses {
        for (f, front) in a.fronts.iter().enumerate() {
            for m in front {
                writeln!(w, "{},{},{m}", a.dataset, f + 1).map_err(err)?;
            }
        }
    }
    w.flush().map_err(err)?;

    let path = out_dir.join("agreement.csv");
    let mut w = create_file(&path)?;
    let err = |e: std::io::Error| io_err(&path, e);
    for h in &header {
        writeln!(w, "# {h}").map_err(err)?;
    }
    writeln!(w, "dataset,method_a,method_b,value").map_err(err)?;
    for (ds, rows) in &agreements {
        for (a, b, v) in rows {
            writeln!(w, "{ds},{a},{b},{}", fmt_opt(*v)).map_err(err)?;
        }
    }
    w.flush().map_err(err)?;

    for h in &header {
        println!("# {h}");
    }
    for a in &analyses {
        println!("== {} ({} documents)", a.dataset, a.docs);
        for (f, front) in a.fronts.iter().enumerate() {
            println!("front {}: {}", f + 1, front.join(", "));
        }
        for (k, metric) in Metric::ALL.iter().enumerate() {
            println!("Wilcoxon p-values, {metric}");
            let width = a.methods.iter().map(String::len).max().unwrap_or(0).max(6);
            print!("{:width$}", "");
            for m in &a.methods {
                print!("  {m:>width$}");
            }
            println!();
            for (i, mi) in a.methods.iter().enumerate() {
                print!("{mi:<width$}");
                for j in 0..a.methods.len() {
                    let cell = match a.significance.get(k, i, j) {
                        Some(p) => format!("{p:.2}"),
                        None if i == j => String::new(),
                        None => "NA".into(),
                    };
                    print!("  {cell:>width$}");
                }
                println!();
            }
        }
    }
    for (ds, rows) in &agreements {
        println!("== agreement, {ds}");
        let methods: Vec<&String> = rows.iter().map(|(a, _, _)| a).collect::<BTreeSet<_>>().into_iter().collect();
        let width = methods.iter().map(|m| m.len()).max().unwrap_or(0).max(5);
        print!("{:width$}", "");
        for m in &methods {
            print!("  {m:>width$}");
        }
        println!();
        for (i, a) in methods.iter().enumerate() {
            print!("{a:<width$}");
            for j in 0..methods.len() {
                let v = rows[i * methods.len() + j].2;
                let cell = v.map_or_else(|| "NA".to_string(), |x| format!("{:.1}", x * 100.0));
                print!("  {cell:>width$}");
            }
            println!();
        }
    }
    Ok(())
}
