use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::metrics::{mrr, precision_at_k};
use crate::error::{Error, Result};
use crate::extractors::{extract, ExtractorConfig, MethodId, PriorFamily, ScoredPhrase};
use crate::priors::{fit_lda, LdaConfig, Priors, TermStats};
use crate::textproc::ProcessedDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    P5,
    P10,
    Mrr,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::P5, Metric::P10, Metric::Mrr];

    pub fn name(self) -> &'static str {
        match self {
            Metric::P5 => "P@5",
            Metric::P10 => "P@10",
            Metric::Mrr => "MRR",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric `{s}`")))
    }
}

/// Metric values of one method on one document, in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocScores {
    pub doc_id: String,
    pub method: MethodId,
    pub p_at_5: f64,
    pub p_at_10: f64,
    pub mrr: f64,
}

impl DocScores {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::P5 => self.p_at_5,
            Metric::P10 => self.p_at_10,
            Metric::Mrr => self.mrr,
        }
    }
}

/// Mean wall-clock seconds for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    /// `tf`, `tf-idf`, `LDA` or `-`.
    pub prior: String,
    pub method: MethodId,
    pub time_prior: f64,
    pub time_total: f64,
    pub time_per_doc: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    /// Ordered by method, then by document as given.
    pub rows: Vec<DocScores>,
    /// Documents left out because their filtered gold set is empty.
    pub excluded: Vec<String>,
    pub timing: Vec<TimingRow>,
}

impl EvalReport {
    /// Scores every method's ranked predictions against the filtered gold
    /// keys. `predictions[method]` is aligned with `docs`.
    pub fn evaluate(
        dataset: &str,
        docs: &[ProcessedDocument],
        predictions: &BTreeMap<MethodId, Vec<Vec<ScoredPhrase>>>,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        for (&method, preds) in predictions {
            if preds.len() != docs.len() {
                return Err(Error::DimensionMismatch { expected: docs.len(), actual: preds.len() });
            }
            for (doc, pred) in docs.iter().zip(preds) {
                if doc.filtered_gold.is_empty() {
                    continue;
                }
                let keys: Vec<&str> = pred.iter().map(|p| p.phrase.as_str()).collect();
                rows.push(DocScores {
                    doc_id: doc.id.clone(),
                    method,
                    p_at_5: precision_at_k(&keys, &doc.filtered_gold, 5)?,
                    p_at_10: precision_at_k(&keys, &doc.filtered_gold, 10)?,
                    mrr: mrr(&keys, &doc.filtered_gold),
                });
            }
        }
        Ok(EvalReport {
            dataset: dataset.to_string(),
            rows,
            excluded: docs.iter().filter(|d| d.filtered_gold.is_empty()).map(|d| d.id.clone()).collect(),
            timing: Vec::new(),
        })
    }

    pub fn methods(&self) -> Vec<MethodId> {
        self.rows.iter().map(|r| r.method).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Per-document values of `method`, in document order.
    pub fn per_doc(&self, method: MethodId, metric: Metric) -> Vec<f64> {
        self.rows.iter().filter(|r| r.method == method).map(|r| r.get(metric)).collect()
    }

    /// Arithmetic mean over scored documents, in [0, 1].
    pub fn mean(&self, method: MethodId, metric: Metric) -> Option<f64> {
        let v = self.per_doc(method, metric);
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }
}

fn write_comments<W: Write>(w: &mut W, comments: &[String]) -> Result<()> {
    for c in comments {
        writeln!(w, "# {c}").map_err(|e| Error::io("<output>", e))?;
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// `dataset,method,metric,value` with means as percentages.
pub fn write_report_csv<W: Write>(mut w: W, reports: &[EvalReport], comments: &[String]) -> Result<()> {
    write_comments(&mut w, comments)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["dataset", "method", "metric", "value"]).map_err(csv_err)?;
    for r in reports {
        for m in r.methods() {
            for metric in Metric::ALL {
                let v = r.mean(m, metric).unwrap_or(f64::NAN) * 100.0;
                out.write_record([r.dataset.as_str(), m.name(), metric.name(), &v.to_string()]).map_err(csv_err)?;
            }
        }
    }
    out.flush().map_err(|e| Error::io("<output>", e))
}

/// Long format `dataset,doc_id,method,metric,value` with values in [0, 1].
pub fn write_doc_csv<W: Write>(mut w: W, reports: &[EvalReport], comments: &[String]) -> Result<()> {
    write_comments(&mut w, comments)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["dataset", "doc_id", "method", "metric", "value"]).map_err(csv_err)?;
    for r in reports {
        for row in &r.rows {
            for metric in Metric::ALL {
                out.write_record([
                    r.dataset.as_str(),
                    row.doc_id.as_str(),
                    row.method.name(),
                    metric.name(),
                    &row.get(metric).to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    out.flush().map_err(|e| Error::io("<output>", e))
}

/// `prior,method,time_prior,time_total,time_per_doc` in seconds.
pub fn write_timing_csv<W: Write>(mut w: W, rows: &[TimingRow], comments: &[String]) -> Result<()> {
    write_comments(&mut w, comments)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["prior", "method", "time_prior", "time_total", "time_per_doc"]).map_err(csv_err)?;
    for t in rows {
        out.write_record([
            t.prior.as_str(),
            t.method.name(),
            &t.time_prior.to_string(),
            &t.time_total.to_string(),
            &t.time_per_doc.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::io("<output>", e))
}

#[derive(Deserialize)]
struct LongRow {
    dataset: String,
    doc_id: String,
    method: String,
    metric: String,
    value: f64,
}

/// dataset -> method -> doc -> metric values, indexed by `Metric as usize`.
pub type DocTable = BTreeMap<String, BTreeMap<String, BTreeMap<String, [f64; 3]>>>;

/// Reads a long-format per-document CSV back into one table per dataset.
/// Method names are kept as written so renamed copies stay distinct.
pub fn read_doc_csv<R: Read>(r: R) -> Result<DocTable> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut out = DocTable::new();
    for row in reader.deserialize::<LongRow>() {
        let row = row.map_err(csv_err)?;
        let metric: Metric = row.metric.parse()?;
        let slot = out
            .entry(row.dataset)
            .or_default()
            .entry(row.method)
            .or_default()
            .entry(row.doc_id)
            .or_insert([f64::NAN; 3]);
        slot[metric as usize] = row.value;
    }
    Ok(out)
}

/// Mean timings over `trials` single-threaded runs.
///
/// Each trial fits the priors a method family needs (term statistics for
/// `tf` and `tf-idf`, LDA for `LDA`) and extracts every document. Graph-only
/// methods report a prior time of 0.
pub fn time_methods(
    docs: &[ProcessedDocument],
    methods: &[MethodId],
    trials: usize,
    config: &ExtractorConfig,
    lda: &LdaConfig,
    top_n: usize,
) -> Result<Vec<TimingRow>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("timing needs at least one trial".into()));
    }
    if docs.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut sums: BTreeMap<MethodId, (f64, f64)> = BTreeMap::new();
    for _ in 0..trials {
        let mut fitted: BTreeMap<PriorFamily, (Option<Priors>, f64)> = BTreeMap::new();
        for &m in methods {
            let family = m.prior_family();
            if let Entry::Vacant(slot) = fitted.entry(family) {
                let start = Instant::now();
                let priors = match family {
                    PriorFamily::None => None,
                    PriorFamily::Tf | PriorFamily::Tfidf => Some(Priors::new(TermStats::fit(docs)?)),
                    PriorFamily::Lda => Some(Priors::new(TermStats::fit(docs)?).with_topics(fit_lda(docs, lda)?)),
                };
                let secs = if family == PriorFamily::None { 0.0 } else { start.elapsed().as_secs_f64() };
                slot.insert((priors, secs));
            }
            let (priors, prior_secs) = &fitted[&family];
            let start = Instant::now();
            for d in docs {
                extract(m, d, priors.as_ref(), config, top_n)?;
            }
            let total = prior_secs + start.elapsed().as_secs_f64();
            let e = sums.entry(m).or_insert((0.0, 0.0));
            e.0 += prior_secs;
            e.1 += total;
        }
    }
    let t = trials as f64;
    Ok(methods
        .iter()
        .map(|&m| {
            let (p, total) = sums[&m];
            TimingRow {
                prior: m.prior_family().label().to_string(),
                method: m,
                time_prior: p / t,
                time_total: total / t,
                time_per_doc: total / t / docs.len() as f64,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RawDocument;
    use crate::textproc::Pipeline;

    fn docs() -> Vec<ProcessedDocument> {
        let p = Pipeline::english();
        [
            ("a", "Graph kernels compare structured data. Graph kernels are fast.", vec!["graph kernels"]),
            ("b", "The weather is nice.", vec!["sunshine"]),
        ]
        .iter()
        .map(|(id, t, g)| {
            p.process(&RawDocument {
                id: id.to_string(),
                text: t.to_string(),
                gold: g.iter().map(|s| s.to_string()).collect(),
            })
        })
        .collect()
    }

    #[test]
    fn excluded_docs_and_means() {
        let d = docs();
        let preds = BTreeMap::from([(
            MethodId::FirstN,
            d.iter().map(|x| extract(MethodId::FirstN, x, None, &Default::default(), 100).unwrap()).collect(),
        )]);
        let r = EvalReport::evaluate("t", &d, &preds).unwrap();
        assert_eq!(r.excluded, vec!["b"]);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.mean(MethodId::FirstN, Metric::Mrr), Some(1.0));
    }

    #[test]
    fn csv_round_trip() {
        let d = docs();
        let preds = BTreeMap::from([(
            MethodId::Tf,
            d.iter().map(|x| extract(MethodId::Tf, x, None, &Default::default(), 100).unwrap()).collect(),
        )]);
        let r = EvalReport::evaluate("t", &d, &preds).unwrap();
        let mut buf = Vec::new();
        write_doc_csv(&mut buf, std::slice::from_ref(&r), &["seed: 42".into()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# seed: 42\ndataset,doc_id,method,metric,value\n"));
        let back = read_doc_csv(&buf[..]).unwrap();
        assert_eq!(back["t"]["TF"]["a"][Metric::P5 as usize], r.rows[0].p_at_5);

        let mut buf = Vec::new();
        write_report_csv(&mut buf, &[r], &[]).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("t,TF,MRR,100"));
    }

    #[test]
    fn timing_structure() {
        let d = docs();
        let rows = time_methods(
            &d[..1],
            &[MethodId::FirstN, MethodId::Tfidf],
            2,
            &Default::default(),
            &LdaConfig::default(),
            10,
        )
        .unwrap();
        assert_eq!(rows[0].time_prior, 0.0);
        assert_eq!(rows[0].time_total, rows[0].time_per_doc);
        assert!(rows[1].time_prior > 0.0);
        assert_eq!(rows[1].prior, "tf-idf");
        let mut buf = Vec::new();
        write_timing_csv(&mut buf, &rows, &[]).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("prior,method,time_prior,time_total,time_per_doc\n"));
    }
}
