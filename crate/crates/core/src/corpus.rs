//! Benchmark dataset loading, gold filtering and descriptive statistics.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::ProcessedDocument;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
    pub gold: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    /// Sorted by id.
    pub documents: Vec<RawDocument>,
    /// Non-fatal problems found while loading.
    pub warnings: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

#[derive(Deserialize)]
struct JsonlRecord {
    id: String,
    text: String,
    #[serde(default)]
    keywords: Vec<String>,
}

fn read_text(path: &Path, warnings: &mut Vec<String>) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match String::from_utf8(bytes) {
        Ok(s) => Ok(s),
        Err(e) => {
            let msg = format!("{}: invalid UTF-8, decoded lossily", path.display());
            warn!("{msg}");
            warnings.push(msg);
            Ok(String::from_utf8_lossy(e.as_bytes()).into_owned())
        }
    }
}

fn key_lines(content: &str) -> Vec<String> {
    content.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect()
}

fn dataset_name(path: &Path) -> String {
    let base = if path.is_file() { path.file_stem() } else { path.file_name() };
    base.map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".into())
}

/// Loads a dataset from a benchmark directory (`docsutf8/*.txt` plus
/// `keys/*.key`), a directory holding a single `.jsonl` file, or a `.jsonl`
/// file. Documents are sorted by id.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    let mut warnings = Vec::new();
    let mut docs = if meta.is_file() {
        load_jsonl(path, &mut warnings)?
    } else if path.join("docsutf8").is_dir() {
        load_benchmark_dir(path, &mut warnings)?
    } else {
        let jsonl: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        match jsonl.as_slice() {
            [single] => load_jsonl(single, &mut warnings)?,
            _ => {
                return Err(Error::io(
                    path,
                    std::io::Error::new(
                        std::io::ErrorKind::NotFound,
                        "expected docsutf8/ and keys/ or exactly one .jsonl file",
                    ),
                ))
            }
        }
    };

    docs.retain(|d| {
        if d.text.trim().is_empty() {
            let msg = format!("document `{}` has no text; skipped", d.id);
            warn!("{msg}");
            warnings.push(msg);
            false
        } else {
            true
        }
    });
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = docs.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::DuplicateId(w[0].id.clone()));
    }
    Ok(Dataset { name: dataset_name(path), documents: docs, warnings })
}

fn load_benchmark_dir(root: &Path, warnings: &mut Vec<String>) -> Result<Vec<RawDocument>> {
    let docs_dir = root.join("docsutf8");
    let keys_dir = root.join("keys");
    let mut docs = Vec::new();
    let entries = fs::read_dir(&docs_dir).map_err(|e| Error::io(&docs_dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(&docs_dir, e))?;
        let path = entry.path();
        if path.extension().is_none_or(|x| x != "txt") {
            continue;
        }
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let text = read_text(&path, warnings)?;
        let key_path = keys_dir.join(format!("{id}.key"));
        let gold = if key_path.is_file() {
            key_lines(&read_text(&key_path, warnings)?)
        } else {
            let msg = format!("no key file for document `{id}`; gold set is empty");
            warn!("{msg}");
            warnings.push(msg);
            Vec::new()
        };
        docs.push(RawDocument { id, text, gold });
    }
    Ok(docs)
}

fn load_jsonl(path: &Path, warnings: &mut Vec<String>) -> Result<Vec<RawDocument>> {
    let content = read_text(path, warnings)?;
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonlRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message: e.to_string(),
        })?;
        if !seen.insert(rec.id.clone()) {
            return Err(Error::DuplicateId(rec.id));
        }
        docs.push(RawDocument { id: rec.id, text: rec.text, gold: rec.keywords });
    }
    Ok(docs)
}

/// Gold keys that equal the stem key of some candidate of `doc`.
pub fn filter_gold(doc: &ProcessedDocument) -> BTreeSet<String> {
    let keys: HashSet<String> = doc.candidate_keys().collect();
    doc.gold.iter().filter(|g| keys.contains(*g)).cloned().collect()
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Summary { mean, std: var.sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub size: usize,
    pub tokens: Summary,
    pub unique_tokens: Summary,
    pub noun_phrases: Summary,
    pub gold: Summary,
    pub multiword_gold: Summary,
    /// Mean unique tokens over mean tokens.
    pub diversity: f64,
    /// Fraction of gold keys dropped by candidate filtering.
    pub gold_discard_rate: f64,
}

/// Per-dataset descriptive statistics. `processed` must be aligned with
/// `ds.documents`.
pub fn dataset_stats(ds: &Dataset, processed: &[ProcessedDocument]) -> Result<DatasetStats> {
    if processed.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if processed.len() != ds.documents.len() {
        return Err(Error::DimensionMismatch { expected: ds.documents.len(), actual: processed.len() });
    }
    let collect =
        |f: &dyn Fn(&ProcessedDocument) -> usize| -> Vec<f64> { processed.iter().map(|d| f(d) as f64).collect() };
    let tokens = collect(&|d| d.tokens.len());
    let unique = collect(&|d| d.tokens.iter().map(|t| t.surface.to_lowercase()).collect::<HashSet<_>>().len());
    let phrases = collect(&|d| d.candidates.len());
    let gold = collect(&|d| d.filtered_gold.len());
    let multi = collect(&|d| d.filtered_gold.iter().filter(|g| g.contains(' ')).count());

    let tokens = Summary::of(&tokens);
    let unique_tokens = Summary::of(&unique);
    let all_gold: usize = processed.iter().map(|d| d.gold.len()).sum();
    let kept_gold: usize = processed.iter().map(|d| d.filtered_gold.len()).sum();
    Ok(DatasetStats {
        size: processed.len(),
        diversity: if tokens.mean > 0.0 { unique_tokens.mean / tokens.mean } else { 0.0 },
        tokens,
        unique_tokens,
        noun_phrases: Summary::of(&phrases),
        gold: Summary::of(&gold),
        multiword_gold: Summary::of(&multi),
        gold_discard_rate: if all_gold > 0 { 1.0 - kept_gold as f64 / all_gold as f64 } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::Pipeline;

    fn write(dir: &Path, rel: &str, content: &str) {
        let p = dir.join(rel);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, content).unwrap();
    }

    #[test]
    fn benchmark_layout() {
        let tmp = tempfile::tempdir().unwrap();
        write(tmp.path(), "docsutf8/a.txt", "apple pie");
        write(tmp.path(), "keys/a.key", "apple pie\n");
        let ds = load_dataset(tmp.path()).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.documents[0].gold, vec!["apple pie"]);
        assert!(ds.warnings.is_empty());
    }

    #[test]
    fn missing_key_file_warns() {
        let tmp = tempfile::tempdir().unwrap();
        write(tmp.path(), "docsutf8/b.txt", "text");
        write(tmp.path(), "keys/.keep", "");
        let ds = load_dataset(tmp.path()).unwrap();
        assert!(ds.documents[0].gold.is_empty());
        assert_eq!(ds.warnings.len(), 1);
    }

    #[test]
    fn key_lines_are_trimmed_and_sorted_by_id() {
        let tmp = tempfile::tempdir().unwrap();
        write(tmp.path(), "docsutf8/z.txt", "zeta");
        write(tmp.path(), "docsutf8/m.txt", "mu");
        write(tmp.path(), "keys/z.key", "  zeta \n\n\nfoo\r\n");
        write(tmp.path(), "keys/m.key", "");
        let ds = load_dataset(tmp.path()).unwrap();
        let ids: Vec<_> = ds.documents.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, vec!["m", "z"]);
        assert_eq!(ds.documents[1].gold, vec!["zeta", "foo"]);
    }

    #[test]
    fn jsonl_and_duplicates() {
        let tmp = tempfile::tempdir().unwrap();
        let f = tmp.path().join("set.jsonl");
        fs::write(
            &f,
            "{\"id\":\"2\",\"text\":\"b\",\"keywords\":[\"x\"]}\n{\"id\":\"1\",\"text\":\"a\",\"keywords\":[]}\n",
        )
        .unwrap();
        let ds = load_dataset(&f).unwrap();
        assert_eq!(ds.name, "set");
        assert_eq!(ds.documents[0].id, "1");
        // a directory with one jsonl file works too
        let ds2 = load_dataset(tmp.path()).unwrap();
        assert_eq!(ds.documents, ds2.documents);

        fs::write(&f, "{\"id\":\"1\",\"text\":\"a\"}\n{\"id\":\"1\",\"text\":\"b\"}\n").unwrap();
        assert!(matches!(load_dataset(&f), Err(Error::DuplicateId(_))));
    }

    #[test]
    fn unreadable_path() {
        assert!(matches!(load_dataset(Path::new("/definitely/not/here")), Err(Error::Io { .. })));
    }

    #[test]
    fn invalid_utf8_is_decoded_lossily() {
        let tmp = tempfile::tempdir().unwrap();
        fs::create_dir_all(tmp.path().join("docsutf8")).unwrap();
        fs::write(tmp.path().join("docsutf8/a.txt"), b"caf\xe9 latte").unwrap();
        let ds = load_dataset(tmp.path()).unwrap();
        assert!(ds.documents[0].text.contains("latte"));
        assert_eq!(ds.warnings.len(), 2);
    }

    fn processed(pairs: &[(&str, &str, &[&str])]) -> (Dataset, Vec<ProcessedDocument>) {
        let p = Pipeline::english();
        let docs: Vec<RawDocument> = pairs
            .iter()
            .map(|(id, text, gold)| RawDocument {
                id: id.to_string(),
                text: text.to_string(),
                gold: gold.iter().map(|g| g.to_string()).collect(),
            })
            .collect();
        let proc = docs.iter().map(|d| p.process(d)).collect();
        (Dataset { name: "t".into(), documents: docs, warnings: vec![] }, proc)
    }

    #[test]
    fn filter_gold_cases() {
        let (_, docs) = processed(&[(
            "a",
            "We train neural networks on graphs.",
            &["neural networks", "Neural  Network", "deep learning", "graph"],
        )]);
        let d = &docs[0];
        let kept: Vec<_> = d.filtered_gold.iter().cloned().collect();
        assert_eq!(kept, vec!["graph", "neural network"]);
        let (_, empty) = processed(&[("b", "Nothing here.", &[])]);
        assert!(filter_gold(&empty[0]).is_empty());
    }

    #[test]
    fn stats_single_doc() {
        let (ds, docs) = processed(&[("a", "a b a", &[])]);
        let s = dataset_stats(&ds, &docs).unwrap();
        assert_eq!(s.tokens.mean, 3.0);
        assert_eq!(s.unique_tokens.mean, 2.0);
        assert!((s.diversity - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.tokens.std, 0.0);
    }

    #[test]
    fn stats_identical_docs_have_zero_std() {
        let text = "Graph kernels compare graphs. Kernel methods are popular.";
        let (ds, docs) = processed(&[("a", text, &["graph kernels"]), ("b", text, &["graph kernels"])]);
        let s = dataset_stats(&ds, &docs).unwrap();
        for sum in [s.tokens, s.unique_tokens, s.noun_phrases, s.gold, s.multiword_gold] {
            assert_eq!(sum.std, 0.0);
        }
        assert_eq!(s.gold.mean, 1.0);
        assert_eq!(s.multiword_gold.mean, 1.0);
    }

    #[test]
    fn stats_population_std() {
        let (ds, docs) = processed(&[("a", "x", &[]), ("b", "x y z", &[])]);
        let s = dataset_stats(&ds, &docs).unwrap();
        assert_eq!(s.tokens.mean, 2.0);
        assert_eq!(s.tokens.std, 1.0);
    }

    #[test]
    fn stats_empty_dataset_errors() {
        let ds = Dataset { name: "e".into(), documents: vec![], warnings: vec![] };
        assert!(matches!(dataset_stats(&ds, &[]), Err(Error::EmptyDataset)));
    }

    #[test]
    fn diversity_from_table_means() {
        // KPCrowd row: 197 / 447
        let d = 197.0 / 447.0;
        assert!((d - 0.44_f64).abs() < 0.005);
    }
}
