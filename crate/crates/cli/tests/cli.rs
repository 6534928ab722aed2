use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kex_core::priors::MAGIC;
use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(rel)
}

fn kex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kex")).args(args).env_remove("KEX_STOPWORDS").output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn jsonl(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn fit_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let ds = fixture("abstracts");
    let a = tmp.path().join("a.kexp");
    let b = tmp.path().join("b.kexp");
    for out in [&a, &b] {
        let o = kex(&[
            "--topics",
            "4",
            "--lda-iterations",
            "50",
            "fit",
            "--lda",
            "--dataset",
            path_str(&ds),
            "--out",
            path_str(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(&bytes[..4], MAGIC);
    assert_eq!(bytes, std::fs::read(&b).unwrap());
}

#[test]
fn missing_dataset_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kex(&["fit", "--dataset", "/nonexistent/set", "--out", path_str(&tmp.path().join("p"))]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn statistical_method_without_priors_is_rejected() {
    let o = kex(&["extract", "--method", "tfidf", path_str(&fixture("mini/docsutf8/a.txt"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("method requires priors"), "{}", stderr(&o));
}

#[test]
fn firstn_follows_document_order() {
    let o = kex(&["--top", "5", "extract", "--method", "firstn", path_str(&fixture("mini/docsutf8/c.txt"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = jsonl(&o);
    assert_eq!(recs.len(), 1);
    let surfaces: Vec<&str> =
        recs[0]["phrases"].as_array().unwrap().iter().map(|p| p["surface"].as_str().unwrap()).collect();
    assert_eq!(surfaces, ["Solar panels", "sunlight", "Wind turbines", "electricity", "Battery storage"]);
}

#[test]
fn tfidfrank_output_is_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let priors = tmp.path().join("p.kexp");
    let ds = path_str(&fixture("abstracts")).to_string();
    assert!(kex(&["fit", "--dataset", &ds, "--out", path_str(&priors)]).status.success());
    let run = || kex(&["extract", "--method", "tfidfrank", "--priors", path_str(&priors), "--dataset", &ds]);
    let (a, b) = (run(), run());
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(jsonl(&a).len(), 12);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_covers_every_method() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kex(&[
        "--topics",
        "4",
        "--lda-iterations",
        "50",
        "bench",
        "--methods",
        "all",
        "--dataset",
        path_str(&fixture("mini")),
        "--out",
        path_str(tmp.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("# seed: 42"));
    let header = stdout.lines().find(|l| l.starts_with("dataset")).unwrap();
    assert_eq!(header.split_whitespace().count(), 12, "{header}");
    for f in ["report.csv", "per_doc.csv", "predictions.jsonl", "stats.csv"] {
        assert!(tmp.path().join(f).exists(), "{f}");
    }
}

fn bench(dir: &Path, methods: &str) {
    let o = kex(&["bench", "--methods", methods, "--dataset", path_str(&fixture("abstracts")), "--out", path_str(dir)]);
    assert!(o.status.success(), "{}", stderr(&o));
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn analyze_single_method() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    bench(&run, "tf");
    let out = tmp.path().join("an");
    let o = kex(&["analyze", path_str(&run), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let agreement = data_rows(&out.join("agreement.csv"));
    assert_eq!(agreement, vec![vec!["abstracts", "TF", "TF", "1"]]);
    let pareto = data_rows(&out.join("pareto.csv"));
    assert_eq!(pareto, vec![vec!["abstracts", "1", "TF"]]);
}

#[test]
fn analyze_duplicated_method() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    bench(&run, "firstn");
    // same scores under a second method name
    let csv = std::fs::read_to_string(run.join("per_doc.csv")).unwrap();
    let mut doubled = csv.clone();
    for line in csv.lines().filter(|l| l.contains(",FirstN,")) {
        doubled.push_str(&line.replace(",FirstN,", ",Copy,"));
        doubled.push('\n');
    }
    let per_doc = tmp.path().join("doubled.csv");
    std::fs::write(&per_doc, doubled).unwrap();
    let out = tmp.path().join("an");
    let o = kex(&["analyze", path_str(&per_doc), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p: Vec<String> = data_rows(&out.join("wilcoxon.csv")).into_iter().map(|r| r[4].clone()).collect();
    assert_eq!(p.len(), 6);
    assert!(p.iter().all(|v| v == "1"), "{p:?}");
    let fronts: Vec<String> = data_rows(&out.join("pareto.csv")).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(fronts, ["1", "1"]);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(kex(&["bench", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(kex(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_method_is_a_usage_error() {
    let o = kex(&["extract", "--method", "bogus", path_str(&fixture("mini/docsutf8/a.txt"))]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
