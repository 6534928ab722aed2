//! The extraction methods: word scoring, phrase aggregation and top-n selection.

mod method;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use method::{MethodId, PriorFamily};

use crate::error::{Error, Result};
use crate::graphrank::{
    build_graph, cluster_topics, pagerank, position_prior, stat_prior, topic_graph_rank, topical_prior_with, GraphSpec,
    PageRankConfig, PriorDistribution, PriorKind, Weighting, WordGraph,
};
use crate::priors::{Priors, TermStats, TopicModel};
use crate::textproc::{CandidatePhrase, ProcessedDocument};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractorConfig {
    pub pagerank: PageRankConfig,
    /// TextRank co-occurrence window.
    pub textrank_window: usize,
    /// Window of every other word-graph method.
    pub window: usize,
    /// Keep stopwords as graph nodes.
    pub graph_all_words: bool,
    /// TopicRank clustering similarity threshold.
    pub topic_threshold: f64,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            pagerank: PageRankConfig::default(),
            textrank_window: 2,
            window: 10,
            graph_all_words: false,
            topic_threshold: 0.25,
        }
    }
}

impl ExtractorConfig {
    /// Word graph construction for a word-graph method.
    pub fn graph_spec(&self, method: MethodId) -> GraphSpec {
        let (window, weighting) = match method {
            MethodId::TextRank => (self.textrank_window, Weighting::Binary),
            _ => (self.window, Weighting::Count),
        };
        GraphSpec { window, weighting, all_words: self.graph_all_words }
    }
}

/// A selected phrase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPhrase {
    /// Stem key.
    pub phrase: String,
    pub surface: String,
    pub stems: Vec<String>,
    pub score: f64,
    /// 1-based.
    pub rank: usize,
    /// Token index of the earliest occurrence.
    pub first_position: usize,
}

fn term_stats(priors: Option<&Priors>, method: MethodId) -> Result<&TermStats> {
    priors.map(|p| &p.term_stats).ok_or_else(|| Error::MissingPriors(method.to_string()))
}

fn topics(priors: Option<&Priors>, method: MethodId) -> Result<&TopicModel> {
    priors.and_then(|p| p.topics.as_ref()).ok_or_else(|| Error::MissingPriors(format!("{method} (topic model)")))
}

/// Runs PageRank over `graph` with `prior`; an empty graph scores nothing.
pub fn rank_graph(
    graph: &WordGraph<f64>,
    prior: &PriorDistribution<f64>,
    config: &PageRankConfig,
) -> Result<BTreeMap<String, f64>> {
    if graph.is_empty() {
        return Ok(BTreeMap::new());
    }
    let r = pagerank(&graph.graph, prior, config)?;
    Ok(graph.nodes.iter().cloned().zip(r.scores).collect())
}

/// Per-stem scores of a word-level method.
pub fn score_words(
    method: MethodId,
    doc: &ProcessedDocument,
    priors: Option<&Priors>,
    config: &ExtractorConfig,
) -> Result<BTreeMap<String, f64>> {
    let owned = |m: BTreeMap<&str, u64>| m.into_iter().map(|(w, c)| (w.to_string(), c as f64)).collect();
    match method {
        MethodId::FirstN | MethodId::TopicRank => {
            Err(Error::InvalidArgument(format!("{method} ranks phrases directly and has no word scores")))
        }
        MethodId::Tf => Ok(owned(doc.term_counts())),
        MethodId::Tfidf => Ok(term_stats(priors, method)?.tfidf_scores(doc)),
        MethodId::LexSpec => term_stats(priors, method)?.specificity_scores(doc),
        _ => {
            // fail on missing priors before any graph work
            let stats = if method.needs_term_stats() { Some(term_stats(priors, method)?) } else { None };
            let model = if method.needs_topics() { Some(topics(priors, method)?) } else { None };
            let graph: WordGraph<f64> = build_graph(doc, &config.graph_spec(method))?;
            let prior = match method {
                MethodId::TextRank | MethodId::SingleRank => PriorDistribution::uniform(graph.len()),
                MethodId::PositionRank => position_prior(doc, &graph),
                MethodId::TfidfRank => stat_prior(doc, &graph, stats.expect("checked"), PriorKind::Tfidf)?,
                MethodId::LexRank => stat_prior(doc, &graph, stats.expect("checked"), PriorKind::Specificity)?,
                MethodId::SingleTpr => {
                    let model = model.expect("checked");
                    topical_prior_with(&graph, model, &model.doc_distribution(doc))?
                }
                _ => unreachable!("word-graph methods only"),
            };
            rank_graph(&graph, &prior, &config.pagerank)
        }
    }
}

/// Mean of the word scores of each candidate's stems; unscored stems count as 0.
pub fn aggregate_phrases(word_scores: &BTreeMap<String, f64>, candidates: &[CandidatePhrase]) -> Vec<f64> {
    candidates
        .iter()
        .map(|c| {
            let total: f64 = c.stems.iter().map(|s| word_scores.get(s).copied().unwrap_or(0.0)).sum();
            total / c.stems.len() as f64
        })
        .collect()
}

/// Ordering of the ranking: score descending, then earlier first occurrence,
/// then shorter key, then key.
fn rank_order(a: (&CandidatePhrase, f64), b: (&CandidatePhrase, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.first_position().cmp(&b.0.first_position())).then_with(|| {
        let (ka, kb) = (a.0.key(), b.0.key());
        ka.len().cmp(&kb.len()).then(ka.cmp(&kb))
    })
}

/// The `n` best candidates under [`rank_order`], ranked from 1.
pub fn top_n(candidates: &[CandidatePhrase], scores: &[f64], n: usize) -> Vec<ScoredPhrase> {
    assert_eq!(candidates.len(), scores.len(), "one score per candidate");
    let mut idx: Vec<usize> = (0..candidates.len()).collect();
    idx.sort_by(|&i, &j| rank_order((&candidates[i], scores[i]), (&candidates[j], scores[j])));
    idx.into_iter().take(n).enumerate().map(|(r, i)| scored(&candidates[i], scores[i], r + 1)).collect()
}

fn scored(c: &CandidatePhrase, score: f64, rank: usize) -> ScoredPhrase {
    ScoredPhrase {
        phrase: c.key(),
        surface: c.surface.clone(),
        stems: c.stems.clone(),
        score,
        rank,
        first_position: c.first_position(),
    }
}

/// The `n` earliest candidates, scored `1 / rank`.
pub fn extract_firstn(doc: &ProcessedDocument, n: usize) -> Vec<ScoredPhrase> {
    let mut cands: Vec<&CandidatePhrase> = doc.candidates.iter().collect();
    cands.sort_by_key(|c| c.first_position());
    cands.into_iter().take(n).enumerate().map(|(r, c)| scored(c, 1.0 / (r + 1) as f64, r + 1)).collect()
}

/// Clusters candidates into topics, ranks the topic graph and emits the
/// earliest member of each of the `n` best topics with the topic's score.
pub fn extract_topicrank(doc: &ProcessedDocument, n: usize, config: &ExtractorConfig) -> Result<Vec<ScoredPhrase>> {
    if doc.candidates.is_empty() {
        return Ok(Vec::new());
    }
    let clusters = cluster_topics(&doc.candidates, config.topic_threshold);
    let ranked = topic_graph_rank::<f64>(&clusters, &doc.candidates, &config.pagerank)?;
    let reps: Vec<CandidatePhrase> = clusters.iter().map(|c| doc.candidates[c.representative].clone()).collect();
    Ok(top_n(&reps, &ranked.scores, n))
}

/// Top-`n` keyphrases of `doc` by `method`.
pub fn extract(
    method: MethodId,
    doc: &ProcessedDocument,
    priors: Option<&Priors>,
    config: &ExtractorConfig,
    n: usize,
) -> Result<Vec<ScoredPhrase>> {
    match method {
        MethodId::FirstN => Ok(extract_firstn(doc, n)),
        MethodId::TopicRank => extract_topicrank(doc, n, config),
        _ => {
            let words = score_words(method, doc, priors, config)?;
            let scores = aggregate_phrases(&words, &doc.candidates);
            Ok(top_n(&doc.candidates, &scores, n))
        }
    }
}

/// One line of the predictions JSONL output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    /// Set by the benchmark harness, which writes several datasets to one file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    pub doc_id: String,
    pub method: MethodId,
    pub phrases: Vec<PhraseRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhraseRecord {
    pub surface: String,
    pub stems: Vec<String>,
    pub score: f64,
    pub rank: usize,
}

impl PredictionRecord {
    pub fn new(doc_id: &str, method: MethodId, phrases: &[ScoredPhrase]) -> Self {
        PredictionRecord {
            dataset: None,
            doc_id: doc_id.to_string(),
            method,
            phrases: phrases
                .iter()
                .map(|p| PhraseRecord {
                    surface: p.surface.clone(),
                    stems: p.stems.clone(),
                    score: p.score,
                    rank: p.rank,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RawDocument;
    use crate::textproc::{LexiconTagger, Pipeline, Pos, StopWords, TaggedToken};
    use std::sync::Arc;

    fn cand(stems: &[&str], first: usize) -> CandidatePhrase {
        CandidatePhrase {
            stems: stems.iter().map(|s| s.to_string()).collect(),
            surface: stems.join(" "),
            occurrences: vec![(first, first + stems.len())],
        }
    }

    fn noun_doc(words: &[&str]) -> ProcessedDocument {
        noun_sentences(&[words])
    }

    fn noun_sentences(sentences: &[&[&str]]) -> ProcessedDocument {
        let p =
            Pipeline::new(Arc::new(StopWords::from_words(Vec::<String>::new())), Arc::new(LexiconTagger::english()));
        let tagged: Vec<_> = sentences
            .iter()
            .enumerate()
            .flat_map(|(i, words)| {
                words.iter().map(move |w| TaggedToken { surface: w.to_string(), pos: Pos::Noun, sentence_index: i })
            })
            .collect();
        p.process_tagged("d", &tagged, &[])
    }

    #[test]
    fn tf_counts() {
        let d = noun_doc(&["a", "a", "b"]);
        let s = score_words(MethodId::Tf, &d, None, &ExtractorConfig::default()).unwrap();
        assert_eq!(s["a"], 2.0);
        assert_eq!(s["b"], 1.0);
    }

    #[test]
    fn tfidf_on_two_doc_corpus() {
        let p =
            Pipeline::new(Arc::new(StopWords::from_words(Vec::<String>::new())), Arc::new(LexiconTagger::english()));
        let docs: Vec<_> = ["apple banana apple", "banana cherry"]
            .iter()
            .enumerate()
            .map(|(i, t)| p.process(&RawDocument { id: format!("d{}", i + 1), text: t.to_string(), gold: vec![] }))
            .collect();
        let priors = Priors::new(TermStats::fit(&docs).unwrap());
        let s = score_words(MethodId::Tfidf, &docs[0], Some(&priors), &ExtractorConfig::default()).unwrap();
        assert_eq!(s["appl"], 2.0);
    }

    #[test]
    fn singlerank_symmetric_pair() {
        let d = noun_doc(&["a", "b"]);
        let s = score_words(MethodId::SingleRank, &d, None, &ExtractorConfig::default()).unwrap();
        assert!((s["a"] - 0.5).abs() < 1e-12 && (s["b"] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn missing_priors() {
        let d = noun_doc(&["a", "b"]);
        for m in [MethodId::Tfidf, MethodId::LexSpec, MethodId::TfidfRank, MethodId::LexRank, MethodId::SingleTpr] {
            let e = extract(m, &d, None, &ExtractorConfig::default(), 5).unwrap_err();
            assert!(matches!(e, Error::MissingPriors(_)), "{m}");
            assert!(e.to_string().contains("method requires priors"));
        }
    }

    #[test]
    fn aggregation() {
        let scores: BTreeMap<String, f64> =
            [("neural".into(), 0.4), ("network".into(), 0.2), ("a".into(), 0.6)].into_iter().collect();
        let c = vec![cand(&["neural", "network"], 0), cand(&["neural"], 3), cand(&["a", "b"], 5)];
        let agg = aggregate_phrases(&scores, &c);
        assert!((agg[0] - 0.3).abs() < 1e-15);
        assert_eq!(agg[1], 0.4);
        assert_eq!(agg[2], 0.3);
    }

    #[test]
    fn top_n_rules() {
        let c = vec![cand(&["x"], 0), cand(&["y"], 1)];
        let t = top_n(&c, &[0.9, 0.1], 1);
        assert_eq!((t.len(), t[0].phrase.as_str(), t[0].rank), (1, "x", 1));
        let c = vec![cand(&["y"], 7), cand(&["x"], 2)];
        let t = top_n(&c, &[0.5, 0.5], 5);
        assert_eq!(t.iter().map(|p| p.phrase.as_str()).collect::<Vec<_>>(), vec!["x", "y"]);
        assert_eq!(t[1].rank, 2);
    }

    #[test]
    fn firstn_rules() {
        let mut d = noun_doc(&[]);
        d.candidates = vec![cand(&["c"], 3), cand(&["a"], 1), cand(&["h"], 8)];
        let t = extract_firstn(&d, 2);
        assert_eq!(t.iter().map(|p| p.first_position).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(t[1].score, 0.5);
        d.candidates.clear();
        assert!(extract_firstn(&d, 5).is_empty());
    }

    #[test]
    fn topicrank_emits_earliest_member() {
        let d = noun_sentences(&[&["neural", "network"], &["graph"], &["neural", "networks"], &["graph"]]);
        let t = extract_topicrank(&d, 5, &ExtractorConfig::default()).unwrap();
        assert_eq!(t.len(), 2);
        let nn = t.iter().find(|p| p.phrase == "neural network").unwrap();
        assert_eq!(nn.surface, "neural network");
        assert_eq!(nn.first_position, 0);
    }

    #[test]
    fn empty_document_yields_nothing() {
        let d = noun_doc(&[]);
        for m in MethodId::ALL.into_iter().filter(|m| !m.needs_term_stats() && !m.needs_topics()) {
            assert!(extract(m, &d, None, &ExtractorConfig::default(), 5).unwrap().is_empty());
        }
    }

    #[test]
    fn prediction_record_json() {
        let c = vec![cand(&["graph", "kernel"], 0)];
        let r = PredictionRecord::new("d1", MethodId::LexRank, &top_n(&c, &[0.25], 1));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["method"], "LexRank");
        assert_eq!(v["phrases"][0]["stems"][1], "kernel");
        assert_eq!(v["phrases"][0]["rank"], 1);
    }
}
