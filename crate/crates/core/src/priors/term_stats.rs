use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::specificity::specificity;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textproc::ProcessedDocument;

/// Corpus-level term statistics over non-stopword stems.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TermStats {
    /// Number of documents.
    pub doc_count: u64,
    /// Document frequency per stem.
    pub df: BTreeMap<String, u64>,
    /// Summed in-document counts per stem.
    pub corpus_tf: BTreeMap<String, u64>,
    /// Summed document lengths.
    pub total_tokens: u64,
    /// Ids of the documents the statistics were fitted on.
    pub doc_ids: BTreeSet<String>,
}

/// `tf · log2(n_docs / df)`; zero when the word is unseen or absent.
pub fn tfidf<T: Scalar>(tf: u64, df: u64, n_docs: u64) -> T {
    if tf == 0 || df == 0 || n_docs == 0 {
        return T::zero();
    }
    let idf = (T::from_count(n_docs) / T::from_count(df)).log2();
    T::from_count(tf) * idf.max(T::zero())
}

/// The statistics one document is scored against.
///
/// For a document the stats were fitted on this is the stats themselves; for
/// any other document the reference corpus is taken to include it.
#[derive(Debug, Clone, Copy)]
pub struct StatsView<'a> {
    stats: &'a TermStats,
    external: bool,
    doc_len: u64,
}

impl<'a> StatsView<'a> {
    pub fn doc_count(&self) -> u64 {
        self.stats.doc_count + u64::from(self.external)
    }

    pub fn total_tokens(&self) -> u64 {
        self.stats.total_tokens + if self.external { self.doc_len } else { 0 }
    }

    pub fn df(&self, stem: &str, tf: u64) -> u64 {
        self.stats.df(stem) + u64::from(self.external && tf > 0)
    }

    pub fn corpus_tf(&self, stem: &str, tf: u64) -> u64 {
        self.stats.corpus_tf(stem) + if self.external { tf } else { 0 }
    }

    pub fn is_external(&self) -> bool {
        self.external
    }
}

impl TermStats {
    /// Fits statistics over `docs`.
    pub fn fit(docs: &[ProcessedDocument]) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(docs.iter().map(Self::of_document).fold(TermStats::default(), TermStats::merge))
    }

    /// Statistics of a single document.
    pub fn of_document(doc: &ProcessedDocument) -> Self {
        let counts = doc.term_counts();
        TermStats {
            doc_count: 1,
            df: counts.keys().map(|w| (w.to_string(), 1)).collect(),
            corpus_tf: counts.iter().map(|(w, &c)| (w.to_string(), c)).collect(),
            total_tokens: doc.stat_len(),
            doc_ids: BTreeSet::from([doc.id.clone()]),
        }
    }

    /// Associative, commutative combination of two disjoint corpora.
    pub fn merge(mut self, other: TermStats) -> TermStats {
        self.doc_count += other.doc_count;
        self.total_tokens += other.total_tokens;
        for (w, c) in other.df {
            *self.df.entry(w).or_insert(0) += c;
        }
        for (w, c) in other.corpus_tf {
            *self.corpus_tf.entry(w).or_insert(0) += c;
        }
        self.doc_ids.extend(other.doc_ids);
        self
    }

    pub fn df(&self, stem: &str) -> u64 {
        self.df.get(stem).copied().unwrap_or(0)
    }

    pub fn corpus_tf(&self, stem: &str) -> u64 {
        self.corpus_tf.get(stem).copied().unwrap_or(0)
    }

    pub fn vocab_size(&self) -> usize {
        self.df.len()
    }

    pub fn contains_doc(&self, id: &str) -> bool {
        self.doc_ids.contains(id)
    }

    pub fn view(&self, doc: &ProcessedDocument) -> StatsView<'_> {
        StatsView { stats: self, external: !self.contains_doc(&doc.id), doc_len: doc.stat_len() }
    }

    /// tf-idf of `stem` in `doc`.
    pub fn tfidf_score<T: Scalar>(&self, stem: &str, doc: &ProcessedDocument) -> T {
        let tf = doc.content_stems().filter(|s| *s == stem).count() as u64;
        let view = self.view(doc);
        tfidf(tf, view.df(stem, tf), view.doc_count())
    }

    /// tf-idf of every non-stopword stem of `doc`.
    pub fn tfidf_scores<T: Scalar>(&self, doc: &ProcessedDocument) -> BTreeMap<String, T> {
        let view = self.view(doc);
        doc.term_counts()
            .into_iter()
            .map(|(w, tf)| (w.to_string(), tfidf(tf, view.df(w, tf), view.doc_count())))
            .collect()
    }

    /// Lexical specificity of `stem` in `doc`; errors on inconsistent statistics.
    pub fn specificity_score<T: Scalar>(&self, stem: &str, doc: &ProcessedDocument) -> Result<T> {
        let f = doc.content_stems().filter(|s| *s == stem).count() as u64;
        let view = self.view(doc);
        specificity(view.total_tokens(), doc.stat_len(), view.corpus_tf(stem, f), f)
    }

    /// Lexical specificity of every non-stopword stem of `doc`.
    pub fn specificity_scores<T: Scalar>(&self, doc: &ProcessedDocument) -> Result<BTreeMap<String, T>> {
        let view = self.view(doc);
        let m_d = doc.stat_len();
        doc.term_counts()
            .into_iter()
            .map(|(w, f)| specificity(view.total_tokens(), m_d, view.corpus_tf(w, f), f).map(|s| (w.to_string(), s)))
            .collect()
    }
}
