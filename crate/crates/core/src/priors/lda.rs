//! Latent Dirichlet Allocation by collapsed Gibbs sampling.

use std::collections::BTreeMap;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::ProcessedDocument;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdaConfig {
    pub num_topics: usize,
    /// Symmetric document-topic prior.
    pub alpha: f64,
    /// Symmetric topic-word prior.
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self::with_topics(50)
    }
}

impl LdaConfig {
    /// Defaults with `k` topics and `alpha = 50 / k`.
    pub fn with_topics(k: usize) -> Self {
        LdaConfig { num_topics: k, alpha: 50.0 / k.max(1) as f64, beta: 0.01, iterations: 1000, seed: 42 }
    }

    fn validate(&self) -> Result<()> {
        if self.num_topics < 2 {
            return Err(Error::InvalidArgument(format!("LDA needs at least 2 topics, got {}", self.num_topics)));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("LDA needs at least 1 iteration".into()));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(Error::InvalidArgument("LDA priors must be positive".into()));
        }
        Ok(())
    }
}

/// A fitted topic model.
///
/// Topic-assignment counts are kept so the model round-trips exactly through
/// the priors file; probabilities are derived on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub config: LdaConfig,
    /// Per-stem topic-assignment counts, `num_topics` each.
    pub word_counts: BTreeMap<String, Vec<u32>>,
    /// P(topic | doc) for every fitted document.
    pub doc_topic: BTreeMap<String, Vec<f64>>,
}

impl TopicModel {
    /// Assembles a model from stored counts.
    pub fn from_parts(
        config: LdaConfig,
        word_counts: BTreeMap<String, Vec<u32>>,
        doc_topic: BTreeMap<String, Vec<f64>>,
    ) -> Result<Self> {
        config.validate()?;
        let k = config.num_topics;
        for row in word_counts.values() {
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, actual: row.len() });
            }
        }
        for row in doc_topic.values() {
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, actual: row.len() });
            }
        }
        Ok(TopicModel { config, word_counts, doc_topic })
    }

    pub fn num_topics(&self) -> usize {
        self.config.num_topics
    }

    pub fn vocab_size(&self) -> usize {
        self.word_counts.len()
    }

    fn topic_totals(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.num_topics()];
        for row in self.word_counts.values() {
            for (t, &c) in totals.iter_mut().zip(row) {
                *t += u64::from(c);
            }
        }
        totals
    }

    /// P(topic | word), smoothed by `beta`; `None` for unseen stems.
    pub fn word_topic(&self, stem: &str) -> Option<Vec<f64>> {
        let row = self.word_counts.get(stem)?;
        let beta = self.config.beta;
        let total: f64 = row.iter().map(|&c| f64::from(c)).sum::<f64>() + beta * row.len() as f64;
        Some(row.iter().map(|&c| (f64::from(c) + beta) / total).collect())
    }

    pub fn doc_topic(&self, id: &str) -> Option<&[f64]> {
        self.doc_topic.get(id).map(Vec::as_slice)
    }

    /// Topic distribution of `doc`: stored if it was fitted, otherwise
    /// inferred by sampling its topic assignments against the fixed model.
    pub fn doc_distribution(&self, doc: &ProcessedDocument) -> Vec<f64> {
        match self.doc_topic.get(&doc.id) {
            Some(d) => d.clone(),
            None => self.infer(doc.content_stems()),
        }
    }

    /// Fold-in inference for an unseen document. Stems outside the
    /// vocabulary are ignored. Deterministic given the model seed.
    pub fn infer<'a>(&self, stems: impl IntoIterator<Item = &'a str>) -> Vec<f64> {
        let k = self.num_topics();
        let LdaConfig { alpha, beta, seed, .. } = self.config;
        let v = self.vocab_size() as f64;
        let totals = self.topic_totals();
        let words: Vec<&[u32]> = stems.into_iter().filter_map(|s| self.word_counts.get(s).map(Vec::as_slice)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nd = vec![0u32; k];
        let mut z: Vec<usize> = words
            .iter()
            .map(|_| {
                let t = rng.gen_range(0..k);
                nd[t] += 1;
                t
            })
            .collect();
        let mut p = vec![0.0; k];
        let iterations = self.config.iterations.min(200);
        for _ in 0..iterations {
            for (i, row) in words.iter().enumerate() {
                nd[z[i]] -= 1;
                let mut acc = 0.0;
                for t in 0..k {
                    acc += (f64::from(nd[t]) + alpha) * (f64::from(row[t]) + beta) / (totals[t] as f64 + v * beta);
                    p[t] = acc;
                }
                let t = sample(&p, rng.gen::<f64>() * acc);
                z[i] = t;
                nd[t] += 1;
            }
        }
        theta(&nd, alpha)
    }
}

fn sample(cumulative: &[f64], u: f64) -> usize {
    cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
}

fn theta(counts: &[u32], alpha: f64) -> Vec<f64> {
    let n: f64 = counts.iter().map(|&c| f64::from(c)).sum();
    let denom = n + alpha * counts.len() as f64;
    counts.iter().map(|&c| (f64::from(c) + alpha) / denom).collect()
}

/// Fits LDA over the non-stopword stems of `docs`. Single-threaded so the
/// result depends only on the inputs and the seed.
pub fn fit_lda(docs: &[ProcessedDocument], config: &LdaConfig) -> Result<TopicModel> {
    config.validate()?;
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let k = config.num_topics;
    let vocab: BTreeMap<&str, usize> = {
        let mut stems: Vec<&str> = docs.iter().flat_map(|d| d.content_stems()).collect();
        stems.sort_unstable();
        stems.dedup();
        stems.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
    };
    if vocab.len() < k {
        warn!("LDA vocabulary ({} stems) is smaller than the topic count ({k})", vocab.len());
    }
    let corpus: Vec<Vec<usize>> = docs.iter().map(|d| d.content_stems().map(|s| vocab[s]).collect()).collect();

    let v = vocab.len();
    let (alpha, beta) = (config.alpha, config.beta);
    let vbeta = v as f64 * beta;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut nwk = vec![0u32; v * k];
    let mut nk = vec![0u64; k];
    let mut ndk = vec![vec![0u32; k]; docs.len()];
    let mut z: Vec<Vec<usize>> = corpus
        .iter()
        .enumerate()
        .map(|(d, words)| {
            words
                .iter()
                .map(|&w| {
                    let t = rng.gen_range(0..k);
                    nwk[w * k + t] += 1;
                    nk[t] += 1;
                    ndk[d][t] += 1;
                    t
                })
                .collect()
        })
        .collect();

    let mut p = vec![0.0; k];
    for _ in 0..config.iterations {
        for (d, words) in corpus.iter().enumerate() {
            for (i, &w) in words.iter().enumerate() {
                let old = z[d][i];
                nwk[w * k + old] -= 1;
                nk[old] -= 1;
                ndk[d][old] -= 1;
                let row = &nwk[w * k..(w + 1) * k];
                let mut acc = 0.0;
                for t in 0..k {
                    acc += (f64::from(ndk[d][t]) + alpha) * (f64::from(row[t]) + beta) / (nk[t] as f64 + vbeta);
                    p[t] = acc;
                }
                let t = sample(&p, rng.gen::<f64>() * acc);
                z[d][i] = t;
                nwk[w * k + t] += 1;
                nk[t] += 1;
                ndk[d][t] += 1;
            }
        }
    }

    let word_counts = vocab.iter().map(|(s, &i)| (s.to_string(), nwk[i * k..(i + 1) * k].to_vec())).collect();
    let doc_topic = docs.iter().zip(&ndk).map(|(d, counts)| (d.id.clone(), theta(counts, alpha))).collect();
    TopicModel::from_parts(*config, word_counts, doc_topic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RawDocument;
    use crate::textproc::{LexiconTagger, Pipeline, StopWords};
    use std::sync::Arc;

    fn docs(texts: &[&str]) -> Vec<ProcessedDocument> {
        let p =
            Pipeline::new(Arc::new(StopWords::from_words(Vec::<String>::new())), Arc::new(LexiconTagger::english()));
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| p.process(&RawDocument { id: format!("d{i}"), text: t.to_string(), gold: vec![] }))
            .collect()
    }

    fn config(k: usize, iterations: usize) -> LdaConfig {
        LdaConfig { iterations, ..LdaConfig::with_topics(k) }
    }

    #[test]
    fn disjoint_vocabularies_separate() {
        let d = docs(&[
            "apple banana cherry apple banana cherry apple banana cherry apple",
            "engine piston valve engine piston valve engine piston valve engine",
        ]);
        let cfg = LdaConfig { alpha: 0.1, ..config(2, 500) };
        let m = fit_lda(&d, &cfg).unwrap();
        let a = m.doc_topic("d0").unwrap();
        let b = m.doc_topic("d1").unwrap();
        let dom = |v: &[f64]| if v[0] > v[1] { 0 } else { 1 };
        assert!(a[dom(a)] > 0.8, "{a:?}");
        assert!(b[dom(b)] > 0.8, "{b:?}");
        assert_ne!(dom(a), dom(b));
    }

    #[test]
    fn one_word_document() {
        let m = fit_lda(&docs(&["apple"]), &config(2, 10)).unwrap();
        let s: f64 = m.doc_topic("d0").unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        let w: f64 = m.word_topic("appl").unwrap().iter().sum();
        assert!((w - 1.0).abs() < 1e-12);
        assert!(m.word_topic("pear").is_none());
    }

    #[test]
    fn same_seed_same_model() {
        let d = docs(&["graph ranking words", "topic model words graph", "ranking topic"]);
        let a = fit_lda(&d, &config(3, 50)).unwrap();
        let b = fit_lda(&d, &config(3, 50)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn argument_checks() {
        let d = docs(&["a b"]);
        assert!(fit_lda(&d, &config(1, 10)).is_err());
        assert!(fit_lda(&d, &config(2, 0)).is_err());
        assert!(matches!(fit_lda(&[], &config(2, 10)), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn inference_is_normalized_and_deterministic() {
        let d = docs(&["apple banana cherry apple banana", "engine piston valve engine piston"]);
        let m = fit_lda(&d, &config(2, 200)).unwrap();
        let stems = ["appl", "banana", "unknown"];
        let a = m.infer(stems);
        let b = m.infer(stems);
        assert_eq!(a, b);
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // nothing in vocabulary: the prior alone
        let empty = m.infer(["zzz"]);
        assert!(empty.iter().all(|&x| (x - 0.5).abs() < 1e-12));
    }
}
