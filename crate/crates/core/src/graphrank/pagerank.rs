//! Biased PageRank and the teleport distributions used by the graph methods.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::{WeightedGraph, WordGraph};
use crate::error::{Error, Result};
use crate::priors::{TermStats, TopicModel};
use crate::scalar::Scalar;
use crate::textproc::ProcessedDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    Uniform,
    Position,
    Topical,
    Tfidf,
    Specificity,
}

/// Teleport probabilities over graph nodes; non-negative, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorDistribution<T> {
    pub probabilities: Vec<T>,
    pub kind: PriorKind,
}

impl<T: Scalar> PriorDistribution<T> {
    pub fn uniform(n: usize) -> Self {
        let p = if n == 0 { T::zero() } else { T::one() / T::from_count(n as u64) };
        PriorDistribution { probabilities: vec![p; n], kind: PriorKind::Uniform }
    }

    /// Normalizes unnormalized masses. Negative and non-finite masses count
    /// as 0; if nothing is left the result is uniform.
    pub fn from_masses(masses: Vec<T>, kind: PriorKind) -> Self {
        let clean: Vec<T> =
            masses.into_iter().map(|m| if m.is_finite() && m > T::zero() { m } else { T::zero() }).collect();
        let total: T = clean.iter().copied().sum();
        if total <= T::zero() {
            return PriorDistribution { kind, ..Self::uniform(clean.len()) };
        }
        PriorDistribution { probabilities: clean.into_iter().map(|m| m / total).collect(), kind }
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult<T> {
    pub scores: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PageRankConfig {
    /// Teleport weight.
    pub lambda: f64,
    /// L1 change below which iteration stops.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig { lambda: 0.15, tol: 1e-6, max_iter: 100 }
    }
}

/// Power iteration of `p <- (1 - lambda) W^T p + lambda p_b` with `W` the
/// row-normalized weight matrix. The mass of zero-degree nodes is
/// redistributed according to the prior.
pub fn pagerank<T: Scalar>(
    graph: &WeightedGraph<T>,
    prior: &PriorDistribution<T>,
    config: &PageRankConfig,
) -> Result<PageRankResult<T>> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if prior.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: prior.len() });
    }
    if !(0.0..=1.0).contains(&config.lambda) {
        return Err(Error::InvalidArgument(format!("lambda must lie in [0, 1], got {}", config.lambda)));
    }
    let lambda = T::lit(config.lambda);
    let damping = T::one() - lambda;
    let tol = T::lit(config.tol);
    let pb = &prior.probabilities;
    let degree: Vec<T> = (0..n).map(|i| graph.degree(i)).collect();

    let mut p = vec![T::one() / T::from_count(n as u64); n];
    let mut next = vec![T::zero(); n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iter {
        iterations += 1;
        let mut dangling = T::zero();
        next.iter_mut().for_each(|x| *x = T::zero());
        for i in 0..n {
            if degree[i] > T::zero() {
                let share = p[i] / degree[i];
                for &(j, w) in graph.neighbors(i) {
                    next[j] = next[j] + share * w;
                }
            } else {
                dangling = dangling + p[i];
            }
        }
        for j in 0..n {
            next[j] = damping * (next[j] + dangling * pb[j]) + lambda * pb[j];
        }
        let total: T = next.iter().copied().sum();
        next.iter_mut().for_each(|x| *x = *x / total);
        let delta: T = p.iter().zip(&next).map(|(&a, &b)| (a - b).abs()).sum();
        std::mem::swap(&mut p, &mut next);
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(PageRankResult { scores: p, iterations, converged })
}

/// Mass `sum 1/p` over the 1-based positions of each node's occurrences.
pub fn position_prior<T: Scalar>(doc: &ProcessedDocument, graph: &WordGraph<T>) -> PriorDistribution<T> {
    let mut mass = vec![T::zero(); graph.len()];
    for (pos, tok) in doc.tokens.iter().enumerate() {
        if let Some(i) = graph.index_of(&tok.stem) {
            mass[i] = mass[i] + T::one() / T::from_count(pos as u64 + 1);
        }
    }
    PriorDistribution::from_masses(mass, PriorKind::Position)
}

/// Prior proportional to per-stem scores; stems without a score get 0.
pub fn scores_prior<T: Scalar>(
    graph: &WordGraph<T>,
    scores: &BTreeMap<String, T>,
    kind: PriorKind,
) -> PriorDistribution<T> {
    let mass = graph.nodes.iter().map(|s| scores.get(s).copied().unwrap_or_else(T::zero)).collect();
    PriorDistribution::from_masses(mass, kind)
}

/// Prior proportional to tf-idf or lexical specificity of each node in `doc`.
pub fn stat_prior<T: Scalar>(
    doc: &ProcessedDocument,
    graph: &WordGraph<T>,
    stats: &TermStats,
    kind: PriorKind,
) -> Result<PriorDistribution<T>> {
    let scores = match kind {
        PriorKind::Tfidf => stats.tfidf_scores(doc),
        PriorKind::Specificity => stats.specificity_scores(doc)?,
        other => return Err(Error::InvalidArgument(format!("{other:?} is not a statistical prior"))),
    };
    Ok(scores_prior(graph, &scores, kind))
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Prior proportional to the cosine between each node's topic distribution
/// and `doc_topic`. Stems unknown to the model get 0.
pub fn topical_prior_with<T: Scalar>(
    graph: &WordGraph<T>,
    topics: &TopicModel,
    doc_topic: &[f64],
) -> Result<PriorDistribution<T>> {
    if doc_topic.len() != topics.num_topics() {
        return Err(Error::DimensionMismatch { expected: topics.num_topics(), actual: doc_topic.len() });
    }
    let mass = graph
        .nodes
        .iter()
        .map(|s| {
            let c = topics.word_topic(s).map_or(0.0, |wt| cosine(&wt, doc_topic));
            T::lit(c)
        })
        .collect();
    Ok(PriorDistribution::from_masses(mass, PriorKind::Topical))
}

/// [`topical_prior_with`] using the stored topic distribution of `doc`.
pub fn topical_prior<T: Scalar>(
    doc: &ProcessedDocument,
    graph: &WordGraph<T>,
    topics: &TopicModel,
) -> Result<PriorDistribution<T>> {
    let dt = topics.doc_topic(&doc.id).ok_or_else(|| Error::MissingDocTopic(doc.id.clone()))?;
    topical_prior_with(graph, topics, dt)
}
