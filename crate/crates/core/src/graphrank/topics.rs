//! Candidate clustering and the topic-level graph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::graph::WeightedGraph;
use super::pagerank::{pagerank, PageRankConfig, PageRankResult, PriorDistribution};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::textproc::CandidatePhrase;

/// Absorbs rounding in averaged similarities compared against the threshold.
const SIM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicCluster {
    /// Indices into the candidate slice, ascending.
    pub members: Vec<usize>,
    /// Member with the earliest first occurrence.
    pub representative: usize,
}

impl TopicCluster {
    pub fn member_keys(&self, candidates: &[CandidatePhrase]) -> Vec<String> {
        self.members.iter().map(|&i| candidates[i].key()).collect()
    }
}

/// Jaccard similarity of two stem sets.
pub fn jaccard(a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Average-linkage agglomerative clustering on stem-set Jaccard similarity,
/// merging while the best pair reaches `threshold`. Among equally similar
/// pairs the one whose smallest candidate keys come first is merged.
pub fn cluster_topics(candidates: &[CandidatePhrase], threshold: f64) -> Vec<TopicCluster> {
    let n = candidates.len();
    let mut order: Vec<usize> = (0..n).collect();
    let keys: Vec<String> = candidates.iter().map(CandidatePhrase::key).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let sets: Vec<BTreeSet<&str>> =
        order.iter().map(|&i| candidates[i].stems.iter().map(String::as_str).collect()).collect();

    // slot s holds clusters in key order of their first member; `sum[s][t]`
    // is the total pairwise similarity between slots s and t
    let mut clusters: Vec<Option<Vec<usize>>> = (0..n).map(|s| Some(vec![s])).collect();
    let mut sum: Vec<Vec<f64>> = (0..n).map(|s| (0..n).map(|t| jaccard(&sets[s], &sets[t])).collect()).collect();

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for s in 0..n {
            let Some(cs) = &clusters[s] else { continue };
            for t in s + 1..n {
                let Some(ct) = &clusters[t] else { continue };
                let avg = sum[s][t] / (cs.len() * ct.len()) as f64;
                if best.is_none_or(|(b, _, _)| avg > b + SIM_EPS) {
                    best = Some((avg, s, t));
                }
            }
        }
        match best {
            Some((avg, s, t)) if avg + SIM_EPS >= threshold => {
                let moved = clusters[t].take().expect("live slot");
                clusters[s].as_mut().expect("live slot").extend(moved);
                // row and column of the merged slot are updated together
                #[allow(clippy::needless_range_loop)]
                for u in 0..n {
                    let v = sum[t][u];
                    sum[s][u] += v;
                    sum[u][s] = sum[s][u];
                }
            }
            _ => break,
        }
    }

    let mut out: Vec<TopicCluster> = clusters
        .into_iter()
        .flatten()
        .map(|slots| {
            let mut members: Vec<usize> = slots.into_iter().map(|s| order[s]).collect();
            members.sort_unstable();
            let representative =
                *members.iter().min_by_key(|&&i| (candidates[i].first_position(), i)).expect("non-empty cluster");
            TopicCluster { members, representative }
        })
        .collect();
    out.sort_by_key(|c| candidates[c.representative].first_position());
    out
}

/// Ranks clusters by PageRank on the complete cluster graph, with edge
/// weight `sum 1/|p - q|` over occurrence start positions of the two clusters.
pub fn topic_graph_rank<T: Scalar>(
    clusters: &[TopicCluster],
    candidates: &[CandidatePhrase],
    config: &PageRankConfig,
) -> Result<PageRankResult<T>> {
    let positions: Vec<Vec<usize>> = clusters
        .iter()
        .map(|c| c.members.iter().flat_map(|&i| candidates[i].occurrences.iter().map(|&(start, _)| start)).collect())
        .collect();
    let mut edges = Vec::new();
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let w: T = positions[i]
                .iter()
                .flat_map(|&p| positions[j].iter().map(move |&q| (p, q)))
                .filter(|(p, q)| p != q)
                .map(|(p, q)| T::one() / T::from_count(p.abs_diff(q) as u64))
                .sum();
            edges.push((i, j, w));
        }
    }
    let graph = WeightedGraph::from_edges(clusters.len(), edges);
    pagerank(&graph, &PriorDistribution::uniform(clusters.len()), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(stems: &[&str], occurrences: &[usize]) -> CandidatePhrase {
        CandidatePhrase {
            stems: stems.iter().map(|s| s.to_string()).collect(),
            surface: stems.join(" "),
            occurrences: occurrences.iter().map(|&p| (p, p + stems.len())).collect(),
        }
    }

    #[test]
    fn jaccard_by_hand() {
        let a: BTreeSet<&str> = ["a", "b"].into();
        let b: BTreeSet<&str> = ["b", "c"].into();
        assert!((jaccard(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
        let c: BTreeSet<&str> = ["x"].into();
        assert_eq!(jaccard(&a, &c), 0.0);
    }

    #[test]
    fn threshold_boundary() {
        let c = vec![cand(&["a", "b"], &[0]), cand(&["b", "c"], &[5])];
        assert_eq!(cluster_topics(&c, 1.0 / 3.0).len(), 1);
        assert_eq!(cluster_topics(&c, 0.34).len(), 2);
    }

    #[test]
    fn same_stem_set_merges_and_earliest_represents() {
        let c = vec![cand(&["neural", "network"], &[4]), cand(&["network", "neural"], &[9]), cand(&["graph"], &[0])];
        let cl = cluster_topics(&c, 0.25);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].members, vec![2]);
        assert_eq!(cl[1].members, vec![0, 1]);
        assert_eq!(cl[1].representative, 0);
    }

    #[test]
    fn average_linkage() {
        // {a,b} joins {a}; then {b,c}: avg(1/3 with {a,b}, 0 with {a}) = 1/6
        let c = vec![cand(&["a", "b"], &[0]), cand(&["a"], &[3]), cand(&["b", "c"], &[6])];
        let cl = cluster_topics(&c, 0.25);
        assert_eq!(cl.len(), 2);
        let cl = cluster_topics(&c, 1.0 / 6.0);
        assert_eq!(cl.len(), 1);
    }

    #[test]
    fn topic_graph_examples() {
        let c = vec![cand(&["a"], &[1]), cand(&["b"], &[2])];
        let cl = cluster_topics(&c, 0.25);
        let r: PageRankResult<f64> = topic_graph_rank(&cl, &c, &PageRankConfig::default()).unwrap();
        assert!((r.scores[0] - 0.5).abs() < 1e-12);

        let one = vec![cand(&["a"], &[0, 3])];
        let r: PageRankResult<f64> =
            topic_graph_rank(&cluster_topics(&one, 0.25), &one, &PageRankConfig::default()).unwrap();
        assert_eq!(r.scores, vec![1.0]);

        // equal-weight triangle
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0f64), (1, 2, 1.0), (0, 2, 1.0)]);
        let r = pagerank(&g, &PriorDistribution::uniform(3), &PageRankConfig::default()).unwrap();
        assert!(r.scores.iter().all(|&s| (s - 1.0 / 3.0).abs() < 1e-12));
    }
}
