//! Co-occurrence graphs, biased PageRank, teleport priors and topic clustering.

mod graph;
mod pagerank;
mod topics;

pub use graph::{build_graph, GraphSpec, WeightedGraph, Weighting, WordGraph};
pub use pagerank::{
    pagerank, position_prior, scores_prior, stat_prior, topical_prior, topical_prior_with, PageRankConfig,
    PageRankResult, PriorDistribution, PriorKind,
};
pub use topics::{cluster_topics, jaccard, topic_graph_rank, TopicCluster};
