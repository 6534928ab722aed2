//! Unsupervised keyword extraction.
//!
//! Documents go through [`textproc`] (tokens, stems, tags, candidate noun
//! phrases), words are scored by one of the [`extractors`] using corpus
//! [`priors`] and the [`graphrank`] machinery, and [`eval`] compares methods
//! against gold keyphrases.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod extractors;
pub mod graphrank;
pub mod priors;
pub mod scalar;
pub mod textproc;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision instantiations used by the extractors and the CLI.
pub type WordGraph = graphrank::WordGraph<f64>;
pub type WeightedGraph = graphrank::WeightedGraph<f64>;
pub type PriorDistribution = graphrank::PriorDistribution<f64>;
pub type PageRankResult = graphrank::PageRankResult<f64>;
