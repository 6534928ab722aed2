//! Weighted undirected graphs and word co-occurrence graph construction.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textproc::ProcessedDocument;

/// Undirected graph with positive edge weights and no self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    /// Per node, neighbours sorted by index.
    adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Builds a graph over `n` nodes. Pairs are unordered; repeated pairs add
    /// up, and self-loops and non-positive weights are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (i, j, w) in edges {
            assert!(i < n && j < n, "edge ({i}, {j}) outside {n} nodes");
            if i == j {
                continue;
            }
            let key = (i.min(j), i.max(j));
            let e = acc.entry(key).or_insert_with(T::zero);
            *e = *e + w;
        }
        let mut adjacency = vec![Vec::new(); n];
        for ((i, j), w) in acc {
            if w > T::zero() {
                adjacency[i].push((j, w));
                adjacency[j].push((i, w));
            }
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(j, _)| j);
        }
        WeightedGraph { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, T)] {
        &self.adjacency[i]
    }

    /// Weight of edge `{i, j}`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.adjacency[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.adjacency[i][pos].1)
            .unwrap_or_else(|_| T::zero())
    }

    pub fn degree(&self, i: usize) -> T {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    /// Edges as `(i, j, w)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&(j, _)| j > i).map(move |&(j, w)| (i, j, w)))
    }

    /// The same graph with every weight multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        WeightedGraph {
            adjacency: self.adjacency.iter().map(|row| row.iter().map(|&(j, w)| (j, w * c)).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// 1 per co-occurring pair of stems.
    Binary,
    /// Number of co-occurrences.
    Count,
}

/// How a word graph is built from a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    /// Co-occurrence window: positions `p`, `q` are linked when `|p - q| < window`.
    pub window: usize,
    pub weighting: Weighting,
    /// Keep stopword stems as nodes as well.
    pub all_words: bool,
}

impl GraphSpec {
    pub fn new(window: usize, weighting: Weighting) -> Self {
        GraphSpec { window, weighting, all_words: false }
    }
}

/// A co-occurrence graph whose nodes are stems.
#[derive(Debug, Clone, PartialEq)]
pub struct WordGraph<T> {
    /// Stems in order of first occurrence.
    pub nodes: Vec<String>,
    index: HashMap<String, usize>,
    pub graph: WeightedGraph<T>,
    pub spec: GraphSpec,
}

impl<T: Scalar> WordGraph<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, stem: &str) -> Option<usize> {
        self.index.get(stem).copied()
    }

    /// Weight of the edge between two stems, zero when absent.
    pub fn edge(&self, a: &str, b: &str) -> T {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.graph.weight(i, j),
            _ => T::zero(),
        }
    }

    /// Writes `stem_i<TAB>stem_j<TAB>weight` lines, one per undirected edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (i, j, w) in self.graph.edges() {
            writeln!(out, "{}\t{}\t{}", self.nodes[i], self.nodes[j], w)?;
        }
        Ok(())
    }
}

/// Builds the co-occurrence graph of `doc`. Positions are counted over the
/// full token sequence, so dropped stopwords still take up window slots.
pub fn build_graph<T: Scalar>(doc: &ProcessedDocument, spec: &GraphSpec) -> Result<WordGraph<T>> {
    if spec.window < 2 {
        return Err(Error::InvalidArgument(format!("co-occurrence window must be at least 2, got {}", spec.window)));
    }
    let mut nodes = Vec::new();
    let mut index = HashMap::new();
    // (position, node) for every token that is a node
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for (pos, (tok, &sw)) in doc.tokens.iter().zip(&doc.stopword).enumerate() {
        if sw && !spec.all_words {
            continue;
        }
        let id = *index.entry(tok.stem.clone()).or_insert_with(|| {
            nodes.push(tok.stem.clone());
            nodes.len() - 1
        });
        slots.push((pos, id));
    }

    let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (a, &(p, i)) in slots.iter().enumerate() {
        for &(_, j) in slots[a + 1..].iter().take_while(|&&(q, _)| q - p < spec.window) {
            if i != j {
                *pairs.entry((i.min(j), i.max(j))).or_insert(0) += 1;
            }
        }
    }
    let graph = WeightedGraph::from_edges(
        nodes.len(),
        pairs.into_iter().map(|((i, j), c)| {
            let w = match spec.weighting {
                Weighting::Binary => T::one(),
                Weighting::Count => T::from_count(c),
            };
            (i, j, w)
        }),
    );
    Ok(WordGraph { nodes, index, graph, spec: *spec })
}
