//! Undirected weighted word co-occurrence network and differential pruning.
//!
//! Two stems share an edge when they appear in the same document; the edge
//! weight is the number of documents in which they co-occur. Each document
//! contributes at most 1 to any pair.

mod io;
mod prune;

pub use io::{export_graph, import_graph, read_graph, write_graph};
pub use prune::{prune, Connectivity, PruneConfig, PruneReport};

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::SeedLexicon;
use crate::error::{Error, Result};
use crate::textprep::TokenStream;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub stem: String,
    pub doc_frequency: u32,
    /// Sum of incident edge weights.
    pub strength: u64,
    pub degree: u32,
    pub is_seed: bool,
    pub is_compound_derived_seed: bool,
}

impl Node {
    pub fn new(stem: impl Into<String>, doc_frequency: u32) -> Self {
        Self {
            stem: stem.into(),
            doc_frequency,
            strength: 0,
            degree: 0,
            is_seed: false,
            is_compound_derived_seed: false,
        }
    }
}

/// Nodes are kept sorted by stem; a node's index is its rank in that order.
/// Adjacency lists are sorted by neighbor index and hold `(neighbor, weight)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceGraph {
    nodes: Vec<Node>,
    adjacency: Vec<Vec<(u32, u32)>>,
    index: HashMap<String, u32>,
}

impl CooccurrenceGraph {
    /// Assemble a graph from node records and `(stem_a, stem_b, weight)`
    /// edges. Strength and degree are recomputed; the stored values on
    /// `nodes` are ignored.
    pub fn from_parts<I>(mut nodes: Vec<Node>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, u32)>,
    {
        nodes.sort_by(|a, b| a.stem.cmp(&b.stem));
        if let Some(w) = nodes.windows(2).find(|w| w[0].stem == w[1].stem) {
            return Err(Error::InvalidParameter(format!("duplicate node \"{}\"", w[0].stem)));
        }
        let index: HashMap<String, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.stem.clone(), i as u32))
            .collect();

        let mut adjacency: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nodes.len()];
        for (a, b, w) in edges {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::InvalidParameter(format!("edge references unknown node \"{s}\"")))
            };
            let (ia, ib) = (lookup(&a)?, lookup(&b)?);
            if ia == ib {
                return Err(Error::InvalidParameter(format!("self-loop on \"{a}\"")));
            }
            if w == 0 {
                return Err(Error::InvalidParameter(format!("edge {a}-{b} has zero weight")));
            }
            adjacency[ia as usize].push((ib, w));
            adjacency[ib as usize].push((ia, w));
        }
        for (i, adj) in adjacency.iter_mut().enumerate() {
            adj.sort_unstable();
            if let Some(pair) = adj.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge {}-{}",
                    nodes[i].stem, nodes[pair[0].0 as usize].stem
                )));
            }
        }
        let mut graph = Self {
            nodes,
            adjacency,
            index,
        };
        graph.recompute_statistics();
        Ok(graph)
    }

    fn recompute_statistics(&mut self) {
        for (node, adj) in self.nodes.iter_mut().zip(&self.adjacency) {
            node.degree = adj.len() as u32;
            node.strength = adj.iter().map(|&(_, w)| u64::from(w)).sum();
        }
    }

    /// Set the seed flags from `lexicon`.
    pub fn mark_seeds(&mut self, lexicon: &SeedLexicon) {
        for node in &mut self.nodes {
            node.is_seed = lexicon.is_seed(&node.stem);
            node.is_compound_derived_seed = lexicon.is_compound_derived(&node.stem);
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &Node {
        &self.nodes[idx]
    }

    pub fn index_of(&self, stem: &str) -> Option<usize> {
        self.index.get(stem).map(|&i| i as usize)
    }

    pub fn contains(&self, stem: &str) -> bool {
        self.index.contains_key(stem)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sum of all edge weights, each edge counted once.
    pub fn total_weight(&self) -> u64 {
        self.nodes.iter().map(|n| n.strength).sum::<u64>() / 2
    }

    pub fn neighbors(&self, idx: usize) -> &[(u32, u32)] {
        &self.adjacency[idx]
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<u32> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        let adj = &self.adjacency[ia];
        adj.binary_search_by_key(&(ib as u32), |&(n, _)| n)
            .ok()
            .map(|pos| adj[pos].1)
    }

    /// Every edge once as `(a, b, weight)` with `a < b`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, adj)| {
            adj.iter()
                .filter(move |&&(b, _)| (b as usize) > a)
                .map(move |&(b, w)| (a, b as usize, w))
        })
    }

    /// Every edge once, by stem.
    pub fn edge_list(&self) -> Vec<(String, String, u32)> {
        self.edges()
            .map(|(a, b, w)| (self.nodes[a].stem.clone(), self.nodes[b].stem.clone(), w))
            .collect()
    }

    /// Copy of the graph keeping only nodes for which `keep` is true.
    pub fn retain_nodes(&self, keep: impl Fn(&Node) -> bool) -> Self {
        let kept: Vec<Node> = self.nodes.iter().filter(|n| keep(n)).cloned().collect();
        let kept_set: BTreeSet<&str> = kept.iter().map(|n| n.stem.as_str()).collect();
        let edges: Vec<(String, String, u32)> = self
            .edges()
            .filter(|&(a, b, _)| {
                kept_set.contains(self.nodes[a].stem.as_str())
                    && kept_set.contains(self.nodes[b].stem.as_str())
            })
            .map(|(a, b, w)| (self.nodes[a].stem.clone(), self.nodes[b].stem.clone(), w))
            .collect();
        Self::from_parts(kept, edges).expect("subgraph of a valid graph is valid")
    }

    /// Check the structural invariants: symmetric positive weights, no
    /// self-loops, and stored strength/degree matching the adjacency.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (i, adj) in self.adjacency.iter().enumerate() {
            let node = &self.nodes[i];
            for &(j, w) in adj {
                if j as usize == i {
                    return Err(format!("self-loop on {}", node.stem));
                }
                if w == 0 {
                    return Err(format!("zero weight at {}", node.stem));
                }
                let back = self.adjacency[j as usize]
                    .iter()
                    .find(|&&(k, _)| k as usize == i)
                    .map(|&(_, w)| w);
                if back != Some(w) {
                    return Err(format!("asymmetric edge {}-{}", node.stem, self.nodes[j as usize].stem));
                }
            }
            let strength: u64 = adj.iter().map(|&(_, w)| u64::from(w)).sum();
            if strength != node.strength || adj.len() as u32 != node.degree {
                return Err(format!("stale statistics on {}", node.stem));
            }
        }
        Ok(())
    }
}

fn pair_key(a: u32, b: u32) -> u64 {
    (u64::from(a) << 32) | u64::from(b)
}

/// Build the co-occurrence graph from preprocessed training documents.
pub fn build_graph(streams: &[TokenStream]) -> Result<CooccurrenceGraph> {
    if streams.is_empty() {
        return Err(Error::EmptyTrainingSplit);
    }
    let vocabulary: BTreeSet<&str> = streams.iter().flat_map(|s| s.distinct()).collect();
    let vocabulary: Vec<&str> = vocabulary.into_iter().collect();
    let ids: HashMap<&str, u32> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i as u32))
        .collect();

    // stem_counts is a BTreeMap, so distinct ids come out ascending
    let docs: Vec<Vec<u32>> = streams
        .iter()
        .map(|s| s.distinct().map(|stem| ids[stem]).collect())
        .collect();

    let mut doc_frequency = vec![0u32; vocabulary.len()];
    for doc in &docs {
        for &id in doc {
            doc_frequency[id as usize] += 1;
        }
    }

    let pairs = docs
        .par_iter()
        .fold(HashMap::<u64, u32>::new, |mut acc, doc| {
            for (i, &a) in doc.iter().enumerate() {
                for &b in &doc[i + 1..] {
                    *acc.entry(pair_key(a, b)).or_insert(0) += 1;
                }
            }
            acc
        })
        .reduce(HashMap::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (k, v) in small {
                *big.entry(k).or_insert(0) += v;
            }
            big
        });

    let mut adjacency: Vec<Vec<(u32, u32)>> = vec![Vec::new(); vocabulary.len()];
    for (key, w) in pairs {
        let (a, b) = ((key >> 32) as u32, key as u32);
        adjacency[a as usize].push((b, w));
        adjacency[b as usize].push((a, w));
    }
    adjacency.par_iter_mut().for_each(|adj| adj.sort_unstable());

    let nodes = vocabulary
        .iter()
        .zip(&doc_frequency)
        .map(|(stem, &df)| Node::new(*stem, df))
        .collect();
    let index = vocabulary
        .iter()
        .enumerate()
        .map(|(i, s)| (s.to_string(), i as u32))
        .collect();
    let mut graph = CooccurrenceGraph {
        nodes,
        adjacency,
        index,
    };
    graph.recompute_statistics();
    Ok(graph)
}
