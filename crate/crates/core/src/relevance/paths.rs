use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::netbuild::CooccurrenceGraph;

/// Mapping from co-occurrence weight to path length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceTransform {
    /// `1 / weight`: frequent co-occurrence means a short hop.
    #[default]
    Reciprocal,
    /// Every edge has length 1.
    Unit,
    /// The weight itself.
    Raw,
}

impl DistanceTransform {
    pub fn length(self, weight: u32) -> f64 {
        match self {
            DistanceTransform::Reciprocal => 1.0 / f64::from(weight),
            DistanceTransform::Unit => 1.0,
            DistanceTransform::Raw => f64::from(weight),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceTransform::Reciprocal => "reciprocal",
            DistanceTransform::Unit => "unit",
            DistanceTransform::Raw => "raw",
        }
    }
}

impl fmt::Display for DistanceTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "reciprocal" => Ok(DistanceTransform::Reciprocal),
            "unit" => Ok(DistanceTransform::Unit),
            "raw" => Ok(DistanceTransform::Raw),
            other => Err(Error::InvalidParameter(format!(
                "unknown distance transform \"{other}\" (expected reciprocal, unit or raw)"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest path lengths from node `source`;
/// `f64::INFINITY` marks unreachable nodes.
pub fn dijkstra(graph: &CooccurrenceGraph, source: usize, transform: DistanceTransform) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry { dist: 0.0, node: source });
    while let Some(Entry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in graph.neighbors(node) {
            let next = next as usize;
            let candidate = d + transform.length(w);
            if candidate < dist[next] {
                dist[next] = candidate;
                heap.push(Entry {
                    dist: candidate,
                    node: next,
                });
            }
        }
    }
    dist
}
