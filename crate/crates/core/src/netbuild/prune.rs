use std::collections::HashSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CooccurrenceGraph, Node};
use crate::corpus::SeedLexicon;
use crate::error::{Error, Result};

/// How node connectivity is measured when ranking nodes for removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    /// Weighted degree.
    #[default]
    Strength,
    Degree,
}

impl Connectivity {
    pub fn as_str(self) -> &'static str {
        match self {
            Connectivity::Strength => "strength",
            Connectivity::Degree => "degree",
        }
    }

    fn of(self, node: &Node) -> u64 {
        match self {
            Connectivity::Strength => node.strength,
            Connectivity::Degree => u64::from(node.degree),
        }
    }
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strength" => Ok(Connectivity::Strength),
            "degree" => Ok(Connectivity::Degree),
            other => Err(Error::InvalidParameter(format!(
                "unknown connectivity \"{other}\" (expected strength or degree)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    pub q_nonseed: f64,
    pub q_seed: f64,
    pub connectivity: Connectivity,
}

impl Default for PruneConfig {
    fn default() -> Self {
        Self {
            q_nonseed: 0.10,
            q_seed: 0.25,
            connectivity: Connectivity::Strength,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneReport {
    pub removed_nonseed: Vec<String>,
    pub removed_seed: Vec<String>,
    pub q_nonseed: f64,
    pub q_seed: f64,
    pub connectivity: Connectivity,
}

/// `floor(q * n)`, tolerant of products that land a hair under an integer.
fn quota(q: f64, n: usize) -> usize {
    (q * n as f64 + 1e-9).floor() as usize
}

/// Highest-connectivity nodes first; ties by stem.
fn top<'a>(mut candidates: Vec<&'a Node>, count: usize, connectivity: Connectivity) -> Vec<&'a Node> {
    candidates.sort_by(|a, b| {
        connectivity
            .of(b)
            .cmp(&connectivity.of(a))
            .then_with(|| a.stem.cmp(&b.stem))
    });
    candidates.truncate(count);
    candidates
}

/// Remove the `q_nonseed` fraction of most connected non-seed nodes and the
/// `q_seed` fraction of most connected compound-derived seed nodes. Other
/// seed nodes are never removed. Node statistics are recomputed on the
/// remaining graph; seed flags are refreshed from `lexicon`.
pub fn prune(
    graph: &CooccurrenceGraph,
    lexicon: &SeedLexicon,
    config: &PruneConfig,
) -> Result<(CooccurrenceGraph, PruneReport)> {
    for (name, q) in [("q_nonseed", config.q_nonseed), ("q_seed", config.q_seed)] {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1), got {q}")));
        }
    }
    if graph.node_count() == 0 {
        return Err(Error::InvalidParameter("cannot prune an empty graph".into()));
    }

    let nonseed: Vec<&Node> = graph.nodes().iter().filter(|n| !lexicon.is_seed(&n.stem)).collect();
    let compound: Vec<&Node> = graph
        .nodes()
        .iter()
        .filter(|n| lexicon.is_compound_derived(&n.stem))
        .collect();

    let n_nonseed = quota(config.q_nonseed, nonseed.len());
    let n_seed = quota(config.q_seed, compound.len());
    let removed_nonseed: Vec<String> = top(nonseed, n_nonseed, config.connectivity)
        .into_iter()
        .map(|n| n.stem.clone())
        .collect();
    let removed_seed: Vec<String> = top(compound, n_seed, config.connectivity)
        .into_iter()
        .map(|n| n.stem.clone())
        .collect();

    let removed: HashSet<&str> = removed_nonseed
        .iter()
        .chain(&removed_seed)
        .map(String::as_str)
        .collect();
    let mut pruned = graph.retain_nodes(|n| !removed.contains(n.stem.as_str()));
    pruned.mark_seeds(lexicon);

    Ok((
        pruned,
        PruneReport {
            removed_nonseed,
            removed_seed,
            q_nonseed: config.q_nonseed,
            q_seed: config.q_seed,
            connectivity: config.connectivity,
        },
    ))
}
