//! Non-seed words that sit next to the seed topic: direct neighbors of a
//! seed stem with a heavy enough shared edge and a high enough relevance
//! score.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::community::CommunityPartition;
use crate::corpus::SeedLexicon;
use crate::error::{Error, Result};
use crate::netbuild::CooccurrenceGraph;
use crate::relevance::WordScores;

pub const DEFAULT_MIN_WEIGHT: i64 = 100;
pub const DEFAULT_MIN_SCORE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarWordCandidate {
    pub stem: String,
    /// Heaviest edge to any seed stem.
    pub max_seed_edge_weight: u32,
    /// Lexicographically first seed attaining `max_seed_edge_weight`.
    pub witness_seed: String,
    pub score: f64,
    pub community: Option<u32>,
    pub in_topic_community: bool,
    /// Every seed neighbor with its edge weight, heaviest first.
    pub seed_edges: Vec<(String, u32)>,
}

/// Candidates ranked by score, then edge weight (both descending), then
/// stem.
pub fn discover(
    graph: &CooccurrenceGraph,
    lexicon: &SeedLexicon,
    word_scores: &WordScores,
    partition: Option<&CommunityPartition>,
    min_weight: i64,
    min_score: f64,
) -> Result<Vec<SimilarWordCandidate>> {
    if min_weight < 0 || !(min_score >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "discovery thresholds must be non-negative, got min_weight = {min_weight}, min_score = {min_score}"
        )));
    }

    // neighbor index -> seed edges, seeds visited in stem order
    let mut seed_edges: BTreeMap<usize, Vec<(String, u32)>> = BTreeMap::new();
    for (seed_idx, seed) in graph.nodes().iter().enumerate() {
        if !lexicon.is_seed(&seed.stem) {
            continue;
        }
        for &(nbr, w) in graph.neighbors(seed_idx) {
            let nbr = nbr as usize;
            if !lexicon.is_seed(&graph.node(nbr).stem) {
                seed_edges.entry(nbr).or_default().push((seed.stem.clone(), w));
            }
        }
    }

    let mut out: Vec<SimilarWordCandidate> = seed_edges
        .into_iter()
        .filter_map(|(idx, mut edges)| {
            let stem = &graph.node(idx).stem;
            // stable sort keeps stem order among equal weights
            edges.sort_by(|a, b| b.1.cmp(&a.1));
            let (witness_seed, max_w) = edges[0].clone();
            let score = word_scores.score(stem);
            (i64::from(max_w) >= min_weight && score >= min_score).then(|| SimilarWordCandidate {
                stem: stem.clone(),
                max_seed_edge_weight: max_w,
                witness_seed,
                score,
                community: partition.and_then(|p| p.community_of(stem)),
                in_topic_community: partition.is_some_and(|p| p.is_topic(stem)),
                seed_edges: edges,
            })
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| b.max_seed_edge_weight.cmp(&a.max_seed_edge_weight))
            .then_with(|| a.stem.cmp(&b.stem))
    });
    Ok(out)
}

/// Columns: stem, max_seed_edge_weight, witness_seed, score, community.
/// `verbose` appends every seed edge as `seed:weight` pairs.
pub fn write_candidates_csv<W: Write>(
    candidates: &[SimilarWordCandidate],
    verbose: bool,
    out: W,
) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["stem", "max_seed_edge_weight", "witness_seed", "score", "community"];
    if verbose {
        header.push("seed_edges");
    }
    writer.write_record(&header)?;
    for c in candidates {
        let mut record = vec![
            c.stem.clone(),
            c.max_seed_edge_weight.to_string(),
            c.witness_seed.clone(),
            c.score.to_string(),
            c.community.map(|id| id.to_string()).unwrap_or_default(),
        ];
        if verbose {
            record.push(
                c.seed_edges
                    .iter()
                    .map(|(s, w)| format!("{s}:{w}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            );
        }
        writer.write_record(&record)?;
    }
    writer.flush()
}
