//! Topic relevance of words and papers.
//!
//! A word's score is the mean over its shortest-path distances to every
//! reachable seed stem divided by the largest of them: 1 for seeds and for
//! words sitting at equal distance from all reachable seeds, lower when a
//! few seeds are much closer than the rest, 0 when no seed is reachable.
//! A paper's score is a community-weighted average of its non-zero word
//! scores.

mod eval;
mod io;
mod paper;
mod paths;

pub use eval::{auc, evaluate, metrics, EvalRecord, EvalReport, Metrics};
pub use io::{read_paper_scores_csv, read_word_scores_csv, write_paper_scores_csv, write_word_scores_csv, PaperRow};
pub use paper::{
    default_grid, score_paper, tune_weights, Contribution, GridPoint, PaperScore, PaperTerms, ScoringWeights,
    TuneResult, DEFAULT_THRESHOLD,
};
pub use paths::{dijkstra, DistanceTransform};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::CommunityPartition;
use crate::corpus::SeedLexicon;
use crate::netbuild::CooccurrenceGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordScore {
    pub stem: String,
    pub score: f64,
    pub community: Option<u32>,
    pub in_topic_community: bool,
    /// Seed stems other than the word itself reachable in the graph.
    pub reachable_seed_count: usize,
}

impl WordScore {
    fn new(stem: &str, score: f64, reachable_seed_count: usize) -> Self {
        Self {
            stem: stem.to_string(),
            score,
            community: None,
            in_topic_community: false,
            reachable_seed_count,
        }
    }
}

/// Scores for every graph node and every lexicon stem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordScores {
    pub transform: DistanceTransform,
    pub scores: BTreeMap<String, WordScore>,
}

impl WordScores {
    pub fn get(&self, stem: &str) -> Option<&WordScore> {
        self.scores.get(stem)
    }

    /// 0 for stems without an entry.
    pub fn score(&self, stem: &str) -> f64 {
        self.get(stem).map_or(0.0, |w| w.score)
    }

    pub fn annotate(&mut self, partition: &CommunityPartition) {
        for (stem, ws) in self.scores.iter_mut() {
            ws.community = partition.community_of(stem);
            ws.in_topic_community = partition.is_topic(stem);
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Running mean/max over seed distances, fed in seed order.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    max: f64,
    count: usize,
}

impl Accumulator {
    fn add(&mut self, d: f64) {
        if d.is_finite() {
            self.sum += d;
            self.max = self.max.max(d);
            self.count += 1;
        }
    }

    fn ratio(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.sum / self.count as f64) / self.max
        }
    }
}

/// Seed nodes of `graph` in stem order.
fn seed_nodes(graph: &CooccurrenceGraph, lexicon: &SeedLexicon) -> Vec<usize> {
    lexicon
        .stemmed_terms
        .iter()
        .filter_map(|s| graph.index_of(s))
        .collect()
}

/// Score a single stem with one Dijkstra run from the stem.
pub fn score_word(
    stem: &str,
    lexicon: &SeedLexicon,
    graph: &CooccurrenceGraph,
    transform: DistanceTransform,
) -> WordScore {
    let Some(source) = graph.index_of(stem) else {
        let score = if lexicon.is_seed(stem) { 1.0 } else { 0.0 };
        return WordScore::new(stem, score, 0);
    };
    let dist = dijkstra(graph, source, transform);
    let mut acc = Accumulator::default();
    for seed in seed_nodes(graph, lexicon) {
        if seed != source {
            acc.add(dist[seed]);
        }
    }
    let score = if lexicon.is_seed(stem) { 1.0 } else { acc.ratio() };
    WordScore::new(stem, score, acc.count)
}

/// Score the whole vocabulary with one Dijkstra run per seed. Distances are
/// symmetric, so this agrees with [`score_word`] on every stem up to
/// floating-point summation order.
pub fn score_vocabulary(
    graph: &CooccurrenceGraph,
    lexicon: &SeedLexicon,
    transform: DistanceTransform,
) -> WordScores {
    let n = graph.node_count();
    let seeds = seed_nodes(graph, lexicon);
    let mut acc = vec![Accumulator::default(); n];

    // bounded batches keep memory at O(batch × n) for large lexicons
    let batch = rayon::current_num_threads().max(1) * 4;
    for chunk in seeds.chunks(batch) {
        let rows: Vec<Vec<f64>> = chunk
            .par_iter()
            .map(|&s| dijkstra(graph, s, transform))
            .collect();
        for (&seed, row) in chunk.iter().zip(&rows) {
            for (v, a) in acc.iter_mut().enumerate() {
                if v != seed {
                    a.add(row[v]);
                }
            }
        }
    }

    let mut scores: BTreeMap<String, WordScore> = graph
        .nodes()
        .iter()
        .zip(&acc)
        .map(|(node, a)| {
            let score = if lexicon.is_seed(&node.stem) { 1.0 } else { a.ratio() };
            (node.stem.clone(), WordScore::new(&node.stem, score, a.count))
        })
        .collect();
    for stem in &lexicon.stemmed_terms {
        scores
            .entry(stem.clone())
            .or_insert_with(|| WordScore::new(stem, 1.0, 0));
    }
    WordScores { transform, scores }
}
