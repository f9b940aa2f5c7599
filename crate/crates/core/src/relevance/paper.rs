use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::WordScores;
use crate::error::{Error, Result};
use crate::textprep::TokenStream;

/// Papers scoring at or above this are flagged as on-topic.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Per-word weights: `w1` for words in a topic community, `w2` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringWeights {
    pub w1: f64,
    pub w2: f64,
}

impl Default for ScoringWeights {
    fn default() -> Self {
        Self { w1: 3.0, w2: 0.5 }
    }
}

impl ScoringWeights {
    pub fn new(w1: f64, w2: f64) -> Result<Self> {
        let weights = Self { w1, w2 };
        weights.validate()?;
        Ok(weights)
    }

    /// Requires `w1 > w2 >= 0`.
    pub fn validate(&self) -> Result<()> {
        if self.w1.is_finite() && self.w2.is_finite() && self.w1 > self.w2 && self.w2 >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "scoring weights need w1 > w2 >= 0, got w1 = {}, w2 = {}",
                self.w1, self.w2
            )))
        }
    }

    pub fn weight(&self, in_topic_community: bool) -> f64 {
        if in_topic_community {
            self.w1
        } else {
            self.w2
        }
    }
}

/// Weight-independent totals of a paper's non-zero word scores, split by
/// topic-community membership. Tuning evaluates many weight pairs against
/// these without revisiting the words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PaperTerms {
    pub tc_sum: f64,
    pub ntc_sum: f64,
    pub tc_count: usize,
    pub ntc_count: usize,
}

impl PaperTerms {
    /// Totals over the distinct stems of `stream`, in stem order.
    pub fn of(stream: &TokenStream, word_scores: &WordScores) -> Self {
        let mut terms = Self::default();
        for stem in stream.distinct() {
            let Some(ws) = word_scores.get(stem) else { continue };
            if ws.score == 0.0 {
                continue;
            }
            if ws.in_topic_community {
                terms.tc_sum += ws.score;
                terms.tc_count += 1;
            } else {
                terms.ntc_sum += ws.score;
                terms.ntc_count += 1;
            }
        }
        terms
    }

    pub fn word_count(&self) -> usize {
        self.tc_count + self.ntc_count
    }

    pub fn score(&self, weights: &ScoringWeights) -> f64 {
        let den = weights.w1 * self.tc_count as f64 + weights.w2 * self.ntc_count as f64;
        if self.word_count() == 0 || den == 0.0 {
            return 0.0;
        }
        (weights.w1 * self.tc_sum + weights.w2 * self.ntc_sum) / den
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub stem: String,
    pub word_score: f64,
    pub community: Option<u32>,
    pub in_topic_community: bool,
    /// `w1` or `w2`, depending on `in_topic_community`.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperScore {
    pub doc_id: String,
    pub score: f64,
    /// Distinct stems with a non-zero word score, in stem order.
    pub contributing_words: Vec<Contribution>,
    pub flagged: bool,
}

impl PaperScore {
    /// The weighted average rebuilt term by term from the contributions.
    pub fn recompute(&self) -> f64 {
        let num: f64 = self.contributing_words.iter().map(|c| c.word_score * c.weight).sum();
        let den: f64 = self.contributing_words.iter().map(|c| c.weight).sum();
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }
}

pub fn score_paper(
    stream: &TokenStream,
    word_scores: &WordScores,
    weights: &ScoringWeights,
    threshold: f64,
) -> PaperScore {
    let contributing_words: Vec<Contribution> = stream
        .distinct()
        .filter_map(|stem| word_scores.get(stem))
        .filter(|ws| ws.score != 0.0)
        .map(|ws| Contribution {
            stem: ws.stem.clone(),
            word_score: ws.score,
            community: ws.community,
            in_topic_community: ws.in_topic_community,
            weight: weights.weight(ws.in_topic_community),
        })
        .collect();
    let score = PaperTerms::of(stream, word_scores).score(weights);
    PaperScore {
        doc_id: stream.doc_id.clone(),
        score,
        contributing_words,
        flagged: score >= threshold,
    }
}

/// `w1 ∈ {1, 1.5, …, 5}` × `w2 ∈ {0, 0.1, …, 1}`, keeping `w1 > w2`.
pub fn default_grid() -> Vec<ScoringWeights> {
    let mut grid = Vec::new();
    for i in 0..=8 {
        for j in 0..=10 {
            let w = ScoringWeights {
                w1: 1.0 + 0.5 * f64::from(i),
                w2: f64::from(j) / 10.0,
            };
            if w.validate().is_ok() {
                grid.push(w);
            }
        }
    }
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub w1: f64,
    pub w2: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub weights: ScoringWeights,
    pub f1: f64,
    pub threshold: f64,
    /// Name of the quantity maximized.
    pub objective: String,
    pub grid: Vec<GridPoint>,
}

fn f1_at(papers: &[(PaperTerms, bool)], weights: &ScoringWeights, threshold: f64) -> f64 {
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (terms, topic) in papers {
        match (terms.score(weights) >= threshold, *topic) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    if tp == 0 {
        0.0
    } else {
        let p = tp as f64 / (tp + fp) as f64;
        let r = tp as f64 / (tp + fneg) as f64;
        2.0 * p * r / (p + r)
    }
}

/// Exhaustive grid search for the weights maximizing training F1 of the
/// thresholded classification. Equal F1 goes to the smaller `w1`, then to
/// the larger `w2`.
pub fn tune_weights(
    train: &[(PaperTerms, bool)],
    grid: &[ScoringWeights],
    threshold: f64,
) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("weight grid is empty".into()));
    }
    for w in grid {
        w.validate()?;
    }
    let positives = train.iter().filter(|(_, t)| *t).count();
    if positives == 0 || positives == train.len() {
        return Err(Error::SingleClass);
    }
    let evaluated: Vec<GridPoint> = grid
        .par_iter()
        .map(|w| GridPoint {
            w1: w.w1,
            w2: w.w2,
            f1: f1_at(train, w, threshold),
        })
        .collect();
    let best = evaluated
        .iter()
        .reduce(|best, p| {
            let better = p.f1 > best.f1
                || (p.f1 == best.f1 && (p.w1 < best.w1 || (p.w1 == best.w1 && p.w2 > best.w2)));
            if better {
                p
            } else {
                best
            }
        })
        .expect("grid is non-empty");
    Ok(TuneResult {
        weights: ScoringWeights { w1: best.w1, w2: best.w2 },
        f1: best.f1,
        threshold,
        objective: "train_f1".into(),
        grid: evaluated.clone(),
    })
}
