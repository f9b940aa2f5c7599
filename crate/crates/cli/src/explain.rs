//! Per-word breakdown of one paper's relevance score.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use lexmap::relevance::{self, Contribution, PaperScore};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::pipeline::Pipeline;

/// Agreement required between the rebuilt and the stored score.
pub const TOTAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplainRow {
    pub stem: String,
    pub word_score: f64,
    pub community: Option<u32>,
    pub in_topic_community: bool,
    pub weight: f64,
    /// `weight * word_score / Σ weight`; the rows sum to the paper score.
    pub contribution: f64,
    /// Fraction of the paper score this word accounts for.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub doc_id: String,
    pub title: String,
    pub stored_score: f64,
    pub recomputed: f64,
    pub flagged: bool,
    pub rows: Vec<ExplainRow>,
    pub csv_path: PathBuf,
}

impl Explanation {
    pub fn total(&self) -> f64 {
        self.rows.iter().map(|r| r.contribution).sum()
    }

    pub fn consistent(&self) -> bool {
        (self.total() - self.stored_score).abs() <= TOTAL_TOLERANCE
            && (self.recomputed - self.stored_score).abs() <= TOTAL_TOLERANCE
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}  {}", self.doc_id, self.title);
        let _ = writeln!(
            s,
            "score {:.6} ({})",
            self.stored_score,
            if self.flagged { "flagged" } else { "not flagged" }
        );
        if self.rows.is_empty() {
            let _ = writeln!(s, "no word in this paper has a non-zero relevance score; the paper scores 0");
            return s;
        }
        let width = self.rows.iter().map(|r| r.stem.len()).max().unwrap_or(4).max(4);
        let _ = writeln!(
            s,
            "{:<width$}  {:>10}  {:>9}  {:>6}  {:>12}  {:>7}",
            "stem", "word_score", "community", "weight", "contribution", "share"
        );
        for r in &self.rows {
            let community = match r.community {
                Some(c) if r.in_topic_community => format!("{c}*"),
                Some(c) => c.to_string(),
                None => "-".into(),
            };
            let _ = writeln!(
                s,
                "{:<width$}  {:>10.6}  {:>9}  {:>6.2}  {:>12.6}  {:>6.1}%",
                r.stem,
                r.word_score,
                community,
                r.weight,
                r.contribution,
                100.0 * r.share
            );
        }
        let _ = writeln!(s, "{:<width$}  total {:.12} (stored {:.12})", "", self.total(), self.stored_score);
        let _ = writeln!(s, "* topic community");
        s
    }
}

fn rows(score: &PaperScore) -> Vec<ExplainRow> {
    let den: f64 = score.contributing_words.iter().map(|c| c.weight).sum();
    let mut rows: Vec<ExplainRow> = score
        .contributing_words
        .iter()
        .map(|c: &Contribution| {
            let contribution = if den == 0.0 { 0.0 } else { c.weight * c.word_score / den };
            ExplainRow {
                stem: c.stem.clone(),
                word_score: c.word_score,
                community: c.community,
                in_topic_community: c.in_topic_community,
                weight: c.weight,
                contribution,
                share: if score.score == 0.0 { 0.0 } else { contribution / score.score },
            }
        })
        .collect();
    rows.sort_by(|a, b| b.contribution.total_cmp(&a.contribution).then_with(|| a.stem.cmp(&b.stem)));
    rows
}

fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

/// Explains `doc_id` from the stored artifacts and writes the rows to
/// `explain/<id>.csv` in the output directory.
pub fn explain(pipeline: &Pipeline, doc_id: &str) -> Result<Explanation> {
    let corpus = pipeline.load_labeled()?;
    let doc = corpus
        .get(doc_id)
        .ok_or_else(|| CliError::UnknownDocument(doc_id.to_string()))?;
    let stored = pipeline
        .load_paper_scores()?
        .into_iter()
        .find(|r| r.doc_id == doc_id)
        .ok_or_else(|| CliError::UnknownDocument(doc_id.to_string()))?;
    let word_scores = pipeline.load_word_scores()?;
    let weights = pipeline.load_weights()?.weights;

    let stream = pipeline.preprocessor().token_stream(doc);
    let score = relevance::score_paper(&stream, &word_scores, &weights, pipeline.config().scoring.threshold);
    let rows = rows(&score);

    let dir = pipeline.output_dir().join("explain");
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let csv_path = dir.join(format!("{}.csv", file_stem(doc_id)));
    let mut writer = csv_writer(&csv_path)?;
    for r in &rows {
        writer.serialize(r).map_err(|e| CliError::io(&csv_path, e.into()))?;
    }
    writer.flush().map_err(|e| CliError::io(&csv_path, e))?;

    Ok(Explanation {
        doc_id: doc_id.to_string(),
        title: doc.title.clone(),
        stored_score: stored.score,
        recomputed: score.recompute(),
        flagged: stored.flagged,
        rows,
        csv_path,
    })
}

fn csv_writer(path: &std::path::Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}
