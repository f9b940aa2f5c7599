use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{DistanceTransform, WordScore, WordScores};
use crate::corpus::{Label, Source, SplitSide};
use crate::error::{Error, Result};

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Malformed {
        line,
        message: e.to_string(),
    }
}

fn io_error(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// Columns: stem, score, community, in_topic_community, reachable_seed_count.
pub fn write_word_scores_csv<W: Write>(scores: &WordScores, out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for ws in scores.scores.values() {
        writer.serialize(ws).map_err(io_error)?;
    }
    writer.flush()
}

pub fn read_word_scores_csv<R: Read>(input: R, transform: DistanceTransform) -> Result<WordScores> {
    let mut reader = csv::Reader::from_reader(input);
    let mut scores = BTreeMap::new();
    for record in reader.deserialize::<WordScore>() {
        let ws = record.map_err(csv_error)?;
        scores.insert(ws.stem.clone(), ws);
    }
    Ok(WordScores { transform, scores })
}

/// One line of the paper score table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRow {
    pub doc_id: String,
    pub score: f64,
    pub flagged: bool,
    pub label: Label,
    pub split: SplitSide,
    pub source: Source,
    /// Distinct stems with a non-zero word score.
    pub contributing_words: usize,
}

pub fn write_paper_scores_csv<W: Write>(rows: &[PaperRow], out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(io_error)?;
    }
    writer.flush()
}

pub fn read_paper_scores_csv<R: Read>(input: R) -> Result<Vec<PaperRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(csv_error))
        .collect()
}
