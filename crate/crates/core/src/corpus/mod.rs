//! Document records, ingestion, seed-term labeling and the train/test split.

mod lexicon;
pub mod pmlr;

pub use lexicon::SeedLexicon;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::{document_text, Preprocessor};

/// Where a document came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Source {
    Pmlr,
    Facct,
    Other,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::Pmlr, Source::Facct, Source::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Pmlr => "PMLR",
            Source::Facct => "FACCT",
            Source::Other => "OTHER",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PMLR" => Ok(Source::Pmlr),
            "FACCT" => Ok(Source::Facct),
            "OTHER" => Ok(Source::Other),
            _ => Err(Error::InvalidParameter(format!("unknown source tag \"{s}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Topic,
    NonTopic,
    #[default]
    Unlabeled,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Topic => "TOPIC",
            Label::NonTopic => "NON_TOPIC",
            Label::Unlabeled => "UNLABELED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SplitSide {
    Train,
    Test,
}

impl SplitSide {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitSide::Train => "TRAIN",
            SplitSide::Test => "TEST",
        }
    }
}

/// One paper record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default)]
    pub label: Label,
}

/// Train/test assignment of every document id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub seed: u64,
    pub test_fraction: f64,
    pub assignment: BTreeMap<String, SplitSide>,
}

impl Split {
    pub fn side(&self, id: &str) -> Option<SplitSide> {
        self.assignment.get(id).copied()
    }

    pub fn count(&self, side: SplitSide) -> usize {
        self.assignment.values().filter(|&&s| s == side).count()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub split: Option<Split>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Self {
            documents,
            split: None,
        }
    }

    /// Concatenate fragments, rejecting ids that appear in more than one.
    pub fn merge(fragments: impl IntoIterator<Item = Corpus>) -> Result<Corpus> {
        let mut seen = HashSet::new();
        let mut documents = Vec::new();
        for fragment in fragments {
            for doc in fragment.documents {
                if !seen.insert(doc.id.clone()) {
                    return Err(Error::DuplicateId {
                        line: documents.len() + 1,
                        id: doc.id,
                    });
                }
                documents.push(doc);
            }
        }
        Ok(Corpus::new(documents))
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    /// Documents assigned to `side`; all documents when no split exists.
    pub fn side(&self, side: SplitSide) -> impl Iterator<Item = &Document> {
        self.documents.iter().filter(move |d| match &self.split {
            Some(split) => split.side(&d.id) == Some(side),
            None => true,
        })
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for doc in &self.documents {
            serde_json::to_writer(&mut out, doc)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    title: Option<String>,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(rename = "abstract")]
    abstract_text: Option<String>,
    source: Option<Source>,
    year: Option<i32>,
    #[serde(default)]
    label: Label,
}

/// Parse a JSONL corpus. Records without a `source` field get
/// `default_source`; a `label` field, when present, is kept.
pub fn parse_jsonl<R: BufRead>(reader: R, default_source: Source) -> Result<Vec<Document>> {
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| Error::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        let id = raw
            .id
            .filter(|id| !id.trim().is_empty())
            .ok_or(Error::MissingField {
                line: line_no,
                field: "id",
            })?;
        let title = raw.title.ok_or(Error::MissingField {
            line: line_no,
            field: "title",
        })?;
        let abstract_text = raw.abstract_text.ok_or(Error::MissingField {
            line: line_no,
            field: "abstract",
        })?;
        if abstract_text.trim().is_empty() {
            return Err(Error::EmptyAbstract { line: line_no, id });
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId { line: line_no, id });
        }
        docs.push(Document {
            id,
            title,
            keywords: raw.keywords,
            abstract_text,
            source: raw.source.unwrap_or(default_source),
            year: raw.year,
            label: raw.label,
        });
    }
    Ok(docs)
}

/// Read a JSONL corpus file. Every document comes back `UNLABELED`.
pub fn ingest(path: &Path, source: Source) -> Result<Corpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut docs = parse_jsonl(BufReader::new(file), source)?;
    for doc in &mut docs {
        doc.label = Label::Unlabeled;
    }
    Ok(Corpus::new(docs))
}

/// Read a JSONL corpus file written by this crate, keeping labels.
pub fn read_corpus(path: &Path) -> Result<Corpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(Corpus::new(parse_jsonl(BufReader::new(file), Source::Other)?))
}

/// A seed term occurrence: index into `SeedLexicon::raw_terms` and the
/// position of its first stem in the document's stem list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub term: usize,
    pub position: usize,
}

/// First (term order, then position) seed term whose stems occur
/// contiguously in `stems`.
pub fn find_witness(stems: &[String], lexicon: &SeedLexicon) -> Option<Witness> {
    lexicon
        .term_stems
        .iter()
        .enumerate()
        .filter(|(_, seq)| !seq.is_empty() && seq.len() <= stems.len())
        .find_map(|(term, seq)| {
            stems
                .windows(seq.len())
                .position(|w| w == seq.as_slice())
                .map(|position| Witness { term, position })
        })
}

/// Label every document. Sources in `always_topic` are `TOPIC`
/// unconditionally; everything else is `TOPIC` iff a seed term occurs.
pub fn label_corpus(
    corpus: &Corpus,
    lexicon: &SeedLexicon,
    always_topic: &BTreeSet<Source>,
    prep: &Preprocessor,
) -> Result<Corpus> {
    if lexicon.stemmed_terms.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let documents = corpus
        .documents
        .par_iter()
        .map(|doc| {
            let label = if always_topic.contains(&doc.source) {
                Label::Topic
            } else {
                let stems = prep.preprocess(&document_text(doc));
                match find_witness(&stems, lexicon) {
                    Some(_) => Label::Topic,
                    None => Label::NonTopic,
                }
            };
            Document {
                label,
                ..doc.clone()
            }
        })
        .collect();
    Ok(Corpus {
        documents,
        split: corpus.split.clone(),
    })
}

/// Size of the test side: `round(test_fraction * n)` rounding halves up,
/// at least 1 and at most `n - 1`.
pub fn test_size(n: usize, test_fraction: f64) -> usize {
    let k = (test_fraction * n as f64 + 0.5).floor() as usize;
    k.clamp(1, n.saturating_sub(1).max(1))
}

/// Simple random split: the ids are sorted, shuffled with a ChaCha8 stream
/// seeded from `seed`, and the first `test_size` become `TEST`.
pub fn split_corpus(corpus: &Corpus, test_fraction: f64, seed: u64) -> Result<Corpus> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let n = corpus.len();
    if n < 2 {
        return Err(Error::CorpusTooSmall(n));
    }
    let mut ids: Vec<&str> = corpus.documents.iter().map(|d| d.id.as_str()).collect();
    ids.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let k = test_size(n, test_fraction);
    let assignment = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let side = if i < k { SplitSide::Test } else { SplitSide::Train };
            (id.to_string(), side)
        })
        .collect();
    Ok(Corpus {
        documents: corpus.documents.clone(),
        split: Some(Split {
            seed,
            test_fraction,
            assignment,
        }),
    })
}
