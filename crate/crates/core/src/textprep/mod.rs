//! Text normalization: lowercasing, tokenization, stopword removal and
//! Snowball English stemming.

mod stemmer;

pub use stemmer::stem;

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

/// Version tag of the bundled stopword list, recorded in run manifests.
pub const STOPWORDS_VERSION: &str = "en-1";

/// Parse a stopword list: one word per line, `#` comments and blank lines
/// ignored.
pub fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// The text pipeline. Cheap to clone; holds only the stopword set.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    stopwords: HashSet<String>,
}

impl Default for Preprocessor {
    fn default() -> Self {
        Self::new(parse_word_list(DEFAULT_STOPWORDS))
    }
}

impl Preprocessor {
    pub fn new<I, S>(stopwords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            stopwords: stopwords.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    /// Lowercase, split on anything that is not `a`-`z`, and drop stopwords
    /// and single characters. No stemming.
    pub fn tokens(&self, text: &str) -> Vec<String> {
        text.to_lowercase()
            .split(|c: char| !c.is_ascii_lowercase())
            .filter(|t| t.len() >= 2 && !self.is_stopword(t))
            .map(str::to_string)
            .collect()
    }

    /// Full pipeline: the ordered list of stems for `text`.
    ///
    /// A stem that collapses to a single character or to a stopword is
    /// dropped as well, so the output never contains either.
    pub fn preprocess(&self, text: &str) -> Vec<String> {
        self.tokens(text)
            .iter()
            .map(|t| stem(t))
            .filter(|s| s.len() >= 2 && !self.is_stopword(s))
            .collect()
    }

    pub fn token_stream(&self, doc: &Document) -> TokenStream {
        TokenStream::new(doc.id.clone(), self.preprocess(&document_text(doc)))
    }

    /// Token streams of many documents, computed in parallel, in input order.
    pub fn token_streams<'a>(&self, docs: impl IntoParallelIterator<Item = &'a Document>) -> Vec<TokenStream> {
        docs.into_par_iter().map(|d| self.token_stream(d)).collect()
    }
}

fn default_preprocessor() -> &'static Preprocessor {
    static DEFAULT: OnceLock<Preprocessor> = OnceLock::new();
    DEFAULT.get_or_init(Preprocessor::default)
}

/// [`Preprocessor::preprocess`] with the bundled stopword list.
pub fn preprocess(text: &str) -> Vec<String> {
    default_preprocessor().preprocess(text)
}

/// Title, keywords and abstract joined by single spaces.
pub fn document_text(doc: &Document) -> String {
    let mut parts: Vec<&str> = Vec::with_capacity(doc.keywords.len() + 2);
    parts.push(&doc.title);
    parts.extend(doc.keywords.iter().map(String::as_str));
    parts.push(&doc.abstract_text);
    parts
        .into_iter()
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Preprocessed form of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub doc_id: String,
    pub stems: Vec<String>,
    pub stem_counts: BTreeMap<String, u32>,
}

impl TokenStream {
    pub fn new(doc_id: String, stems: Vec<String>) -> Self {
        let mut stem_counts = BTreeMap::new();
        for s in &stems {
            *stem_counts.entry(s.clone()).or_insert(0) += 1;
        }
        Self {
            doc_id,
            stems,
            stem_counts,
        }
    }

    /// Distinct stems in lexicographic order.
    pub fn distinct(&self) -> impl Iterator<Item = &str> {
        self.stem_counts.keys().map(String::as_str)
    }
}
