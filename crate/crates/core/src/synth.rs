//! Synthetic corpora with planted topic documents, for scale tests and
//! end-to-end checks where the true topic labels are known.
//!
//! The vocabulary consists of pronounceable pseudo-words that are fixed
//! points of the stemmer, split into themes. Each ordinary document draws
//! mostly from one theme and partly from a corpus-wide Zipf background.
//! Planted documents draw from a dedicated topic theme and also mention
//! several seed terms.

use std::collections::{BTreeSet, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Label, SeedLexicon, Source};
use crate::error::{Error, Result};
use crate::textprep::{stem, Preprocessor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub documents: usize,
    /// Number of pseudo-words, excluding seed terms.
    pub vocabulary: usize,
    /// Ordinary themes; the topic theme comes on top of these.
    pub themes: usize,
    /// Share of documents that are planted topic documents.
    pub planted_fraction: f64,
    /// Share of planted documents tagged FACCT rather than PMLR.
    pub facct_share: f64,
    pub min_words: usize,
    pub max_words: usize,
    /// Probability that a word is drawn from the document's theme rather
    /// than the background.
    pub theme_affinity: f64,
    /// Seed terms mentioned per planted document.
    pub min_seed_mentions: usize,
    pub max_seed_mentions: usize,
    /// Two-word seed terms built from topic-theme words.
    pub compound_terms: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            documents: 10_000,
            vocabulary: 8_000,
            themes: 24,
            planted_fraction: 0.066,
            facct_share: 0.25,
            min_words: 40,
            max_words: 80,
            theme_affinity: 0.8,
            min_seed_mentions: 3,
            max_seed_mentions: 6,
            compound_terms: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub corpus: Corpus,
    /// Raw seed terms, one per lexicon line.
    pub lexicon_terms: Vec<String>,
    /// Ids of planted topic documents.
    pub planted: BTreeSet<String>,
}

impl SynthCorpus {
    pub fn lexicon_text(&self) -> String {
        let mut text = String::from("# synthetic seed lexicon\n");
        for t in &self.lexicon_terms {
            text.push_str(t);
            text.push('\n');
        }
        text
    }
}

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "dr", "gr", "kl", "pl", "st", "tr",
];
const NUCLEI: &[&str] = &["a", "o", "u", "i", "ou", "ai"];
const CODAS: &[&str] = &["", "", "n", "r", "k", "m", "t", "lp", "nd", "sk"];
const FILLERS: &[&str] = &["the", "of", "and", "in", "for", "to", "with", "on", "we", "this"];

fn pseudo_words(count: usize, forbidden: &HashSet<String>, prep: &Preprocessor, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut words = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while words.len() < count {
        attempts += 1;
        assert!(attempts < count * 1000 + 100_000, "pseudo-word space exhausted");
        let syllables = rng.random_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).unwrap());
            w.push_str(NUCLEI.choose(rng).unwrap());
        }
        w.push_str(CODAS.choose(rng).unwrap());
        if w.len() < 4 || prep.is_stopword(&w) || stem(&w) != w || forbidden.contains(&w) || !seen.insert(w.clone()) {
            continue;
        }
        words.push(w);
    }
    words
}

/// Zipf weights `1/(rank+1)`.
fn zipf(n: usize) -> WeightedIndex<f64> {
    WeightedIndex::new((0..n).map(|r| 1.0 / (r as f64 + 1.0))).expect("non-empty")
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    let invalid = |m: &str| Err(Error::InvalidParameter(m.to_string()));
    if config.documents < 2 {
        return invalid("synthetic corpus needs at least 2 documents");
    }
    if config.themes == 0 || config.vocabulary < 10 * (config.themes + 1) {
        return invalid("vocabulary must hold at least 10 words per theme");
    }
    if !(0.0..1.0).contains(&config.planted_fraction) || !(0.0..=1.0).contains(&config.facct_share) {
        return invalid("fractions must lie in [0, 1)");
    }
    if !(0.0..=1.0).contains(&config.theme_affinity) {
        return invalid("theme_affinity must lie in [0, 1]");
    }
    if config.min_words == 0 || config.min_words > config.max_words {
        return invalid("need 0 < min_words <= max_words");
    }
    if config.min_seed_mentions == 0 || config.min_seed_mentions > config.max_seed_mentions {
        return invalid("need 0 < min_seed_mentions <= max_seed_mentions");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let prep = Preprocessor::default();
    let base_terms = SeedLexicon::bundled_terms();
    let forbidden: HashSet<String> = SeedLexicon::bundled(&prep).stemmed_terms.into_iter().collect();

    let mut vocab = pseudo_words(config.vocabulary, &forbidden, &prep, &mut rng);
    vocab.shuffle(&mut rng);

    // theme 0 is the topic theme; the vocabulary is dealt round-robin
    let theme_count = config.themes + 1;
    let mut themes: Vec<Vec<&str>> = vec![Vec::new(); theme_count];
    for (i, w) in vocab.iter().enumerate() {
        themes[i % theme_count].push(w);
    }
    let theme_dists: Vec<WeightedIndex<f64>> = themes.iter().map(|t| zipf(t.len())).collect();
    let background = zipf(vocab.len());

    let mut lexicon_terms = base_terms.clone();
    for pair in themes[0].chunks(2).take(config.compound_terms) {
        if let [a, b] = pair {
            lexicon_terms.push(format!("{a} {b}"));
        }
    }
    let seed_dist = zipf(lexicon_terms.len());

    let planted_count = (config.planted_fraction * config.documents as f64).round() as usize;
    let mut is_planted = vec![false; config.documents];
    for flag in is_planted.iter_mut().take(planted_count) {
        *flag = true;
    }
    is_planted.shuffle(&mut rng);

    let mut documents = Vec::with_capacity(config.documents);
    let mut planted = BTreeSet::new();
    for (d, &topic) in is_planted.iter().enumerate() {
        let id = format!("syn-{d:05}");
        let theme = if topic { 0 } else { rng.random_range(1..theme_count) };
        let length = rng.random_range(config.min_words..=config.max_words);
        let mut words: Vec<String> = (0..length)
            .map(|_| {
                if rng.random_bool(config.theme_affinity) {
                    themes[theme][theme_dists[theme].sample(&mut rng)].to_string()
                } else {
                    vocab[background.sample(&mut rng)].clone()
                }
            })
            .collect();
        if topic {
            let mentions = rng.random_range(config.min_seed_mentions..=config.max_seed_mentions);
            for _ in 0..mentions {
                let term = lexicon_terms[seed_dist.sample(&mut rng)].clone();
                let at = rng.random_range(0..=words.len());
                words.insert(at, term);
            }
        }
        let mut text = String::new();
        for (i, w) in words.iter().enumerate() {
            if i > 0 {
                text.push(' ');
                if rng.random_bool(0.3) {
                    text.push_str(FILLERS.choose(&mut rng).unwrap());
                    text.push(' ');
                }
            }
            text.push_str(w);
        }
        let title = words[..words.len().min(6)].join(" ");
        let source = if topic && rng.random_bool(config.facct_share) {
            Source::Facct
        } else {
            Source::Pmlr
        };
        if topic {
            planted.insert(id.clone());
        }
        documents.push(Document {
            id,
            title: capitalize(&title),
            keywords: Vec::new(),
            abstract_text: format!("{}.", capitalize(&text)),
            source,
            year: Some(2015 + rng.random_range(0..8)),
            label: Label::Unlabeled,
        });
    }

    Ok(SynthCorpus {
        corpus: Corpus::new(documents),
        lexicon_terms,
        planted,
    })
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
