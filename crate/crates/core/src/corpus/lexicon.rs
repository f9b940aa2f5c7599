use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::{parse_word_list, Preprocessor};

const DEFAULT_LEXICON: &str = include_str!("../../data/default_lexicon.txt");

/// Seed terms anchoring labeling, scoring and discovery.
///
/// `term_stems[i]` is the stem sequence of `raw_terms[i]`. A stem is
/// compound-derived when it only ever comes from terms that split into two
/// or more stems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLexicon {
    pub raw_terms: Vec<String>,
    pub term_stems: Vec<Vec<String>>,
    pub stemmed_terms: BTreeSet<String>,
    pub compound_derived: BTreeSet<String>,
}

impl SeedLexicon {
    pub fn from_terms<I, S>(raw_terms: I, prep: &Preprocessor) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let raw_terms: Vec<String> = raw_terms.into_iter().map(Into::into).collect();
        let term_stems: Vec<Vec<String>> =
            raw_terms.iter().map(|t| prep.preprocess(t)).collect();

        let mut stemmed_terms = BTreeSet::new();
        let mut from_single = BTreeSet::new();
        for stems in &term_stems {
            stemmed_terms.extend(stems.iter().cloned());
            if stems.len() == 1 {
                from_single.insert(stems[0].clone());
            }
        }
        if stemmed_terms.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let compound_derived = stemmed_terms.difference(&from_single).cloned().collect();
        Ok(Self {
            raw_terms,
            term_stems,
            stemmed_terms,
            compound_derived,
        })
    }

    /// Parse a lexicon file body: one raw term per line, `#` comments.
    pub fn parse(text: &str, prep: &Preprocessor) -> Result<Self> {
        Self::from_terms(parse_word_list(text), prep)
    }

    pub fn from_file(path: &Path, prep: &Preprocessor) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, prep)
    }

    /// The bundled lexicon: one source word for each of 41 seed stems
    /// covering fairness, privacy, interpretability and accountability.
    pub fn bundled(prep: &Preprocessor) -> Self {
        Self::parse(DEFAULT_LEXICON, prep).expect("bundled lexicon is non-empty")
    }

    /// Raw terms of the bundled lexicon.
    pub fn bundled_terms() -> Vec<String> {
        parse_word_list(DEFAULT_LEXICON)
    }

    pub fn is_seed(&self, stem: &str) -> bool {
        self.stemmed_terms.contains(stem)
    }

    pub fn is_compound_derived(&self, stem: &str) -> bool {
        self.compound_derived.contains(stem)
    }

    pub fn len(&self) -> usize {
        self.stemmed_terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stemmed_terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicon_has_the_41_seed_stems() {
        let lex = SeedLexicon::bundled(&Preprocessor::default());
        let expected = "sensit bias decis constraint impact group remov discrimin attribut \
            demograph fair gender implicit interpret mitig pariti treatment unfair criteria \
            dispar sex subgroup transpar crimin racial justic differenti mechan privaci privat \
            concern individu preserv metric definit account procedur discoveri trustworthi \
            hindsight unbias";
        let expected: BTreeSet<String> = expected.split_whitespace().map(String::from).collect();
        assert_eq!(expected.len(), 41);
        assert_eq!(lex.stemmed_terms, expected);
        assert!(lex.compound_derived.is_empty());
    }

    #[test]
    fn compound_derivation() {
        let prep = Preprocessor::default();
        let lex = SeedLexicon::from_terms(["bias", "algorithmic bias", "fairness"], &prep).unwrap();
        assert_eq!(lex.term_stems[1], vec!["algorithm", "bias"]);
        assert_eq!(
            lex.stemmed_terms,
            BTreeSet::from(["algorithm".into(), "bias".into(), "fair".into()])
        );
        assert_eq!(lex.compound_derived, BTreeSet::from(["algorithm".into()]));
    }

    #[test]
    fn comments_and_stopword_only_terms() {
        let prep = Preprocessor::default();
        let lex = SeedLexicon::parse("# header\n\nprivacy\nthe\n", &prep).unwrap();
        assert_eq!(lex.raw_terms, vec!["privacy", "the"]);
        assert_eq!(lex.len(), 1);
        assert!(matches!(
            SeedLexicon::parse("# nothing\nthe and\n", &prep),
            Err(Error::EmptyLexicon)
        ));
    }
}
