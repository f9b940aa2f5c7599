//! Seed-lexicon driven topic mapping over paper abstracts.
//!
//! Documents are reduced to stem streams, stems are linked by document
//! co-occurrence, the graph is partitioned into communities, and words and
//! papers are scored by their proximity to a seed lexicon.

pub mod community;
pub mod corpus;
pub mod discovery;
pub mod error;
pub mod netbuild;
pub mod relevance;
pub mod synth;
pub mod textprep;

pub use error::{Error, Result};
