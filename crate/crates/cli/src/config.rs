//! Pipeline configuration, read from a TOML file and overridable from the
//! command line.
//!
//! ```toml
//! output_dir = "out"
//! lexicon = "lexicon.txt"            # bundled lexicon when omitted
//! always_topic_sources = ["FACCT"]
//!
//! [[corpus]]
//! path = "pmlr.jsonl"
//! source = "PMLR"
//!
//! [split]
//! test_fraction = 0.1
//! seed = 0
//!
//! [prune]
//! q_nonseed = 0.1
//! q_seed = 0.25
//! connectivity = "strength"          # or "degree"
//!
//! [louvain]
//! seed = 0
//!
//! [scoring]
//! transform = "reciprocal"           # or "unit", "raw"
//! threshold = 0.5
//! # weights = { w1 = 3.0, w2 = 0.5 } # fixed weights instead of tuning
//! # grid = [[3.0, 0.5], [2.0, 0.0]]  # custom tuning grid
//!
//! [discovery]
//! min_weight = 100
//! min_score = 0.5
//! verbose = false
//!
//! [report]
//! top_k = 25
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};

use lexmap::corpus::Source;
use lexmap::netbuild::Connectivity;
use lexmap::relevance::{DistanceTransform, ScoringWeights};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusInput {
    pub path: PathBuf,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            test_fraction: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PruneSection {
    pub q_nonseed: f64,
    pub q_seed: f64,
    pub connectivity: Connectivity,
}

impl Default for PruneSection {
    fn default() -> Self {
        let d = lexmap::netbuild::PruneConfig::default();
        Self {
            q_nonseed: d.q_nonseed,
            q_seed: d.q_seed,
            connectivity: d.connectivity,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LouvainConfig {
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringConfig {
    pub transform: DistanceTransform,
    pub threshold: f64,
    /// Fixed weights; tuning is skipped when set.
    pub weights: Option<ScoringWeights>,
    /// Tuning grid as `[w1, w2]` pairs; the default grid when unset.
    pub grid: Option<Vec<[f64; 2]>>,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        Self {
            transform: DistanceTransform::default(),
            threshold: lexmap::relevance::DEFAULT_THRESHOLD,
            weights: None,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscoveryConfig {
    pub min_weight: i64,
    pub min_score: f64,
    /// Append every seed edge of each candidate to the CSV.
    pub verbose: bool,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        Self {
            min_weight: lexmap::discovery::DEFAULT_MIN_WEIGHT,
            min_score: lexmap::discovery::DEFAULT_MIN_SCORE,
            verbose: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub top_k: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { top_k: 25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub always_topic_sources: Vec<Source>,
    pub corpus: Vec<CorpusInput>,
    pub split: SplitConfig,
    pub prune: PruneSection,
    pub louvain: LouvainConfig,
    pub scoring: ScoringConfig,
    pub discovery: DiscoveryConfig,
    pub report: ReportConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("lexmap-out"),
            lexicon: None,
            always_topic_sources: vec![Source::Facct],
            corpus: Vec::new(),
            split: SplitConfig::default(),
            prune: PruneSection::default(),
            louvain: LouvainConfig::default(),
            scoring: ScoringConfig::default(),
            discovery: DiscoveryConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.resolve_paths(base_dir);
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut self.output_dir);
        if let Some(l) = self.lexicon.as_mut() {
            resolve(l);
        }
        for c in &mut self.corpus {
            resolve(&mut c.path);
        }
    }

    pub fn prune_config(&self) -> lexmap::netbuild::PruneConfig {
        lexmap::netbuild::PruneConfig {
            q_nonseed: self.prune.q_nonseed,
            q_seed: self.prune.q_seed,
            connectivity: self.prune.connectivity,
        }
    }

    pub fn grid(&self) -> Vec<ScoringWeights> {
        match &self.scoring.grid {
            Some(points) => points.iter().map(|&[w1, w2]| ScoringWeights { w1, w2 }).collect(),
            None => lexmap::relevance::default_grid(),
        }
    }

    /// Range checks on every numeric field and existence of the lexicon
    /// file. Corpus files are checked by the ingest stage.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(CliError::Config(m));
        let f = self.split.test_fraction;
        if !(f > 0.0 && f < 1.0) {
            return fail(format!("split.test_fraction must lie in (0, 1), got {f}"));
        }
        for (name, q) in [("prune.q_nonseed", self.prune.q_nonseed), ("prune.q_seed", self.prune.q_seed)] {
            if !(0.0..1.0).contains(&q) {
                return fail(format!("{name} must lie in [0, 1), got {q}"));
            }
        }
        let t = self.scoring.threshold;
        if !(0.0..=1.0).contains(&t) {
            return fail(format!("scoring.threshold must lie in [0, 1], got {t}"));
        }
        if let Some(w) = &self.scoring.weights {
            w.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(grid) = &self.scoring.grid {
            if grid.is_empty() {
                return fail("scoring.grid is empty".into());
            }
            for &[w1, w2] in grid {
                ScoringWeights { w1, w2 }
                    .validate()
                    .map_err(|e| CliError::Config(format!("scoring.grid: {e}")))?;
            }
        }
        if self.discovery.min_weight < 0 {
            return fail(format!("discovery.min_weight must be >= 0, got {}", self.discovery.min_weight));
        }
        if !(self.discovery.min_score >= 0.0) {
            return fail(format!("discovery.min_score must be >= 0, got {}", self.discovery.min_score));
        }
        if self.report.top_k == 0 {
            return fail("report.top_k must be at least 1".into());
        }
        if let Some(l) = &self.lexicon {
            if !l.is_file() {
                return fail(format!("lexicon file {} does not exist", l.display()));
            }
        }
        Ok(())
    }
}
