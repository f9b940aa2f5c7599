//! Stage runner with content-hashed caching.
//!
//! Every stage reads the artifacts of the stages it depends on from the
//! output directory and writes its own. `manifest.json` records, per stage,
//! a fingerprint over the stage name, its configuration and the hashes of
//! its inputs, plus the hashes of what it wrote. A stage whose fingerprint
//! and outputs still match is skipped unless forced.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use lexmap::community::{self, CommunityPartition, PartitionSummary};
use lexmap::corpus::{self, Corpus, Label, SeedLexicon, Split, SplitSide};
use lexmap::discovery;
use lexmap::netbuild::{self, CooccurrenceGraph, PruneReport};
use lexmap::relevance::{
    self, EvalRecord, EvalReport, PaperRow, PaperTerms, ScoringWeights, TuneResult, WordScores,
};
use lexmap::textprep::{Preprocessor, TokenStream, STOPWORDS_VERSION};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};

pub const CORPUS: &str = "corpus.jsonl";
pub const LABELED: &str = "labeled.jsonl";
pub const SPLIT: &str = "split.json";
pub const GRAPH_UNPRUNED: &str = "graph_unpruned.tsv";
pub const GRAPH: &str = "graph.tsv";
pub const PRUNE_REPORT: &str = "prune_report.json";
pub const PARTITION: &str = "partition.tsv";
pub const COMMUNITIES: &str = "communities.json";
pub const WORD_SCORES: &str = "word_scores.csv";
pub const WEIGHTS: &str = "weights.json";
pub const PAPER_SCORES: &str = "paper_scores.csv";
pub const EVALUATION: &str = "evaluation.json";
pub const DISCOVERY: &str = "discovery.csv";
pub const MANIFEST: &str = "manifest.json";
pub const REPORT: &str = "report.md";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Label,
    Split,
    Graph,
    Communities,
    ScoreWords,
    Tune,
    ScorePapers,
    Evaluate,
    Discover,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Ingest,
        Stage::Label,
        Stage::Split,
        Stage::Graph,
        Stage::Communities,
        Stage::ScoreWords,
        Stage::Tune,
        Stage::ScorePapers,
        Stage::Evaluate,
        Stage::Discover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Label => "label",
            Stage::Split => "split",
            Stage::Graph => "graph",
            Stage::Communities => "communities",
            Stage::ScoreWords => "score-words",
            Stage::Tune => "tune",
            Stage::ScorePapers => "score-papers",
            Stage::Evaluate => "evaluate",
            Stage::Discover => "discover",
        }
    }

    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &[CORPUS],
            Stage::Label => &[LABELED],
            Stage::Split => &[SPLIT],
            Stage::Graph => &[GRAPH_UNPRUNED, GRAPH, PRUNE_REPORT],
            Stage::Communities => &[PARTITION, COMMUNITIES],
            Stage::ScoreWords => &[WORD_SCORES],
            Stage::Tune => &[WEIGHTS],
            Stage::ScorePapers => &[PAPER_SCORES],
            Stage::Evaluate => &[EVALUATION],
            Stage::Discover => &[DISCOVERY],
        }
    }

    /// Stages whose artifacts this stage reads.
    pub fn dependencies(self) -> &'static [Stage] {
        match self {
            Stage::Ingest => &[],
            Stage::Label => &[Stage::Ingest],
            Stage::Split => &[Stage::Ingest],
            Stage::Graph => &[Stage::Label, Stage::Split],
            Stage::Communities => &[Stage::Graph],
            Stage::ScoreWords => &[Stage::Graph, Stage::Communities],
            Stage::Tune => &[Stage::Label, Stage::Split, Stage::ScoreWords],
            Stage::ScorePapers => &[Stage::Label, Stage::Split, Stage::ScoreWords, Stage::Tune],
            Stage::Evaluate => &[Stage::ScorePapers],
            Stage::Discover => &[Stage::Graph, Stage::Communities, Stage::ScoreWords],
        }
    }

    fn uses_lexicon(self) -> bool {
        matches!(
            self,
            Stage::Label | Stage::Graph | Stage::Communities | Stage::ScoreWords | Stage::Discover
        )
    }

    fn producer_of(artifact: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.outputs().contains(&artifact))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown stage \"{s}\""))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub fingerprint: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub elapsed_ms: u128,
    pub cached: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub stopwords_version: String,
    pub config: PipelineConfig,
    pub stages: BTreeMap<String, StageRecord>,
    /// Peak resident memory of the last process that wrote the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_memory_kb: Option<u64>,
}

/// Stored by the tune stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsArtifact {
    pub weights: ScoringWeights,
    /// `grid` or `fixed`.
    pub origin: String,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuning: Option<TuneResult>,
}

/// Stored by the evaluate stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationArtifact {
    pub transform: String,
    pub weights: ScoringWeights,
    pub weights_origin: String,
    pub objective: Option<String>,
    pub report: EvalReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageOutcome {
    pub stage: Stage,
    pub cached: bool,
    pub elapsed_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn hash_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Peak resident set size from `/proc/self/status`, where available.
pub fn peak_memory_kb() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Core(lexmap::Error::Malformed {
            line: e.line(),
            message: format!("{}: {e}", path.display()),
        })
    })
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn finish(path: &Path, mut w: BufWriter<fs::File>) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

pub struct Pipeline {
    config: PipelineConfig,
    prep: Preprocessor,
    out: PathBuf,
    force: bool,
    manifest: Manifest,
}

impl Pipeline {
    pub fn new(config: PipelineConfig, force: bool) -> Result<Self> {
        config.validate()?;
        let out = config.output_dir.clone();
        fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
        let fresh = Manifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            stopwords_version: STOPWORDS_VERSION.to_string(),
            config: config.clone(),
            stages: BTreeMap::new(),
            peak_memory_kb: None,
        };
        let manifest_path = out.join(MANIFEST);
        let manifest = match read_json::<Manifest>(&manifest_path) {
            Ok(m) => Manifest {
                stages: m.stages,
                ..fresh
            },
            Err(_) => fresh,
        };
        Ok(Self {
            config,
            prep: Preprocessor::default(),
            out,
            force,
            manifest,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn output_dir(&self) -> &Path {
        &self.out
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn path(&self, artifact: &str) -> PathBuf {
        self.out.join(artifact)
    }

    /// Path of `artifact`, or the error naming the stage that produces it.
    pub fn require(&self, artifact: &str) -> Result<PathBuf> {
        let p = self.path(artifact);
        if p.is_file() {
            Ok(p)
        } else {
            let stage = Stage::producer_of(artifact).map_or("run all", Stage::name);
            Err(CliError::MissingDependency {
                stage,
                artifact: artifact.to_string(),
            })
        }
    }

    fn lexicon_text(&self) -> Result<String> {
        match &self.config.lexicon {
            Some(p) => fs::read_to_string(p).map_err(|e| CliError::io(p, e)),
            None => Ok(SeedLexicon::bundled_terms().join("\n") + "\n"),
        }
    }

    pub fn lexicon(&self) -> Result<SeedLexicon> {
        Ok(SeedLexicon::parse(&self.lexicon_text()?, &self.prep)?)
    }

    /// Configuration that affects a stage's output.
    fn stage_params(&self, stage: Stage) -> serde_json::Value {
        let c = &self.config;
        let v = match stage {
            Stage::Ingest => serde_json::json!({
                "corpus": c.corpus.iter().map(|i| i.source.as_str()).collect::<Vec<_>>()
            }),
            Stage::Label => serde_json::json!({
                "always_topic_sources": c.always_topic_sources,
                "stopwords": STOPWORDS_VERSION,
            }),
            Stage::Split => serde_json::json!(c.split),
            Stage::Graph => serde_json::json!({ "prune": c.prune, "stopwords": STOPWORDS_VERSION }),
            Stage::Communities => serde_json::json!(c.louvain),
            Stage::ScoreWords => serde_json::json!({ "transform": c.scoring.transform }),
            Stage::Tune => serde_json::json!({
                "threshold": c.scoring.threshold,
                "weights": c.scoring.weights,
                "grid": c.scoring.grid,
                "stopwords": STOPWORDS_VERSION,
            }),
            Stage::ScorePapers => serde_json::json!({
                "threshold": c.scoring.threshold,
                "stopwords": STOPWORDS_VERSION,
            }),
            Stage::Evaluate => serde_json::json!({ "transform": c.scoring.transform }),
            Stage::Discover => serde_json::json!(c.discovery),
        };
        serde_json::json!({ "stage": stage.name(), "version": env!("CARGO_PKG_VERSION"), "params": v })
    }

    fn input_hashes(&self, stage: Stage) -> Result<BTreeMap<String, String>> {
        let mut inputs = BTreeMap::new();
        if stage == Stage::Ingest {
            if self.config.corpus.is_empty() {
                return Err(CliError::Config("no corpus files configured".into()));
            }
            for (i, c) in self.config.corpus.iter().enumerate() {
                if !c.path.is_file() {
                    return Err(CliError::Config(format!("corpus file {} does not exist", c.path.display())));
                }
                inputs.insert(format!("corpus[{i}]"), hash_file(&c.path)?);
            }
        }
        if stage.uses_lexicon() {
            inputs.insert("lexicon".into(), sha256_hex(self.lexicon_text()?.as_bytes()));
        }
        for dep in stage.dependencies() {
            for artifact in dep.outputs() {
                let path = self.require(artifact)?;
                inputs.insert((*artifact).to_string(), hash_file(&path)?);
            }
        }
        Ok(inputs)
    }

    fn is_cached(&self, stage: Stage, fingerprint: &str) -> bool {
        let Some(record) = self.manifest.stages.get(stage.name()) else {
            return false;
        };
        record.fingerprint == fingerprint
            && stage.outputs().iter().all(|a| {
                let path = self.path(a);
                path.is_file()
                    && record.outputs.get(*a).map(String::as_str) == hash_file(&path).ok().as_deref()
            })
    }

    fn save_manifest(&mut self) -> Result<()> {
        self.manifest.peak_memory_kb = peak_memory_kb();
        write_json(&self.path(MANIFEST), &self.manifest)
    }

    pub fn run_stage(&mut self, stage: Stage) -> Result<StageOutcome> {
        let inputs = self.input_hashes(stage)?;
        let fingerprint = sha256_hex(
            serde_json::json!({ "stage": self.stage_params(stage), "inputs": inputs })
                .to_string()
                .as_bytes(),
        );
        let start = Instant::now();
        let cached = !self.force && self.is_cached(stage, &fingerprint);
        if !cached {
            self.execute(stage)?;
        }
        let elapsed_ms = start.elapsed().as_millis();
        let mut outputs = BTreeMap::new();
        for a in stage.outputs() {
            outputs.insert((*a).to_string(), hash_file(&self.path(a))?);
        }
        self.manifest.stages.insert(
            stage.name().to_string(),
            StageRecord {
                fingerprint,
                inputs,
                outputs,
                elapsed_ms,
                cached,
            },
        );
        self.save_manifest()?;
        Ok(StageOutcome {
            stage,
            cached,
            elapsed_ms,
        })
    }

    pub fn run_all(&mut self) -> Result<Vec<StageOutcome>> {
        Stage::ALL.into_iter().map(|s| self.run_stage(s)).collect()
    }

    fn execute(&self, stage: Stage) -> Result<()> {
        match stage {
            Stage::Ingest => self.ingest(),
            Stage::Label => self.label(),
            Stage::Split => self.split(),
            Stage::Graph => self.graph(),
            Stage::Communities => self.communities(),
            Stage::ScoreWords => self.score_words(),
            Stage::Tune => self.tune(),
            Stage::ScorePapers => self.score_papers(),
            Stage::Evaluate => self.evaluate(),
            Stage::Discover => self.discover(),
        }
    }

    fn write_corpus(&self, corpus: &Corpus, artifact: &str) -> Result<()> {
        let path = self.path(artifact);
        let mut w = create(&path)?;
        corpus.write_jsonl(&mut w).map_err(|e| CliError::io(&path, e))?;
        finish(&path, w)
    }

    // ---- artifact loaders -------------------------------------------------

    pub fn load_labeled(&self) -> Result<Corpus> {
        Ok(corpus::read_corpus(&self.require(LABELED)?)?)
    }

    pub fn load_split(&self) -> Result<Split> {
        read_json(&self.require(SPLIT)?)
    }

    pub fn load_graph(&self) -> Result<CooccurrenceGraph> {
        Ok(netbuild::import_graph(&self.require(GRAPH)?)?)
    }

    pub fn load_partition(&self) -> Result<CommunityPartition> {
        let tsv = self.require(PARTITION)?;
        let file = fs::File::open(&tsv).map_err(|e| CliError::io(&tsv, e))?;
        let assignment = community::read_partition_tsv(BufReader::new(file))?;
        let summary: PartitionSummary = read_json(&self.require(COMMUNITIES)?)?;
        Ok(CommunityPartition::from_summary(assignment, summary))
    }

    pub fn load_word_scores(&self) -> Result<WordScores> {
        let path = self.require(WORD_SCORES)?;
        let file = fs::File::open(&path).map_err(|e| CliError::io(&path, e))?;
        Ok(relevance::read_word_scores_csv(BufReader::new(file), self.config.scoring.transform)?)
    }

    pub fn load_weights(&self) -> Result<WeightsArtifact> {
        read_json(&self.require(WEIGHTS)?)
    }

    pub fn load_paper_scores(&self) -> Result<Vec<PaperRow>> {
        let path = self.require(PAPER_SCORES)?;
        let file = fs::File::open(&path).map_err(|e| CliError::io(&path, e))?;
        Ok(relevance::read_paper_scores_csv(BufReader::new(file))?)
    }

    pub fn load_evaluation(&self) -> Result<EvaluationArtifact> {
        read_json(&self.require(EVALUATION)?)
    }

    pub fn preprocessor(&self) -> &Preprocessor {
        &self.prep
    }

    fn side_of(split: &Split, id: &str) -> Result<SplitSide> {
        split.side(id).ok_or_else(|| {
            CliError::Config(format!("document \"{id}\" is not in the split; rerun the `split` stage"))
        })
    }

    fn train_streams(&self, corpus: &Corpus, split: &Split) -> Result<Vec<(TokenStream, Label)>> {
        let mut train = Vec::new();
        for doc in &corpus.documents {
            if Self::side_of(split, &doc.id)? == SplitSide::Train {
                train.push(doc);
            }
        }
        let streams = self.prep.token_streams(train.clone());
        Ok(streams.into_iter().zip(train.iter().map(|d| d.label)).collect())
    }

    // ---- stages -----------------------------------------------------------

    fn ingest(&self) -> Result<()> {
        let fragments = self
            .config
            .corpus
            .iter()
            .map(|c| corpus::ingest(&c.path, c.source))
            .collect::<lexmap::Result<Vec<_>>>()?;
        let merged = Corpus::merge(fragments)?;
        self.write_corpus(&merged, CORPUS)
    }

    fn label(&self) -> Result<()> {
        let corpus = corpus::read_corpus(&self.require(CORPUS)?)?;
        let always: BTreeSet<_> = self.config.always_topic_sources.iter().copied().collect();
        let labeled = corpus::label_corpus(&corpus, &self.lexicon()?, &always, &self.prep)?;
        self.write_corpus(&labeled, LABELED)
    }

    fn split(&self) -> Result<()> {
        let corpus = corpus::read_corpus(&self.require(CORPUS)?)?;
        let split = corpus::split_corpus(&corpus, self.config.split.test_fraction, self.config.split.seed)?
            .split
            .expect("split_corpus sets the split");
        write_json(&self.path(SPLIT), &split)
    }

    fn graph(&self) -> Result<()> {
        let corpus = self.load_labeled()?;
        let split = self.load_split()?;
        let streams: Vec<TokenStream> = self.train_streams(&corpus, &split)?.into_iter().map(|(s, _)| s).collect();
        let lexicon = self.lexicon()?;
        let mut full = netbuild::build_graph(&streams)?;
        full.mark_seeds(&lexicon);
        netbuild::export_graph(&full, &self.path(GRAPH_UNPRUNED))?;
        let (pruned, report): (CooccurrenceGraph, PruneReport) =
            netbuild::prune(&full, &lexicon, &self.config.prune_config())?;
        netbuild::export_graph(&pruned, &self.path(GRAPH))?;
        write_json(&self.path(PRUNE_REPORT), &report)
    }

    fn communities(&self) -> Result<()> {
        let graph = self.load_graph()?;
        let mut partition = community::louvain(&graph, self.config.louvain.seed)?;
        partition.assign_topics(&self.lexicon()?)?;
        let path = self.path(PARTITION);
        let mut w = create(&path)?;
        community::write_partition_tsv(&partition, &mut w).map_err(|e| CliError::io(&path, e))?;
        finish(&path, w)?;
        write_json(&self.path(COMMUNITIES), &partition.summary())
    }

    fn score_words(&self) -> Result<()> {
        let graph = self.load_graph()?;
        let partition = self.load_partition()?;
        let mut scores = relevance::score_vocabulary(&graph, &self.lexicon()?, self.config.scoring.transform);
        scores.annotate(&partition);
        let path = self.path(WORD_SCORES);
        let mut w = create(&path)?;
        relevance::write_word_scores_csv(&scores, &mut w).map_err(|e| CliError::io(&path, e))?;
        finish(&path, w)
    }

    fn tune(&self) -> Result<()> {
        let threshold = self.config.scoring.threshold;
        let artifact = match self.config.scoring.weights {
            Some(weights) => WeightsArtifact {
                weights,
                origin: "fixed".into(),
                threshold,
                tuning: None,
            },
            None => {
                let corpus = self.load_labeled()?;
                let split = self.load_split()?;
                let word_scores = self.load_word_scores()?;
                let train: Vec<(PaperTerms, bool)> = self
                    .train_streams(&corpus, &split)?
                    .iter()
                    .map(|(s, label)| (PaperTerms::of(s, &word_scores), *label == Label::Topic))
                    .collect();
                let result = relevance::tune_weights(&train, &self.config.grid(), threshold)?;
                WeightsArtifact {
                    weights: result.weights,
                    origin: "grid".into(),
                    threshold,
                    tuning: Some(result),
                }
            }
        };
        write_json(&self.path(WEIGHTS), &artifact)
    }

    fn score_papers(&self) -> Result<()> {
        let corpus = self.load_labeled()?;
        let split = self.load_split()?;
        let word_scores = self.load_word_scores()?;
        let weights = self.load_weights()?.weights;
        let threshold = self.config.scoring.threshold;
        let streams = self.prep.token_streams(&corpus.documents);
        let rows = corpus
            .documents
            .iter()
            .zip(&streams)
            .map(|(doc, stream)| {
                let p = relevance::score_paper(stream, &word_scores, &weights, threshold);
                Ok(PaperRow {
                    doc_id: doc.id.clone(),
                    score: p.score,
                    flagged: p.flagged,
                    label: doc.label,
                    split: Self::side_of(&split, &doc.id)?,
                    source: doc.source,
                    contributing_words: p.contributing_words.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let path = self.path(PAPER_SCORES);
        let mut w = create(&path)?;
        relevance::write_paper_scores_csv(&rows, &mut w).map_err(|e| CliError::io(&path, e))?;
        finish(&path, w)
    }

    fn evaluate(&self) -> Result<()> {
        let rows = self.load_paper_scores()?;
        let weights = self.load_weights()?;
        let records: Vec<EvalRecord> = rows
            .iter()
            .map(|r| EvalRecord {
                source: r.source,
                split: r.split,
                topic: r.label == Label::Topic,
                score: r.score,
            })
            .collect();
        let report = relevance::evaluate(&records, self.config.scoring.threshold)?;
        let artifact = EvaluationArtifact {
            transform: self.config.scoring.transform.to_string(),
            weights: weights.weights,
            weights_origin: weights.origin.clone(),
            objective: weights.tuning.as_ref().map(|t| t.objective.clone()),
            report,
        };
        write_json(&self.path(EVALUATION), &artifact)
    }

    fn discover(&self) -> Result<()> {
        let graph = self.load_graph()?;
        let partition = self.load_partition()?;
        let word_scores = self.load_word_scores()?;
        let d = &self.config.discovery;
        let candidates = discovery::discover(
            &graph,
            &self.lexicon()?,
            &word_scores,
            Some(&partition),
            d.min_weight,
            d.min_score,
        )?;
        let path = self.path(DISCOVERY);
        let mut w = create(&path)?;
        discovery::write_candidates_csv(&candidates, d.verbose, &mut w).map_err(|e| CliError::io(&path, e))?;
        finish(&path, w)
    }
}
