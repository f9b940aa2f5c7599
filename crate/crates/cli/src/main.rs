use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lexmap::corpus::{self, Source};
use lexmap::netbuild::Connectivity;
use lexmap::relevance::{DistanceTransform, ScoringWeights};
use lexmap::synth::{self, SynthConfig};
use lexmap_cli::config::CorpusInput;
use lexmap_cli::{explain, report, CliError, Pipeline, PipelineConfig, Result, Stage};

#[derive(Parser)]
#[command(name = "lexmap", version, about = "Seed-lexicon topic mapping over paper abstracts")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recompute stages even when cached.
    #[arg(long, global = true)]
    force: bool,
    /// Seed lexicon file, one term per line.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Corpus file as PATH:SOURCE; repeatable, replaces the configured list.
    #[arg(long = "corpus", global = true, value_parser = parse_corpus)]
    corpus: Vec<CorpusInput>,
    /// Source labeled TOPIC regardless of content; repeatable.
    #[arg(long = "always-topic", global = true)]
    always_topic: Vec<Source>,
    #[arg(long, global = true)]
    test_fraction: Option<f64>,
    #[arg(long, global = true)]
    split_seed: Option<u64>,
    #[arg(long, global = true)]
    q_nonseed: Option<f64>,
    #[arg(long, global = true)]
    q_seed: Option<f64>,
    /// strength or degree.
    #[arg(long, global = true)]
    connectivity: Option<Connectivity>,
    #[arg(long, global = true)]
    louvain_seed: Option<u64>,
    /// reciprocal, unit or raw.
    #[arg(long, global = true)]
    transform: Option<DistanceTransform>,
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Fixed topic-community weight; requires --w2 and skips tuning.
    #[arg(long, global = true, requires = "w2")]
    w1: Option<f64>,
    #[arg(long, global = true, requires = "w1")]
    w2: Option<f64>,
    #[arg(long, global = true)]
    min_weight: Option<i64>,
    #[arg(long, global = true)]
    min_score: Option<f64>,
    /// List every seed edge of each discovered word.
    #[arg(long, global = true)]
    verbose_discovery: bool,
    #[arg(long, global = true)]
    top_k: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Read and merge the corpus files.
    Ingest,
    /// Label documents TOPIC or NON_TOPIC from the seed lexicon.
    Label,
    /// Assign documents to train and test.
    Split,
    /// Build and prune the co-occurrence graph from the training papers.
    Graph,
    /// Louvain communities and the topic communities.
    Communities,
    /// Relevance score of every word.
    ScoreWords,
    /// Choose the scoring weights on the training papers.
    Tune,
    /// Relevance score of every paper.
    ScorePapers,
    /// AUC, precision, recall and F1 per split and source.
    Evaluate,
    /// Non-seed words closely tied to the seeds.
    Discover,
    /// Run one stage, or `all`, together with whatever it needs.
    Run { target: String },
    /// Per-word breakdown of one paper's score.
    Explain { doc_id: String },
    /// Write report.md from the artifacts.
    Report,
    /// Scrape a PMLR volume into a JSONL corpus file.
    FetchPmlr {
        /// Volume index or paper page URL.
        #[arg(required_unless_present = "from_dir", conflicts_with = "from_dir")]
        url: Option<String>,
        /// Directory of saved pages with an index.html.
        #[arg(long)]
        from_dir: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate a synthetic corpus with planted topic papers.
    Synth {
        #[arg(long)]
        output_dir: PathBuf,
        #[arg(long, default_value_t = SynthConfig::default().documents)]
        documents: usize,
        #[arg(long, default_value_t = SynthConfig::default().vocabulary)]
        vocabulary: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_corpus(s: &str) -> std::result::Result<CorpusInput, String> {
    let (path, source) = s
        .rsplit_once(':')
        .ok_or_else(|| format!("expected PATH:SOURCE, got \"{s}\""))?;
    Ok(CorpusInput {
        path: PathBuf::from(path),
        source: source.parse().map_err(|e: lexmap::Error| e.to_string())?,
    })
}

fn load_config(g: &Global) -> Result<PipelineConfig> {
    let mut c = match &g.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(v) = &g.out {
        c.output_dir = v.clone();
    }
    if let Some(v) = &g.lexicon {
        c.lexicon = Some(v.clone());
    }
    if !g.corpus.is_empty() {
        c.corpus = g.corpus.clone();
    }
    if !g.always_topic.is_empty() {
        c.always_topic_sources = g.always_topic.clone();
    }
    macro_rules! set {
        ($($field:expr => $opt:expr),* $(,)?) => { $( if let Some(v) = $opt { $field = v; } )* };
    }
    set!(
        c.split.test_fraction => g.test_fraction,
        c.split.seed => g.split_seed,
        c.prune.q_nonseed => g.q_nonseed,
        c.prune.q_seed => g.q_seed,
        c.prune.connectivity => g.connectivity,
        c.louvain.seed => g.louvain_seed,
        c.scoring.transform => g.transform,
        c.scoring.threshold => g.threshold,
        c.discovery.min_weight => g.min_weight,
        c.discovery.min_score => g.min_score,
        c.report.top_k => g.top_k,
    );
    if let (Some(w1), Some(w2)) = (g.w1, g.w2) {
        c.scoring.weights = Some(ScoringWeights { w1, w2 });
    }
    if g.verbose_discovery {
        c.discovery.verbose = true;
    }
    Ok(c)
}

/// `target` and every stage it transitively depends on, in pipeline order.
fn closure(target: Stage) -> Vec<Stage> {
    let mut needed = vec![false; Stage::ALL.len()];
    let mut stack = vec![target];
    while let Some(s) = stack.pop() {
        let i = Stage::ALL.iter().position(|&x| x == s).expect("listed stage");
        if !needed[i] {
            needed[i] = true;
            stack.extend_from_slice(s.dependencies());
        }
    }
    Stage::ALL.into_iter().zip(needed).filter(|&(_, n)| n).map(|(s, _)| s).collect()
}

fn print_outcome(o: &lexmap_cli::StageOutcome) {
    let status = if o.cached { "cached" } else { "done" };
    println!("{:<13} {status:<6} {:>8} ms", o.stage.name(), o.elapsed_ms);
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn synth_command(dir: &Path, config: SynthConfig) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let s = synth::generate(&config)?;
    let corpus_path = dir.join("corpus.jsonl");
    let mut buf = Vec::new();
    s.corpus.write_jsonl(&mut buf).map_err(|e| CliError::io(&corpus_path, e))?;
    fs::write(&corpus_path, buf).map_err(|e| CliError::io(&corpus_path, e))?;
    write_text(&dir.join("lexicon.txt"), &s.lexicon_text())?;
    let planted: String = s.planted.iter().map(|id| format!("{id}\n")).collect();
    write_text(&dir.join("planted.txt"), &planted)?;
    write_text(
        &dir.join("config.toml"),
        "output_dir = \"out\"\nlexicon = \"lexicon.txt\"\n\n[[corpus]]\npath = \"corpus.jsonl\"\nsource = \"PMLR\"\n",
    )?;
    println!(
        "{} documents ({} planted) written to {}",
        s.corpus.len(),
        s.planted.len(),
        dir.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::FetchPmlr { url, from_dir, output } => {
            let fetched = match (url, from_dir) {
                (_, Some(dir)) => corpus::pmlr::load_pmlr_dir(&dir)?,
                (Some(url), None) => corpus::pmlr::fetch_pmlr_volume(&url)?,
                (None, None) => unreachable!("clap requires a url or --from-dir"),
            };
            let mut buf = Vec::new();
            fetched.corpus.write_jsonl(&mut buf).map_err(|e| CliError::io(&output, e))?;
            fs::write(&output, buf).map_err(|e| CliError::io(&output, e))?;
            println!("{} papers written to {}", fetched.corpus.len(), output.display());
            for link in &fetched.skipped {
                eprintln!("skipped {link}");
            }
            return Ok(());
        }
        Command::Synth {
            output_dir,
            documents,
            vocabulary,
            seed,
        } => {
            return synth_command(
                &output_dir,
                SynthConfig {
                    documents,
                    vocabulary,
                    seed,
                    ..SynthConfig::default()
                },
            )
        }
        _ => {}
    }

    let config = load_config(&cli.global)?;
    let mut pipeline = Pipeline::new(config, cli.global.force)?;
    let single = |s: Stage| -> Vec<Stage> { vec![s] };
    let stages = match cli.command {
        Command::Ingest => single(Stage::Ingest),
        Command::Label => single(Stage::Label),
        Command::Split => single(Stage::Split),
        Command::Graph => single(Stage::Graph),
        Command::Communities => single(Stage::Communities),
        Command::ScoreWords => single(Stage::ScoreWords),
        Command::Tune => single(Stage::Tune),
        Command::ScorePapers => single(Stage::ScorePapers),
        Command::Evaluate => single(Stage::Evaluate),
        Command::Discover => single(Stage::Discover),
        Command::Run { target } if target == "all" => Stage::ALL.to_vec(),
        Command::Run { target } => closure(target.parse().map_err(CliError::Config)?),
        Command::Explain { doc_id } => {
            let e = explain::explain(&pipeline, &doc_id)?;
            print!("{}", e.render());
            println!("plot data: {}", e.csv_path.display());
            if !e.consistent() {
                return Err(CliError::Config(format!(
                    "explanation total {} disagrees with the stored score {}",
                    e.total(),
                    e.stored_score
                )));
            }
            return Ok(());
        }
        Command::Report => {
            let path = report::write_report(&pipeline)?;
            println!("{}", path.display());
            return Ok(());
        }
        Command::FetchPmlr { .. } | Command::Synth { .. } => unreachable!("handled above"),
    };
    for stage in stages {
        print_outcome(&pipeline.run_stage(stage)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
