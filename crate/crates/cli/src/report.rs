//! Markdown summary of a finished run, assembled only from the artifacts in
//! the output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use lexmap::corpus::{Label, SplitSide};
use lexmap::netbuild::PruneReport;
use lexmap::relevance::Metrics;

use crate::error::{CliError, Result};
use crate::pipeline::{self, Pipeline};

/// Community members listed per row of the community table.
const MEMBERS_SHOWN: usize = 8;

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |x| format!("{x:.3}"))
}

fn metrics_row(scope: &str, source: &str, m: &Metrics) -> String {
    format!(
        "| {scope} | {source} | {} | {} | {} | {} | {:.3} | {:.3} | {:.3} |",
        m.n,
        m.positives,
        m.negatives,
        fmt_opt(m.auc),
        m.precision,
        m.recall,
        m.f1
    )
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

/// Renders the report text.
pub fn render(pipeline: &Pipeline) -> Result<String> {
    let top_k = pipeline.config().report.top_k;
    let corpus = pipeline.load_labeled()?;
    let split = pipeline.load_split()?;
    let prune: PruneReport = {
        let path = pipeline.require(pipeline::PRUNE_REPORT)?;
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    };
    let graph = pipeline.load_graph()?;
    let partition = pipeline.load_partition()?;
    let word_scores = pipeline.load_word_scores()?;
    let evaluation = pipeline.load_evaluation()?;
    let papers = pipeline.load_paper_scores()?;
    let discovery_path = pipeline.require(pipeline::DISCOVERY)?;

    let mut s = String::new();
    let _ = writeln!(s, "# lexmap report\n");

    // ---- run summary
    let _ = writeln!(s, "## Run summary\n");
    let mut by_source: BTreeMap<&str, [usize; 2]> = BTreeMap::new();
    for d in &corpus.documents {
        let e = by_source.entry(d.source.as_str()).or_default();
        e[usize::from(d.label != Label::Topic)] += 1;
    }
    let _ = writeln!(s, "| source | documents | topic | non-topic |");
    let _ = writeln!(s, "|---|---:|---:|---:|");
    for (src, [topic, non]) in &by_source {
        let _ = writeln!(s, "| {src} | {} | {topic} | {non} |", topic + non);
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "- split: {} train / {} test (test fraction {}, seed {})",
        split.count(SplitSide::Train),
        split.count(SplitSide::Test),
        split.test_fraction,
        split.seed
    );
    let _ = writeln!(
        s,
        "- graph: {} nodes, {} edges after pruning {} non-seed (q = {}) and {} seed (q = {}) nodes by {}",
        graph.node_count(),
        graph.edge_count(),
        prune.removed_nonseed.len(),
        prune.q_nonseed,
        prune.removed_seed.len(),
        prune.q_seed,
        prune.connectivity.as_str()
    );
    let _ = writeln!(s, "- distance transform: {}", evaluation.transform);
    let _ = writeln!(
        s,
        "- weights: w1 = {}, w2 = {} ({}{})",
        evaluation.weights.w1,
        evaluation.weights.w2,
        evaluation.weights_origin,
        evaluation
            .objective
            .as_ref()
            .map(|o| format!(", objective {o}"))
            .unwrap_or_default()
    );
    let _ = writeln!(s, "- threshold: {}\n", evaluation.report.threshold);

    // ---- communities
    let _ = writeln!(s, "## Communities\n");
    let _ = writeln!(
        s,
        "{} communities, modularity {:.4} (Louvain seed {}).\n",
        partition.community_count(),
        partition.modularity,
        partition.louvain_seed
    );
    let _ = writeln!(s, "| community | words | seed stems | topic | most connected words |");
    let _ = writeln!(s, "|---:|---:|---:|:---:|---|");
    let strength: Vec<u64> = (0..graph.node_count())
        .map(|i| graph.neighbors(i).iter().map(|&(_, w)| u64::from(w)).sum())
        .collect();
    for (id, size) in partition.sizes.iter().enumerate() {
        let id = id as u32;
        let mut members: Vec<(u64, &str)> = partition
            .members(id)
            .into_iter()
            .map(|m| (graph.index_of(m).map_or(0, |i| strength[i]), m))
            .collect();
        members.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        let shown: Vec<&str> = members.iter().take(MEMBERS_SHOWN).map(|m| m.1).collect();
        let _ = writeln!(
            s,
            "| {id} | {size} | {} | {} | {} |",
            partition.seed_counts.get(&id).copied().unwrap_or(0),
            if partition.topic_communities.contains(&id) { "yes" } else { "" },
            shown.join(", ")
        );
    }
    if let Some(note) = &partition.topic_tie_note {
        let _ = writeln!(s, "\nTie among topic communities: {note}.");
    }
    let _ = writeln!(s);

    // ---- metrics
    let _ = writeln!(s, "## Classification metrics\n");
    let _ = writeln!(s, "| scope | source | n | topic | non-topic | AUC | precision | recall | F1 |");
    let _ = writeln!(s, "|---|---|---:|---:|---:|---:|---:|---:|---:|");
    for scope in ["all", "train", "test"] {
        if let Some(table) = evaluation.report.scopes.get(scope) {
            for (source, m) in table.iter().filter(|(k, _)| *k != "overall") {
                let _ = writeln!(s, "{}", metrics_row(scope, source, m));
            }
            if let Some(m) = table.get("overall") {
                let _ = writeln!(s, "{}", metrics_row(scope, "overall", m));
            }
        }
    }
    let _ = writeln!(s);

    // ---- top papers
    let mut ranked: Vec<_> = papers.iter().collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.doc_id.cmp(&b.doc_id)));
    let _ = writeln!(s, "## Top {top_k} papers\n");
    let _ = writeln!(s, "| rank | id | source | label | split | score | title |");
    let _ = writeln!(s, "|---:|---|---|---|---|---:|---|");
    for (rank, p) in ranked.iter().take(top_k).enumerate() {
        let title = corpus.get(&p.doc_id).map_or("", |d| d.title.as_str());
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {:.4} | {} |",
            rank + 1,
            p.doc_id,
            p.source.as_str(),
            p.label.as_str(),
            p.split.as_str(),
            p.score,
            escape(title)
        );
    }
    let _ = writeln!(s);

    // ---- discovery
    let mut reader = csv::Reader::from_path(&discovery_path)
        .map_err(|e| CliError::io(&discovery_path, std::io::Error::other(e)))?;
    let rows: Vec<csv::StringRecord> = reader
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::io(&discovery_path, std::io::Error::other(e)))?;
    let _ = writeln!(s, "## Candidate terms\n");
    let d = &pipeline.config().discovery;
    let _ = writeln!(
        s,
        "{} non-seed words share an edge of weight >= {} with a seed and score >= {}.\n",
        rows.len(),
        d.min_weight,
        d.min_score
    );
    if !rows.is_empty() {
        let _ = writeln!(s, "| word | max seed edge | witness seed | score | community |");
        let _ = writeln!(s, "|---|---:|---|---:|---:|");
        for r in rows.iter().take(top_k) {
            let score: f64 = r.get(3).and_then(|v| v.parse().ok()).unwrap_or(f64::NAN);
            let _ = writeln!(
                s,
                "| {} | {} | {} | {:.4} | {} |",
                r.get(0).unwrap_or(""),
                r.get(1).unwrap_or(""),
                r.get(2).unwrap_or(""),
                score,
                r.get(4).unwrap_or("")
            );
        }
        let _ = writeln!(s);
    }

    // ---- top words of the topic communities
    let _ = writeln!(s, "## Top words in the topic communities\n");
    for &id in &partition.topic_communities {
        let mut words: Vec<_> = word_scores
            .scores
            .values()
            .filter(|w| w.community == Some(id))
            .collect();
        words.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.stem.cmp(&b.stem)));
        let list: Vec<String> = words
            .iter()
            .take(top_k)
            .map(|w| format!("{} ({:.3})", w.stem, w.score))
            .collect();
        let _ = writeln!(s, "- community {id}: {}", list.join(", "));
    }
    Ok(s)
}

/// Writes `report.md` into the output directory.
pub fn write_report(pipeline: &Pipeline) -> Result<PathBuf> {
    let text = render(pipeline)?;
    let path = pipeline.path(pipeline::REPORT);
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
