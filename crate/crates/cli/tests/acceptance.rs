//! One check per acceptance criterion. Each prints a PASS or FAIL line;
//! the test fails if any criterion does.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use lexmap::community::{louvain, modularity_indexed};
use lexmap::corpus::{SeedLexicon, Label};
use lexmap::discovery::discover;
use lexmap::netbuild::{CooccurrenceGraph, Node};
use lexmap::relevance::{
    auc, dijkstra, metrics, score_paper, score_vocabulary, score_word, DistanceTransform, PaperTerms,
    ScoringWeights, WordScores,
};
use lexmap::textprep::{stem, Preprocessor, TokenStream};
use lexmap_cli::{explain, pipeline, Manifest, Pipeline, PipelineConfig, Stage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn name(i: usize) -> String {
    format!("v{}{}x", (b'a' + (i / 26) as u8) as char, (b'a' + (i % 26) as u8) as char)
}

fn indexed_graph(n: usize, edges: &[(usize, usize, u32)]) -> CooccurrenceGraph {
    CooccurrenceGraph::from_parts(
        (0..n).map(|i| Node::new(name(i), 1)).collect(),
        edges.iter().map(|&(a, b, w)| (name(a), name(b), w)),
    )
    .unwrap()
}

fn named_graph(edges: &[(&str, &str, u32)]) -> CooccurrenceGraph {
    let mut stems: Vec<&str> = edges.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    stems.sort_unstable();
    stems.dedup();
    CooccurrenceGraph::from_parts(
        stems.iter().map(|s| Node::new(*s, 1)).collect(),
        edges.iter().map(|&(a, b, w)| (a.to_string(), b.to_string(), w)),
    )
    .unwrap()
}

fn plain_lexicon<S: AsRef<str>>(terms: &[S]) -> SeedLexicon {
    SeedLexicon::from_terms(terms.iter().map(|t| t.as_ref().to_string()), &Preprocessor::new(Vec::<String>::new()))
        .unwrap()
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize, density: f64, weights: &[u32]) -> Vec<(usize, usize, u32)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                edges.push((i, j, weights[rng.random_range(0..weights.len())]));
            }
        }
    }
    edges
}

fn floyd_warshall(n: usize, edges: &[(usize, usize, u32)], t: DistanceTransform) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b, w) in edges {
        d[a][b] = d[a][b].min(t.length(w));
        d[b][a] = d[a][b];
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn direct_modularity(n: usize, edges: &[(usize, usize, u32)], labels: &[u32]) -> f64 {
    let mut a = vec![vec![0.0f64; n]; n];
    for &(i, j, w) in edges {
        a[i][j] += f64::from(w);
        a[j][i] += f64::from(w);
    }
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

// ---- 1 ---------------------------------------------------------------------

fn stemmer_fidelity() -> Check {
    let path = manifest_dir().join("../core/tests/data/snowball_english_vectors.tsv");
    let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let pairs: Vec<(&str, &str)> = text
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
        .collect();
    ensure(pairs.len() >= 200, || format!("only {} vector pairs", pairs.len()))?;
    let start = Instant::now();
    let wrong: Vec<_> = pairs.iter().filter(|(w, s)| stem(w) != *s).take(5).collect();
    let elapsed = start.elapsed();
    ensure(wrong.is_empty(), || format!("disagreements, first: {wrong:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;

    let inputs: BTreeMap<&str, &str> = pairs.iter().copied().collect();
    let lexicon = SeedLexicon::bundled(&Preprocessor::default());
    let mut missing = Vec::new();
    for (term, stems) in lexicon.raw_terms.iter().zip(&lexicon.term_stems) {
        for (word, st) in term.split_whitespace().zip(stems) {
            let covered = inputs.get(st.as_str()) == Some(&st.as_str()) || inputs.get(word.to_lowercase().as_str()) == Some(&st.as_str());
            if !covered {
                missing.push(st.clone());
            }
        }
    }
    ensure(missing.is_empty(), || format!("bundled stems not covered: {missing:?}"))?;
    Ok(format!("{} pairs agree in {elapsed:.2?}; all {} bundled stems covered", pairs.len(), lexicon.stemmed_terms.len()))
}

// ---- 2 ---------------------------------------------------------------------

fn shortest_path_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut compared = 0usize;
    for case in 0..100 {
        let n = rng.random_range(2..=50);
        let density = rng.random_range(0.05..0.5);
        // powers of two keep reciprocal lengths and their sums exact
        let (weights, transforms): (Vec<u32>, &[DistanceTransform]) = if case % 2 == 0 {
            ((1..=100).collect(), &[DistanceTransform::Raw, DistanceTransform::Unit])
        } else {
            (vec![1, 2, 4, 8, 16, 32, 64], &[DistanceTransform::Reciprocal, DistanceTransform::Raw])
        };
        let edges = random_edges(&mut rng, n, density, &weights);
        let g = indexed_graph(n, &edges);
        for &t in transforms {
            let fw = floyd_warshall(n, &edges, t);
            for s in 0..n {
                let d = dijkstra(&g, s, t);
                ensure(d == fw[s], || format!("case {case}, source {s}, {t}: {:?} vs {:?}", d, fw[s]))?;
                compared += n;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("100 graphs, {compared} distances identical, {elapsed:.2?}"))
}

// ---- 3 ---------------------------------------------------------------------

fn modularity_oracle() -> Check {
    let tri = indexed_graph(6, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)]);
    let q = modularity_indexed(&tri, &[0, 0, 0, 1, 1, 1]);
    ensure(q == 0.5, || format!("two triangles give {q}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(3..30);
        let edges = random_edges(&mut rng, n, 0.3, &(1..20).collect::<Vec<_>>());
        if edges.is_empty() {
            continue;
        }
        let g = indexed_graph(n, &edges);
        let k = rng.random_range(1..=n as u32);
        let labels: Vec<u32> = (0..n).map(|_| rng.random_range(0..k)).collect();
        worst = worst.max((modularity_indexed(&g, &labels) - direct_modularity(n, &edges, &labels)).abs());
        let p = louvain(&g, rng.random()).map_err(|e| e.to_string())?;
        let found: Vec<u32> = (0..n).map(|i| p.assignment[&name(i)]).collect();
        worst = worst.max((p.modularity - direct_modularity(n, &edges, &found)).abs());
    }
    ensure(worst <= 1e-9, || format!("largest deviation {worst:e}"))?;
    Ok(format!("two triangles Q = 0.5; 400 partitions within {worst:.1e}"))
}

// ---- 4 ---------------------------------------------------------------------

fn cliques(sizes: &[usize]) -> (usize, Vec<(usize, usize, u32)>) {
    let mut edges = Vec::new();
    let mut start = 0;
    for &s in sizes {
        for i in start..start + s {
            for j in i + 1..start + s {
                edges.push((i, j, 1));
            }
        }
        start += s;
    }
    (start, edges)
}

fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            cur[i] = l;
            rec(i + 1, max.max(l), cur, out);
        }
    }
    let mut out = Vec::new();
    rec(1, 0, &mut vec![0; n], &mut out);
    out
}

fn louvain_sanity() -> Check {
    let mut fixtures = 0;
    for sizes in [vec![3, 3], vec![4, 4], vec![3, 5, 7], vec![6, 6, 6, 6], vec![2, 9, 3]] {
        let (n, edges) = cliques(&sizes);
        let g = indexed_graph(n, &edges);
        for seed in 0..5 {
            let p = louvain(&g, seed).map_err(|e| e.to_string())?;
            for w in p.pass_modularity.windows(2) {
                ensure(w[1] >= w[0], || format!("{sizes:?}: pass modularity fell {:?}", p.pass_modularity))?;
            }
            let mut start = 0;
            for &s in &sizes {
                let ids: BTreeSet<u32> = (start..start + s).map(|i| p.assignment[&name(i)]).collect();
                ensure(ids.len() == 1, || format!("{sizes:?}: clique at {start} split"))?;
                start += s;
            }
            ensure(p.community_count() == sizes.len(), || format!("{sizes:?}: {} communities", p.community_count()))?;
            fixtures += 1;
        }
    }

    let (_, mut edges) = cliques(&[4, 4]);
    edges.push((3, 4, 1));
    let g = indexed_graph(8, &edges);
    let best = set_partitions(8)
        .iter()
        .map(|l| direct_modularity(8, &edges, l))
        .fold(f64::MIN, f64::max);
    for seed in 0..8 {
        let p = louvain(&g, seed).map_err(|e| e.to_string())?;
        ensure((p.modularity - best).abs() <= 1e-12, || format!("seed {seed}: Q {} vs optimum {best}", p.modularity))?;
    }
    Ok(format!("{fixtures} clique runs exact; 8-node optimum Q = {best:.6} reached for 8 seeds"))
}

// ---- 5 ---------------------------------------------------------------------

fn word_score_conformance() -> Check {
    let edges = [("word", "sa", 2), ("word", "mid", 1), ("mid", "sb", 3), ("iso", "lone", 1)];
    let g = named_graph(&edges);
    let lex = plain_lexicon(&["sa", "sb"]);
    let t = DistanceTransform::Raw;
    let s = score_word("word", &lex, &g, t).score;
    ensure((s - 0.75).abs() <= 1e-12, || format!("distances {{2, 4}} give {s}"))?;
    ensure(score_word("sa", &lex, &g, t).score == 1.0, || "seed does not score 1".into())?;
    ensure(score_word("iso", &lex, &g, t).score == 0.0, || "unreachable word does not score 0".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(3..40);
        let edges = random_edges(&mut rng, n, 0.15, &(1..50).collect::<Vec<_>>());
        let seeds: Vec<String> = (0..n).filter(|_| rng.random_bool(0.2)).map(name).collect();
        if seeds.is_empty() {
            continue;
        }
        let lex = plain_lexicon(&seeds);
        let c = rng.random_range(2..30);
        let scaled: Vec<_> = edges.iter().map(|&(a, b, w)| (a, b, w * c)).collect();
        let t = DistanceTransform::Reciprocal;
        let s1 = score_vocabulary(&indexed_graph(n, &edges), &lex, t);
        let s2 = score_vocabulary(&indexed_graph(n, &scaled), &lex, t);
        for (stem, ws) in &s1.scores {
            worst = worst.max((ws.score - s2.score(stem)).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("scaling changed a score by {worst:e}"))?;
    Ok(format!("{{2, 4}} -> {s}; scaling deviation {worst:.1e}"))
}

// ---- 6 ---------------------------------------------------------------------

fn fixture_workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    for entry in fs::read_dir(manifest_dir().join("tests/fixtures")).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

fn lexmap(args: &[&str], config: Option<&Path>) -> Result<String, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lexmap"));
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    let out = cmd.args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(format!("lexmap {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn paper_score_conformance(fixture: &Path) -> Check {
    let terms = PaperTerms {
        tc_sum: 1.0,
        ntc_sum: 0.5,
        tc_count: 1,
        ntc_count: 1,
    };
    let example = terms.score(&ScoringWeights::default());
    ensure((example - 0.928_571_428_571).abs() <= 1e-9, || format!("worked example gives {example}"))?;

    let p = Pipeline::new(PipelineConfig::load(&fixture.join("config.toml")).map_err(|e| e.to_string())?, false)
        .map_err(|e| e.to_string())?;
    let rows = p.load_paper_scores().map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for row in &rows {
        let e = explain::explain(&p, &row.doc_id).map_err(|e| e.to_string())?;
        // rebuilt here from the per-word rows only
        let num: f64 = e.rows.iter().map(|r| r.weight * r.word_score).sum();
        let den: f64 = e.rows.iter().map(|r| r.weight).sum();
        let rebuilt = if den == 0.0 { 0.0 } else { num / den };
        worst = worst.max((rebuilt - row.score).abs());
    }
    ensure(worst <= 1e-9, || format!("explain rebuild off by {worst:e}"))?;

    let empty = TokenStream::new("empty".into(), vec!["unscored".into()]);
    let zero = score_paper(&empty, &WordScores { transform: DistanceTransform::Reciprocal, scores: BTreeMap::new() }, &ScoringWeights::default(), 0.5);
    ensure(zero.score == 0.0 && !zero.flagged, || "zero-word paper is not 0 and unflagged".into())?;
    Ok(format!("example = {example:.9}; {} fixture papers rebuilt within {worst:.1e}", rows.len()))
}

// ---- 7 ---------------------------------------------------------------------

fn evaluation_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let n = rng.random_range(1..=100);
        let labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..=10u32)) / 10.0).collect();
        let (mut wins, mut pairs) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                if labels[i] && !labels[j] {
                    pairs += 1.0;
                    wins += if scores[i] > scores[j] { 1.0 } else if scores[i] == scores[j] { 0.5 } else { 0.0 };
                }
            }
        }
        let expected = (pairs > 0.0).then(|| wins / pairs);
        let got = auc(&labels, &scores);
        let same = match (got, expected) {
            (Some(a), Some(b)) => (a - b).abs() <= 1e-12,
            (a, b) => a == b,
        };
        ensure(same, || format!("case {case}: AUC {got:?} vs {expected:?}"))?;

        let m = metrics(&labels, &scores, 0.5).map_err(|e| e.to_string())?;
        let c = |pred: bool, actual: bool| labels.iter().zip(&scores).filter(|(&l, &s)| (s >= 0.5) == pred && l == actual).count();
        let (tp, fp, fneg) = (c(true, true), c(true, false), c(false, true));
        let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
        let r = if tp + fneg == 0 { 0.0 } else { tp as f64 / (tp + fneg) as f64 };
        let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        ensure(m.precision == p && m.recall == r && m.f1 == f1, || format!("case {case}: P/R/F1 mismatch"))?;
    }
    Ok("50 random sets: AUC matches pair counting, P/R/F1 exact".into())
}

// ---- 8 ---------------------------------------------------------------------

fn discovery_conformance() -> Check {
    let edges: [(&str, &str, u32); 10] = [
        ("bias", "race", 354),
        ("fair", "race", 120),
        ("fair", "loan", 150),
        ("bias", "coin", 99),
        ("fair", "deep", 300),
        ("coin", "deep", 5),
        ("privaci", "nois", 100),
        ("nois", "imag", 400),
        ("loan", "credit", 130),
        ("credit", "bias", 101),
    ];
    let g = named_graph(&edges);
    let lex = plain_lexicon(&["bias", "fair", "privaci"]);
    let ws = score_vocabulary(&g, &lex, DistanceTransform::Reciprocal);
    let oracle = |min_w: u32, min_s: f64| -> BTreeSet<String> {
        ws.scores
            .keys()
            .filter(|s| !lex.is_seed(s))
            .filter(|s| {
                edges
                    .iter()
                    .filter(|(a, b, _)| (a == *s && lex.is_seed(b)) || (b == *s && lex.is_seed(a)))
                    .any(|&(_, _, w)| w >= min_w)
            })
            .filter(|s| ws.score(s) >= min_s)
            .cloned()
            .collect()
    };
    let found = |w: i64, s: f64| -> Result<BTreeSet<String>, String> {
        Ok(discover(&g, &lex, &ws, None, w, s).map_err(|e| e.to_string())?.into_iter().map(|c| c.stem).collect())
    };
    let base = found(100, 0.5)?;
    ensure(base == oracle(100, 0.5), || format!("{base:?} vs oracle {:?}", oracle(100, 0.5)))?;
    let ws_grid = [0i64, 50, 100, 150, 400];
    let s_grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    for (i, &w) in ws_grid.iter().enumerate() {
        for (j, &s) in s_grid.iter().enumerate() {
            let here = found(w, s)?;
            if i + 1 < ws_grid.len() {
                ensure(found(ws_grid[i + 1], s)?.is_subset(&here), || format!("not antitone in weight at ({w}, {s})"))?;
            }
            if j + 1 < s_grid.len() {
                ensure(found(w, s_grid[j + 1])?.is_subset(&here), || format!("not antitone in score at ({w}, {s})"))?;
            }
        }
    }
    Ok(format!("{} candidates match the oracle; antitone over 5x5", base.len()))
}

// ---- 9 and 10 ----------------------------------------------------------------

fn golden_run(fixture: &Path) -> Check {
    lexmap(&["run", "all"], Some(&fixture.join("config.toml")))?;
    let golden = manifest_dir().join("tests/golden");
    let mut count = 0;
    for stage in Stage::ALL {
        for artifact in stage.outputs() {
            let a = fs::read(fixture.join("out").join(artifact)).map_err(|e| e.to_string())?;
            let b = fs::read(golden.join(artifact)).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{artifact} differs from golden"))?;
            count += 1;
        }
    }
    Ok(format!("{count} artifacts hash-identical"))
}

struct SynthRun {
    dir: TempDir,
    elapsed: Duration,
}

fn synthetic_run() -> Result<SynthRun, String> {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    lexmap(&["synth", "--documents", "10000", "--output-dir", dir.path().to_str().unwrap()], None)?;
    let start = Instant::now();
    lexmap(&["run", "all"], Some(&dir.path().join("config.toml")))?;
    let elapsed = start.elapsed();
    lexmap(&["report"], Some(&dir.path().join("config.toml")))?;
    Ok(SynthRun { dir, elapsed })
}

fn scale(run: &SynthRun) -> Check {
    let text = fs::read_to_string(run.dir.path().join("out").join(pipeline::MANIFEST)).map_err(|e| e.to_string())?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let peak_kb = m.peak_memory_kb.ok_or("manifest has no peak memory")?;
    ensure(run.elapsed < Duration::from_secs(60), || format!("run all took {:?}", run.elapsed))?;
    ensure(peak_kb < 2 * 1024 * 1024, || format!("peak memory {peak_kb} kB"))?;
    Ok(format!("10,000 documents in {:.1?}, peak {} MB", run.elapsed, peak_kb / 1024))
}

fn planted_recall(run: &SynthRun) -> Check {
    let dir = run.dir.path();
    let planted: BTreeSet<String> = fs::read_to_string(dir.join("planted.txt"))
        .map_err(|e| e.to_string())?
        .lines()
        .map(str::to_string)
        .collect();
    let p = Pipeline::new(PipelineConfig::load(&dir.join("config.toml")).map_err(|e| e.to_string())?, false)
        .map_err(|e| e.to_string())?;
    let rows = p.load_paper_scores().map_err(|e| e.to_string())?;
    let hits = rows.iter().filter(|r| r.flagged && planted.contains(&r.doc_id)).count();
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let recall = hits as f64 / planted.len() as f64;
    let labels: Vec<bool> = rows.iter().map(|r| planted.contains(&r.doc_id)).collect();
    let scores: Vec<f64> = rows.iter().map(|r| r.score).collect();
    let planted_auc = auc(&labels, &scores).unwrap_or(f64::NAN);
    let topic_labels = rows.iter().filter(|r| r.label == Label::Topic).count();

    let report = fs::read_to_string(dir.join("out").join(pipeline::REPORT)).map_err(|e| e.to_string())?;
    for row in ["| all | overall |", "| test | overall |", "| all | PMLR |", "| all | FACCT |"] {
        ensure(report.contains(row), || format!("report lacks metrics row {row}"))?;
    }
    ensure(recall >= 0.9, || format!("recall {recall:.3} on {} planted papers", planted.len()))?;
    Ok(format!(
        "recall {recall:.3} on {} planted ({:.1}% prevalence); {flagged} flagged, precision {:.3}, AUC {planted_auc:.3}; {topic_labels} seed-labeled",
        planted.len(),
        100.0 * planted.len() as f64 / rows.len() as f64,
        hits as f64 / flagged.max(1) as f64
    ))
}

#[test]
fn acceptance_criteria() {
    let fixture = fixture_workspace();
    let golden = golden_run(fixture.path());
    let synth = synthetic_run();

    let results: Vec<(&str, Check)> = vec![
        ("1 stemmer fidelity", stemmer_fidelity()),
        ("2 shortest-path oracle", shortest_path_oracle()),
        ("3 modularity oracle", modularity_oracle()),
        ("4 Louvain sanity", louvain_sanity()),
        ("5 word score conformance", word_score_conformance()),
        ("6 paper score conformance", paper_score_conformance(fixture.path())),
        ("7 evaluation oracle", evaluation_oracle()),
        ("8 discovery conformance", discovery_conformance()),
        (
            "9 determinism and scale",
            golden.and_then(|g| synth.as_ref().map_err(Clone::clone).and_then(scale).map(|s| format!("{g}; {s}"))),
        ),
        ("10 planted recall", synth.as_ref().map_err(Clone::clone).and_then(planted_recall)),
    ];
    let mut failed = Vec::new();
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
