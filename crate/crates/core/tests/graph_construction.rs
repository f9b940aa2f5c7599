use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use lexmap::corpus::{read_corpus, SeedLexicon};
use lexmap::netbuild::{build_graph, prune, Connectivity, CooccurrenceGraph, PruneConfig};
use lexmap::textprep::{Preprocessor, TokenStream};
use proptest::prelude::*;

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

type Edges = BTreeMap<(String, String), u32>;

/// Node document frequencies and edges from the frozen reference file.
fn reference() -> (BTreeMap<String, u32>, Edges) {
    let text = std::fs::read_to_string(data("cooc6_edges.tsv")).unwrap();
    let (mut nodes, mut edges) = (BTreeMap::new(), BTreeMap::new());
    let mut in_edges = false;
    for line in text.lines() {
        match line {
            "#nodes" => continue,
            "#edges" => {
                in_edges = true;
                continue;
            }
            _ => {}
        }
        let f: Vec<&str> = line.split('\t').collect();
        if in_edges {
            edges.insert((f[0].to_string(), f[1].to_string()), f[2].parse().unwrap());
        } else {
            nodes.insert(f[0].to_string(), f[1].parse().unwrap());
        }
    }
    (nodes, edges)
}

fn edges_of(g: &CooccurrenceGraph) -> Edges {
    g.edge_list().into_iter().map(|(a, b, w)| ((a, b), w)).collect()
}

fn fixture_streams() -> Vec<TokenStream> {
    let corpus = read_corpus(&data("cooc6.jsonl")).unwrap();
    Preprocessor::default().token_streams(&corpus.documents)
}

#[test]
fn six_document_fixture_matches_reference_counts() {
    let g = build_graph(&fixture_streams()).unwrap();
    let (nodes, edges) = reference();
    let built_nodes: BTreeMap<String, u32> =
        g.nodes().iter().map(|n| (n.stem.clone(), n.doc_frequency)).collect();
    assert_eq!(built_nodes, nodes);
    assert_eq!(edges_of(&g), edges);
    g.check_invariants().unwrap();
}

#[test]
fn node_statistics_follow_the_edges() {
    let g = build_graph(&fixture_streams()).unwrap();
    let (_, edges) = reference();
    for n in g.nodes() {
        let incident: Vec<u32> = edges
            .iter()
            .filter(|((a, b), _)| *a == n.stem || *b == n.stem)
            .map(|(_, &w)| w)
            .collect();
        assert_eq!(n.degree as usize, incident.len(), "{}", n.stem);
        assert_eq!(n.strength, incident.iter().map(|&w| u64::from(w)).sum::<u64>(), "{}", n.stem);
    }
}

/// Straightforward pruning over an edge list, for comparison.
fn prune_oracle(
    nodes: &BTreeSet<String>,
    edges: &Edges,
    lexicon: &SeedLexicon,
    q_nonseed: f64,
    q_seed: f64,
    by_degree: bool,
) -> (BTreeSet<String>, Edges) {
    let conn = |s: &String| -> u64 {
        edges
            .iter()
            .filter(|((a, b), _)| a == s || b == s)
            .map(|(_, &w)| if by_degree { 1 } else { u64::from(w) })
            .sum()
    };
    let pick = |pool: Vec<&String>, q: f64| -> Vec<String> {
        let k = (q * pool.len() as f64 + 1e-9).floor() as usize;
        let mut ranked: Vec<(u64, &String)> = pool.into_iter().map(|s| (conn(s), s)).collect();
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
        ranked.into_iter().take(k).map(|(_, s)| s.clone()).collect()
    };
    let nonseed = nodes.iter().filter(|s| !lexicon.stemmed_terms.contains(*s)).collect();
    let compound = nodes.iter().filter(|s| lexicon.compound_derived.contains(*s)).collect();
    let mut removed: BTreeSet<String> = pick(nonseed, q_nonseed).into_iter().collect();
    removed.extend(pick(compound, q_seed));
    let kept: BTreeSet<String> = nodes.difference(&removed).cloned().collect();
    let kept_edges = edges
        .iter()
        .filter(|((a, b), _)| kept.contains(a) && kept.contains(b))
        .map(|(k, &w)| (k.clone(), w))
        .collect();
    (kept, kept_edges)
}

#[test]
fn pruning_matches_the_oracle_on_the_fixture() {
    let prep = Preprocessor::default();
    let lexicon = SeedLexicon::from_terms(["fairness", "differential privacy", "exposure"], &prep).unwrap();
    let mut g = build_graph(&fixture_streams()).unwrap();
    g.mark_seeds(&lexicon);
    let (nodes, edges) = reference();
    let nodes: BTreeSet<String> = nodes.into_keys().collect();
    for connectivity in [Connectivity::Strength, Connectivity::Degree] {
        for (qn, qs) in [(0.1, 0.25), (0.0, 0.5), (0.3, 0.0), (0.5, 0.75)] {
            let config = PruneConfig {
                q_nonseed: qn,
                q_seed: qs,
                connectivity,
            };
            let (pruned, report) = prune(&g, &lexicon, &config).unwrap();
            let (kept, kept_edges) =
                prune_oracle(&nodes, &edges, &lexicon, qn, qs, connectivity == Connectivity::Degree);
            let pruned_nodes: BTreeSet<String> = pruned.nodes().iter().map(|n| n.stem.clone()).collect();
            assert_eq!(pruned_nodes, kept, "{connectivity:?} {qn} {qs}");
            assert_eq!(edges_of(&pruned), kept_edges);
            assert_eq!(report.removed_nonseed.len() + report.removed_seed.len(), nodes.len() - kept.len());
            assert!(pruned.contains("fair"), "single-word seeds are never pruned");
            pruned.check_invariants().unwrap();
        }
    }
}

fn stream_strategy() -> impl Strategy<Value = Vec<Vec<String>>> {
    let word = prop::sample::select(vec!["ab", "cd", "ef", "gh", "ij", "kl", "mn", "op", "qr", "st"]);
    prop::collection::vec(prop::collection::vec(word.prop_map(String::from), 0..8), 1..12)
}

fn streams(docs: &[Vec<String>]) -> Vec<TokenStream> {
    docs.iter()
        .enumerate()
        .map(|(i, d)| TokenStream::new(format!("d{i}"), d.clone()))
        .collect()
}

proptest! {
    #[test]
    fn graph_ignores_document_and_token_order(docs in stream_strategy(), seed in any::<u64>()) {
        let g = build_graph(&streams(&docs)).unwrap();
        let mut shuffled = docs.clone();
        let mut rng = seed;
        let mut next = || { rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (rng >> 33) as usize };
        for d in shuffled.iter_mut() {
            d.reverse();
        }
        for i in (1..shuffled.len()).rev() {
            let j = next() % (i + 1);
            shuffled.swap(i, j);
        }
        let h = build_graph(&streams(&shuffled)).unwrap();
        prop_assert_eq!(edges_of(&g), edges_of(&h));
        prop_assert_eq!(g.nodes(), h.nodes());
    }

    #[test]
    fn edge_weight_is_the_shared_document_count(docs in stream_strategy()) {
        let g = build_graph(&streams(&docs)).unwrap();
        let sets: Vec<BTreeSet<&String>> = docs.iter().map(|d| d.iter().collect()).collect();
        for ((a, b), w) in edges_of(&g) {
            let shared = sets.iter().filter(|s| s.contains(&a) && s.contains(&b)).count();
            prop_assert_eq!(w as usize, shared);
            let df = |x: &String| sets.iter().filter(|s| s.contains(x)).count();
            prop_assert!(w as usize <= df(&a).min(df(&b)));
        }
        g.check_invariants().unwrap();
    }
}
