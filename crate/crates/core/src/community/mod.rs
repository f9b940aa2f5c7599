//! Weighted modularity, Louvain community detection and selection of the
//! topic communities (the two holding the most seed stems).

mod louvain;

pub use louvain::louvain;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::SeedLexicon;
use crate::error::{Error, Result};
use crate::netbuild::CooccurrenceGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    /// Stem to community id. Ids are contiguous from 0, ordered by
    /// descending community size.
    pub assignment: BTreeMap<String, u32>,
    /// Community sizes indexed by id.
    pub sizes: Vec<usize>,
    pub modularity: f64,
    /// Modularity of the singleton partition followed by the value after
    /// each Louvain level.
    pub pass_modularity: Vec<f64>,
    pub louvain_seed: u64,
    /// Number of seed stems per community, for communities holding any.
    pub seed_counts: BTreeMap<u32, usize>,
    pub topic_communities: BTreeSet<u32>,
    pub topic_tie_note: Option<String>,
}

/// Everything in a partition except the per-stem assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub community_count: usize,
    pub sizes: Vec<usize>,
    pub modularity: f64,
    pub pass_modularity: Vec<f64>,
    pub louvain_seed: u64,
    pub seed_counts: BTreeMap<u32, usize>,
    pub topic_communities: BTreeSet<u32>,
    pub topic_tie_note: Option<String>,
}

impl CommunityPartition {
    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn community_of(&self, stem: &str) -> Option<u32> {
        self.assignment.get(stem).copied()
    }

    pub fn is_topic(&self, stem: &str) -> bool {
        self.community_of(stem)
            .is_some_and(|c| self.topic_communities.contains(&c))
    }

    /// Members of community `id`, sorted by stem.
    pub fn members(&self, id: u32) -> Vec<&str> {
        self.assignment
            .iter()
            .filter(|(_, &c)| c == id)
            .map(|(s, _)| s.as_str())
            .collect()
    }

    /// Fill `seed_counts`, `topic_communities` and `topic_tie_note`.
    pub fn assign_topics(&mut self, lexicon: &SeedLexicon) -> Result<()> {
        let selection = topic_communities(self, lexicon)?;
        self.seed_counts = selection.seed_counts;
        self.topic_communities = selection.ids;
        self.topic_tie_note = selection.tie_note;
        Ok(())
    }

    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            community_count: self.community_count(),
            sizes: self.sizes.clone(),
            modularity: self.modularity,
            pass_modularity: self.pass_modularity.clone(),
            louvain_seed: self.louvain_seed,
            seed_counts: self.seed_counts.clone(),
            topic_communities: self.topic_communities.clone(),
            topic_tie_note: self.topic_tie_note.clone(),
        }
    }

    pub fn from_summary(assignment: BTreeMap<String, u32>, summary: PartitionSummary) -> Self {
        Self {
            assignment,
            sizes: summary.sizes,
            modularity: summary.modularity,
            pass_modularity: summary.pass_modularity,
            louvain_seed: summary.louvain_seed,
            seed_counts: summary.seed_counts,
            topic_communities: summary.topic_communities,
            topic_tie_note: summary.topic_tie_note,
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact modularity from integer community totals.
///
/// With `W` the total edge weight, `Q = Σ_c (2W·2W_in(c) − S(c)²) / (2W)²`.
/// The fraction is reduced before conversion, so scaling every weight by
/// the same factor yields a bit-identical result.
fn modularity_from_totals(total_weight: u64, totals: impl Iterator<Item = (u64, u64)>) -> f64 {
    if total_weight == 0 {
        return 0.0;
    }
    let m2 = 2 * i128::from(total_weight);
    let num: i128 = totals
        .map(|(inside, strength)| {
            let s = i128::from(strength);
            m2 * 2 * i128::from(inside) - s * s
        })
        .sum();
    let den = m2 * m2;
    let g = gcd(num, den).max(1);
    (num / g) as f64 / (den / g) as f64
}

/// Modularity with community labels given per node index.
pub fn modularity_indexed(graph: &CooccurrenceGraph, labels: &[u32]) -> f64 {
    assert_eq!(labels.len(), graph.node_count(), "one label per node");
    let mut totals: HashMap<u32, (u64, u64)> = HashMap::new();
    for (idx, node) in graph.nodes().iter().enumerate() {
        totals.entry(labels[idx]).or_default().1 += node.strength;
    }
    for (a, b, w) in graph.edges() {
        if labels[a] == labels[b] {
            totals.entry(labels[a]).or_default().0 += u64::from(w);
        }
    }
    modularity_from_totals(graph.total_weight(), totals.into_values())
}

/// Weighted Newman–Girvan modularity of `assignment` on `graph`.
pub fn modularity(graph: &CooccurrenceGraph, assignment: &BTreeMap<String, u32>) -> Result<f64> {
    let labels = graph
        .nodes()
        .iter()
        .map(|n| {
            assignment
                .get(&n.stem)
                .copied()
                .ok_or_else(|| Error::MissingNode(n.stem.clone()))
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(modularity_indexed(graph, &labels))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicSelection {
    pub ids: BTreeSet<u32>,
    pub seed_counts: BTreeMap<u32, usize>,
    pub tie_note: Option<String>,
}

/// The (at most) two communities holding the most seed stems. Ties go to
/// the larger community, then to the lower id.
pub fn topic_communities(partition: &CommunityPartition, lexicon: &SeedLexicon) -> Result<TopicSelection> {
    let mut seed_counts: BTreeMap<u32, usize> = BTreeMap::new();
    for (stem, &c) in &partition.assignment {
        if lexicon.is_seed(stem) {
            *seed_counts.entry(c).or_default() += 1;
        }
    }
    if seed_counts.is_empty() {
        return Err(Error::NoSeedInGraph);
    }
    let size = |c: u32| partition.sizes.get(c as usize).copied().unwrap_or(0);
    let mut ranked: Vec<(u32, usize)> = seed_counts.iter().map(|(&c, &n)| (c, n)).collect();
    ranked.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| size(b.0).cmp(&size(a.0)))
            .then_with(|| a.0.cmp(&b.0))
    });

    let mut notes = Vec::new();
    for pair in ranked.windows(2).take(2) {
        let ((a, na), (b, nb)) = (pair[0], pair[1]);
        if na == nb {
            let rule = if size(a) != size(b) {
                format!("size {} vs {}", size(a), size(b))
            } else {
                "lower id".to_string()
            };
            notes.push(format!(
                "communities {a} and {b} both hold {na} seed stems; ordered by {rule}"
            ));
        }
    }
    Ok(TopicSelection {
        ids: ranked.iter().take(2).map(|&(c, _)| c).collect(),
        seed_counts,
        tie_note: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}

/// `stem<TAB>community` lines under a header, sorted by stem.
pub fn write_partition_tsv<W: Write>(partition: &CommunityPartition, mut out: W) -> std::io::Result<()> {
    writeln!(out, "stem\tcommunity")?;
    for (stem, c) in &partition.assignment {
        writeln!(out, "{stem}\t{c}")?;
    }
    Ok(())
}

pub fn read_partition_tsv<R: BufRead>(reader: R) -> Result<BTreeMap<String, u32>> {
    let mut assignment = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let malformed = |message: String| Error::Malformed { line: line_no, message };
        let line = line.map_err(|e| malformed(e.to_string()))?;
        if line_no == 1 || line.is_empty() {
            continue;
        }
        let (stem, c) = line
            .split_once('\t')
            .ok_or_else(|| malformed("expected stem<TAB>community".into()))?;
        let c = c
            .parse::<u32>()
            .map_err(|_| malformed(format!("invalid community id \"{c}\"")))?;
        if assignment.insert(stem.to_string(), c).is_some() {
            return Err(malformed(format!("stem \"{stem}\" listed twice")));
        }
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netbuild::Node;
    use crate::textprep::Preprocessor;

    fn graph(edges: &[(&str, &str, u32)]) -> CooccurrenceGraph {
        let stems: BTreeSet<&str> = edges.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        CooccurrenceGraph::from_parts(
            stems.iter().map(|s| Node::new(*s, 1)).collect(),
            edges.iter().map(|&(a, b, w)| (a.to_string(), b.to_string(), w)),
        )
        .unwrap()
    }

    fn assignment(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
        pairs.iter().map(|&(s, c)| (s.to_string(), c)).collect()
    }

    #[test]
    fn two_disjoint_triangles() {
        let g = graph(&[
            ("a", "b", 1),
            ("b", "c", 1),
            ("a", "c", 1),
            ("d", "e", 1),
            ("e", "f", 1),
            ("d", "f", 1),
        ]);
        let q = modularity(
            &g,
            &assignment(&[("a", 0), ("b", 0), ("c", 0), ("d", 1), ("e", 1), ("f", 1)]),
        )
        .unwrap();
        assert_eq!(q, 0.5);
    }

    #[test]
    fn singleton_triangle_and_single_community() {
        let g = graph(&[("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]);
        let q = modularity(&g, &assignment(&[("a", 0), ("b", 1), ("c", 2)])).unwrap();
        assert!((q + 1.0 / 3.0).abs() < 1e-15);
        let q = modularity(&g, &assignment(&[("a", 4), ("b", 4), ("c", 4)])).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn missing_node_is_an_error() {
        let g = graph(&[("a", "b", 1)]);
        assert!(matches!(
            modularity(&g, &assignment(&[("a", 0)])),
            Err(Error::MissingNode(s)) if s == "b"
        ));
    }

    fn partition(sizes: Vec<usize>, members: &[(&str, u32)]) -> CommunityPartition {
        CommunityPartition {
            assignment: assignment(members),
            sizes,
            modularity: 0.0,
            pass_modularity: vec![],
            louvain_seed: 0,
            seed_counts: BTreeMap::new(),
            topic_communities: BTreeSet::new(),
            topic_tie_note: None,
        }
    }

    fn seeds(words: &[&str]) -> SeedLexicon {
        SeedLexicon::from_terms(words.iter().copied(), &Preprocessor::new(Vec::<String>::new())).unwrap()
    }

    #[test]
    fn top_two_by_seed_count() {
        let lex = seeds(&["aa", "ab", "ac", "ba", "bb", "ca"]);
        let p = partition(
            vec![1, 5, 5, 5],
            &[("aa", 0), ("ab", 0), ("ac", 0), ("ba", 3), ("bb", 3), ("ca", 2), ("zz", 1)],
        );
        let sel = topic_communities(&p, &lex).unwrap();
        assert_eq!(sel.ids, BTreeSet::from([0, 3]));
        assert_eq!(sel.seed_counts, BTreeMap::from([(0, 3), (2, 1), (3, 2)]));
        assert_eq!(sel.tie_note, None);
    }

    #[test]
    fn single_seed_community() {
        let lex = seeds(&["aa", "ab"]);
        let p = partition(vec![2, 1], &[("aa", 0), ("ab", 0), ("zz", 1)]);
        assert_eq!(topic_communities(&p, &lex).unwrap().ids, BTreeSet::from([0]));
    }

    #[test]
    fn seed_count_tie_broken_by_size_and_noted() {
        let lex = seeds(&["aa", "ab", "ac", "ad", "ba", "bb", "bc", "bd", "ca"]);
        let mut sizes = vec![1; 8];
        sizes[1] = 80;
        sizes[2] = 100;
        let p = partition(
            sizes,
            &[
                ("aa", 1),
                ("ab", 1),
                ("ac", 1),
                ("ad", 1),
                ("ba", 2),
                ("bb", 2),
                ("bc", 2),
                ("bd", 2),
                ("ca", 7),
            ],
        );
        let sel = topic_communities(&p, &lex).unwrap();
        assert_eq!(sel.ids, BTreeSet::from([1, 2]));
        let note = sel.tie_note.unwrap();
        assert!(note.contains("communities 2 and 1") && note.contains("size 100 vs 80"), "{note}");
    }

    #[test]
    fn no_seed_present() {
        let p = partition(vec![1], &[("zz", 0)]);
        assert!(matches!(topic_communities(&p, &seeds(&["aa"])), Err(Error::NoSeedInGraph)));
    }

    #[test]
    fn partition_tsv_round_trip() {
        let p = partition(vec![2, 1], &[("aa", 0), ("ab", 0), ("zz", 1)]);
        let mut buf = Vec::new();
        write_partition_tsv(&p, &mut buf).unwrap();
        assert_eq!(read_partition_tsv(std::io::Cursor::new(buf)).unwrap(), p.assignment);
    }
}
