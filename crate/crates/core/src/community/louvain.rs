use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{modularity_indexed, CommunityPartition};
use crate::error::{Error, Result};
use crate::netbuild::CooccurrenceGraph;

/// One level of the Louvain hierarchy. Each node carries the total weight
/// of the edges folded into it (`inner`) and its strength `k`, which counts
/// inner weight twice.
struct Level {
    adjacency: Vec<Vec<(usize, u64)>>,
    inner: Vec<u64>,
    k: Vec<u64>,
}

impl Level {
    fn from_graph(graph: &CooccurrenceGraph) -> Self {
        let n = graph.node_count();
        let adjacency: Vec<Vec<(usize, u64)>> = (0..n)
            .map(|i| {
                graph
                    .neighbors(i)
                    .iter()
                    .map(|&(j, w)| (j as usize, u64::from(w)))
                    .collect()
            })
            .collect();
        let k = graph.nodes().iter().map(|node| node.strength).collect();
        Self {
            adjacency,
            inner: vec![0; n],
            k,
        }
    }

    fn len(&self) -> usize {
        self.k.len()
    }

    /// Collapse each community (contiguous ids `0..count`) into one node.
    fn aggregate(&self, community: &[usize], count: usize) -> Self {
        let mut inner = vec![0u64; count];
        let mut links: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); count];
        for (i, neighbors) in self.adjacency.iter().enumerate() {
            let ci = community[i];
            inner[ci] += self.inner[i];
            for &(j, w) in neighbors {
                let cj = community[j];
                if ci == cj {
                    if i < j {
                        inner[ci] += w;
                    }
                } else {
                    *links[ci].entry(cj).or_insert(0) += w;
                }
            }
        }
        let adjacency: Vec<Vec<(usize, u64)>> =
            links.into_iter().map(|m| m.into_iter().collect()).collect();
        let k = adjacency
            .iter()
            .zip(&inner)
            .map(|(nbrs, &w_in)| 2 * w_in + nbrs.iter().map(|&(_, w)| w).sum::<u64>())
            .collect();
        Self { adjacency, inner, k }
    }
}

/// Repeated sweeps of single-node moves until a full sweep moves nothing.
/// Returns the community of every node (named by node index) and whether
/// anything moved.
///
/// Gains are compared as the exact integer `2W·k_{i,C} − tot_C·k_i`; a node
/// leaves its community only for a strictly better one, and equal gains go
/// to the lowest community id.
fn local_moves(level: &Level, m2: i128, order: &[usize]) -> (Vec<usize>, bool) {
    let n = level.len();
    let mut community: Vec<usize> = (0..n).collect();
    let mut tot: Vec<i128> = level.k.iter().map(|&k| i128::from(k)).collect();
    let mut links: Vec<i128> = vec![0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        let mut moved = false;
        for &i in order {
            let ci = community[i];
            let ki = i128::from(level.k[i]);
            for &(j, w) in &level.adjacency[i] {
                let c = community[j];
                if links[c] == 0 {
                    touched.push(c);
                }
                links[c] += i128::from(w);
            }
            touched.sort_unstable();

            tot[ci] -= ki;
            let mut best = ci;
            let mut best_gain = m2 * links[ci] - tot[ci] * ki;
            for &c in &touched {
                if c == ci {
                    continue;
                }
                let gain = m2 * links[c] - tot[c] * ki;
                if gain > best_gain {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += ki;
            if best != ci {
                community[i] = best;
                moved = true;
            }

            for &c in &touched {
                links[c] = 0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (community, moved_any)
}

/// Renumber labels to `0..count` in order of first appearance.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let out = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect();
    (out, next)
}

/// Louvain community detection on edge weights.
///
/// Each level visits nodes in an order drawn from a ChaCha8 generator
/// seeded with `seed`, so a fixed seed gives a fixed partition. Community
/// ids in the result are ordered by descending size, ties by the smallest
/// member stem. Topic communities are left empty; see
/// [`CommunityPartition::assign_topics`].
pub fn louvain(graph: &CooccurrenceGraph, seed: u64) -> Result<CommunityPartition> {
    if graph.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m2 = 2 * i128::from(graph.total_weight());

    // membership[v] = node of the current level that original node v sits in
    let mut membership: Vec<usize> = (0..n).collect();
    let mut level = Level::from_graph(graph);
    let as_labels = |m: &[usize]| m.iter().map(|&c| c as u32).collect::<Vec<u32>>();
    let mut pass_modularity = vec![modularity_indexed(graph, &as_labels(&membership))];

    loop {
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.shuffle(&mut rng);
        let (community, moved) = local_moves(&level, m2, &order);
        if !moved {
            break;
        }
        let (community, count) = compact(&community);
        for m in membership.iter_mut() {
            *m = community[*m];
        }
        pass_modularity.push(modularity_indexed(graph, &as_labels(&membership)));
        level = level.aggregate(&community, count);
    }

    // final ids: larger communities first, then by smallest member index
    let count = level.len();
    let mut sizes = vec![0usize; count];
    let mut first = vec![usize::MAX; count];
    for (v, &c) in membership.iter().enumerate() {
        sizes[c] += 1;
        first[c] = first[c].min(v);
    }
    let mut ranked: Vec<usize> = (0..count).collect();
    ranked.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(first[a].cmp(&first[b])));
    let mut new_id = vec![0u32; count];
    for (id, &c) in ranked.iter().enumerate() {
        new_id[c] = id as u32;
    }
    let labels: Vec<u32> = membership.iter().map(|&c| new_id[c]).collect();

    Ok(CommunityPartition {
        assignment: graph
            .nodes()
            .iter()
            .zip(&labels)
            .map(|(node, &c)| (node.stem.clone(), c))
            .collect(),
        sizes: ranked.iter().map(|&c| sizes[c]).collect(),
        modularity: modularity_indexed(graph, &labels),
        pass_modularity,
        louvain_seed: seed,
        seed_counts: BTreeMap::new(),
        topic_communities: BTreeSet::new(),
        topic_tie_note: None,
    })
}
