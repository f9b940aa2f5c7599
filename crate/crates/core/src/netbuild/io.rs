//! TSV graph file.
//!
//! ```text
//! #nodes
//! <stem>\t<doc_frequency>\t<flags>
//! #edges
//! <stem_a>\t<stem_b>\t<weight>
//! ```
//!
//! `flags` is `-`, `seed` or `seed,compound`. Nodes are sorted by stem,
//! edges by `(stem_a, stem_b)` with `stem_a < stem_b`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CooccurrenceGraph, Node};
use crate::error::{Error, Result};

pub fn write_graph<W: Write>(graph: &CooccurrenceGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "#nodes")?;
    for node in graph.nodes() {
        let flags = match (node.is_seed, node.is_compound_derived_seed) {
            (true, true) => "seed,compound",
            (true, false) => "seed",
            (false, true) => "compound",
            (false, false) => "-",
        };
        writeln!(out, "{}\t{}\t{}", node.stem, node.doc_frequency, flags)?;
    }
    writeln!(out, "#edges")?;
    for (a, b, w) in graph.edges() {
        writeln!(out, "{}\t{}\t{}", graph.node(a).stem, graph.node(b).stem, w)?;
    }
    Ok(())
}

pub fn export_graph(graph: &CooccurrenceGraph, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_graph(graph, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

#[derive(PartialEq)]
enum Section {
    Start,
    Nodes,
    Edges,
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<CooccurrenceGraph> {
    let mut section = Section::Start;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let malformed = |message: String| Error::Malformed {
            line: line_no,
            message,
        };
        let line = line.map_err(|e| malformed(e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        match line.as_str() {
            "#nodes" if section == Section::Start => {
                section = Section::Nodes;
                continue;
            }
            "#edges" if section == Section::Nodes => {
                section = Section::Edges;
                continue;
            }
            _ => {}
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(malformed(format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        match section {
            Section::Start => return Err(malformed("expected #nodes header".into())),
            Section::Nodes => {
                let doc_frequency = fields[1]
                    .parse::<u32>()
                    .map_err(|_| malformed(format!("invalid doc frequency \"{}\"", fields[1])))?;
                let (is_seed, is_compound) = match fields[2] {
                    "-" => (false, false),
                    "seed" => (true, false),
                    "compound" => (false, true),
                    "seed,compound" => (true, true),
                    other => return Err(malformed(format!("unknown flags \"{other}\""))),
                };
                if fields[0].is_empty() {
                    return Err(malformed("empty stem".into()));
                }
                let mut node = Node::new(fields[0], doc_frequency);
                node.is_seed = is_seed;
                node.is_compound_derived_seed = is_compound;
                nodes.push(node);
            }
            Section::Edges => {
                let weight = fields[2]
                    .parse::<u32>()
                    .ok()
                    .filter(|&w| w >= 1)
                    .ok_or_else(|| malformed(format!("edge weight must be a positive integer, got \"{}\"", fields[2])))?;
                edges.push((fields[0].to_string(), fields[1].to_string(), weight));
            }
        }
    }
    if section == Section::Start {
        return Err(Error::Malformed {
            line: 0,
            message: "missing #nodes section".into(),
        });
    }
    CooccurrenceGraph::from_parts(nodes, edges).map_err(|e| Error::Malformed {
        line: 0,
        message: e.to_string(),
    })
}

pub fn import_graph(path: &Path) -> Result<CooccurrenceGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_graph(BufReader::new(file))
}
