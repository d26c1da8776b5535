//! Instance files.
//!
//! Native format (UTF-8, `\n` endings, weights as shortest round-trip
//! decimals, edges in ascending `(u, v)` order with `u < v`, 0-indexed):
//!
//! ```text
//! # gtcut-instance v1
//! n 2
//! m 1
//! e 0 1 1
//! ```
//!
//! `#` comment lines are allowed before the `n` line. A Gset-style header
//! (`<n> <m>` followed by `m` lines `<u> <v> <w>`, 1-indexed) is
//! auto-detected, so public benchmark instances can be ingested directly.
//! Reading then rewriting a native file reproduces it byte for byte.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

const HEADER_COMMENT: &str = "# gtcut-instance v1";

/// Writes the native format with canonical edge ordering.
pub fn write_instance<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    let canonical = g.canonicalized();
    writeln!(out, "{HEADER_COMMENT}")?;
    writeln!(out, "n {}", canonical.node_count())?;
    writeln!(out, "m {}", canonical.edge_count())?;
    for e in canonical.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.w)?;
    }
    Ok(())
}

pub fn write_instance_file<P: AsRef<Path>>(g: &WeightedGraph, path: P) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_instance(g, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Reads either the native format or a Gset-style file (auto-detected).
pub fn read_instance<R: Read>(source: R) -> Result<WeightedGraph> {
    let reader = BufReader::new(source);
    let mut lines = Vec::new();
    for line in reader.lines() {
        lines.push(line?);
    }

    // Find the first non-comment, non-blank line; that decides the dialect.
    let mut start = 0;
    while start < lines.len() {
        let t = lines[start].trim();
        if !t.is_empty() && !t.starts_with('#') {
            break;
        }
        start += 1;
    }
    if start == lines.len() {
        return Err(Error::Parse {
            line: lines.len().max(1),
            msg: "no instance data found".into(),
        })?;
    }

    if lines[start].trim_start().starts_with("n ") || lines[start].trim() == "n" {
        read_native(&lines, start)
    } else {
        read_gset(&lines, start)
    }
}

pub fn read_instance_file<P: AsRef<Path>>(path: P) -> Result<WeightedGraph> {
    read_instance(File::open(path)?)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{tok}`")))
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    let w = tok
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("expected edge weight, found `{tok}`")))?;
    if !w.is_finite() {
        return Err(parse_err(line, format!("non-finite edge weight `{tok}`")));
    }
    Ok(w)
}

struct EdgeAccumulator {
    node_count: usize,
    seen: HashSet<(usize, usize)>,
    edges: Vec<(usize, usize, f64)>,
}

impl EdgeAccumulator {
    fn new(node_count: usize, capacity: usize) -> Self {
        EdgeAccumulator {
            node_count,
            seen: HashSet::with_capacity(capacity),
            edges: Vec::with_capacity(capacity),
        }
    }

    fn push(&mut self, u: usize, v: usize, w: f64, line: usize) -> Result<()> {
        if u == v {
            return Err(parse_err(line, format!("self-loop at node {u}")));
        }
        if u >= self.node_count || v >= self.node_count {
            return Err(parse_err(
                line,
                format!(
                    "edge ({u}, {v}) out of range for {} nodes",
                    self.node_count
                ),
            ));
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(parse_err(
                line,
                format!("duplicate edge ({}, {})", key.0, key.1),
            ));
        }
        self.edges.push((u, v, w));
        Ok(())
    }
}

fn read_native(lines: &[String], start: usize) -> Result<WeightedGraph> {
    let lineno = |idx: usize| idx + 1;

    let n_parts: Vec<&str> = lines[start].split_whitespace().collect();
    if n_parts.len() != 2 || n_parts[0] != "n" {
        return Err(parse_err(lineno(start), "expected `n <node_count>`"));
    }
    let node_count = parse_usize(n_parts[1], lineno(start), "node count")?;

    let m_idx = start + 1;
    if m_idx >= lines.len() {
        return Err(parse_err(lineno(start) + 1, "expected `m <edge_count>`"));
    }
    let m_parts: Vec<&str> = lines[m_idx].split_whitespace().collect();
    if m_parts.len() != 2 || m_parts[0] != "m" {
        return Err(parse_err(lineno(m_idx), "expected `m <edge_count>`"));
    }
    let edge_count = parse_usize(m_parts[1], lineno(m_idx), "edge count")?;

    let mut acc = EdgeAccumulator::new(node_count, edge_count);
    let mut idx = m_idx + 1;
    while acc.edges.len() < edge_count {
        if idx >= lines.len() {
            return Err(parse_err(
                lines.len(),
                format!("expected {edge_count} edges, found {}", acc.edges.len()),
            ));
        }
        let parts: Vec<&str> = lines[idx].split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "e" {
            return Err(parse_err(lineno(idx), "expected `e <u> <v> <w>`"));
        }
        let u = parse_usize(parts[1], lineno(idx), "node index")?;
        let v = parse_usize(parts[2], lineno(idx), "node index")?;
        if u >= v {
            return Err(parse_err(
                lineno(idx),
                format!("endpoints must satisfy u < v, found {u} {v}"),
            ));
        }
        let w = parse_weight(parts[3], lineno(idx))?;
        acc.push(u, v, w, lineno(idx))?;
        idx += 1;
    }
    for rest in &lines[idx..] {
        if !rest.trim().is_empty() {
            return Err(parse_err(
                lineno(idx),
                "unexpected content after the declared edges",
            ));
        }
        idx += 1;
    }
    WeightedGraph::new(node_count, acc.edges)
}

/// `<n> <m>` header then `m` lines `<u> <v> <w>` with 1-indexed endpoints.
fn read_gset(lines: &[String], start: usize) -> Result<WeightedGraph> {
    let lineno = |idx: usize| idx + 1;

    let head: Vec<&str> = lines[start].split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(lineno(start), "expected `<n> <m>` header"));
    }
    let node_count = parse_usize(head[0], lineno(start), "node count")?;
    let edge_count = parse_usize(head[1], lineno(start), "edge count")?;

    let mut acc = EdgeAccumulator::new(node_count, edge_count);
    let mut idx = start + 1;
    while acc.edges.len() < edge_count {
        if idx >= lines.len() {
            return Err(parse_err(
                lines.len(),
                format!("expected {edge_count} edges, found {}", acc.edges.len()),
            ));
        }
        let t = lines[idx].trim();
        if t.is_empty() {
            idx += 1;
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(lineno(idx), "expected `<u> <v> <w>`"));
        }
        let u1 = parse_usize(parts[0], lineno(idx), "node index")?;
        let v1 = parse_usize(parts[1], lineno(idx), "node index")?;
        if u1 == 0 || v1 == 0 {
            return Err(parse_err(
                lineno(idx),
                "node indices are 1-based in this dialect",
            ));
        }
        let w = parse_weight(parts[2], lineno(idx))?;
        acc.push(u1 - 1, v1 - 1, w, lineno(idx))?;
        idx += 1;
    }
    WeightedGraph::new(node_count, acc.edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{InstanceSpec, TopologySpec, WeightDistribution};

    fn write_to_string(g: &WeightedGraph) -> String {
        let mut buf = Vec::new();
        write_instance(g, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn single_edge_file_is_exactly_four_lines() {
        let g = WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(write_to_string(&g), "# gtcut-instance v1\nn 2\nm 1\ne 0 1 1\n");
    }

    #[test]
    fn reads_single_edge_file() {
        let g = read_instance("# gtcut-instance v1\nn 2\nm 1\ne 0 1 1\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges()[0].w, 1.0);
    }

    #[test]
    fn round_trip_is_identity() {
        for seed in 0..100 {
            let spec = InstanceSpec {
                topology: TopologySpec::er(0.3, 5, 25).unwrap(),
                weights: if seed % 2 == 0 {
                    WeightDistribution::Normal01
                } else {
                    WeightDistribution::DiscreteUniform
                },
                count: 1,
                base_seed: seed,
            };
            let g = spec.generate(0).unwrap();
            let text = write_to_string(&g);
            let back = read_instance(text.as_bytes()).unwrap();
            assert_eq!(g.node_count(), back.node_count());
            assert_eq!(g.edge_count(), back.edge_count());
            for (a, b) in g.edges().iter().zip(back.edges()) {
                assert_eq!((a.u, a.v), (b.u, b.v));
                assert_eq!(a.w.to_bits(), b.w.to_bits(), "weight not bit-exact");
            }
            // Rewriting the parsed instance is byte-identical.
            assert_eq!(text, write_to_string(&back));
        }
    }

    #[test]
    fn fractional_weight_survives_round_trip() {
        let g = WeightedGraph::new(2, vec![(0, 1, 0.1)]).unwrap();
        let back = read_instance(write_to_string(&g).as_bytes()).unwrap();
        assert_eq!(back.edges()[0].w.to_bits(), (0.1f64).to_bits());
    }

    #[test]
    fn gset_header_is_detected() {
        let text = "3 2\n1 2 1\n2 3 -1\n";
        let g = read_instance(text.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 3);
        let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn gset_self_loop_is_rejected_with_line() {
        let text = "5 1\n5 5 1.0\n";
        match read_instance(text.as_bytes()) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("self-loop"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_edge_is_rejected_with_line() {
        let text = "# gtcut-instance v1\nn 3\nm 2\ne 0 1 1\ne 0 1 2\n";
        match read_instance(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let text = "# gtcut-instance v1\nn 2\nm 1\ne 0 5 1\n";
        assert!(matches!(
            read_instance(text.as_bytes()),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(read_instance("n 2\nm 1\ne 0 1\n".as_bytes()).is_err());
        assert!(read_instance("n 2\nm 1\nx 0 1 1\n".as_bytes()).is_err());
        assert!(read_instance("n 2\nm 1\ne 1 0 1\n".as_bytes()).is_err());
        assert!(read_instance("n 2\nm 2\ne 0 1 1\n".as_bytes()).is_err());
        assert!(read_instance("".as_bytes()).is_err());
    }

    #[test]
    fn file_helpers_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.mc");
        let g = WeightedGraph::new(3, vec![(0, 2, -0.25), (0, 1, 1.5)]).unwrap();
        write_instance_file(&g, &path).unwrap();
        let back = read_instance_file(&path).unwrap();
        assert_eq!(back.edge_count(), 2);
        // Canonical order on disk.
        assert_eq!((back.edges()[0].u, back.edges()[0].v), (0, 1));
    }
}
