//! File formats: edge-list graphs, JSON orderons, JSON pattern families.
//!
//! Graph files: a header line `n=<int>`, then one `i j` pair per line,
//! 1-indexed with i < j. Orderon files: a JSON object with `xcuts`, `layers`
//! (one breakpoint list per column), and `values` (cells enumerated
//! column-major then layer). See docs/formats.md.

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PatternGraph};
use crate::orderon::GridOrderon;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub fn parse_graph(text: &str) -> Result<OrderedGraph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .ok_or_else(|| Error::Parse(format!("expected 'n=<int>' header, got '{header}'")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count in '{header}'")))?;
    let mut edges = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse(format!("expected 'i j' on line '{line}'")));
        };
        let i: usize = a.parse().map_err(|_| Error::Parse(format!("bad vertex '{a}'")))?;
        let j: usize = b.parse().map_err(|_| Error::Parse(format!("bad vertex '{b}'")))?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Parse(format!("edge ({i},{j}) outside 1..{n}")));
        }
        if i >= j {
            return Err(Error::Parse(format!("edges must satisfy i < j, got ({i},{j})")));
        }
        edges.push((i - 1, j - 1));
    }
    OrderedGraph::from_edges(n, &edges)
}

pub fn format_graph(g: &OrderedGraph) -> String {
    let mut out = format!("n={}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<OrderedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &OrderedGraph) -> Result<()> {
    Ok(std::fs::write(path, format_graph(g))?)
}

/// Pattern files use the same edge-list format with n = k.
pub fn parse_pattern(text: &str) -> Result<PatternGraph> {
    let g = parse_graph(text)?;
    PatternGraph::new(g.n(), &g.edges())
}

pub fn read_pattern(path: impl AsRef<Path>) -> Result<PatternGraph> {
    parse_pattern(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct OrderonFile {
    xcuts: Vec<f64>,
    layers: Vec<Vec<f64>>,
    values: Vec<Vec<f64>>,
}

pub fn parse_orderon(text: &str) -> Result<GridOrderon> {
    let file: OrderonFile = serde_json::from_str(text)?;
    GridOrderon::new(file.xcuts, file.layers, file.values)
}

pub fn format_orderon(w: &GridOrderon) -> String {
    let n = w.ncells();
    let file = OrderonFile {
        xcuts: w.grid().xcuts().to_vec(),
        layers: w.grid().layers().to_vec(),
        values: (0..n).map(|i| (0..n).map(|j| w.value(i, j)).collect()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("orderon serializes")
}

pub fn read_orderon(path: impl AsRef<Path>) -> Result<GridOrderon> {
    parse_orderon(&std::fs::read_to_string(path)?)
}

pub fn write_orderon(path: impl AsRef<Path>, w: &GridOrderon) -> Result<()> {
    Ok(std::fs::write(path, format_orderon(w))?)
}

#[derive(Debug, Serialize, Deserialize)]
struct FamilyFile {
    patterns: Vec<FamilyPattern>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FamilyPattern {
    k: usize,
    /// 1-indexed pairs with i < j.
    edges: Vec<(usize, usize)>,
}

/// Forbidden-family files: JSON `{"patterns": [{"k": 3, "edges": [[1,2]]}]}`.
pub fn parse_family(text: &str) -> Result<Vec<PatternGraph>> {
    let file: FamilyFile = serde_json::from_str(text)?;
    file.patterns
        .iter()
        .map(|p| {
            let edges: Vec<(usize, usize)> = p
                .edges
                .iter()
                .map(|&(i, j)| {
                    if i == 0 || j == 0 || i > p.k || j > p.k || i >= j {
                        Err(Error::Parse(format!("bad pattern edge ({i},{j}) for k={}", p.k)))
                    } else {
                        Ok((i - 1, j - 1))
                    }
                })
                .collect::<Result<_>>()?;
            PatternGraph::new(p.k, &edges)
        })
        .collect()
}

pub fn read_family(path: impl AsRef<Path>) -> Result<Vec<PatternGraph>> {
    parse_family(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::odd_clique;
    use crate::random::random_grid_orderon;

    #[test]
    fn graph_round_trip() {
        let g = odd_clique(3);
        let text = format_graph(&g);
        assert!(text.starts_with("n=6\n"));
        assert!(text.contains("1 3"));
        let back = parse_graph(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn graph_parse_errors() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("n=3\n3 1\n").is_err());
        assert!(parse_graph("n=3\n0 2\n").is_err());
        assert!(parse_graph("n=3\n1 4\n").is_err());
        assert!(parse_graph("vertices=3\n").is_err());
        assert!(parse_graph("n=3\n1 2 3\n").is_err());
    }

    #[test]
    fn orderon_round_trip() {
        let w = random_grid_orderon(3, 2, 5);
        let text = format_orderon(&w);
        let back = parse_orderon(&text).unwrap();
        assert_eq!(w.grid().xcuts().len(), back.grid().xcuts().len());
        for i in 0..w.ncells() {
            for j in 0..w.ncells() {
                assert!((w.value(i, j) - back.value(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn family_parsing() {
        let text = r#"{"patterns": [{"k": 3, "edges": [[1,2],[2,3]]}, {"k": 2, "edges": []}]}"#;
        let family = parse_family(text).unwrap();
        assert_eq!(family.len(), 2);
        assert!(family[0].has_edge(0, 1) && family[0].has_edge(1, 2));
        assert_eq!(family[1].edge_count(), 0);
        assert!(parse_family(r#"{"patterns": [{"k": 2, "edges": [[2,1]]}]}"#).is_err());
    }

    #[test]
    fn pattern_file_shares_graph_format() {
        let p = parse_pattern("n=3\n1 3\n").unwrap();
        assert!(p.has_edge(0, 2) && !p.has_edge(0, 1));
    }
}
