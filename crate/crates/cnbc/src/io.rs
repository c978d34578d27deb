//! Reading and writing graphs (edge list, DIMACS `.col`) and colorings
//! (JSON, CSV).
//!
//! Writers emit canonical sorted order so that write-after-read is a
//! byte-identical round trip on canonicalized input.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::graph::Graph;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid coloring: {0}")]
    Coloring(#[from] crate::coloring::ColoringError),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

struct EdgeAccumulator {
    edges: BTreeSet<(usize, usize)>,
    max_vertex: Option<usize>,
}

impl EdgeAccumulator {
    fn new() -> Self {
        EdgeAccumulator {
            edges: BTreeSet::new(),
            max_vertex: None,
        }
    }

    fn push(&mut self, line: usize, u: usize, v: usize) -> Result<(), FormatError> {
        if u == v {
            return Err(parse_err(line, format!("loop edge at vertex {u}")));
        }
        let e = (u.min(v), u.max(v));
        if !self.edges.insert(e) {
            return Err(parse_err(line, format!("duplicate edge {} {}", e.0, e.1)));
        }
        self.max_vertex = Some(self.max_vertex.map_or(u.max(v), |m| m.max(u.max(v))));
        Ok(())
    }
}

/// Parses the plain edge-list format: one `u v` pair per line, 0-based ids,
/// `#` starts a comment. The order is inferred as max id + 1.
pub fn read_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut acc = EdgeAccumulator::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(
                line,
                format!("expected `u v`, got {} fields", fields.len()),
            ));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line, format!("invalid vertex id `{s}`")))
        };
        acc.push(line, parse(fields[0])?, parse(fields[1])?)?;
    }
    let order = acc.max_vertex.map_or(0, |m| m + 1);
    Ok(Graph::from_edges(order, acc.edges).expect("accumulator enforces simple edges"))
}

/// Writes the canonical edge list: sorted `u v` lines with `u < v`.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses DIMACS `.col`: a `p edge n m` header, `e u v` lines with 1-based
/// ids, `c` comment lines.
pub fn read_dimacs(text: &str) -> Result<Graph, FormatError> {
    let mut order: Option<usize> = None;
    let mut declared_edges = 0usize;
    let mut acc = EdgeAccumulator::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if order.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(parse_err(line, "expected `p edge <n> <m>`"));
                }
                order = Some(
                    fields[2]
                        .parse()
                        .map_err(|_| parse_err(line, "invalid vertex count"))?,
                );
                declared_edges = fields[3]
                    .parse()
                    .map_err(|_| parse_err(line, "invalid edge count"))?;
            }
            "e" => {
                let n = order.ok_or_else(|| parse_err(line, "edge before problem line"))?;
                if fields.len() != 3 {
                    return Err(parse_err(line, "expected `e <u> <v>`"));
                }
                let parse = |s: &str| {
                    let id: usize = s
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid vertex id `{s}`")))?;
                    if id < 1 || id > n {
                        return Err(parse_err(line, format!("vertex {id} outside 1..={n}")));
                    }
                    Ok(id - 1)
                };
                acc.push(line, parse(fields[1])?, parse(fields[2])?)?;
            }
            other => {
                return Err(parse_err(line, format!("unknown line type `{other}`")));
            }
        }
    }
    let order = order.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if acc.edges.len() != declared_edges {
        return Err(parse_err(
            0,
            format!(
                "problem line declares {declared_edges} edges, found {}",
                acc.edges.len()
            ),
        ));
    }
    Ok(Graph::from_edges(order, acc.edges).expect("accumulator enforces simple edges"))
}

/// Writes DIMACS `.col` with sorted 1-based `e` lines.
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.order(), g.size()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Graph file formats understood by the readers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
}

impl GraphFormat {
    /// `.col` and `.dimacs` select DIMACS; everything else is an edge list.
    pub fn from_path(path: &Path) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("col") | Some("dimacs") => GraphFormat::Dimacs,
            _ => GraphFormat::EdgeList,
        }
    }
}

pub fn read_graph_str(text: &str, format: GraphFormat) -> Result<Graph, FormatError> {
    match format {
        GraphFormat::EdgeList => read_edge_list(text),
        GraphFormat::Dimacs => read_dimacs(text),
    }
}

pub fn write_graph_str(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Dimacs => write_dimacs(g),
    }
}

/// Reads a graph file, picking the format from the extension.
pub fn read_graph_path(path: &Path) -> Result<Graph, FormatError> {
    let text = std::fs::read_to_string(path)?;
    read_graph_str(&text, GraphFormat::from_path(path))
}

/// Writes a graph file, picking the format from the extension.
pub fn write_graph_path(path: &Path, g: &Graph) -> Result<(), FormatError> {
    std::fs::write(path, write_graph_str(g, GraphFormat::from_path(path)))?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    k: usize,
    colors: Vec<usize>,
}

/// Serializes a coloring as `{"k": .., "colors": [..]}` indexed by vertex id.
pub fn write_coloring_json(c: &Coloring) -> String {
    serde_json::to_string(&ColoringFile {
        k: c.k(),
        colors: c.colors().to_vec(),
    })
    .expect("coloring serialization cannot fail")
}

pub fn read_coloring_json(text: &str) -> Result<Coloring, FormatError> {
    let file: ColoringFile = serde_json::from_str(text)?;
    Ok(Coloring::new(file.k, file.colors)?)
}

/// Serializes a coloring as `vertex,color` CSV rows in vertex order.
pub fn write_coloring_csv(c: &Coloring) -> String {
    let mut out = String::from("vertex,color\n");
    for (v, &color) in c.colors().iter().enumerate() {
        writeln!(out, "{v},{color}").unwrap();
    }
    out
}

/// Reads `vertex,color` CSV. The color count is inferred as the maximum
/// color present, so a coloring whose top classes are all empty needs the
/// JSON format to round-trip its `k`.
pub fn read_coloring_csv(text: &str) -> Result<Coloring, FormatError> {
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || (line == 1 && content == "vertex,color") {
            continue;
        }
        let fields: Vec<&str> = content.split(',').collect();
        if fields.len() != 2 {
            return Err(parse_err(line, "expected `vertex,color`"));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("invalid number `{s}`")))
        };
        rows.push((parse(fields[0])?, parse(fields[1])?));
    }
    rows.sort();
    let mut colors = vec![0usize; rows.len()];
    let mut max_color = 0;
    for (i, (v, color)) in rows.iter().enumerate() {
        if *v != i {
            return Err(parse_err(
                0,
                format!("vertex ids must cover 0..{} exactly; problem near {v}", rows.len()),
            ));
        }
        colors[i] = *color;
        max_color = max_color.max(*color);
    }
    Ok(Coloring::new(max_color.max(2), colors)?)
}

/// Reads a coloring file; `.csv` selects CSV, everything else JSON.
pub fn read_coloring_path(path: &Path) -> Result<Coloring, FormatError> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_coloring_csv(&text),
        _ => read_coloring_json(&text),
    }
}

pub fn write_coloring_path(path: &Path, c: &Coloring) -> Result<(), FormatError> {
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => write_coloring_csv(c),
        _ => write_coloring_json(c),
    };
    std::fs::write(path, text)?;
    Ok(())
}
