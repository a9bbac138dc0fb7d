//! Text formats: edge lists, incidence CSV, lattice JSON documents, DOT and
//! histogram CSV.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::DepthHistograms;
use crate::bitset::BitSet;
use crate::hypergraph::{Hypergraph, HypergraphError, IncidenceMatrix};
use crate::lattice::{ConceptLattice, LatticeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("row {row}, column {column}: {message}")]
    Cell {
        row: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Parses `name: v1, v2, ...` lines. `#` starts a comment; blank lines are
/// skipped; an edge may list no vertices.
pub fn parse_edge_list(text: &str) -> Result<Hypergraph, FormatError> {
    let mut edges: Vec<(String, Vec<String>)> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((name, rest)) = line.split_once(':') else {
            return Err(FormatError::Line {
                line: line_no,
                message: format!("expected `edge_name: v1, v2, ...`, got `{line}`"),
            });
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(FormatError::Line {
                line: line_no,
                message: "empty edge name".into(),
            });
        }
        if let Some(first) = seen.insert(name.to_owned(), line_no) {
            return Err(FormatError::Line {
                line: line_no,
                message: format!("duplicate edge name `{name}` (first defined on line {first})"),
            });
        }
        let mut vertices = Vec::new();
        for v in rest.split(',').map(str::trim) {
            if v.is_empty() {
                if rest.trim().is_empty() {
                    continue;
                }
                return Err(FormatError::Line {
                    line: line_no,
                    message: "empty vertex name".into(),
                });
            }
            vertices.push(v.to_owned());
        }
        edges.push((name.to_owned(), vertices));
    }
    Ok(Hypergraph::from_edge_list(edges)?)
}

pub fn write_edge_list(h: &Hypergraph) -> String {
    let mut out = String::new();
    for (e, name) in h.edge_names().iter().enumerate() {
        let members = h.vertex_set_names(h.incidence().column(e));
        let _ = writeln!(out, "{name}: {}", members.join(", "));
    }
    out
}

/// Parses an incidence matrix: the header row names the edges (its first
/// cell is a corner label and is ignored), the first column names the
/// vertices, and every other cell is `0` or `1`.
pub fn parse_incidence_csv(text: &str) -> Result<Hypergraph, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let Some(header) = records.next().transpose()? else {
        return Ok(Hypergraph::new(
            Vec::new(),
            Vec::new(),
            IncidenceMatrix::new(0, Vec::new())?,
        )?);
    };
    let edge_names: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let width = header.len();

    let mut vertex_names = Vec::new();
    let mut cells: Vec<Vec<bool>> = Vec::new();
    for (r, record) in records.enumerate() {
        let record = record?;
        let row = r + 2;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(FormatError::Cell {
                row,
                column: record.len().min(width) + 1,
                message: format!("row has {} cells, header has {width}", record.len()),
            });
        }
        vertex_names.push(record[0].to_owned());
        let mut bits = Vec::with_capacity(width - 1);
        for (c, cell) in record.iter().enumerate().skip(1) {
            bits.push(match cell {
                "0" => false,
                "1" => true,
                other => {
                    return Err(FormatError::Cell {
                        row,
                        column: c + 1,
                        message: format!("expected 0 or 1, got `{other}`"),
                    })
                }
            });
        }
        cells.push(bits);
    }

    let n = vertex_names.len();
    let columns = (0..edge_names.len())
        .map(|e| BitSet::from_indices(n, (0..n).filter(|&v| cells[v][e])))
        .collect();
    Ok(Hypergraph::new(
        vertex_names,
        edge_names,
        IncidenceMatrix::new(n, columns)?,
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentNode {
    pub id: usize,
    pub extent: Vec<String>,
    pub intent: Vec<String>,
    pub introduced: Vec<String>,
}

/// Self-contained JSON form of a lattice, including the name tables needed
/// to rebuild its hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub nodes: Vec<DocumentNode>,
    pub covers: Vec<(usize, usize)>,
    pub top: usize,
    pub bottom: usize,
}

impl LatticeDocument {
    pub fn from_lattice(l: &ConceptLattice) -> Self {
        let h = l.hypergraph();
        let nodes = l
            .galois_labels()
            .into_iter()
            .map(|g| DocumentNode {
                id: g.node,
                extent: g.extent,
                intent: g.intent,
                introduced: g.introduced_edges,
            })
            .collect();
        LatticeDocument {
            n_vertices: h.n_vertices(),
            n_edges: h.n_edges(),
            vertices: h.vertex_names().to_vec(),
            edges: h.edge_names().to_vec(),
            nodes,
            covers: l.covers().to_vec(),
            top: l.top_index(),
            bottom: l.bottom_index(),
        }
    }

    /// Rebuilds the lattice and checks every stored field against it.
    pub fn to_lattice(&self) -> Result<ConceptLattice, FormatError> {
        let bad = |m: String| FormatError::Lattice(LatticeError::Malformed(m));
        if self.vertices.len() != self.n_vertices || self.edges.len() != self.n_edges {
            return Err(bad("name tables disagree with stated dimensions".into()));
        }
        let vindex: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let eindex: HashMap<&str, usize> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();

        let mut extents = Vec::with_capacity(self.nodes.len());
        let mut columns: Vec<Option<BitSet>> = vec![None; self.n_edges];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(bad(format!("node at position {i} has id {}", node.id)));
            }
            let mut ext = BitSet::empty(self.n_vertices);
            for v in &node.extent {
                let &vi = vindex
                    .get(v.as_str())
                    .ok_or_else(|| bad(format!("unknown vertex `{v}`")))?;
                ext.insert(vi);
            }
            for e in &node.introduced {
                let &ei = eindex
                    .get(e.as_str())
                    .ok_or_else(|| bad(format!("unknown edge `{e}`")))?;
                if columns[ei].replace(ext.clone()).is_some() {
                    return Err(bad(format!("edge `{e}` introduced twice")));
                }
            }
            extents.push(ext);
        }
        let columns = columns
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| bad(format!("edge `{}` never introduced", self.edges[i])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let h = Hypergraph::new(
            self.vertices.clone(),
            self.edges.clone(),
            IncidenceMatrix::new(self.n_vertices, columns)?,
        )?;
        let lattice = ConceptLattice::from_extents(h, extents)?;
        if LatticeDocument::from_lattice(&lattice) != *self {
            return Err(bad(
                "stored intents, covers or labels disagree with the rebuilt lattice".into(),
            ));
        }
        Ok(lattice)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram with `extent:intent` labels, drawn bottom to top. One DOT
/// edge per cover pair.
pub fn to_dot(l: &ConceptLattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for label in l.galois_labels() {
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\"];",
            label.node,
            dot_escape(&label.to_string())
        );
    }
    for &(lo, hi) in l.covers() {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    out
}

/// `histogram,distance,count` rows for the four depth histograms.
pub fn histograms_csv(h: &DepthHistograms) -> String {
    let mut out = String::from("histogram,distance,count\n");
    for (name, hist) in [
        ("min_to_top", &h.min_to_top),
        ("max_to_top", &h.max_to_top),
        ("min_to_bottom", &h.min_to_bottom),
        ("max_to_bottom", &h.max_to_bottom),
    ] {
        for (d, c) in hist {
            let _ = writeln!(out, "{name},{d},{c}");
        }
    }
    out
}
