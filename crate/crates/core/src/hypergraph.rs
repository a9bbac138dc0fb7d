//! Hypergraph / formal context data model and the Galois prime operators.
//!
//! A [`Hypergraph`] doubles as a formal context: vertices are the objects,
//! hyperedges the attributes, and the incidence matrix the relation.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("{what} has width {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("edge id {id} out of range (hypergraph has {n_edges} edges)")]
    EdgeOutOfRange { id: usize, n_edges: usize },
    #[error("unknown edge name `{0}`")]
    UnknownEdge(String),
}

pub type Result<T, E = HypergraphError> = std::result::Result<T, E>;

/// A set of vertex indices, sized to its hypergraph's vertex count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub BitSet);

/// A set of edge indices, sized to its hypergraph's edge count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub BitSet);

macro_rules! set_newtype {
    ($name:ident) => {
        impl $name {
            pub fn empty(width: usize) -> Self {
                $name(BitSet::empty(width))
            }

            pub fn full(width: usize) -> Self {
                $name(BitSet::full(width))
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
                $name(BitSet::from_indices(width, indices))
            }

            pub fn into_bits(self) -> BitSet {
                self.0
            }
        }

        impl Deref for $name {
            type Target = BitSet;

            fn deref(&self) -> &BitSet {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

set_newtype!(VertexSet);
set_newtype!(EdgeSet);

/// Column-major Boolean matrix: one bit vector of length `n_vertices` per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n_vertices: usize,
    columns: Vec<BitSet>,
}

impl IncidenceMatrix {
    pub fn new(n_vertices: usize, columns: Vec<BitSet>) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != n_vertices) {
            return Err(HypergraphError::DimensionMismatch {
                what: "incidence column",
                expected: n_vertices,
                found: bad.len(),
            });
        }
        Ok(IncidenceMatrix {
            n_vertices,
            columns,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[BitSet] {
        &self.columns
    }

    pub fn column(&self, edge: usize) -> &BitSet {
        &self.columns[edge]
    }

    pub fn get(&self, vertex: usize, edge: usize) -> bool {
        self.columns[edge].contains(vertex)
    }

    /// Row view: for each vertex, the set of edges containing it.
    pub fn rows(&self) -> Vec<BitSet> {
        let mut rows = vec![BitSet::empty(self.columns.len()); self.n_vertices];
        for (e, col) in self.columns.iter().enumerate() {
            for v in col.iter() {
                rows[v].insert(e);
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    chi: IncidenceMatrix,
}

impl Hypergraph {
    pub fn new(
        vertex_names: Vec<String>,
        edge_names: Vec<String>,
        chi: IncidenceMatrix,
    ) -> Result<Self> {
        if vertex_names.len() != chi.n_vertices() {
            return Err(HypergraphError::DimensionMismatch {
                what: "vertex name table",
                expected: chi.n_vertices(),
                found: vertex_names.len(),
            });
        }
        if edge_names.len() != chi.n_edges() {
            return Err(HypergraphError::DimensionMismatch {
                what: "edge name table",
                expected: chi.n_edges(),
                found: edge_names.len(),
            });
        }
        if let Some(dup) = first_duplicate(&vertex_names) {
            return Err(HypergraphError::DuplicateVertex(dup.to_owned()));
        }
        if let Some(dup) = first_duplicate(&edge_names) {
            return Err(HypergraphError::DuplicateEdge(dup.to_owned()));
        }
        Ok(Hypergraph {
            vertex_names,
            edge_names,
            chi,
        })
    }

    /// Builds a hypergraph from named edges. Vertices are numbered in order
    /// of first appearance; repeated mentions within an edge collapse.
    pub fn from_edge_list<E, N, V, S>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (N, V)>,
        N: Into<String>,
        V: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vertex_names: Vec<String> = Vec::new();
        let mut vertex_index: HashMap<String, usize> = HashMap::new();
        let mut edge_names: Vec<String> = Vec::new();
        let mut seen_edges: HashMap<String, ()> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();

        for (name, vertices) in edges {
            let name = name.into();
            if seen_edges.insert(name.clone(), ()).is_some() {
                return Err(HypergraphError::DuplicateEdge(name));
            }
            let mut cols = Vec::new();
            for v in vertices {
                let v = v.as_ref();
                let idx = match vertex_index.get(v) {
                    Some(&i) => i,
                    None => {
                        let i = vertex_names.len();
                        vertex_names.push(v.to_owned());
                        vertex_index.insert(v.to_owned(), i);
                        i
                    }
                };
                cols.push(idx);
            }
            edge_names.push(name);
            members.push(cols);
        }

        let n = vertex_names.len();
        let columns = members
            .into_iter()
            .map(|m| BitSet::from_indices(n, m))
            .collect();
        let chi = IncidenceMatrix::new(n, columns)?;
        Ok(Hypergraph {
            vertex_names,
            edge_names,
            chi,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.chi.n_vertices()
    }

    pub fn n_edges(&self) -> usize {
        self.chi.n_edges()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0]
    }

    pub fn incidence(&self) -> &IncidenceMatrix {
        &self.chi
    }

    /// Vertex set of one hyperedge (a column of the incidence matrix).
    pub fn edge(&self, e: EdgeId) -> Result<VertexSet> {
        self.check_edge(e)?;
        Ok(VertexSet(self.chi.column(e.0).clone()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_names
            .iter()
            .position(|n| n == name)
            .map(EdgeId)
            .ok_or_else(|| HypergraphError::UnknownEdge(name.to_owned()))
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(VertexId)
    }

    fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.0 >= self.n_edges() {
            return Err(HypergraphError::EdgeOutOfRange {
                id: e.0,
                n_edges: self.n_edges(),
            });
        }
        Ok(())
    }

    /// `A'`: the edges containing every vertex of `a`. The empty set maps to
    /// all edges.
    pub fn intent_prime(&self, a: &VertexSet) -> Result<EdgeSet> {
        if a.len() != self.n_vertices() {
            return Err(HypergraphError::DimensionMismatch {
                what: "vertex set",
                expected: self.n_vertices(),
                found: a.len(),
            });
        }
        Ok(EdgeSet::from_indices(
            self.n_edges(),
            self.chi
                .columns()
                .iter()
                .enumerate()
                .filter(|(_, col)| a.is_subset(col))
                .map(|(i, _)| i),
        ))
    }

    /// `B'`: the vertices lying in every edge of `b`. The empty set maps to
    /// all vertices.
    pub fn extent_prime(&self, b: &EdgeSet) -> Result<VertexSet> {
        if b.len() != self.n_edges() {
            return Err(HypergraphError::DimensionMismatch {
                what: "edge set",
                expected: self.n_edges(),
                found: b.len(),
            });
        }
        let mut out = BitSet::full(self.n_vertices());
        for e in b.iter() {
            out.intersect_with(self.chi.column(e));
        }
        Ok(VertexSet(out))
    }

    /// `A''`.
    pub fn closure(&self, a: &VertexSet) -> Result<VertexSet> {
        let intent = self.intent_prime(a)?;
        self.extent_prime(&intent)
    }

    /// Drops repeated columns. The returned map sends every original edge to
    /// its representative in the deduplicated hypergraph; the representative
    /// is the lowest original index carrying that column.
    pub fn dedup_edges(&self) -> (Hypergraph, Vec<EdgeId>) {
        let mut first_seen: HashMap<&BitSet, usize> = HashMap::new();
        let mut map = Vec::with_capacity(self.n_edges());
        let mut names = Vec::new();
        let mut columns = Vec::new();
        for (i, col) in self.chi.columns().iter().enumerate() {
            let next = columns.len();
            let rep = *first_seen.entry(col).or_insert(next);
            if rep == next {
                names.push(self.edge_names[i].clone());
                columns.push(col.clone());
            }
            map.push(EdgeId(rep));
        }
        let deduped = Hypergraph {
            vertex_names: self.vertex_names.clone(),
            edge_names: names,
            chi: IncidenceMatrix {
                n_vertices: self.n_vertices(),
                columns,
            },
        };
        (deduped, map)
    }

    pub fn has_duplicate_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        !self.chi.columns().iter().all(|c| seen.insert(c))
    }

    /// True iff some edge is the whole vertex set.
    pub fn is_topped(&self) -> bool {
        self.chi.columns().iter().any(BitSet::is_full)
    }

    /// True iff some edge is empty.
    pub fn is_bottomed(&self) -> bool {
        self.chi.columns().iter().any(BitSet::is_empty)
    }

    pub fn overlap_size(&self, a: EdgeId, b: EdgeId) -> Result<usize> {
        self.check_edge(a)?;
        self.check_edge(b)?;
        Ok(self
            .chi
            .column(a.0)
            .intersection_count(self.chi.column(b.0)))
    }

    pub fn edge_size(&self, e: EdgeId) -> usize {
        self.chi.column(e.0).count()
    }

    pub fn vertex_set_names(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| self.vertex_names[i].clone()).collect()
    }

    pub fn edge_set_names(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| self.edge_names[i].clone()).collect()
    }
}

fn first_duplicate(names: &[String]) -> Option<&str> {
    let mut seen = std::collections::HashSet::new();
    names
        .iter()
        .find(|n| !seen.insert(n.as_str()))
        .map(String::as_str)
}
