//! Brute-force reference answers built only from the hypergraph primitives.
//!
//! Nothing here touches the lattice; these functions exist so that lattice
//! results can be checked against something computed a different way.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::analytics::ComponentSet;
use crate::bitset::BitSet;
use crate::hypergraph::{EdgeId, Hypergraph, VertexSet};
use crate::lattice::{LatticeError, ORACLE_EDGE_LIMIT};

/// Graph on the edges with at least `s` vertices; two are adjacent when they
/// share at least `s` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SLineGraph {
    pub s: usize,
    pub nodes: Vec<EdgeId>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl SLineGraph {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.nodes.binary_search(&e).is_ok()
    }

    pub fn neighbors(&self, e: EdgeId) -> &[EdgeId] {
        &self.adjacency[e.0]
    }

    /// Undirected edges as `(smaller, larger)` pairs.
    pub fn links(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for &a in &self.nodes {
            for &b in &self.adjacency[a.0] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

pub fn s_line_graph(h: &Hypergraph, s: usize) -> SLineGraph {
    let m = h.n_edges();
    let nodes: Vec<EdgeId> = (0..m)
        .map(EdgeId)
        .filter(|&e| s >= 1 && h.edge_size(e) >= s)
        .collect();
    let mut adjacency = vec![Vec::new(); m];
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if h.overlap_size(a, b).expect("ids in range") >= s {
                adjacency[a.0].push(b);
                adjacency[b.0].push(a);
            }
        }
    }
    SLineGraph {
        s,
        nodes,
        adjacency,
    }
}

/// Breadth-first distance and one shortest edge path in the s-line graph, or
/// `None` when either endpoint is missing from it or they are disconnected.
pub fn oracle_shortest_s_path(
    h: &Hypergraph,
    s: usize,
    source: EdgeId,
    target: EdgeId,
) -> Option<(usize, Vec<EdgeId>)> {
    let g = s_line_graph(h, s);
    if !g.contains(source) || !g.contains(target) {
        return None;
    }
    let mut parent: Vec<Option<EdgeId>> = vec![None; h.n_edges()];
    parent[source.0] = Some(source);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        if u == target {
            let mut path = vec![u];
            let mut cur = u;
            while cur != source {
                cur = parent[cur.0].unwrap();
                path.push(cur);
            }
            path.reverse();
            return Some((path.len() - 1, path));
        }
        for &w in g.neighbors(u) {
            if parent[w.0].is_none() {
                parent[w.0] = Some(u);
                queue.push_back(w);
            }
        }
    }
    None
}

pub fn oracle_components(h: &Hypergraph, s: usize) -> ComponentSet {
    let g = s_line_graph(h, s);
    let mut seen = vec![false; h.n_edges()];
    let mut out = Vec::new();
    for &start in &g.nodes {
        if seen[start.0] {
            continue;
        }
        seen[start.0] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    ComponentSet::from_unsorted(out)
}

/// All intersections of nonempty subfamilies of the edges together with the
/// full vertex set.
pub fn intersection_complex_bruteforce(
    h: &Hypergraph,
) -> Result<BTreeSet<VertexSet>, LatticeError> {
    let m = h.n_edges();
    if m > ORACLE_EDGE_LIMIT {
        return Err(LatticeError::TooLarge {
            n_edges: m,
            limit: ORACLE_EDGE_LIMIT,
        });
    }
    let n = h.n_vertices();
    let mut family: Vec<BitSet> = h.incidence().columns().to_vec();
    family.push(BitSet::full(n));
    let k = family.len();
    let mut out = HashSet::new();
    for mask in 1u64..(1u64 << k) {
        let mut acc = BitSet::full(n);
        for (i, f) in family.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc.intersect_with(f);
            }
        }
        out.insert(VertexSet(acc));
    }
    Ok(out.into_iter().collect())
}
