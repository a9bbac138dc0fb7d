//! Concept lattice construction.
//!
//! The concept lattice of a hypergraph's incidence matrix coincides with the
//! intersection closure of its topped edge family: every concept extent is an
//! intersection of edges (or the full vertex set), and every such
//! intersection is an extent. Both builders here compute that closure and
//! then attach intents, the containment order, and its Hasse diagram.
//!
//! Nodes are kept in canonical order (extent size, then lexicographic member
//! list), so index 0 is the bottom, the last index is the top, and every
//! strict upper bound of a node has a larger index.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::{EdgeId, EdgeSet, Hypergraph, VertexSet};

/// Refuse powerset enumeration above this many edges.
pub const ORACLE_EDGE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("brute-force enumeration refused: {n_edges} edges exceeds the limit of {limit}")]
    TooLarge { n_edges: usize, limit: usize },
    #[error("malformed lattice: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Concept {
    pub extent: VertexSet,
    pub intent: EdgeSet,
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.extent, self.intent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Naive,
    Vectorized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    hypergraph: Hypergraph,
    nodes: Vec<Concept>,
    /// Strict upper bounds of each node.
    up: Vec<BitSet>,
    covers: Vec<(usize, usize)>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    edge_anchor: Vec<usize>,
    introduced: Vec<Vec<EdgeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisLabel {
    pub node: usize,
    pub extent: Vec<String>,
    pub intent: Vec<String>,
    pub introduced_edges: Vec<String>,
}

impl fmt::Display for GaloisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}:{{{}}}",
            self.extent.join(","),
            self.intent.join(",")
        )
    }
}

pub fn build_lattice(h: &Hypergraph, algorithm: Algorithm) -> ConceptLattice {
    match algorithm {
        Algorithm::Naive => build_lattice_naive(h),
        Algorithm::Vectorized => build_lattice_vectorized(h),
    }
}

fn deduplicated(h: &Hypergraph) -> Hypergraph {
    if h.has_duplicate_edges() {
        log::warn!("hypergraph has duplicate edges; deduplicating before lattice construction");
    }
    h.dedup_edges().0
}

/// Pairwise intersection fixpoint seeded with the edge columns, plus the
/// full vertex set as top.
pub fn build_lattice_naive(h: &Hypergraph) -> ConceptLattice {
    let d = deduplicated(h);
    let mut elements: Vec<BitSet> = d.incidence().columns().to_vec();
    let mut known: HashSet<BitSet> = elements.iter().cloned().collect();
    loop {
        let mut added = Vec::new();
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                let meet = a.intersection(b);
                if !known.contains(&meet) {
                    known.insert(meet.clone());
                    added.push(meet);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        elements.extend(added);
    }
    let top = BitSet::full(h.n_vertices());
    if !known.contains(&top) {
        elements.push(top);
    }
    elements.sort();

    let n = elements.len();
    let up: Vec<BitSet> = (0..n)
        .map(|i| {
            BitSet::from_indices(
                n,
                (i + 1..n).filter(|&j| elements[i].is_subset(&elements[j])),
            )
        })
        .collect();
    ConceptLattice::assemble(h.clone(), elements, up)
}

/// Column-block variant: each round conjoins the base incidence matrix with
/// cyclic shifts of the newest block of columns, keeping only columns not
/// seen before, until a round adds nothing. Containment is computed from the
/// transposed node matrix rather than by pairwise subset tests.
pub fn build_lattice_vectorized(h: &Hypergraph) -> ConceptLattice {
    let d = deduplicated(h);
    let base: &[BitSet] = d.incidence().columns();
    let p = base.len();

    let mut known: HashSet<BitSet> = base.iter().cloned().collect();
    let mut elements: Vec<BitSet> = base.to_vec();
    let mut frontier: Vec<BitSet> = base.to_vec();

    while !frontier.is_empty() {
        // Shift i pairs frontier column k with base column (k + i) mod p;
        // sweeping i over 0..p covers every (base, frontier) pair.
        let blocks: Vec<Vec<BitSet>> = (0..p)
            .into_par_iter()
            .map(|shift| {
                let mut local: HashSet<BitSet> = HashSet::new();
                for (k, col) in frontier.iter().enumerate() {
                    let s = base[(k + shift) % p].intersection(col);
                    if !known.contains(&s) {
                        local.insert(s);
                    }
                }
                local.into_iter().collect()
            })
            .collect();
        let mut fresh: Vec<BitSet> = blocks.into_iter().flatten().collect();
        fresh.sort();
        fresh.dedup();
        for s in &fresh {
            known.insert(s.clone());
        }
        elements.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    let top = BitSet::full(h.n_vertices());
    if !known.contains(&top) {
        elements.push(top);
    }
    elements.sort();

    let up = containment_by_rows(&elements, h.n_vertices());
    ConceptLattice::assemble(h.clone(), elements, up)
}

/// `up[i] = AND_{v in extent_i} (nodes containing v)`, minus `i` itself.
fn containment_by_rows(elements: &[BitSet], n_vertices: usize) -> Vec<BitSet> {
    let n = elements.len();
    let mut rows = vec![BitSet::empty(n); n_vertices];
    for (j, ext) in elements.iter().enumerate() {
        for v in ext.iter() {
            rows[v].insert(j);
        }
    }
    elements
        .par_iter()
        .enumerate()
        .map(|(i, ext)| {
            let mut acc = BitSet::full(n);
            for v in ext.iter() {
                acc.intersect_with(&rows[v]);
            }
            acc.remove(i);
            acc
        })
        .collect()
}

impl ConceptLattice {
    /// `elements` must be canonically sorted and closed under intersection
    /// with a full-set top; `up` its strict containment relation.
    fn assemble(hypergraph: Hypergraph, elements: Vec<BitSet>, up: Vec<BitSet>) -> Self {
        let n = elements.len();
        let nodes: Vec<Concept> = elements
            .into_iter()
            .map(|ext| {
                let extent = VertexSet(ext);
                let intent = hypergraph
                    .intent_prime(&extent)
                    .expect("extent width matches hypergraph");
                Concept { extent, intent }
            })
            .collect();

        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        let mut covers = Vec::new();
        for i in 0..n {
            let mut dominated = BitSet::empty(n);
            for j in up[i].iter() {
                if dominated.contains(j) {
                    continue;
                }
                upper_covers[i].push(j);
                lower_covers[j].push(i);
                covers.push((i, j));
                dominated.union_with(&up[j]);
            }
        }
        covers.sort_unstable();

        let by_extent: HashMap<&BitSet, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, c)| (&*c.extent, i))
            .collect();
        let edge_anchor: Vec<usize> = hypergraph
            .incidence()
            .columns()
            .iter()
            .map(|col| by_extent[col])
            .collect();

        let introduced: Vec<Vec<EdgeId>> = (0..n)
            .map(|i| {
                let mut upstream = BitSet::empty(hypergraph.n_edges());
                for &u in &upper_covers[i] {
                    upstream.union_with(&nodes[u].intent);
                }
                upstream
                    .symmetric_difference(&nodes[i].intent)
                    .iter()
                    .map(EdgeId)
                    .collect()
            })
            .collect();

        ConceptLattice {
            hypergraph,
            nodes,
            up,
            covers,
            upper_covers,
            lower_covers,
            edge_anchor,
            introduced,
        }
    }

    /// Rebuilds a lattice from its hypergraph and a list of extents, checking
    /// that the extents are exactly the intersection closure.
    pub fn from_extents(
        hypergraph: Hypergraph,
        extents: Vec<BitSet>,
    ) -> Result<Self, LatticeError> {
        let mut sorted = extents.clone();
        sorted.sort();
        if sorted != extents {
            return Err(LatticeError::Malformed(
                "extents are not in canonical order".into(),
            ));
        }
        sorted.dedup();
        if sorted.len() != extents.len() {
            return Err(LatticeError::Malformed("repeated extent".into()));
        }
        if let Some(bad) = extents.iter().find(|e| e.len() != hypergraph.n_vertices()) {
            return Err(LatticeError::Malformed(format!(
                "extent width {} does not match {} vertices",
                bad.len(),
                hypergraph.n_vertices()
            )));
        }
        let rebuilt = build_lattice_vectorized(&hypergraph);
        let rebuilt_extents: Vec<&BitSet> = rebuilt.nodes.iter().map(|c| &*c.extent).collect();
        if rebuilt_extents != extents.iter().collect::<Vec<_>>() {
            return Err(LatticeError::Malformed(
                "extents are not the intersection closure of the edges".into(),
            ));
        }
        let up = containment_by_rows(&extents, hypergraph.n_vertices());
        Ok(ConceptLattice::assemble(hypergraph, extents, up))
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Concept] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Concept {
        &self.nodes[i]
    }

    pub fn top_index(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn bottom_index(&self) -> usize {
        0
    }

    /// Non-strict order test: `extent_i ⊆ extent_j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.up[i].contains(j)
    }

    /// Strict upper bounds of `i`.
    pub fn strict_uppers(&self, i: usize) -> &BitSet {
        &self.up[i]
    }

    /// All strict `(lower, upper)` pairs of the containment order.
    pub fn order_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(i, ups)| ups.iter().map(move |j| (i, j)))
    }

    /// Hasse diagram as sorted `(lower, upper)` pairs.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper_covers[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    /// Node whose extent is exactly this edge's vertex set.
    pub fn edge_anchor(&self, e: EdgeId) -> usize {
        self.edge_anchor[e.0]
    }

    /// Edges whose anchor is node `i`, ascending.
    pub fn introduced_edges(&self, i: usize) -> &[EdgeId] {
        &self.introduced[i]
    }

    pub fn is_anchor(&self, i: usize) -> bool {
        !self.introduced[i].is_empty()
    }

    pub fn galois_label(&self, i: usize) -> GaloisLabel {
        let h = &self.hypergraph;
        let c = &self.nodes[i];
        GaloisLabel {
            node: i,
            extent: h.vertex_set_names(&c.extent),
            intent: h.edge_set_names(&c.intent),
            introduced_edges: self.introduced[i]
                .iter()
                .map(|&e| h.edge_name(e).to_owned())
                .collect(),
        }
    }

    pub fn galois_labels(&self) -> Vec<GaloisLabel> {
        (0..self.len()).map(|i| self.galois_label(i)).collect()
    }
}

/// Every concept as `(B', B'')` for `B` ranging over all subsets of edges.
pub fn enumerate_concepts_oracle(h: &Hypergraph) -> Result<BTreeSet<Concept>, LatticeError> {
    let m = h.n_edges();
    if m > ORACLE_EDGE_LIMIT {
        return Err(LatticeError::TooLarge {
            n_edges: m,
            limit: ORACLE_EDGE_LIMIT,
        });
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << m) {
        let b = EdgeSet::from_indices(m, (0..m).filter(|i| mask >> i & 1 == 1));
        let extent = h.extent_prime(&b).expect("width matches");
        let intent = h.intent_prime(&extent).expect("width matches");
        out.insert(Concept { extent, intent });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsomorphismMismatch {
    #[error("extent {0:?} is in the lattice but not among the concepts")]
    ExtraExtent(VertexSet),
    #[error("extent {0:?} is a concept extent missing from the lattice")]
    MissingExtent(VertexSet),
    #[error(
        "extent {extent:?} has intent {lattice:?} in the lattice but {concept:?} as a concept"
    )]
    IntentMismatch {
        extent: VertexSet,
        lattice: EdgeSet,
        concept: EdgeSet,
    },
    #[error("order disagrees between {lower:?} and {upper:?}")]
    OrderMismatch { lower: VertexSet, upper: VertexSet },
}

/// Checks that `c -> extent(c)` is an order isomorphism from the concept set
/// onto the lattice nodes.
pub fn verify_isomorphism(
    lattice: &ConceptLattice,
    concepts: &BTreeSet<Concept>,
) -> Result<(), IsomorphismMismatch> {
    let by_extent: HashMap<&VertexSet, &Concept> =
        concepts.iter().map(|c| (&c.extent, c)).collect();
    let mut index: HashMap<&VertexSet, usize> = HashMap::new();
    for (i, node) in lattice.nodes().iter().enumerate() {
        match by_extent.get(&node.extent) {
            None => return Err(IsomorphismMismatch::ExtraExtent(node.extent.clone())),
            Some(c) if c.intent != node.intent => {
                return Err(IsomorphismMismatch::IntentMismatch {
                    extent: node.extent.clone(),
                    lattice: node.intent.clone(),
                    concept: c.intent.clone(),
                })
            }
            Some(_) => {
                index.insert(&node.extent, i);
            }
        }
    }
    if let Some(c) = concepts.iter().find(|c| !index.contains_key(&c.extent)) {
        return Err(IsomorphismMismatch::MissingExtent(c.extent.clone()));
    }
    for a in concepts {
        for b in concepts {
            let concept_leq = a.extent.is_subset(&b.extent);
            if concept_leq != lattice.leq(index[&a.extent], index[&b.extent]) {
                return Err(IsomorphismMismatch::OrderMismatch {
                    lower: a.extent.clone(),
                    upper: b.extent.clone(),
                });
            }
        }
    }
    Ok(())
}
