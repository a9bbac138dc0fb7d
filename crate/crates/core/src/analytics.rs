//! s-path, s-connected-component and depth queries answered on a prebuilt
//! concept lattice.
//!
//! A query at overlap threshold `s` works on a pruned view of the Hasse
//! diagram: nodes whose extent has fewer than `s` vertices are dropped, and
//! so is the top unless it is itself a hyperedge. Two hyperedges overlap in
//! at least `s` vertices exactly when their anchors have a common lower
//! bound in that view, so hypergraph s-walks are walks in the view that go
//! down from one anchor and back up to the next.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::{EdgeId, Hypergraph, HypergraphError};
use crate::lattice::ConceptLattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error("s must be a positive integer, got {0}")]
    InvalidS(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("no s-path: edge `{edge}` has {size} vertices, fewer than s = {s}")]
    PrunedEndpoint { edge: String, size: usize, s: usize },
    #[error("no s-path from `{from}` to `{to}` at s = {s}")]
    NoPath { from: String, to: String, s: usize },
}

/// The lattice restricted to nodes usable at threshold `s`.
#[derive(Debug, Clone)]
pub struct PrunedLatticeView<'a> {
    lattice: &'a ConceptLattice,
    s: usize,
    retained: BitSet,
    adjacency: Vec<Vec<usize>>,
}

impl<'a> PrunedLatticeView<'a> {
    pub fn lattice(&self) -> &'a ConceptLattice {
        self.lattice
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn retained(&self) -> &BitSet {
        &self.retained
    }

    pub fn is_retained(&self, node: usize) -> bool {
        self.retained.contains(node)
    }

    /// Undirected cover neighbours of a retained node, ascending.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    /// Connected pieces of the view, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.lattice.len();
        let mut seen = BitSet::empty(n);
        let mut out = Vec::new();
        for start in self.retained.iter() {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut piece = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen.contains(w) {
                        seen.insert(w);
                        piece.push(w);
                        queue.push_back(w);
                    }
                }
            }
            piece.sort_unstable();
            out.push(piece);
        }
        out
    }
}

pub fn prune(lattice: &ConceptLattice, s: usize) -> Result<PrunedLatticeView<'_>, AnalyticsError> {
    if s < 1 {
        return Err(AnalyticsError::InvalidS(s));
    }
    let n = lattice.len();
    let top = lattice.top_index();
    let retained = BitSet::from_indices(
        n,
        (0..n).filter(|&i| {
            lattice.node(i).extent.count() >= s && (i != top || lattice.is_anchor(top))
        }),
    );
    let mut adjacency = vec![Vec::new(); n];
    for &(lo, hi) in lattice.covers() {
        if retained.contains(lo) && retained.contains(hi) {
            adjacency[lo].push(hi);
            adjacency[hi].push(lo);
        }
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    Ok(PrunedLatticeView {
        lattice,
        s,
        retained,
        adjacency,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SPathResult {
    pub lattice_path: Vec<usize>,
    pub lattice_distance: usize,
    pub hyperedge_path: Vec<EdgeId>,
    pub hypergraph_distance: usize,
}

impl SPathResult {
    fn new(lattice_path: Vec<usize>, hyperedge_path: Vec<EdgeId>) -> Self {
        SPathResult {
            lattice_distance: lattice_path.len() - 1,
            hypergraph_distance: hyperedge_path.len() - 1,
            lattice_path,
            hyperedge_path,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Heading {
    Start,
    Up,
    Down,
}

struct Endpoints {
    source: EdgeId,
    target: EdgeId,
}

fn resolve_endpoints(
    view: &PrunedLatticeView<'_>,
    source: &str,
    target: &str,
) -> Result<Endpoints, AnalyticsError> {
    let h = view.lattice.hypergraph();
    let source = h.edge_id(source)?;
    let target = h.edge_id(target)?;
    for e in [source, target] {
        let size = h.edge_size(e);
        if size < view.s {
            return Err(AnalyticsError::PrunedEndpoint {
                edge: h.edge_name(e).to_owned(),
                size,
                s: view.s,
            });
        }
    }
    Ok(Endpoints { source, target })
}

fn no_path(h: &Hypergraph, ends: &Endpoints, s: usize) -> AnalyticsError {
    AnalyticsError::NoPath {
        from: h.edge_name(ends.source).to_owned(),
        to: h.edge_name(ends.target).to_owned(),
        s,
    }
}

/// A shortest hypergraph s-path between two named hyperedges, read off a
/// walk in the pruned lattice.
///
/// The walk minimises the number of interior peaks (nodes entered going up
/// and left going down), then its length; ties go to the lowest node index.
/// Each interior peak contributes one hyperedge to the hypergraph path: the
/// edge anchored there, or the lowest-index edge above it when the peak is a
/// pure intersection. Consecutive entries therefore share the valley between
/// them, which has at least `s` vertices.
pub fn shortest_s_path(
    lattice: &ConceptLattice,
    s: usize,
    source: &str,
    target: &str,
) -> Result<SPathResult, AnalyticsError> {
    let view = prune(lattice, s)?;
    let ends = resolve_endpoints(&view, source, target)?;
    let h = lattice.hypergraph();
    let from = lattice.edge_anchor(ends.source);
    let to = lattice.edge_anchor(ends.target);

    if ends.source == ends.target {
        return Ok(SPathResult::new(vec![from], vec![ends.source]));
    }
    if from == to {
        return Ok(SPathResult::new(vec![from], vec![ends.source, ends.target]));
    }

    let walk = min_peak_walk(&view, from, to).ok_or_else(|| no_path(h, &ends, s))?;

    let mut edges = vec![ends.source];
    for k in 1..walk.len() - 1 {
        let (prev, node, next) = (walk[k - 1], walk[k], walk[k + 1]);
        if prev < node && next < node {
            edges.push(peak_edge(lattice, node));
        }
    }
    edges.push(ends.target);
    Ok(SPathResult::new(walk, edges))
}

fn peak_edge(lattice: &ConceptLattice, node: usize) -> EdgeId {
    match lattice.introduced_edges(node).first() {
        Some(&e) => e,
        None => EdgeId(
            lattice
                .node(node)
                .intent
                .iter()
                .next()
                .expect("a retained non-top node lies below some edge"),
        ),
    }
}

/// Lexicographic (peaks, steps) Dijkstra over (node, heading) states.
fn min_peak_walk(view: &PrunedLatticeView<'_>, from: usize, to: usize) -> Option<Vec<usize>> {
    const HEADINGS: usize = 3;
    let n = view.lattice.len();
    let slot = |node: usize, heading: Heading| node * HEADINGS + heading as usize;
    let mut best: Vec<Option<(usize, usize)>> = vec![None; n * HEADINGS];
    let mut parent: Vec<Option<(usize, Heading)>> = vec![None; n * HEADINGS];
    let mut heap = BinaryHeap::new();

    best[slot(from, Heading::Start)] = Some((0, 0));
    heap.push(Reverse((0usize, 0usize, from, Heading::Start)));

    while let Some(Reverse((peaks, steps, node, heading))) = heap.pop() {
        if best[slot(node, heading)] != Some((peaks, steps)) {
            continue;
        }
        if node == to {
            let mut walk = vec![node];
            let mut cur = (node, heading);
            while let Some(prev) = parent[slot(cur.0, cur.1)] {
                walk.push(prev.0);
                cur = prev;
            }
            walk.reverse();
            return Some(walk);
        }
        for &next in view.neighbors(node) {
            let next_heading = if next > node {
                Heading::Up
            } else {
                Heading::Down
            };
            let cost = (
                peaks + usize::from(heading == Heading::Up && next_heading == Heading::Down),
                steps + 1,
            );
            let s = slot(next, next_heading);
            if best[s].is_none_or(|b| cost < b) {
                best[s] = Some(cost);
                parent[s] = Some((node, heading));
                heap.push(Reverse((cost.0, cost.1, next, next_heading)));
            }
        }
    }
    None
}

/// The search as literally described for the lattice: breadth-first shortest
/// walk in the pruned view, then keep the anchors along it, skipping the
/// middle of every three consecutive nodes that form a chain.
///
/// Kept for comparison only. A shortest lattice walk can pass over a peak
/// that is a pure intersection, in which case the edges on either side may
/// not overlap in `s` vertices and the distance undercounts; see
/// `tests/literal_search.rs`.
pub fn lattice_bfs_s_path(
    lattice: &ConceptLattice,
    s: usize,
    source: &str,
    target: &str,
) -> Result<SPathResult, AnalyticsError> {
    let view = prune(lattice, s)?;
    let ends = resolve_endpoints(&view, source, target)?;
    let h = lattice.hypergraph();
    let from = lattice.edge_anchor(ends.source);
    let to = lattice.edge_anchor(ends.target);

    let walk = bfs_walk(&view, from, to).ok_or_else(|| no_path(h, &ends, s))?;
    if walk.len() == 1 {
        let mut edges = vec![ends.source];
        if ends.source != ends.target {
            edges.push(ends.target);
        }
        return Ok(SPathResult::new(walk, edges));
    }

    let chain_middle = |k: usize| {
        let (a, b, c) = (walk[k - 1], walk[k], walk[k + 1]);
        (a < b && b < c) || (a > b && b > c)
    };
    let mut edges = Vec::new();
    for (k, &node) in walk.iter().enumerate() {
        if k == 0 {
            edges.push(ends.source);
        } else if k == walk.len() - 1 {
            edges.push(ends.target);
        } else if lattice.is_anchor(node) && !chain_middle(k) {
            edges.push(lattice.introduced_edges(node)[0]);
        }
    }
    Ok(SPathResult::new(walk, edges))
}

fn bfs_walk(view: &PrunedLatticeView<'_>, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = view.lattice.len();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut walk = vec![u];
            let mut cur = u;
            while cur != from {
                cur = parent[cur];
                walk.push(cur);
            }
            walk.reverse();
            return Some(walk);
        }
        for &w in view.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Partition of the hyperedges with at least `s` vertices into s-connected
/// classes. Each class is ascending; classes are ordered by smallest edge.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ComponentSet {
    pub components: Vec<Vec<EdgeId>>,
}

impl ComponentSet {
    pub fn from_unsorted(mut components: Vec<Vec<EdgeId>>) -> Self {
        components.retain(|c| !c.is_empty());
        for c in &mut components {
            c.sort_unstable();
        }
        components.sort();
        ComponentSet { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn names(&self, h: &Hypergraph) -> Vec<Vec<String>> {
        self.components
            .iter()
            .map(|c| c.iter().map(|&e| h.edge_name(e).to_owned()).collect())
            .collect()
    }
}

pub fn s_connected_components(
    lattice: &ConceptLattice,
    s: usize,
) -> Result<ComponentSet, AnalyticsError> {
    let view = prune(lattice, s)?;
    let pieces = view
        .components()
        .into_iter()
        .map(|piece| {
            piece
                .into_iter()
                .flat_map(|node| lattice.introduced_edges(node).iter().copied())
                .collect()
        })
        .collect();
    Ok(ComponentSet::from_unsorted(pieces))
}

/// Per-node shortest and longest cover-path lengths to the top and bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDepths {
    pub min_to_top: Vec<usize>,
    pub max_to_top: Vec<usize>,
    pub min_to_bottom: Vec<usize>,
    pub max_to_bottom: Vec<usize>,
}

pub type Histogram = BTreeMap<usize, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthHistograms {
    pub min_to_top: Histogram,
    pub max_to_top: Histogram,
    pub min_to_bottom: Histogram,
    pub max_to_bottom: Histogram,
}

/// Dynamic programme over the cover DAG; canonical node order is already a
/// topological order.
pub fn node_depths(lattice: &ConceptLattice) -> NodeDepths {
    let n = lattice.len();
    let mut min_to_top = vec![0; n];
    let mut max_to_top = vec![0; n];
    for i in (0..n).rev() {
        let ups = lattice.upper_covers(i);
        if let Some(lo) = ups.iter().map(|&u| min_to_top[u]).min() {
            min_to_top[i] = lo + 1;
            max_to_top[i] = ups.iter().map(|&u| max_to_top[u]).max().unwrap() + 1;
        }
    }
    let mut min_to_bottom = vec![0; n];
    let mut max_to_bottom = vec![0; n];
    for i in 0..n {
        let downs = lattice.lower_covers(i);
        if let Some(lo) = downs.iter().map(|&d| min_to_bottom[d]).min() {
            min_to_bottom[i] = lo + 1;
            max_to_bottom[i] = downs.iter().map(|&d| max_to_bottom[d]).max().unwrap() + 1;
        }
    }
    NodeDepths {
        min_to_top,
        max_to_top,
        min_to_bottom,
        max_to_bottom,
    }
}

fn histogram(values: &[usize]) -> Histogram {
    let mut h = Histogram::new();
    for &v in values {
        *h.entry(v).or_default() += 1;
    }
    h
}

pub fn depth_histograms(lattice: &ConceptLattice) -> DepthHistograms {
    let d = node_depths(lattice);
    DepthHistograms {
        min_to_top: histogram(&d.min_to_top),
        max_to_top: histogram(&d.max_to_top),
        min_to_bottom: histogram(&d.min_to_bottom),
        max_to_bottom: histogram(&d.max_to_bottom),
    }
}
