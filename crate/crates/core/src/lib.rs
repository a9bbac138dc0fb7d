//! Concept lattices of hypergraph incidence matrices.
//!
//! The concept lattice of an incidence matrix, read as a formal context, is
//! isomorphic to the intersection closure of the topped hypergraph. This
//! crate builds that lattice and answers hypergraph s-path, s-connectivity
//! and depth queries on it, with brute-force oracles for checking.

pub mod analytics;
pub mod bitset;
pub mod fixtures;
pub mod formats;
pub mod generate;
pub mod hypergraph;
pub mod lattice;
pub mod oracle;

pub use analytics::{
    depth_histograms, prune, s_connected_components, shortest_s_path, ComponentSet,
    DepthHistograms, PrunedLatticeView, SPathResult,
};
pub use bitset::BitSet;
pub use hypergraph::{EdgeId, EdgeSet, Hypergraph, IncidenceMatrix, VertexId, VertexSet};
pub use lattice::{
    build_lattice, build_lattice_naive, build_lattice_vectorized, enumerate_concepts_oracle,
    verify_isomorphism, Algorithm, Concept, ConceptLattice, GaloisLabel,
};
