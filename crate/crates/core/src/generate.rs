//! Seeded synthetic hypergraphs.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Pareto};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::hypergraph::{Hypergraph, IncidenceMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("power-law exponent must be finite and greater than 1, got {0}")]
    Exponent(f64),
    #[error("density must lie in [0, 1], got {0}")]
    Density(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Each incidence present independently with probability `density`.
    Uniform { density: f64 },
    /// Bipartite Chung-Lu: power-law weights on both sides, incidence
    /// probability `min(1, w_v * w_e / sum(w))`.
    ChungLu { exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub vertices: usize,
    pub edges: usize,
    pub model: Model,
    pub seed: u64,
}

/// Vertices are named `v0..`, edges `e0..`; vertices in no edge are kept.
pub fn generate(config: &GeneratorConfig) -> Result<Hypergraph, GenerateError> {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let n = config.vertices;
    let m = config.edges;
    let columns: Vec<BitSet> = match config.model {
        Model::Uniform { density } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(GenerateError::Density(density));
            }
            (0..m)
                .map(|_| BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(density))))
                .collect()
        }
        Model::ChungLu { exponent } => {
            if !exponent.is_finite() || exponent <= 1.0 {
                return Err(GenerateError::Exponent(exponent));
            }
            let pareto = Pareto::new(1.0, exponent - 1.0).expect("shape checked above");
            let vw: Vec<f64> = (0..n).map(|_| pareto.sample(&mut rng)).collect();
            let mut ew: Vec<f64> = (0..m).map(|_| pareto.sample(&mut rng)).collect();
            let vsum: f64 = vw.iter().sum();
            let esum: f64 = ew.iter().sum();
            // Equalise the two weight totals so expected vertex degree is w_v.
            if esum > 0.0 {
                for w in &mut ew {
                    *w *= vsum / esum;
                }
            }
            ew.iter()
                .map(|&we| {
                    BitSet::from_indices(
                        n,
                        (0..n).filter(|&v| {
                            let p = (vw[v] * we / vsum).min(1.0);
                            rng.gen_bool(p)
                        }),
                    )
                })
                .collect()
        }
    };
    Ok(named(n, columns))
}

fn named(n: usize, columns: Vec<BitSet>) -> Hypergraph {
    let m = columns.len();
    Hypergraph::new(
        (0..n).map(|i| format!("v{i}")).collect(),
        (0..m).map(|i| format!("e{i}")).collect(),
        IncidenceMatrix::new(n, columns).expect("columns sized to n"),
    )
    .expect("generated names are unique")
}

/// Small random hypergraph with `1..=max_vertices` vertices and
/// `0..=max_edges` edges, edge names `1..`. Duplicate, empty and full edges
/// all occur with reasonable frequency.
pub fn random_small(seed: u64, max_vertices: usize, max_edges: usize) -> Hypergraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let density = rng.gen_range(0.15..0.75);
    let columns = (0..m)
        .map(|_| BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(density))))
        .collect();
    Hypergraph::new(
        (0..n).map(small_vertex_name).collect(),
        (1..=m).map(|i| i.to_string()).collect(),
        IncidenceMatrix::new(n, columns).expect("columns sized to n"),
    )
    .expect("generated names are unique")
}

fn small_vertex_name(i: usize) -> String {
    match u8::try_from(i) {
        Ok(k) if k < 26 => char::from(b'a' + k).to_string(),
        _ => format!("v{i}"),
    }
}
