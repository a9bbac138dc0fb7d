//! Small named hypergraphs used throughout the tests and examples.

use crate::bitset::BitSet;
use crate::hypergraph::{Hypergraph, IncidenceMatrix};

/// Seven vertices `a..g` (in that row order) in seven numbered groups `1..7`.
pub fn table1() -> Hypergraph {
    let vertices: Vec<String> = "abcdefg".chars().map(String::from).collect();
    let edges = table1_edges();
    let columns = edges
        .iter()
        .map(|(_, members)| {
            BitSet::from_indices(
                7,
                members
                    .iter()
                    .map(|m| vertices.iter().position(|v| v == m).unwrap()),
            )
        })
        .collect();
    Hypergraph::new(
        vertices,
        edges.iter().map(|(n, _)| n.to_string()).collect(),
        IncidenceMatrix::new(7, columns).unwrap(),
    )
    .expect("fixture is well formed")
}

pub fn table1_edges() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("1", vec!["b", "c", "e"]),
        ("2", vec!["a", "b", "c", "d"]),
        ("3", vec!["a", "d"]),
        ("4", vec!["a", "b"]),
        ("5", vec!["e", "f", "g"]),
        ("6", vec!["f", "g"]),
        ("7", vec!["g"]),
    ]
}

/// The Table 1 incidence matrix as CSV (rows `a..g`, one column per group).
pub const TABLE1_CSV: &str = "\
vertex,1,2,3,4,5,6,7
a,0,1,1,1,0,0,0
b,1,1,0,1,0,0,0
c,1,1,0,0,0,0,0
d,0,1,1,0,0,0,0
e,1,0,0,0,1,0,0
f,0,0,0,0,1,1,0
g,0,0,0,0,1,1,1
";

/// The same hypergraph in edge-list form.
pub const TABLE1_EDGES: &str = "\
# groups from the 7x7 membership table
1: b, c, e
2: a, b, c, d
3: a, d
4: a, b
5: e, f, g
6: f, g
7: g
";
