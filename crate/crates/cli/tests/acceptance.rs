//! Acceptance suite. Runs without the libtest harness so every criterion
//! reports a single PASS/FAIL line; exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperlattice::analytics::{node_depths, AnalyticsError, Histogram};
use hyperlattice::formats::{parse_incidence_csv, LatticeDocument};
use hyperlattice::generate::{generate, random_small, GeneratorConfig, Model};
use hyperlattice::lattice::enumerate_concepts_oracle;
use hyperlattice::oracle::{
    intersection_complex_bruteforce, oracle_components, oracle_shortest_s_path,
};
use hyperlattice::{
    build_lattice_naive, build_lattice_vectorized, depth_histograms, s_connected_components,
    shortest_s_path, verify_isomorphism, ConceptLattice, EdgeId, Hypergraph, VertexSet,
};

const SEEDS: u64 = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperlattice"))
}

fn instances() -> Vec<Hypergraph> {
    (0..SEEDS).map(|seed| random_small(seed, 8, 8)).collect()
}

fn table1() -> Hypergraph {
    parse_incidence_csv(&std::fs::read_to_string(data("table1.csv")).unwrap()).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(items: &str) -> BTreeSet<String> {
    items
        .chars()
        .filter(|c| c.is_alphanumeric())
        .map(String::from)
        .collect()
}

/// The thirteen concepts of the worked example, as (extent, intent).
const TABLE1_CONCEPTS: [(&str, &str); 13] = [
    ("", "1234567"),
    ("a", "234"),
    ("b", "124"),
    ("g", "567"),
    ("e", "15"),
    ("ab", "24"),
    ("ad", "23"),
    ("bc", "12"),
    ("fg", "56"),
    ("bce", "1"),
    ("efg", "5"),
    ("abcd", "2"),
    ("abcdefg", ""),
];

fn ac1_table1_lattice() -> Outcome {
    let started = Instant::now();
    let out = bin()
        .args(["build", "--verify"])
        .arg(data("table1.csv"))
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    check(out.status.success(), || {
        format!(
            "build exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    let doc = LatticeDocument::from_json(&String::from_utf8_lossy(&out.stdout))
        .map_err(|e| e.to_string())?;

    let expected: BTreeSet<(BTreeSet<String>, BTreeSet<String>)> = TABLE1_CONCEPTS
        .iter()
        .map(|(e, i)| (set(e), set(i)))
        .collect();
    let got: BTreeSet<(BTreeSet<String>, BTreeSet<String>)> = doc
        .nodes
        .iter()
        .map(|n| {
            (
                n.extent.iter().cloned().collect(),
                n.intent.iter().cloned().collect(),
            )
        })
        .collect();
    check(doc.nodes.len() == 13, || {
        format!("{} concepts", doc.nodes.len())
    })?;
    check(got == expected, || format!("concepts differ: {got:?}"))?;

    // Order: the reflexive-transitive closure of the emitted covers must be
    // exactly extent inclusion on the listed concepts.
    let n = doc.nodes.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(lo, hi) in &doc.covers {
        reach[lo][hi] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let extents: Vec<BTreeSet<&String>> = doc
        .nodes
        .iter()
        .map(|c| c.extent.iter().collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            let want = extents[i].is_subset(&extents[j]);
            check(reach[i][j] == want, || {
                format!("order differs at {i} <= {j}")
            })?;
        }
    }
    check(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "13 concepts, {} covers, {elapsed:.2?}",
        doc.covers.len()
    ))
}

fn ac2_intersection_complex() -> Outcome {
    let started = Instant::now();
    let hs = instances();
    for (seed, h) in hs.iter().enumerate() {
        let l = build_lattice_vectorized(h);
        let extents: BTreeSet<VertexSet> = l.nodes().iter().map(|c| c.extent.clone()).collect();
        let complex = intersection_complex_bruteforce(h).map_err(|e| e.to_string())?;
        check(extents == complex, || {
            format!("seed {seed}: extents differ from the intersection complex")
        })?;
        let concepts = enumerate_concepts_oracle(h).map_err(|e| e.to_string())?;
        verify_isomorphism(&l, &concepts).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{} instances, {elapsed:.2?}", hs.len()))
}

fn ac3_differential_builders() -> Outcome {
    let mut cases: Vec<(String, Hypergraph)> = instances()
        .into_iter()
        .enumerate()
        .map(|(i, h)| (format!("seed {i}"), h))
        .collect();
    cases.push(("table 1".into(), table1()));
    cases.push((
        "empty".into(),
        Hypergraph::from_edge_list(Vec::<(String, Vec<String>)>::new()).unwrap(),
    ));
    cases.push((
        "single edge".into(),
        Hypergraph::from_edge_list([("e1", vec!["a", "b"])]).unwrap(),
    ));
    cases.push((
        "duplicate edges".into(),
        Hypergraph::from_edge_list([
            ("x", vec!["a", "b"]),
            ("y", vec!["a", "b"]),
            ("z", vec!["b", "c"]),
        ])
        .unwrap(),
    ));
    for (name, h) in &cases {
        let naive = LatticeDocument::from_lattice(&build_lattice_naive(h)).to_json();
        let vectorized = LatticeDocument::from_lattice(&build_lattice_vectorized(h)).to_json();
        check(naive == vectorized, || {
            format!("{name}: serialized lattices differ")
        })?;
    }
    Ok(format!("{} inputs byte-identical", cases.len()))
}

fn ac4_path_fixtures() -> Outcome {
    let h = table1();
    let l = build_lattice_vectorized(&h);
    let names = |p: &[EdgeId]| {
        p.iter()
            .map(|&e| h.edge_name(e).to_owned())
            .collect::<Vec<_>>()
    };

    let r = shortest_s_path(&l, 1, "3", "7").map_err(|e| e.to_string())?;
    check(
        r.hypergraph_distance == 4
            && names(&r.hyperedge_path) == ["3", "2", "1", "5", "7"]
            && r.lattice_distance == 7,
        || format!("s=1 3->7: {r:?}"),
    )?;
    let r = shortest_s_path(&l, 2, "3", "1").map_err(|e| e.to_string())?;
    check(
        r.hypergraph_distance == 2 && names(&r.hyperedge_path) == ["3", "2", "1"],
        || format!("s=2 3->1: {r:?}"),
    )?;
    match shortest_s_path(&l, 2, "3", "7") {
        Err(AnalyticsError::NoPath { .. } | AnalyticsError::PrunedEndpoint { .. }) => {}
        other => return Err(format!("s=2 3->7: expected no path, got {other:?}")),
    }
    let status = bin()
        .args(["path", "--s", "2", "--from", "3", "--to", "7"])
        .arg(data("table1.csv"))
        .output()
        .map_err(|e| e.to_string())?
        .status;
    check(status.code() == Some(3), || {
        format!("CLI no-path exit {:?}", status.code())
    })?;
    Ok("3->7 s=1, 3->1 s=2, 3->7 s=2 exact".into())
}

/// `Some(description)` when lattice and oracle disagree on this query.
fn path_mismatch(h: &Hypergraph, s: usize, a: EdgeId, b: EdgeId) -> Option<String> {
    let l = build_lattice_vectorized(h);
    let oracle = oracle_shortest_s_path(h, s, a, b).map(|(d, _)| d);
    let got = shortest_s_path(&l, s, h.edge_name(a), h.edge_name(b))
        .ok()
        .map(|r| r.hypergraph_distance);
    (oracle != got).then(|| format!("oracle {oracle:?}, lattice {got:?}"))
}

fn edge_list(h: &Hypergraph) -> Vec<(String, Vec<String>)> {
    (0..h.n_edges())
        .map(|e| {
            let members = h.vertex_set_names(&h.edge(EdgeId(e)).unwrap());
            (h.edge_name(EdgeId(e)).to_owned(), members)
        })
        .collect()
}

/// Greedily drops edges and vertices while the query still disagrees.
fn minimize(h: &Hypergraph, s: usize, from: &str, to: &str) -> Hypergraph {
    let mut edges = edge_list(h);
    let rebuild = |edges: &[(String, Vec<String>)]| {
        let h = Hypergraph::from_edge_list(edges.to_vec()).unwrap();
        let (a, b) = (h.edge_id(from).unwrap(), h.edge_id(to).unwrap());
        path_mismatch(&h, s, a, b).map(|_| h)
    };
    loop {
        let mut shrunk = false;
        for i in (0..edges.len()).rev() {
            if edges[i].0 == from || edges[i].0 == to {
                continue;
            }
            let mut trial = edges.clone();
            trial.remove(i);
            if rebuild(&trial).is_some() {
                edges = trial;
                shrunk = true;
            }
        }
        let vertices: BTreeSet<String> = edges
            .iter()
            .flat_map(|(_, vs)| vs.iter().cloned())
            .collect();
        for v in vertices {
            let trial: Vec<_> = edges
                .iter()
                .map(|(e, vs)| (e.clone(), vs.iter().filter(|&x| *x != v).cloned().collect()))
                .collect();
            if rebuild(&trial).is_some() {
                edges = trial;
                shrunk = true;
            }
        }
        if !shrunk {
            return Hypergraph::from_edge_list(edges).unwrap();
        }
    }
}

fn ac5_path_oracle() -> Outcome {
    let mut queries = 0usize;
    let mut reachable = 0usize;
    for (seed, h) in instances().iter().enumerate() {
        let l = build_lattice_vectorized(h);
        for s in 1..=3 {
            for a in 0..h.n_edges() {
                for b in 0..h.n_edges() {
                    let (ea, eb) = (EdgeId(a), EdgeId(b));
                    queries += 1;
                    let oracle = oracle_shortest_s_path(h, s, ea, eb).map(|(d, _)| d);
                    let got = shortest_s_path(&l, s, h.edge_name(ea), h.edge_name(eb))
                        .ok()
                        .map(|r| r.hypergraph_distance);
                    reachable += usize::from(oracle.is_some());
                    if oracle != got {
                        let (from, to) = (h.edge_name(ea), h.edge_name(eb));
                        let small = minimize(h, s, from, to);
                        return Err(format!(
                            "seed {seed} s={s} {from}->{to}: oracle {oracle:?}, lattice {got:?}; minimized: {:?}",
                            edge_list(&small)
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{queries} queries agree ({reachable} reachable)"))
}

fn ac6_components() -> Outcome {
    let h = table1();
    let l = build_lattice_vectorized(&h);
    let one = s_connected_components(&l, 1)
        .map_err(|e| e.to_string())?
        .names(&h);
    check(one == [["1", "2", "3", "4", "5", "6", "7"]], || {
        format!("s=1: {one:?}")
    })?;
    let two = s_connected_components(&l, 2).map_err(|e| e.to_string())?;
    check(two.len() == 2, || format!("s=2: {} components", two.len()))?;
    check(two == oracle_components(&h, 2), || {
        "s=2 differs from the line-graph oracle".into()
    })?;
    check(
        two.names(&h) == [vec!["1", "2", "3", "4"], vec!["5", "6"]],
        || format!("s=2: {:?}", two.names(&h)),
    )?;
    for (seed, h) in instances().iter().enumerate() {
        let l = build_lattice_vectorized(h);
        for s in 1..=4 {
            let got = s_connected_components(&l, s).map_err(|e| e.to_string())?;
            check(got == oracle_components(h, s), || {
                format!("seed {seed} s={s}: components differ")
            })?;
        }
    }
    Ok("table 1 s=1,2 exact; randomized s=1..4 agree".into())
}

/// Cover relation recomputed from extents alone: i < j with nothing between.
fn hasse(extents: &[VertexSet]) -> Vec<(usize, usize)> {
    let n = extents.len();
    let lt = |i: usize, j: usize| i != j && extents[i].is_subset(&extents[j]);
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                covers.push((i, j));
            }
        }
    }
    covers
}

fn bfs(adj: &[Vec<usize>], target: usize) -> Vec<usize> {
    // Distances to `target` along `adj`, walking backwards from it.
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    for (u, outs) in adj.iter().enumerate() {
        for &w in outs {
            rev[w].push(u);
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(u) = queue.pop_front() {
        for &w in &rev[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn longest(adj: &[Vec<usize>], from: usize, target: usize) -> usize {
    // Exhaustive walk over every path; the diagram is tiny.
    if from == target {
        return 0;
    }
    adj[from]
        .iter()
        .map(|&w| 1 + longest(adj, w, target))
        .max()
        .unwrap_or(0)
}

fn hist(values: impl IntoIterator<Item = usize>) -> Histogram {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    h
}

fn ac7_depth_statistics() -> Outcome {
    let l = build_lattice_vectorized(&table1());
    let extents: Vec<VertexSet> = l.nodes().iter().map(|c| c.extent.clone()).collect();
    let n = extents.len();
    let top = (0..n).find(|&i| extents[i].is_full()).unwrap();
    let bottom = (0..n)
        .find(|&i| extents.iter().all(|e| extents[i].is_subset(e)))
        .unwrap();
    let mut up = vec![Vec::new(); n];
    let mut down = vec![Vec::new(); n];
    for (lo, hi) in hasse(&extents) {
        up[lo].push(hi);
        down[hi].push(lo);
    }
    let got = depth_histograms(&l);
    let want_min_top = hist(bfs(&up, top));
    let want_min_bottom = hist(bfs(&down, bottom));
    let want_max_top = hist((0..n).map(|i| longest(&up, i, top)));
    let want_max_bottom = hist((0..n).map(|i| longest(&down, i, bottom)));
    check(got.min_to_top == want_min_top, || {
        format!("min to top {:?} vs {want_min_top:?}", got.min_to_top)
    })?;
    check(got.max_to_top == want_max_top, || {
        format!("max to top {:?} vs {want_max_top:?}", got.max_to_top)
    })?;
    check(got.min_to_bottom == want_min_bottom, || {
        format!(
            "min to bottom {:?} vs {want_min_bottom:?}",
            got.min_to_bottom
        )
    })?;
    check(got.max_to_bottom == want_max_bottom, || {
        format!(
            "max to bottom {:?} vs {want_max_bottom:?}",
            got.max_to_bottom
        )
    })?;

    let dir = std::env::temp_dir().join(format!("hyperlattice-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for seed in [3u64, 11, 42] {
        let file = dir.join(format!("cl{seed}.edges"));
        let gen = bin()
            .args([
                "gen",
                "--vertices",
                "120",
                "--edges",
                "60",
                "--model",
                "chung-lu",
                "--seed",
            ])
            .arg(seed.to_string())
            .arg("-o")
            .arg(&file)
            .output()
            .map_err(|e| e.to_string())?;
        check(gen.status.success(), || format!("gen seed {seed} failed"))?;
        let run = || {
            bin()
                .arg("stats")
                .arg(&file)
                .output()
                .map(|o| (o.status.success(), o.stdout))
        };
        let first = run().map_err(|e| e.to_string())?;
        let second = run().map_err(|e| e.to_string())?;
        check(first.0 && first == second, || {
            format!("stats not deterministic for seed {seed}")
        })?;

        let h = generate(&GeneratorConfig {
            vertices: 120,
            edges: 60,
            model: Model::ChungLu { exponent: 2.5 },
            seed,
        })
        .map_err(|e| e.to_string())?;
        let d = node_depths(&build_lattice_vectorized(&h));
        for i in 0..d.min_to_top.len() {
            check(
                d.min_to_top[i] <= d.max_to_top[i] && d.min_to_bottom[i] <= d.max_to_bottom[i],
                || format!("seed {seed} node {i}: min exceeds max"),
            )?;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok("table 1 histograms match; Chung-Lu stats deterministic, min <= max".into())
}

fn ac8_performance() -> Outcome {
    let h = generate(&GeneratorConfig {
        vertices: 1000,
        edges: 500,
        model: Model::ChungLu { exponent: 2.5 },
        seed: 1,
    })
    .map_err(|e| e.to_string())?;
    let started = Instant::now();
    let l: ConceptLattice = build_lattice_vectorized(&h);
    let elapsed = started.elapsed();
    check(l.len() <= 5000, || format!("lattice has {} nodes", l.len()))?;
    check(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{} nodes in {elapsed:.2?}", l.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1 table 1 lattice", ac1_table1_lattice),
        (
            "AC2 intersection complex on random instances",
            ac2_intersection_complex,
        ),
        (
            "AC3 naive and vectorized builders identical",
            ac3_differential_builders,
        ),
        ("AC4 s-path fixtures", ac4_path_fixtures),
        ("AC5 s-path oracle agreement", ac5_path_oracle),
        ("AC6 s-connected components", ac6_components),
        ("AC7 depth statistics", ac7_depth_statistics),
        ("AC8 performance smoke", ac8_performance),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
