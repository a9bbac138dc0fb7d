use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hyperlattice::analytics::AnalyticsError;
use hyperlattice::formats::{
    histograms_csv, parse_edge_list, parse_incidence_csv, to_dot, write_edge_list, LatticeDocument,
};
use hyperlattice::generate::{generate, GeneratorConfig, Model};
use hyperlattice::lattice::enumerate_concepts_oracle;
use hyperlattice::oracle::intersection_complex_bruteforce;
use hyperlattice::{
    build_lattice, depth_histograms, s_connected_components, shortest_s_path, verify_isomorphism,
    Algorithm, ConceptLattice, Hypergraph, VertexSet,
};
use serde::Serialize;

const EXIT_PARSE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NO_PATH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hyperlattice",
    version,
    about = "Concept lattices of hypergraphs and s-path queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    /// Pick by extension: .csv, .json, anything else is an edge list.
    Auto,
    Edges,
    Csv,
    /// A lattice document written by `build --output json`.
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Naive,
    Vectorized,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Naive => Algorithm::Naive,
            AlgorithmArg::Vectorized => Algorithm::Vectorized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    ChungLu,
    Uniform,
}

#[derive(clap::Args)]
struct Input {
    /// Edge list, incidence CSV or lattice JSON.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    format: InputFormat,
    #[arg(long, value_enum, default_value = "vectorized")]
    algorithm: AlgorithmArg,
}

#[derive(Subcommand)]
enum Command {
    /// Build the concept lattice and write it as JSON or DOT.
    Build {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputFormat,
        /// Write here instead of stdout.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Cross-check against brute-force enumeration and the other builder.
        #[arg(long)]
        verify: bool,
    },
    /// Shortest s-path between two hyperedges.
    Path {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// s-connected components of the hypergraph.
    Components {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s: usize,
    },
    /// Sizes and depth histograms of the lattice.
    Stats {
        #[command(flatten)]
        input: Input,
    },
    /// Generate a random hypergraph as an edge list.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, value_enum, default_value = "chung-lu")]
        model: ModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2.5)]
        power_exponent: f64,
        /// Incidence probability for the uniform model.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Time both builders on generated Chung-Lu inputs.
    Bench {
        /// Edge counts; each input has twice as many vertices.
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2.5)]
        power_exponent: f64,
    },
}

#[derive(Serialize)]
struct PathOutput<'a> {
    s: usize,
    from: &'a str,
    to: &'a str,
    lattice_path: Vec<String>,
    lattice_distance: usize,
    hyperedge_path: Vec<&'a str>,
    hypergraph_distance: usize,
}

/// Error carrying a specific process exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Exit>() {
                Some(Exit(code, _)) => ExitCode::from(*code),
                None => ExitCode::from(EXIT_PARSE),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build {
            input,
            output,
            out,
            verify,
        } => {
            let lattice = load_lattice(&input)?;
            if verify {
                verify_lattice(&lattice, input.algorithm.into())?;
            }
            let text = match output {
                OutputFormat::Json => LatticeDocument::from_lattice(&lattice).to_json() + "\n",
                OutputFormat::Dot => to_dot(&lattice),
            };
            emit(out.as_deref(), &text)
        }
        Command::Path { input, s, from, to } => {
            let lattice = load_lattice(&input)?;
            let result = match shortest_s_path(&lattice, s, &from, &to) {
                Ok(r) => r,
                Err(
                    e @ (AnalyticsError::PrunedEndpoint { .. } | AnalyticsError::NoPath { .. }),
                ) => return Err(Exit(EXIT_NO_PATH, e.to_string()).into()),
                Err(e) => return Err(e.into()),
            };
            let h = lattice.hypergraph();
            let doc = PathOutput {
                s,
                from: &from,
                to: &to,
                lattice_path: result
                    .lattice_path
                    .iter()
                    .map(|&i| lattice.galois_label(i).to_string())
                    .collect(),
                lattice_distance: result.lattice_distance,
                hyperedge_path: result
                    .hyperedge_path
                    .iter()
                    .map(|&e| h.edge_name(e))
                    .collect(),
                hypergraph_distance: result.hypergraph_distance,
            };
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(())
        }
        Command::Components { input, s } => {
            let lattice = load_lattice(&input)?;
            let components = s_connected_components(&lattice, s)?;
            println!(
                "{}",
                serde_json::to_string(&components.names(lattice.hypergraph()))?
            );
            Ok(())
        }
        Command::Stats { input } => {
            let lattice = load_lattice(&input)?;
            let h = lattice.hypergraph();
            println!("key,value");
            println!("vertices,{}", h.n_vertices());
            println!("edges,{}", h.n_edges());
            println!("lattice_nodes,{}", lattice.len());
            println!("cover_pairs,{}", lattice.covers().len());
            println!();
            print!("{}", histograms_csv(&depth_histograms(&lattice)));
            Ok(())
        }
        Command::Gen {
            vertices,
            edges,
            model,
            seed,
            power_exponent,
            density,
            out,
        } => {
            let model = match model {
                ModelArg::ChungLu => Model::ChungLu {
                    exponent: power_exponent,
                },
                ModelArg::Uniform => Model::Uniform { density },
            };
            let h = generate(&GeneratorConfig {
                vertices,
                edges,
                model,
                seed,
            })?;
            emit(out.as_deref(), &write_edge_list(&h))
        }
        Command::Bench {
            sizes,
            repeats,
            seed,
            power_exponent,
        } => bench(&sizes, repeats.max(1), seed, power_exponent),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve_format(input: &Input) -> InputFormat {
    match input.format {
        InputFormat::Auto => match input.input.extension().and_then(|e| e.to_str()) {
            Some("csv") => InputFormat::Csv,
            Some("json") => InputFormat::Lattice,
            _ => InputFormat::Edges,
        },
        f => f,
    }
}

fn load_lattice(input: &Input) -> Result<ConceptLattice> {
    let text = fs::read_to_string(&input.input)
        .with_context(|| format!("reading {}", input.input.display()))?;
    let ctx = || format!("parsing {}", input.input.display());
    let hypergraph: Hypergraph = match resolve_format(input) {
        InputFormat::Lattice => {
            return LatticeDocument::from_json(&text)
                .and_then(|doc| doc.to_lattice())
                .with_context(ctx)
        }
        InputFormat::Csv => parse_incidence_csv(&text).with_context(ctx)?,
        InputFormat::Edges | InputFormat::Auto => parse_edge_list(&text).with_context(ctx)?,
    };
    Ok(build_lattice(&hypergraph, input.algorithm.into()))
}

fn verify_lattice(lattice: &ConceptLattice, used: Algorithm) -> Result<()> {
    let h = lattice.hypergraph();
    let mismatch = |msg: String| anyhow::Error::from(Exit(EXIT_VERIFY, msg));

    let concepts = enumerate_concepts_oracle(h)?;
    verify_isomorphism(lattice, &concepts)
        .map_err(|e| mismatch(format!("verify: concept enumeration disagrees: {e}")))?;

    let complex = intersection_complex_bruteforce(h)?;
    let extents: std::collections::BTreeSet<VertexSet> =
        lattice.nodes().iter().map(|c| c.extent.clone()).collect();
    if extents != complex {
        return Err(mismatch(
            "verify: lattice extents differ from the brute-force intersection complex".into(),
        ));
    }

    let other = match used {
        Algorithm::Naive => Algorithm::Vectorized,
        Algorithm::Vectorized => Algorithm::Naive,
    };
    if build_lattice(h, other) != *lattice {
        return Err(mismatch(
            "verify: naive and vectorized builders disagree".into(),
        ));
    }
    log::info!("verify: {} concepts confirmed", lattice.len());
    Ok(())
}

fn bench(sizes: &[usize], repeats: usize, seed: u64, exponent: f64) -> Result<()> {
    println!("vertices,edges,nodes_naive,nodes_vectorized,naive_ms,vectorized_ms");
    for &edges in sizes {
        let vertices = edges * 2;
        let h = generate(&GeneratorConfig {
            vertices,
            edges,
            model: Model::ChungLu { exponent },
            seed,
        })?;
        let mut timings = [Vec::new(), Vec::new()];
        let mut sizes_seen = [0usize; 2];
        let mut lattices: [Option<ConceptLattice>; 2] = [None, None];
        for _ in 0..repeats {
            for (slot, algorithm) in [Algorithm::Naive, Algorithm::Vectorized]
                .into_iter()
                .enumerate()
            {
                let start = Instant::now();
                let l = build_lattice(&h, algorithm);
                timings[slot].push(start.elapsed().as_secs_f64() * 1e3);
                sizes_seen[slot] = l.len();
                lattices[slot] = Some(l);
            }
        }
        if lattices[0] != lattices[1] {
            bail!(Exit(
                EXIT_VERIFY,
                format!("bench: builders disagree on input with {edges} edges")
            ));
        }
        let median = |v: &mut Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v[v.len() / 2]
        };
        println!(
            "{vertices},{edges},{},{},{:.3},{:.3}",
            sizes_seen[0],
            sizes_seen[1],
            median(&mut timings[0]),
            median(&mut timings[1])
        );
    }
    Ok(())
}
