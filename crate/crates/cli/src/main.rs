//! `ribbon`: enumerate ribbon graphs, build cells, compute intersection numbers and run the
//! property suites. Exit status is 0 on success, 1 when a checked property fails and 2 on
//! usage or input errors.

mod cache;
mod inspect;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ribbon_moduli::cells::{cell_polytope, default_perimeters};
use ribbon_moduli::enumerate::{canonical_key, enumerate_cells};
use ribbon_moduli::intersect::{intersection_number_over, IntersectionQuery, IntersectionResult};
use ribbon_moduli::model0::{config_cross_ratio, f_map, parse_config, complex_to_string};
use ribbon_moduli::permgraph::StableRibbonGraph;
use ribbon_moduli::random;
use ribbon_moduli::rational::{self, Q};
use ribbon_moduli::stable::contract_set;
use ribbon_moduli::suite::{run_suite, SuiteName};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Parser)]
#[command(name = "ribbon", version, about = "Exact computations on stable ribbon graphs and their moduli")]
struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Output format; `dot` is accepted only by `inspect`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Signature {
    #[arg(long)]
    genus: u32,
    /// Number of faces (marked points).
    #[arg(long)]
    faces: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List isomorphism classes of trivalent graphs, or of all cells with `--cells`.
    /// Trivalent classes are cached under $RIBBON_CACHE_DIR when it is set.
    Enumerate {
        #[command(flatten)]
        sig: Signature,
        #[arg(long)]
        cells: bool,
    },
    /// Contract a set of edges of a graph read from a JSON file.
    Contract {
        graph: PathBuf,
        /// Comma-separated edge indices.
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<usize>,
    },
    /// The cell polytope of a graph at given perimeters (default 3, 5, 7, ...).
    Cells {
        graph: PathBuf,
        /// Comma-separated positive rationals, one per face in label order.
        #[arg(long)]
        p: Option<String>,
    },
    /// Intersection number <τ_d1 ... τ_dn> in the given genus.
    Intersect {
        #[arg(long)]
        genus: u32,
        /// Comma-separated exponents, one per face.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
        /// Comma-separated perimeters (default 3, 5, 7, ...).
        #[arg(long)]
        p: Option<String>,
        /// Recompute at a second, seeded generic perimeter vector and require equality.
        #[arg(long)]
        check_p_independence: bool,
        /// Seed for the second perimeter vector.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the per-cell ledger.
        #[arg(long)]
        ledger: bool,
    },
    /// Evaluate the genus zero map on points such as `0,1,2+3i,inf`.
    Model0 {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Run a seeded property suite: contraction, stokes, alpha, omega, p-independence, model0 or all.
    Check {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Digest of a graph file: faces, genus, degrees, defects, |Aut| and stability.
    Inspect { graph: PathBuf },
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    PropertyFailed,
}

fn read_graph(path: &PathBuf) -> Result<StableRibbonGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    StableRibbonGraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_perimeters(p: Option<&str>, n: usize) -> Result<Vec<Q>> {
    let Some(s) = p else { return Ok(default_perimeters(n)) };
    let v = rational::parse_list(s).with_context(|| format!("perimeters `{s}`"))?;
    if v.len() != n {
        bail!("expected {n} perimeters, got {}", v.len());
    }
    Ok(v)
}

fn show(xs: &[Q]) -> String {
    xs.iter().map(rational::to_string).collect::<Vec<_>>().join(", ")
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

fn enumerate(sig: &Signature, cells: bool, format: Format) -> Result<Status> {
    let rows: Vec<(String, usize, usize, StableRibbonGraph)> = if cells {
        enumerate_cells(sig.genus, sig.faces)?
            .into_iter()
            .map(|c| (c.key.short_hex(), c.graph.edge_count(), c.aut_order, c.graph))
            .collect()
    } else {
        cache::trivalent_classes(sig.genus, sig.faces)?
            .into_iter()
            .map(|c| (c.key.short_hex(), c.graph.edge_count(), c.aut_order, c.graph))
            .collect()
    };
    match format {
        Format::Json => print_json(&json!(rows
            .iter()
            .map(|(key, e, aut, g)| json!({"key": key, "edges": e, "aut_order": aut, "graph": g.to_file()}))
            .collect::<Vec<_>>())),
        _ => {
            println!("{} classes for genus {} with {} faces", rows.len(), sig.genus, sig.faces);
            for (key, e, aut, g) in &rows {
                println!("{key}  E={e}  V={}  |Aut|={aut}", g.vertices().len());
            }
        }
    }
    Ok(Status::Ok)
}

fn contract(path: &PathBuf, edges: &[usize], format: Format) -> Result<Status> {
    let g = read_graph(path)?;
    let c = contract_set(&g, edges.iter().copied())?;
    match format {
        Format::Json => println!("{}", c.to_json()),
        _ => {
            println!("contracted edges {edges:?}: key {}", canonical_key(&c).short_hex());
            print!("{}", inspect::digest(&c));
        }
    }
    Ok(Status::Ok)
}

fn cells(path: &PathBuf, p: Option<&str>, format: Format) -> Result<Status> {
    let g = read_graph(path)?;
    let p = parse_perimeters(p, g.face_count())?;
    let cell = cell_polytope(&g, &p)?;
    match format {
        Format::Json => print_json(&serde_json::to_value(cell.to_file())?),
        _ => {
            println!("perimeters: {}", show(&p));
            println!("incidence rank {} of {} faces", cell.rank, g.face_count());
            if cell.empty {
                println!("empty cell");
            } else {
                println!("dimension {}", cell.dimension().unwrap_or(0));
                if let Some(x) = cell.interior_point() {
                    println!("interior lengths: {}", show(&x));
                }
            }
        }
    }
    Ok(Status::Ok)
}

fn intersection(genus: u32, d: &[u32], p: Vec<Q>) -> Result<IntersectionResult> {
    let query = IntersectionQuery::new(genus, d.to_vec(), Some(p))?;
    let classes = cache::trivalent_classes(genus, d.len())?;
    Ok(intersection_number_over(&query, &classes, |_, e| (0..e).collect())?)
}

struct IntersectArgs<'a> {
    genus: u32,
    d: &'a [u32],
    p: Option<&'a str>,
    check: bool,
    seed: u64,
    ledger: bool,
}

fn intersect(a: IntersectArgs<'_>, format: Format) -> Result<Status> {
    let p = parse_perimeters(a.p, a.d.len())?;
    let res = intersection(a.genus, a.d, p)?;
    let second = if a.check {
        let mut rng = random::rng(a.seed);
        Some(intersection(a.genus, a.d, random::generic_perimeters(&mut rng, a.d.len()))?)
    } else {
        None
    };
    let agrees = second.as_ref().is_none_or(|s| s.value == res.value);
    match format {
        Format::Json => {
            let mut v = json!({
                "genus": res.genus,
                "d": res.d,
                "perimeters": res.perimeters.iter().map(rational::to_string).collect::<Vec<_>>(),
                "value": rational::to_string(&res.value),
            });
            if a.ledger {
                v["ledger"] = serde_json::to_value(&res.ledger)?;
            }
            if let Some(s) = &second {
                v["check"] = json!({
                    "perimeters": s.perimeters.iter().map(rational::to_string).collect::<Vec<_>>(),
                    "value": rational::to_string(&s.value),
                    "agrees": agrees,
                });
            }
            print_json(&v);
        }
        _ => {
            println!("{}", rational::to_string(&res.value));
            if a.ledger {
                for c in &res.ledger {
                    println!(
                        "  {}  dim={}  |Aut|={}  sign={}  volume={}  contribution={}",
                        c.key,
                        c.dimension,
                        c.aut_order,
                        c.sign,
                        rational::to_string(&c.volume),
                        rational::to_string(&c.contribution)
                    );
                }
            }
            if let Some(s) = &second {
                let verdict = if agrees { "agrees" } else { "DIFFERS" };
                println!("at p = ({}): {} ({verdict})", show(&s.perimeters), rational::to_string(&s.value));
            }
        }
    }
    Ok(if agrees { Status::Ok } else { Status::PropertyFailed })
}

fn model0(points: &str, format: Format) -> Result<Status> {
    let cfg = parse_config(points)?;
    let images = (0..cfg.len()).map(|i| f_map(&cfg, i)).collect::<Result<Vec<_>, _>>()?;
    let ratio = config_cross_ratio(&cfg);
    match format {
        Format::Json => print_json(&json!({
            "points": cfg.points().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "images": images.iter().map(|f| f.normalized()).collect::<Vec<_>>(),
            "cross_ratio": ratio.as_ref().map(complex_to_string),
        })),
        _ => {
            for (i, f) in images.iter().enumerate() {
                let coords: Vec<String> = f.normalized().coords.iter().map(complex_to_string).collect();
                println!("f_{}: [{}]", i + 1, coords.join(" : "));
            }
            if let Some(r) = ratio {
                println!("cross-ratio: {}", complex_to_string(&r));
            }
        }
    }
    Ok(Status::Ok)
}

fn check(suite: &str, seed: u64, format: Format) -> Result<Status> {
    let name: SuiteName = suite.parse()?;
    let report = run_suite(name, seed);
    match format {
        Format::Json => print_json(&serde_json::to_value(&report)?),
        _ => {
            let verdict = if report.passed() { "PASS" } else { "FAIL" };
            println!(
                "{verdict} {} seed={} cases={} failures={} ({} ms)",
                report.suite,
                report.seed,
                report.cases,
                report.failures.len(),
                report.wall_time_ms
            );
            for f in &report.failures {
                println!("  {} case {}: {}", f.suite, f.case, f.message);
                println!("    input: {}", f.input);
            }
        }
    }
    Ok(if report.passed() { Status::Ok } else { Status::PropertyFailed })
}

fn run(cli: Cli) -> Result<Status> {
    let format = cli.format;
    if format == Format::Dot && !matches!(cli.command, Command::Inspect { .. }) {
        bail!("--format dot is only available for inspect");
    }
    match &cli.command {
        Command::Enumerate { sig, cells: all } => enumerate(sig, *all, format),
        Command::Contract { graph, edges } => contract(graph, edges, format),
        Command::Cells { graph, p } => cells(graph, p.as_deref(), format),
        Command::Intersect { genus, d, p, check_p_independence, seed, ledger } => intersect(
            IntersectArgs { genus: *genus, d, p: p.as_deref(), check: *check_p_independence, seed: *seed, ledger: *ledger },
            format,
        ),
        Command::Model0 { points } => model0(points, format),
        Command::Check { suite, seed } => check(suite, *seed, format),
        Command::Inspect { graph } => inspect::run(graph, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // output order never depends on the thread count
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::PropertyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
