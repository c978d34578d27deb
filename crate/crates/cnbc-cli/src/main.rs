//! Command-line surface over the balanced-coloring library: construct,
//! check, verify, solve, transform, reduce, stats. JSON goes to stdout for
//! scripting; human-readable diagnostics go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cnbc::coloring::{class_stats, verify_cnbc, verify_nbc, Coloring};
use cnbc::construct::{
    build_hk, color_complete, color_hamming, color_hamming_closed_form, supergraph_embed,
    ColoredGraph,
};
use cnbc::diagnostics::preflight;
use cnbc::graph::Graph;
use cnbc::io;
use cnbc::reduction::{build_reduction, lift_coloring, ReductionCertificate};
use cnbc::solver::{solve, BalanceMode, SolveOptions, SolveStatus, VertexOrder};
use cnbc::transfer::{TransferOutcome, TransferRequest};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 124;

#[derive(Parser)]
#[command(
    name = "cnbc",
    about = "Construct, verify, transfer, and search balanced neighborhood colorings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the necessary-condition checks for a given color count.
    Check(CheckArgs),
    /// Verify a coloring file against a graph.
    Verify(VerifyArgs),
    /// Decide whether a balanced coloring exists, and produce one if so.
    Solve(SolveArgs),
    /// Build a graph together with a certified coloring.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Carry a certified coloring across a graph operation.
    Transform(TransformArgs),
    /// Expand a proper-coloring instance into a balanced-coloring instance.
    Reduce(ReduceArgs),
    /// Graph statistics, plus per-class statistics when a coloring is given.
    Stats(StatsArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Number of colors.
    #[arg(long)]
    k: usize,
    /// Graph file (.col/.dimacs for DIMACS, anything else is an edge list).
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cnbc,
    Nbc,
}

impl From<ModeArg> for BalanceMode {
    fn from(m: ModeArg) -> BalanceMode {
        match m {
            ModeArg::Cnbc => BalanceMode::Cnbc,
            ModeArg::Nbc => BalanceMode::Nbc,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long, value_enum, default_value = "cnbc")]
    mode: ModeArg,
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    DegreeDesc,
    Input,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "cnbc")]
    mode: ModeArg,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60)]
    time_limit: u64,
    #[arg(long)]
    no_symmetry_breaking: bool,
    #[arg(long)]
    no_count_bounds: bool,
    #[arg(long)]
    no_twin_merge: bool,
    #[arg(long, value_enum, default_value = "degree-desc")]
    order: OrderArg,
    /// Reduction certificate whose cliques are registered for rainbow
    /// propagation.
    #[arg(long)]
    cliques_from: Option<PathBuf>,
    /// Write the found coloring here (JSON or .csv).
    #[arg(long)]
    out: Option<PathBuf>,
    graph: PathBuf,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Complete graph with the round-robin coloring (requires k | n).
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Hamming graph H(d, k) with a certified coloring (requires d ≡ 1 mod k).
    Hamming {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Use the closed-form coordinate-sum coloring instead of the
        /// recursive scheme.
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// The order-(4k-2) skewed-classes example.
    Hk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Embed a graph as an induced subgraph of a certified host.
    Supergraph {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransferKindArg {
    ReduceColors,
    Complement,
    StrongProduct,
    CartesianK2,
    CartesianMixed,
    Lexicographic,
    Join,
    DirectK2,
    DirectObstruction,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_enum)]
    kind: TransferKindArg,
    /// The (certified) primary graph.
    #[arg(long)]
    graph: PathBuf,
    /// Coloring of the primary graph.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Second graph, for kinds that take one.
    #[arg(long)]
    other: Option<PathBuf>,
    /// Coloring of the second graph, for kinds that need one.
    #[arg(long)]
    other_coloring: Option<PathBuf>,
    /// Left (uncolored) factor for the lexicographic transfer.
    #[arg(long)]
    left: Option<PathBuf>,
    /// Target color count for reduce-colors.
    #[arg(long)]
    p: Option<usize>,
    /// Color count for direct-obstruction.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    k: usize,
    /// Output prefix; writes PREFIX.gprime.edges and PREFIX.cert.json.
    #[arg(long)]
    out: Option<String>,
    /// Proper coloring to lift onto the expansion (writes
    /// PREFIX.lifted.coloring.json).
    #[arg(long)]
    proper_coloring: Option<PathBuf>,
    graph: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    coloring: Option<PathBuf>,
    graph: PathBuf,
}

fn read_graph(path: &Path) -> Result<Graph> {
    io::read_graph_path(path).with_context(|| format!("reading graph {}", path.display()))
}

fn read_coloring(path: &Path) -> Result<Coloring> {
    io::read_coloring_path(path).with_context(|| format!("reading coloring {}", path.display()))
}

fn certified(graph: Graph, coloring: Coloring, what: &str) -> Result<ColoredGraph> {
    ColoredGraph::certify(graph, coloring, what.to_string())
        .map_err(|e| anyhow!("{what}: {e}"))
}

fn emit(value: &serde_json::Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value).expect("valid JSON");
    // tolerate a closed pipe (e.g. `cnbc ... | head`)
    let _ = writeln!(std::io::stdout(), "{text}");
}

/// Writes PREFIX.edges and PREFIX.coloring.json; returns the JSON summary of
/// the written paths.
fn write_pair(prefix: &str, graph: &Graph, coloring: &Coloring) -> Result<serde_json::Value> {
    let graph_path = format!("{prefix}.edges");
    let coloring_path = format!("{prefix}.coloring.json");
    io::write_graph_path(Path::new(&graph_path), graph)?;
    io::write_coloring_path(Path::new(&coloring_path), coloring)?;
    Ok(json!({ "graph": graph_path, "coloring": coloring_path }))
}

fn colored_summary(c: &ColoredGraph, out: &Option<String>) -> Result<serde_json::Value> {
    let files = match out {
        Some(prefix) => Some(write_pair(prefix, &c.graph, &c.coloring)?),
        None => None,
    };
    Ok(json!({
        "provenance": c.provenance,
        "order": c.graph.order(),
        "size": c.graph.size(),
        "k": c.k(),
        "class_sizes": c.coloring.class_sizes(),
        "certified": true,
        "files": files,
    }))
}

fn run_check(args: CheckArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let report = preflight(&graph, args.k);
    eprintln!("{report}");
    emit(&serde_json::to_value(&report)?);
    Ok(if report.passed() { 0 } else { EXIT_NEGATIVE })
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let coloring = read_coloring(&args.coloring)?;
    let verdict = match args.mode {
        ModeArg::Cnbc => verify_cnbc(&graph, &coloring)?,
        ModeArg::Nbc => verify_nbc(&graph, &coloring)?,
    };
    let balanced = verdict.is_balanced();
    emit(&json!({
        "mode": match args.mode { ModeArg::Cnbc => "cnbc", ModeArg::Nbc => "nbc" },
        "k": coloring.k(),
        "balanced": balanced,
        "witness": verdict.witness(),
    }));
    Ok(if balanced { 0 } else { EXIT_NEGATIVE })
}

fn run_solve(args: SolveArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let mut opts = SolveOptions::new(args.k);
    opts.mode = args.mode.into();
    opts.time_limit = Duration::from_secs(args.time_limit);
    opts.symmetry_breaking = !args.no_symmetry_breaking;
    opts.propagation.count_bounds = !args.no_count_bounds;
    opts.propagation.twin_merge = !args.no_twin_merge;
    opts.vertex_order = match args.order {
        OrderArg::DegreeDesc => VertexOrder::DegreeDesc,
        OrderArg::Input => VertexOrder::Input,
    };
    if let Some(cert_path) = &args.cliques_from {
        let text = std::fs::read_to_string(cert_path)
            .with_context(|| format!("reading certificate {}", cert_path.display()))?;
        let cert: ReductionCertificate = serde_json::from_str(&text)?;
        opts.cliques = cert.rainbow_cliques();
    }
    let result = solve(&graph, &opts)?;
    let (status, code) = match &result.status {
        SolveStatus::Satisfiable(_) => ("satisfiable", 0),
        SolveStatus::Unsatisfiable => ("unsatisfiable", EXIT_NEGATIVE),
        SolveStatus::Timeout => ("timeout", EXIT_TIMEOUT),
    };
    if let (Some(out), Some(coloring)) = (&args.out, result.status.coloring()) {
        io::write_coloring_path(out, coloring)?;
    }
    emit(&json!({
        "status": status,
        "k": args.k,
        "nodes": result.stats.nodes,
        "max_depth": result.stats.max_depth,
        "wall_ms": result.stats.wall.as_millis() as u64,
        "preflight_failure": result.stats.preflight_failure,
        "coloring": result.status.coloring(),
    }));
    Ok(code)
}

fn run_construct(cmd: ConstructCmd) -> Result<u8> {
    let (colored, out) = match cmd {
        ConstructCmd::Complete { n, k, out } => (color_complete(n, k)?, out),
        ConstructCmd::Hamming {
            d,
            k,
            closed_form,
            out,
        } => {
            let colored = if closed_form {
                color_hamming_closed_form(d, k)?
            } else {
                color_hamming(d, k)?
            };
            (colored, out)
        }
        ConstructCmd::Hk { k, out } => (build_hk(k)?, out),
        ConstructCmd::Supergraph { k, graph, out } => {
            let g = read_graph(&graph)?;
            let embedding = supergraph_embed(&g, k)?;
            let summary = colored_summary(&embedding.colored, &out)?;
            let mut value = summary;
            value["embedding"] = json!(embedding.embedding);
            emit(&value);
            return Ok(0);
        }
    };
    emit(&colored_summary(&colored, &out)?);
    Ok(0)
}

fn run_transform(args: TransformArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let need_coloring = || -> Result<Coloring> {
        let path = args
            .coloring
            .as_ref()
            .ok_or_else(|| anyhow!("this transfer needs --coloring"))?;
        read_coloring(path)
    };
    let need_other = || -> Result<Graph> {
        let path = args
            .other
            .as_ref()
            .ok_or_else(|| anyhow!("this transfer needs --other"))?;
        read_graph(path)
    };
    let request = match args.kind {
        TransferKindArg::ReduceColors => TransferRequest::ReduceColors {
            coloring: need_coloring()?,
            graph,
            target_colors: args.p.ok_or_else(|| anyhow!("reduce-colors needs --p"))?,
        },
        TransferKindArg::Complement => TransferRequest::Complement {
            coloring: need_coloring()?,
            graph,
        },
        TransferKindArg::StrongProduct => TransferRequest::StrongProduct {
            base: certified(graph, need_coloring()?, "strong-product input")?,
            other: need_other()?,
        },
        TransferKindArg::CartesianK2 => TransferRequest::CartesianK2 {
            base: certified(graph, need_coloring()?, "cartesian-k2 input")?,
        },
        TransferKindArg::CartesianMixed => TransferRequest::CartesianMixed {
            base: certified(graph, need_coloring()?, "cartesian-mixed input")?,
            other: need_other()?,
            other_coloring: read_coloring(
                args.other_coloring
                    .as_ref()
                    .ok_or_else(|| anyhow!("cartesian-mixed needs --other-coloring"))?,
            )?,
        },
        TransferKindArg::Lexicographic => TransferRequest::Lexicographic {
            left: read_graph(
                args.left
                    .as_ref()
                    .ok_or_else(|| anyhow!("lexicographic needs --left"))?,
            )?,
            base: certified(graph, need_coloring()?, "lexicographic input")?,
        },
        TransferKindArg::Join => TransferRequest::Join {
            left: certified(graph, need_coloring()?, "join left input")?,
            right: certified(
                need_other()?,
                read_coloring(
                    args.other_coloring
                        .as_ref()
                        .ok_or_else(|| anyhow!("join needs --other-coloring"))?,
                )?,
                "join right input",
            )?,
        },
        TransferKindArg::DirectK2 => TransferRequest::DirectK2 {
            base: certified(graph, need_coloring()?, "direct-k2 input")?,
        },
        TransferKindArg::DirectObstruction => TransferRequest::DirectObstruction {
            left: graph,
            right: need_other()?,
            k: args.k.ok_or_else(|| anyhow!("direct-obstruction needs --k"))?,
        },
    };
    match request.apply()? {
        TransferOutcome::Cnbc(colored) => {
            emit(&colored_summary(&colored, &args.out)?);
        }
        TransferOutcome::Nbc(nbc) => {
            let files = match &args.out {
                Some(prefix) => Some(write_pair(prefix, &nbc.graph, &nbc.coloring)?),
                None => None,
            };
            emit(&json!({
                "balance": "nbc",
                "order": nbc.graph.order(),
                "size": nbc.graph.size(),
                "k": nbc.coloring.k(),
                "files": files,
            }));
        }
        TransferOutcome::Reduced { graph, coloring } => {
            let files = match &args.out {
                Some(prefix) => Some(write_pair(prefix, &graph, &coloring)?),
                None => None,
            };
            emit(&json!({
                "k": coloring.k(),
                "class_sizes": coloring.class_sizes(),
                "coloring": coloring,
                "files": files,
            }));
        }
        TransferOutcome::Duality(duality) => {
            let files = match &args.out {
                Some(prefix) => {
                    let path = format!("{prefix}.complement.edges");
                    io::write_graph_path(Path::new(&path), &duality.complement)?;
                    Some(json!({ "complement": path }))
                }
                None => None,
            };
            emit(&json!({
                "holds": duality.holds(),
                "balanced": duality.balanced(),
                "nbc_on_original": duality.nbc_on_original,
                "cnbc_on_complement": duality.cnbc_on_complement,
                "files": files,
            }));
            return Ok(if duality.balanced() { 0 } else { EXIT_NEGATIVE });
        }
        TransferOutcome::Obstruction(record) => {
            emit(&serde_json::to_value(&record)?);
        }
    }
    Ok(0)
}

fn run_reduce(args: ReduceArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let (expanded, certificate) = build_reduction(&graph, args.k)?;
    let lifted = match &args.proper_coloring {
        Some(path) => {
            let proper = read_coloring(path)?;
            Some(lift_coloring(&graph, &expanded, &certificate, &proper)?)
        }
        None => None,
    };
    let files = match &args.out {
        Some(prefix) => {
            let gprime_path = format!("{prefix}.gprime.edges");
            let cert_path = format!("{prefix}.cert.json");
            io::write_graph_path(Path::new(&gprime_path), &expanded)?;
            std::fs::write(&cert_path, serde_json::to_string_pretty(&certificate)?)?;
            let lifted_path = match &lifted {
                Some(coloring) => {
                    let path = format!("{prefix}.lifted.coloring.json");
                    io::write_coloring_path(Path::new(&path), coloring)?;
                    Some(path)
                }
                None => None,
            };
            Some(json!({
                "gprime": gprime_path,
                "certificate": cert_path,
                "lifted_coloring": lifted_path,
            }))
        }
        None => None,
    };
    emit(&json!({
        "k": args.k,
        "original_order": graph.order(),
        "expanded_order": expanded.order(),
        "size_formula_order": certificate.expected_order(),
        "edge_cliques": certificate.edge_cliques.len(),
        "padding_gadgets": certificate.padding.iter().map(|p| p.len()).sum::<usize>(),
        "lifted": lifted.is_some(),
        "files": files,
    }));
    Ok(0)
}

fn run_stats(args: StatsArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let class_part = match &args.coloring {
        Some(path) => {
            let coloring = read_coloring(path)?;
            Some(serde_json::to_value(class_stats(&graph, &coloring)?)?)
        }
        None => None,
    };
    emit(&json!({
        "order": graph.order(),
        "size": graph.size(),
        "min_degree": graph.min_degree(),
        "max_degree": graph.max_degree(),
        "regular": graph.is_regular(),
        "connected": graph.is_connected(),
        "class_stats": class_part,
    }));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(args) => run_check(args),
        Command::Verify(args) => run_verify(args),
        Command::Solve(args) => run_solve(args),
        Command::Construct(cmd) => run_construct(cmd),
        Command::Transform(args) => run_transform(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Stats(args) => run_stats(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
