mod bench;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pathdecomp::chunk::{solve_chunk, ChunkGraph};
use pathdecomp::connected::solve_connected;
use pathdecomp::decomposition::{classify_type, parse_decomposition, validate};
use pathdecomp::gadgets::{
    build_gadget, decomposition_from_partition, verify_gadget_properties, ThreePartitionInstance,
};
use pathdecomp::general::solve;
use pathdecomp::generic::solve_exact;
use pathdecomp::graph::{classify_components, induced_subgraph, parse_graph};
use pathdecomp::{Graph, PathDecomposition};

use report::{Backend, Outcome, RunReport};

const OK: u8 = 0;
const ERROR: u8 = 1;
const NEGATIVE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "pathdecomp",
    about = "Minimum-length path decompositions of width at most 3"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the polynomial solver.
    Solve(SolveArgs),
    /// Run the exhaustive reference solver.
    Oracle(OracleArgs),
    /// Check a decomposition file against a graph.
    Validate(ValidateArgs),
    /// Hardness gadget tools.
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Compare the polynomial solver with the reference on many instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Output {
    /// Write the decomposition here.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Append a tab-separated run record here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print width, size and type as well as the length.
    #[arg(long)]
    stats: bool,
    /// Leave the timing column out of the run record.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    /// Require a connected graph and use the single-component solver.
    #[arg(long, conflicts_with = "chunk")]
    connected: bool,
    /// Require one big component plus isolated vertices and edges, and honour
    /// the boundary caps.
    #[arg(long)]
    chunk: bool,
    #[arg(long, requires = "chunk")]
    lambda1: Option<usize>,
    #[arg(long, requires = "chunk")]
    lambda2: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct OracleArgs {
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    lambda1: Option<usize>,
    #[arg(long)]
    lambda2: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ValidateArgs {
    graph: PathBuf,
    decomposition: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    lambda1: Option<usize>,
    #[arg(long)]
    lambda2: Option<usize>,
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Write the gadget graph and its clique and path labels.
    Build {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Output prefix; writes PREFIX.el and PREFIX.labels.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the width-4 decomposition built from a partition.
    Decompose {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Parts as 1-based weight positions, e.g. "1,2,6;3,4,5".
        #[arg(long)]
        parts: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Comma-separated weights.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<usize>,
    #[arg(long)]
    b: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of edge-list files. Without it, random graphs are drawn.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest graph handed to the reference solver.
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    min_nodes: usize,
    /// Largest random graph.
    #[arg(long, default_value_t = 9)]
    nodes: usize,
    /// Edge probability.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Redraw random graphs until their pathwidth is at most k.
    #[arg(long)]
    feasible: bool,
    /// Report file; stdout gets the summary only.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn type_name(p: &PathDecomposition) -> String {
    classify_type(p).map_or("-".into(), |t| format!("{t:?}"))
}

fn stats_line(p: &PathDecomposition) -> String {
    format!(
        "width={} length={} size={} type={}",
        p.width(),
        p.len(),
        p.size(),
        type_name(p)
    )
}

/// Runs the chunk solver on a graph in its own ids.
fn solve_as_chunk(g: &Graph, k: usize, l1: usize, l2: usize) -> Result<Option<PathDecomposition>> {
    let split = classify_components(g);
    if split.big.len() != 1 {
        bail!("--chunk needs exactly one component with three or more vertices");
    }
    let (big, map) = induced_subgraph(g, &split.big[0])?;
    let nb = big.n();
    let c = ChunkGraph::new(big, split.k1.len(), split.k2.len())?;
    let p = solve_chunk(&c, k, l1, l2)?;
    Ok(p.map(|p| {
        p.relabel(|v| {
            if v < nb {
                map[v]
            } else if v < nb + split.k1.len() {
                split.k1[v - nb]
            } else {
                let e = split.k2[(v - nb - split.k1.len()) / 2];
                if (v - nb - split.k1.len()).is_multiple_of(2) {
                    e.0
                } else {
                    e.1
                }
            }
        })
    }))
}

fn finish(
    graph: &Path,
    k: usize,
    caps: (usize, usize),
    backend: Backend,
    result: Option<PathDecomposition>,
    millis: u128,
    out: &Output,
) -> Result<u8> {
    if let (Some(p), Some(path)) = (&result, &out.emit) {
        std::fs::write(path, p.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    match &result {
        Some(p) if out.stats => println!("length {} {}", p.len(), stats_line(p)),
        Some(p) => println!("length {}", p.len()),
        None => println!("infeasible"),
    }
    if let Some(path) = &out.report {
        let rec = RunReport {
            instance: graph.display().to_string(),
            k,
            lambda1: caps.0,
            lambda2: caps.1,
            backend,
            outcome: result
                .as_ref()
                .map_or(Outcome::Infeasible, |p| Outcome::Length(p.len())),
            millis: (!out.no_timing).then_some(millis),
            output: result
                .as_ref()
                .and(out.emit.as_ref())
                .map(|p| p.display().to_string()),
        };
        use std::io::Write;
        let mut f = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        writeln!(f, "{}", rec.line())?;
    }
    Ok(if result.is_some() { OK } else { NEGATIVE })
}

fn cmd_solve(a: &SolveArgs) -> Result<u8> {
    if a.k > pathdecomp::general::MAX_WIDTH {
        bail!(
            "--k must be between 0 and {}",
            pathdecomp::general::MAX_WIDTH
        );
    }
    let g = read_graph(&a.graph)?;
    let caps = (a.lambda1.unwrap_or(a.k + 1), a.lambda2.unwrap_or(a.k + 1));
    let start = Instant::now();
    let result = if a.connected {
        solve_connected(&g, a.k)?
    } else if a.chunk {
        solve_as_chunk(&g, a.k, caps.0, caps.1)?
    } else {
        solve(&g, a.k)?
    };
    finish(
        &a.graph,
        a.k,
        caps,
        Backend::Poly,
        result,
        start.elapsed().as_millis(),
        &a.out,
    )
}

fn cmd_oracle(a: &OracleArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let caps = (a.lambda1.unwrap_or(a.k + 1), a.lambda2.unwrap_or(a.k + 1));
    let start = Instant::now();
    let result = solve_exact(&g, a.k, a.lambda1, a.lambda2)?;
    finish(
        &a.graph,
        a.k,
        caps,
        Backend::Oracle,
        result,
        start.elapsed().as_millis(),
        &a.out,
    )
}

fn cmd_validate(a: &ValidateArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let text = std::fs::read_to_string(&a.decomposition)
        .with_context(|| format!("reading {}", a.decomposition.display()))?;
    let p = parse_decomposition(&text)
        .with_context(|| format!("parsing {}", a.decomposition.display()))?;
    if let Err(v) = validate(&g, &p) {
        println!("violation {v}");
        return Ok(NEGATIVE);
    }
    let mut broken = Vec::new();
    if let Some(k) = a.k {
        if p.width() > k as isize {
            broken.push(format!("width {} exceeds k={k}", p.width()));
        }
    }
    let first = p.first_bag().map_or(0, <[usize]>::len);
    let last = p.last_bag().map_or(0, <[usize]>::len);
    if let Some(l1) = a.lambda1.filter(|&l1| first > l1) {
        broken.push(format!("first bag has {first} vertices, cap {l1}"));
    }
    if let Some(l2) = a.lambda2.filter(|&l2| last > l2) {
        broken.push(format!("last bag has {last} vertices, cap {l2}"));
    }
    if broken.is_empty() {
        println!("ok {}", stats_line(&p));
        Ok(OK)
    } else {
        for b in broken {
            println!("violation cap {b}");
        }
        Ok(NEGATIVE)
    }
}

fn instance(a: &InstanceArgs) -> Result<ThreePartitionInstance> {
    Ok(ThreePartitionInstance::new(a.weights.clone(), a.b)?)
}

fn parse_parts(text: &str, count: usize) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|part| {
            part.split(',')
                .map(|t| {
                    let x: usize = t
                        .trim()
                        .parse()
                        .with_context(|| format!("bad position {t:?}"))?;
                    if x == 0 || x > count {
                        bail!("position {x} is outside 1..={count}");
                    }
                    Ok(x - 1)
                })
                .collect()
        })
        .collect()
}

fn cmd_gadget(c: &GadgetCmd) -> Result<u8> {
    match c {
        GadgetCmd::Build { inst, out } => {
            let gg = build_gadget(&instance(inst)?);
            let with_ext = |ext: &str| {
                let mut s = out.clone().into_os_string();
                s.push(ext);
                PathBuf::from(s)
            };
            std::fs::write(with_ext(".el"), gg.graph.to_edge_list())?;
            std::fs::write(with_ext(".labels"), gg.label_text())?;
            println!(
                "n={} m={} l={}",
                gg.graph.n(),
                gg.graph.edge_count(),
                gg.target_length
            );
            Ok(OK)
        }
        GadgetCmd::Decompose { inst, parts, emit } => {
            let inst = instance(inst)?;
            let parts = parse_parts(parts, inst.weights().len())?;
            let gg = build_gadget(&inst);
            let p = match decomposition_from_partition(&gg, &parts) {
                Ok(p) => p,
                Err(e) => {
                    println!("invalid partition: {e}");
                    return Ok(NEGATIVE);
                }
            };
            if let Some(path) = emit {
                std::fs::write(path, p.to_text())?;
            }
            let report = verify_gadget_properties(&gg, &p);
            println!(
                "{} l={} checks={}",
                stats_line(&p),
                gg.target_length,
                if report.all_pass() { "pass" } else { "fail" }
            );
            Ok(if report.all_pass() { OK } else { NEGATIVE })
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<u8> {
    if a.k > pathdecomp::general::MAX_WIDTH {
        bail!(
            "--k must be between 0 and {}",
            pathdecomp::general::MAX_WIDTH
        );
    }
    let instances = match &a.corpus {
        Some(dir) => bench::load_corpus(dir)?,
        None => {
            if a.min_nodes > a.nodes || !(0.0..=1.0).contains(&a.p) {
                bail!("need --min-nodes <= --nodes and --p within [0, 1]");
            }
            let gen = bench::Generator {
                count: a.count,
                min_n: a.min_nodes,
                nodes: a.nodes,
                p: a.p,
                seed: a.seed,
                feasible: a.feasible,
            };
            bench::generate(&gen, a.k)?
        }
    };
    let cfg = bench::BenchConfig {
        k: a.k,
        max_n: a.max_n,
        jobs: a.jobs,
        timing: !a.no_timing,
    };
    let result = bench::run(&instances, &cfg);
    let text = result.text();
    match &a.out {
        Some(path) => std::fs::write(path, &text)?,
        None => print!("{text}"),
    }
    let (agree, compared) = result.agreement();
    println!("agreement {agree}/{compared} instances={}", instances.len());
    Ok(if agree == compared { OK } else { NEGATIVE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the generic error code; 2 means a negative answer
            return ExitCode::from(if e.use_stderr() { ERROR } else { OK });
        }
    };
    let run = match &cli.cmd {
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Gadget(c) => cmd_gadget(c),
        Command::Bench(a) => cmd_bench(a),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}
