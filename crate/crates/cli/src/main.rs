//! `hsplit`: connectivity queries, reductions, and complete splitting-off
//! on hypergraph files.
//!
//! Exit codes: 0 success, 1 mismatch, 2 parse/input/I-O error, 3 unknown
//! vertex, 4 internal or certificate failure, 5 invalid operation in a log.
//! Reports go to stdout, diagnostics to stderr.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hsplit_core::flow::{
    conn_table_elements_with, conn_table_hyper_with, element_connectivity, element_disjoint_paths,
    hyperedge_connectivity,
};
use hsplit_core::format::{
    hypergraph_to_dot, instance_to_dot, parse_hypergraph, parse_instance_json, write_hypergraph,
    write_instance_json, write_trace_json, Format, OpLogFile,
};
use hsplit_core::oracle::{oracle_element_conn, oracle_lambda};
use hsplit_core::reduction::{reduce_to_stable_with, ReductionAction};
use hsplit_core::splitoff::{complete_split_off_with, Certify, SplitOptions};
use hsplit_core::{hypergraph_equal, ElementConnInstance, Error, Exec, Hypergraph, NodeId, SplitOffOp, VertexId};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNKNOWN_VERTEX: u8 = 3;
const EXIT_INTERNAL: u8 = 4;
const EXIT_BAD_OP: u8 = 5;

#[derive(Parser)]
#[command(name = "hsplit", version, about = "Hypergraph connectivity and complete splitting-off")]
struct Cli {
    /// Worker threads for per-pair flow computations; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertifyArg {
    Auto,
    On,
    Off,
}

#[derive(Args)]
struct HyperInput {
    /// Hypergraph file (.json or .he).
    file: PathBuf,
    /// Override format detection.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct PairQuery {
    u: Option<String>,
    v: Option<String>,
    /// Report every unordered pair.
    #[arg(long, conflicts_with_all = ["u", "v"])]
    all_pairs: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Local hyperedge-connectivity λ(u, v).
    Conn {
        #[command(flatten)]
        input: HyperInput,
        #[command(flatten)]
        query: PairQuery,
    },
    /// Element-connectivity between terminals of a graph (JSON instance).
    Econn {
        file: PathBuf,
        #[command(flatten)]
        query: PairQuery,
        /// Also print a maximum set of element-disjoint paths (single pair only).
        #[arg(long, conflicts_with = "all_pairs")]
        paths: bool,
    },
    /// Reduce a graph with terminals until the non-terminals are independent.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Completely split off a vertex.
    Split {
        #[command(flatten)]
        input: HyperInput,
        /// Vertex to split off.
        s: String,
        /// Where to write H*, in the input's format.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log_out: Option<PathBuf>,
        /// Per-stage table checks; `auto` enables them for small inputs.
        #[arg(long, value_enum, default_value = "auto")]
        certify: CertifyArg,
        /// Omit the isolated split vertex from H*.
        #[arg(long)]
        drop_s: bool,
        #[arg(long)]
        json: bool,
    },
    /// Apply an operation log to a hypergraph.
    Replay {
        #[command(flatten)]
        input: HyperInput,
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        drop_s: bool,
    },
    /// Compare two hypergraphs; exit 1 if they differ.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Compare λ over the common vertices instead of structure.
        #[arg(long)]
        conn: bool,
        /// Vertex to leave out of the --conn comparison; repeatable.
        #[arg(long, requires = "conn")]
        exclude: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force connectivity by enumeration, for small inputs.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        query: PairQuery,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Input is an element instance rather than a hypergraph.
        #[arg(long)]
        instance: bool,
        /// Compare against the flow computation; exit 1 on any difference.
        #[arg(long)]
        check: bool,
    },
    /// DOT drawing of the incidence graph, or of an element instance.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        instance: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnknownVertex(_) | Error::UnknownVertexId(_) => EXIT_UNKNOWN_VERTEX,
            Error::Replay { .. } => EXIT_BAD_OP,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_jobs(cli.jobs).and_then(|exec| run(cli.command, exec));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("hsplit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_jobs(jobs: Option<usize>) -> CliResult<Exec> {
    match jobs {
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::new(EXIT_INTERNAL, format!("thread pool: {e}")))?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => {
            eprintln!("hsplit: built without the `parallel` feature; --jobs ignored");
            Ok(Exec::Sequential)
        }
        None => Ok(Exec::Parallel),
    }
}

fn run(command: Command, exec: Exec) -> CliResult<u8> {
    match command {
        Command::Conn { input, query } => cmd_conn(&input, &query, exec),
        Command::Econn { file, query, paths } => cmd_econn(&file, &query, paths, exec),
        Command::Reduce { file, out, trace_out, json } => cmd_reduce(&file, &out, trace_out.as_deref(), json, exec),
        Command::Split { input, s, out, log_out, certify, drop_s, json } => {
            let certify = match certify {
                CertifyArg::Auto => Certify::Auto,
                CertifyArg::On => Certify::On,
                CertifyArg::Off => Certify::Off,
            };
            cmd_split(&input, &s, &out, log_out.as_deref(), SplitOptions { certify, exec }, drop_s, json)
        }
        Command::Replay { input, log, out, drop_s } => cmd_replay(&input, &log, &out, drop_s),
        Command::Verify { a, b, format, conn, exclude, json } => cmd_verify(&a, &b, format, conn, &exclude, json, exec),
        Command::Oracle { file, query, format, instance, check } => {
            cmd_oracle(&file, &query, format, instance, check, exec)
        }
        Command::ExportDot { file, format, instance, out } => cmd_export_dot(&file, format, instance, out.as_deref()),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, content: &str) -> CliResult {
    fs::write(path, content).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

fn resolve_format(path: &Path, content: &str, arg: Option<FormatArg>) -> Format {
    match arg {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Text) => Format::Text,
        None => Format::from_path(path).unwrap_or_else(|| Format::sniff(content)),
    }
}

fn load_hypergraph(path: &Path, arg: Option<FormatArg>) -> CliResult<(Hypergraph, Format)> {
    let content = read(path)?;
    let format = resolve_format(path, &content, arg);
    let h = parse_hypergraph(&content, format).map_err(|e| in_file(path, e))?;
    Ok((h, format))
}

fn load_instance(path: &Path) -> CliResult<ElementConnInstance> {
    parse_instance_json(&read(path)?).map_err(|e| in_file(path, e))
}

fn vertex(h: &Hypergraph, name: &str) -> CliResult<VertexId> {
    h.vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()).into())
}

fn node(inst: &ElementConnInstance, name: &str) -> CliResult<NodeId> {
    inst.node_by_label(name).ok_or_else(|| Error::UnknownVertex(name.to_string()).into())
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

#[derive(Serialize)]
struct PairValue {
    u: String,
    v: String,
    value: u32,
}

#[derive(Serialize)]
struct PairReport {
    pairs: Vec<PairValue>,
}

/// Resolves the requested pairs by name, in a fixed order.
fn requested_pairs<I: Copy>(
    query: &PairQuery,
    all: impl Fn() -> Vec<(I, I)>,
    lookup: impl Fn(&str) -> CliResult<I>,
) -> CliResult<Vec<(I, I)>> {
    if query.all_pairs {
        return Ok(all());
    }
    match (&query.u, &query.v) {
        (Some(u), Some(v)) => Ok(vec![(lookup(u)?, lookup(v)?)]),
        _ => Err(Failure::new(EXIT_INPUT, "give two vertices or --all-pairs")),
    }
}

fn print_pairs(query: &PairQuery, pairs: Vec<PairValue>) {
    if query.json {
        println!("{}", json_line(&PairReport { pairs }));
    } else if !query.all_pairs && pairs.len() == 1 {
        println!("{}", pairs[0].value);
    } else {
        for p in pairs {
            println!("{}\t{}\t{}", p.u, p.v, p.value);
        }
    }
}

fn vertex_pairs(h: &Hypergraph) -> Vec<(VertexId, VertexId)> {
    let vs: Vec<VertexId> = h.vertices().collect();
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn terminal_pairs(inst: &ElementConnInstance) -> Vec<(NodeId, NodeId)> {
    let ts = inst.terminals();
    let mut out = Vec::new();
    for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn cmd_conn(input: &HyperInput, query: &PairQuery, exec: Exec) -> CliResult<u8> {
    let (h, _) = load_hypergraph(&input.file, input.format)?;
    let pairs = requested_pairs(query, || vertex_pairs(&h), |n| vertex(&h, n))?;
    let values = if query.all_pairs {
        let table = conn_table_hyper_with(&h, exec);
        pairs.iter().map(|&(a, b)| table.get(a, b).expect("table covers all pairs")).collect()
    } else {
        pairs.iter().map(|&(a, b)| hyperedge_connectivity(&h, a, b)).collect::<Result<Vec<_>, _>>()?
    };
    let named = pairs
        .iter()
        .zip(values)
        .map(|(&(a, b), value)| PairValue { u: h.name(a).into(), v: h.name(b).into(), value })
        .collect();
    print_pairs(query, named);
    Ok(0)
}

#[derive(Serialize)]
struct PathsReport<'a> {
    u: &'a str,
    v: &'a str,
    value: u32,
    paths: Vec<Vec<&'a str>>,
}

fn cmd_econn(file: &Path, query: &PairQuery, paths: bool, exec: Exec) -> CliResult<u8> {
    let inst = load_instance(file)?;
    let pairs = requested_pairs(query, || terminal_pairs(&inst), |n| node(&inst, n))?;
    if paths {
        let (u, v) = pairs[0];
        let found = element_disjoint_paths(&inst, u, v)?;
        let report = PathsReport {
            u: inst.label(u),
            v: inst.label(v),
            value: found.len() as u32,
            paths: found.iter().map(|p| p.nodes.iter().map(|&n| inst.label(n)).collect()).collect(),
        };
        if query.json {
            println!("{}", json_line(&report));
        } else {
            println!("{}", report.value);
            for p in &report.paths {
                println!("{}", p.join(" "));
            }
        }
        return Ok(0);
    }
    let values = if query.all_pairs {
        let table = conn_table_elements_with(&inst, exec);
        pairs.iter().map(|&(a, b)| table.get(a, b).expect("table covers all pairs")).collect()
    } else {
        pairs.iter().map(|&(a, b)| element_connectivity(&inst, a, b)).collect::<Result<Vec<_>, _>>()?
    };
    let named = pairs
        .iter()
        .zip(values)
        .map(|(&(a, b), value)| PairValue { u: inst.label(a).into(), v: inst.label(b).into(), value })
        .collect();
    print_pairs(query, named);
    Ok(0)
}

#[derive(Serialize)]
struct ReduceReport {
    deleted: usize,
    contracted: usize,
    nodes: usize,
    edges: usize,
}

fn cmd_reduce(file: &Path, out: &Path, trace_out: Option<&Path>, json: bool, exec: Exec) -> CliResult<u8> {
    let inst = load_instance(file)?;
    let (reduced, trace) = reduce_to_stable_with(&inst, exec)?;
    write(out, &write_instance_json(&reduced))?;
    if let Some(path) = trace_out {
        write(path, &write_trace_json(&inst, &trace))?;
    }
    let count = |a| trace.steps.iter().filter(|s| s.action == a).count();
    let report = ReduceReport {
        deleted: count(ReductionAction::Deleted),
        contracted: count(ReductionAction::Contracted),
        nodes: reduced.node_count(),
        edges: reduced.edge_count(),
    };
    if json {
        println!("{}", json_line(&report));
    } else {
        println!("deleted: {}", report.deleted);
        println!("contracted: {}", report.contracted);
        println!("result: {} nodes, {} edges", report.nodes, report.edges);
    }
    Ok(0)
}

#[derive(Serialize)]
struct SplitReport<'a> {
    split_vertex: &'a str,
    hyperedges_before: usize,
    hyperedges_after: usize,
    merges: usize,
    trims: usize,
    pairs_checked: usize,
    all_equal: bool,
    stages_certified: bool,
}

fn cmd_split(
    input: &HyperInput,
    s: &str,
    out: &Path,
    log_out: Option<&Path>,
    opts: SplitOptions,
    drop_s: bool,
    json: bool,
) -> CliResult<u8> {
    let (h, format) = load_hypergraph(&input.file, input.format)?;
    let sv = vertex(&h, s)?;
    let result = complete_split_off_with(&h, sv, opts)?;
    let cert = &result.certificate;
    if !cert.all_equal() {
        return Err(Failure::new(EXIT_INTERNAL, "certificate failed: connectivity tables differ"));
    }
    let h_star = if drop_s { result.h_star.without_isolated_vertex(sv)? } else { result.h_star.clone() };
    write(out, &write_hypergraph(&h_star, format)?)?;
    if let Some(path) = log_out {
        write(path, &OpLogFile::new(&h, sv, result.log.clone()).to_json())?;
    }
    let merges = result.log.iter().filter(|op| matches!(op, SplitOffOp::Merge { .. })).count();
    let report = SplitReport {
        split_vertex: s,
        hyperedges_before: h.edge_count(),
        hyperedges_after: h_star.edge_count(),
        merges,
        trims: result.log.len() - merges,
        pairs_checked: cert.pairs_checked(),
        all_equal: cert.all_equal(),
        stages_certified: result.pipeline.as_ref().is_some_and(|p| p.tables_agree()),
    };
    if json {
        println!("{}", json_line(&report));
    } else {
        println!("split vertex: {}", report.split_vertex);
        println!("hyperedges: {} -> {}", report.hyperedges_before, report.hyperedges_after);
        println!("operations: {} merge, {} trim", report.merges, report.trims);
        println!("certificate: {} pairs checked, all equal", report.pairs_checked);
        if report.stages_certified {
            println!("stages: G0..G4 tables agree");
        }
    }
    Ok(0)
}

fn cmd_replay(input: &HyperInput, log: &Path, out: &Path, drop_s: bool) -> CliResult<u8> {
    let (h, format) = load_hypergraph(&input.file, input.format)?;
    let log_file = OpLogFile::from_json(&read(log)?).map_err(|e| in_file(log, e))?;
    let s = log_file.bind(&h).map_err(|e| in_file(log, e))?;
    let mut result = h.replay(s, &log_file.ops)?;
    if drop_s {
        result = result.without_isolated_vertex(s)?;
    }
    write(out, &write_hypergraph(&result, format)?)?;
    println!("applied {} operations", log_file.ops.len());
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs_checked: Option<usize>,
    mismatches: Vec<PairMismatch>,
}

#[derive(Serialize)]
struct PairMismatch {
    u: String,
    v: String,
    a: u32,
    b: u32,
}

fn named_table(h: &Hypergraph, exec: Exec) -> BTreeMap<(String, String), u32> {
    conn_table_hyper_with(h, exec)
        .iter()
        .map(|(a, b, value)| {
            let (x, y) = (h.name(a).to_string(), h.name(b).to_string());
            (if x <= y { (x, y) } else { (y, x) }, value)
        })
        .collect()
}

fn cmd_verify(
    a: &Path,
    b: &Path,
    format: Option<FormatArg>,
    conn: bool,
    exclude: &[String],
    json: bool,
    exec: Exec,
) -> CliResult<u8> {
    let (ha, _) = load_hypergraph(a, format)?;
    let (hb, _) = load_hypergraph(b, format)?;
    let report = if conn {
        for name in exclude {
            if !ha.vertex(name).is_some() && !hb.vertex(name).is_some() {
                return Err(Error::UnknownVertex(name.clone()).into());
            }
        }
        let keep = |n: &str| hb.vertex(n).is_some() && ha.vertex(n).is_some() && !exclude.iter().any(|x| x == n);
        let ta = named_table(&ha, exec);
        let tb = named_table(&hb, exec);
        let mut checked = 0;
        let mut mismatches = Vec::new();
        for ((u, v), &va) in &ta {
            if !keep(u) || !keep(v) {
                continue;
            }
            checked += 1;
            let vb = tb[&(u.clone(), v.clone())];
            if va != vb {
                mismatches.push(PairMismatch { u: u.clone(), v: v.clone(), a: va, b: vb });
            }
        }
        VerifyReport { equal: mismatches.is_empty(), pairs_checked: Some(checked), mismatches }
    } else {
        VerifyReport { equal: hypergraph_equal(&ha, &hb), pairs_checked: None, mismatches: Vec::new() }
    };
    if json {
        println!("{}", json_line(&report));
    } else {
        for m in &report.mismatches {
            println!("differ\t{}\t{}\t{}\t{}", m.u, m.v, m.a, m.b);
        }
        match (report.equal, report.pairs_checked) {
            (true, Some(n)) => println!("equal connectivity over {n} pairs"),
            (true, None) => println!("equal"),
            (false, _) => println!("not equal"),
        }
    }
    Ok(if report.equal { 0 } else { EXIT_MISMATCH })
}

#[derive(Serialize)]
struct OracleValue {
    u: String,
    v: String,
    value: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow: Option<u32>,
}

fn cmd_oracle(
    file: &Path,
    query: &PairQuery,
    format: Option<FormatArg>,
    instance: bool,
    check: bool,
    exec: Exec,
) -> CliResult<u8> {
    let rows: Vec<OracleValue> = if instance {
        let inst = load_instance(file)?;
        let pairs = requested_pairs(query, || terminal_pairs(&inst), |n| node(&inst, n))?;
        let table = check.then(|| conn_table_elements_with(&inst, exec));
        pairs
            .iter()
            .map(|&(a, b)| {
                Ok(OracleValue {
                    u: inst.label(a).into(),
                    v: inst.label(b).into(),
                    value: oracle_element_conn(&inst, a, b)?,
                    flow: table.as_ref().map(|t| t.get(a, b).expect("table covers all pairs")),
                })
            })
            .collect::<Result<_, Error>>()?
    } else {
        let (h, _) = load_hypergraph(file, format)?;
        let pairs = requested_pairs(query, || vertex_pairs(&h), |n| vertex(&h, n))?;
        let table = check.then(|| conn_table_hyper_with(&h, exec));
        pairs
            .iter()
            .map(|&(a, b)| {
                Ok(OracleValue {
                    u: h.name(a).into(),
                    v: h.name(b).into(),
                    value: oracle_lambda(&h, a, b)?,
                    flow: table.as_ref().map(|t| t.get(a, b).expect("table covers all pairs")),
                })
            })
            .collect::<Result<_, Error>>()?
    };
    let agree = rows.iter().all(|r| r.flow.is_none_or(|f| f == r.value));
    if query.json {
        println!("{}", json_line(&rows));
    } else {
        for r in &rows {
            match r.flow {
                Some(f) if f != r.value => println!("{}\t{}\t{}\tflow {}\tMISMATCH", r.u, r.v, r.value, f),
                _ => println!("{}\t{}\t{}", r.u, r.v, r.value),
            }
        }
    }
    Ok(if agree { 0 } else { EXIT_MISMATCH })
}

fn cmd_export_dot(file: &Path, format: Option<FormatArg>, instance: bool, out: Option<&Path>) -> CliResult<u8> {
    let dot = if instance {
        instance_to_dot(&load_instance(file)?, "instance")
    } else {
        hypergraph_to_dot(&load_hypergraph(file, format)?.0)
    };
    match out {
        Some(path) => write(path, &dot)?,
        None => print!("{dot}"),
    }
    Ok(0)
}
