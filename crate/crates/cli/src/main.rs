//! `mgraph`: generate, verify, and transform Matsumoto graphs from the
//! shell. Stdout carries machine-readable payloads only; diagnostics go
//! to stderr. Exit codes: 0 success, 1 failed verification, 2 bad input.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mgraph_cli::doc::{self, AnyFunctional, AnyGraph, CertificateDoc, PathDoc};
use mgraph_cli::dot;
use mgraph_core::braid::{shortest_paths, verify_certificate, Certificate};
use mgraph_core::coloring::{global_coloring, ColoringOutcome};
use mgraph_core::dual::{analyze_slice, locate, midpoint_fan};
use mgraph_core::generators::{
    build_cayley, build_rank2, build_weyl, CartanMatrix, CoxeterMatrix, Rank2,
};
use mgraph_core::{set_tolerance, MGraph, Scalar, VertexId};

#[derive(Parser)]
#[command(
    name = "mgraph",
    version,
    about = "Root systems on graphs: generation, axiom checks, braid certificates, dual fans"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph document on stdout.
    Gen {
        #[command(subcommand)]
        which: GenCmd,
    },
    /// Run the axiom suite; exit 0 iff every check passes.
    Verify { graph: String },
    /// Print BFS and geometric distances between two vertices.
    Dist { graph: String, v: u32, w: u32 },
    /// List all shortest paths between two vertices as JSON.
    Words {
        graph: String,
        v: u32,
        w: u32,
        /// Abort if more than this many paths exist.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Produce a braid certificate rewriting path A into path B.
    Cert {
        graph: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Replay a certificate; exit 0 iff it checks out.
    CertVerify { graph: String, cert: String },
    /// Globally color the edges; exit 1 with a witness cycle if impossible.
    Color { graph: String },
    /// Dual-side queries.
    Dual {
        #[command(subcommand)]
        which: DualCmd,
    },
    /// Exports.
    Export {
        #[command(subcommand)]
        which: ExportCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Cayley graph of a Coxeter matrix over the float backend.
    Coxeter {
        /// JSON file holding the matrix as an array of rows.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Cayley graph of a Cartan matrix over the exact backend.
    Weyl {
        /// JSON file holding the matrix as an array of rows.
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// One of the rank-2 families; pass exactly one selector.
    Rank2 {
        /// Polygon with 2m vertices.
        #[arg(long)]
        m: Option<u32>,
        /// Segment with k+1 vertices and two infinite ends.
        #[arg(long)]
        k: Option<usize>,
        /// Infinite-dihedral window of this radius.
        #[arg(long)]
        radius: Option<usize>,
        /// Tail of this length: one infinite end, one truncated.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Midpoint subdivision fan graph, truncated after n steps.
    Midpoint {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-emit a graph file in normalized form.
    File {
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum DualCmd {
    /// Find the chamber containing a functional; prints an id or "none".
    Locate {
        graph: String,
        /// Comma-separated coordinates, rational "p/q" or float per backend.
        #[arg(long)]
        xi: String,
    },
    /// Print the midpoint slice fan with wall functionals and adjacency.
    Fan {
        #[arg(long)]
        midpoint: usize,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    /// Graphviz rendering of the graph.
    Dot { graph: String },
}

enum Failure {
    /// A verification ran and said no: exit 1.
    Check(String),
    /// The request itself was malformed: exit 2.
    Usage(String),
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(r: mgraph_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn check<T>(r: mgraph_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure::Check(e.to_string()))
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
    }
}

fn load_graph(path: &str) -> CliResult<AnyGraph> {
    usage(doc::parse_graph(&read_input(path)?))
}

fn vertex_in<S: Scalar>(g: &MGraph<S>, id: u32) -> CliResult<VertexId> {
    if (id as usize) < g.vertex_count() {
        Ok(VertexId(id))
    } else {
        Err(Failure::Usage(format!(
            "vertex {id} out of range (graph has {})",
            g.vertex_count()
        )))
    }
}

fn emit(payload: String, out: &Option<String>) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, payload)
                .map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
        }
        None => print!("{payload}"),
    }
    Ok(())
}

macro_rules! on_graph {
    ($any:expr, |$g:ident| $body:expr) => {
        match &$any {
            AnyGraph::Rational($g) => $body,
            AnyGraph::Float($g) => $body,
        }
    };
}

fn gen(which: GenCmd) -> CliResult<()> {
    let (document, out) = match which {
        GenCmd::Coxeter {
            matrix,
            radius,
            out,
        } => {
            let rows: Vec<Vec<u32>> = serde_json::from_str(&read_input(&matrix)?)
                .map_err(|e| Failure::Usage(format!("bad matrix file: {e}")))?;
            let cox = usage(CoxeterMatrix::new(rows))?;
            let g = usage(build_cayley(&cox, radius))?;
            (doc::document_from_float(&g), out)
        }
        GenCmd::Weyl {
            cartan,
            radius,
            out,
        } => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(&read_input(&cartan)?)
                .map_err(|e| Failure::Usage(format!("bad matrix file: {e}")))?;
            let cartan = usage(CartanMatrix::new(rows))?;
            let g = usage(build_weyl(&cartan, radius))?;
            (doc::document_from_rational(&g), out)
        }
        GenCmd::Rank2 {
            m,
            k,
            radius,
            n,
            out,
        } => {
            let kind = match (m, k, radius, n) {
                (Some(m), None, None, None) => Rank2::Polygon { m },
                (None, Some(k), None, None) => Rank2::Segment { k },
                (None, None, Some(radius), None) => Rank2::InfiniteDihedral { radius },
                (None, None, None, Some(length)) => Rank2::Tail { length },
                _ => {
                    return Err(Failure::Usage(
                        "pass exactly one of --m, --k, --radius, --n".into(),
                    ))
                }
            };
            let g = usage(build_rank2(kind))?;
            (doc::document_from_float(&g), out)
        }
        GenCmd::Midpoint { n, out } => {
            let (_, g) = usage(midpoint_fan(n))?;
            (doc::document_from_rational(&g), out)
        }
        GenCmd::File { input, out } => {
            let g = load_graph(&input)?;
            (doc::document_from_any(&g), out)
        }
    };
    emit(doc::to_json_line(&document), &out)
}

fn verify(path: &str) -> CliResult<()> {
    let any = load_graph(path)?;
    let report = on_graph!(any, |g| g.check_axioms());
    print!("{}", doc::to_json_line(&doc::report_to_doc(&report)));
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Check("axiom checks failed".into()))
    }
}

fn dist(path: &str, v: u32, w: u32) -> CliResult<()> {
    let any = load_graph(path)?;
    on_graph!(any, |g| {
        let (v, w) = (vertex_in(g, v)?, vertex_in(g, w)?);
        let bfs = check(g.distance(v, w))?;
        let geo = check(g.distance_geometric(v, w))?;
        println!("{bfs} {geo}");
        if bfs == geo {
            Ok(())
        } else {
            Err(Failure::Check(format!(
                "BFS distance {bfs} disagrees with geometric distance {geo}"
            )))
        }
    })
}

fn words(path: &str, v: u32, w: u32, limit: usize) -> CliResult<()> {
    let any = load_graph(path)?;
    on_graph!(any, |g| {
        let (v, w) = (vertex_in(g, v)?, vertex_in(g, w)?);
        let paths = check(shortest_paths(g, v, w, limit))?;
        let docs: Vec<PathDoc> = paths.iter().map(doc::path_to_doc).collect();
        print!("{}", doc::to_json_line(&docs));
        Ok(())
    })
}

fn cert(path: &str, a: &str, b: &str) -> CliResult<()> {
    let any = load_graph(path)?;
    let pa: PathDoc = serde_json::from_str(&read_input(a)?)
        .map_err(|e| Failure::Usage(format!("bad path file {a}: {e}")))?;
    let pb: PathDoc = serde_json::from_str(&read_input(b)?)
        .map_err(|e| Failure::Usage(format!("bad path file {b}: {e}")))?;
    on_graph!(any, |g| {
        let a = usage(doc::path_from_doc(g, &pa))?;
        let b = usage(doc::path_from_doc(g, &pb))?;
        let cert = check(Certificate::generate(g, &a, &b))?;
        print!("{}", doc::to_json_line(&doc::certificate_to_doc(&cert)));
        Ok(())
    })
}

fn cert_verify(path: &str, cert: &str) -> CliResult<()> {
    let any = load_graph(path)?;
    let cd: CertificateDoc = serde_json::from_str(&read_input(cert)?)
        .map_err(|e| Failure::Usage(format!("bad certificate file: {e}")))?;
    on_graph!(any, |g| {
        let cert = check(doc::certificate_from_doc(g, &cd))?;
        check(verify_certificate(g, &cert))?;
        Ok(())
    })
}

fn color(path: &str) -> CliResult<()> {
    let any = load_graph(path)?;
    on_graph!(any, |g| match check(global_coloring(g))? {
        ColoringOutcome::Proper(c) => {
            print!("{}", doc::to_json_line(&doc::coloring_to_doc(&c)));
            Ok(())
        }
        ColoringOutcome::Inconsistent { cycle } => {
            let ids: Vec<u32> = cycle.iter().map(|v| v.0).collect();
            print!(
                "{}",
                doc::to_json_line(&serde_json::json!({ "cycle": ids }))
            );
            Err(Failure::Check("no consistent global coloring".into()))
        }
    })
}

fn dual_locate(path: &str, xi: &str) -> CliResult<()> {
    let any = load_graph(path)?;
    let functional = usage(doc::parse_functional(&any, xi))?;
    let dim = on_graph!(any, |g| g.dim());
    let len = match &functional {
        AnyFunctional::Rational(xi) => xi.len(),
        AnyFunctional::Float(xi) => xi.len(),
    };
    if len != dim {
        return Err(Failure::Usage(format!(
            "functional has {len} coordinates, graph lives in dimension {dim}"
        )));
    }
    let found = match (&any, &functional) {
        (AnyGraph::Rational(g), AnyFunctional::Rational(xi)) => check(locate(g, xi))?,
        (AnyGraph::Float(g), AnyFunctional::Float(xi)) => check(locate(g, xi))?,
        _ => unreachable!("parse_functional matches the backend"),
    };
    match found {
        Some(v) => println!("{}", v.0),
        None => println!("none"),
    }
    Ok(())
}

fn dual_fan(n: usize) -> CliResult<()> {
    let (fan, _) = usage(midpoint_fan(n))?;
    let analysis = usage(analyze_slice(&fan))?;
    print!("{}", doc::to_json_line(&doc::fan_to_doc(&fan, &analysis)));
    Ok(())
}

fn export_dot(path: &str) -> CliResult<()> {
    let any = load_graph(path)?;
    print!("{}", dot::to_dot(&any));
    Ok(())
}

fn apply_tolerance_env() -> CliResult<()> {
    if let Ok(raw) = std::env::var("MK_TOL") {
        let tol: f64 = raw
            .parse()
            .map_err(|_| Failure::Usage(format!("MK_TOL is not a number: {raw:?}")))?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::Usage(format!("MK_TOL must be positive: {raw}")));
        }
        set_tolerance(tol);
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    apply_tolerance_env()?;
    match cli.cmd {
        Cmd::Gen { which } => gen(which),
        Cmd::Verify { graph } => verify(&graph),
        Cmd::Dist { graph, v, w } => dist(&graph, v, w),
        Cmd::Words { graph, v, w, limit } => words(&graph, v, w, limit),
        Cmd::Cert { graph, a, b } => cert(&graph, &a, &b),
        Cmd::CertVerify { graph, cert: c } => cert_verify(&graph, &c),
        Cmd::Color { graph } => color(&graph),
        Cmd::Dual { which } => match which {
            DualCmd::Locate { graph, xi } => dual_locate(&graph, &xi),
            DualCmd::Fan { midpoint } => dual_fan(midpoint),
        },
        Cmd::Export { which } => match which {
            ExportCmd::Dot { graph } => export_dot(&graph),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land on stdout with status 0; real usage
            // errors go to stderr with status 2.
            if e.exit_code() == 0 {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("mgraph: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("mgraph: {msg}");
            ExitCode::from(2)
        }
    }
}
