//! Command-line front end. Generates the catalogued geometries, converts
//! their graphs between formats, reconstructs line sets from bare graphs,
//! checks axioms, and runs recognition.
//!
//! Exit codes are a compatibility contract: 0 success, 1 usage error,
//! 2 malformed input, 3 analysis failure (unknown graph, axiom violation,
//! non-isomorphic pair), 4 size guard.

use clap::{Parser, Subcommand, ValueEnum};
use lieprobe::generators::{
    grassmann_lines, half_spin, polar_space, GeneratorError, PolarKind,
};
use lieprobe::geometry::{
    check_degenerate, check_gamma, check_grid, check_parapolar, check_partial_linear, check_shult,
    polar_rank, AxiomReport, GeometryError, Witness,
};
use lieprobe::graph::{
    are_isomorphic, read_auto, write_graph6, write_sparse6, FormatError, GraphError, MAX_N,
};
use lieprobe::recognize::{recognize, srg_parameters, IdentificationLevel};
use lieprobe::reconstruct::{build_geometry, ray_quotient, recover_rays, ReconstructError};
use lieprobe::{Geometry, Graph};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_ANALYSIS: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;

#[derive(Parser)]
#[command(name = "lieprobe", version, about = "Point-line geometries and their collinearity graphs")]
struct Cli {
    /// Worker threads; LIEPROBE_THREADS is consulted when absent, then all
    /// cores. Output never depends on the count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed echoed into written reports, for reproducing seeded runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a catalogued geometry; write its graph and/or line set.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Projective dimension of the ambient space (polar families).
        #[arg(long)]
        dim: Option<usize>,
        /// Series index n (grassmann and halfspin).
        #[arg(long)]
        n: Option<usize>,
        /// Field order.
        #[arg(long)]
        q: u16,
        /// Write the collinearity graph here.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Write the geometry JSON here.
        #[arg(long)]
        geometry: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Graph6)]
        format: GraphFormat,
    },
    /// Induced subgraph on the neighbours of one vertex.
    Localgraph {
        input: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Graph6)]
        format: GraphFormat,
    },
    /// Replace each vertex by a q-clique, joining cliques of adjacent
    /// vertices completely.
    Cliqueext {
        input: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Graph6)]
        format: GraphFormat,
    },
    /// Recover the rays of a clique extension; write the quotient graph.
    Quotient {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Graph6)]
        format: GraphFormat,
    },
    /// Rebuild the line set of a collinearity graph from double perps.
    Reconstruct {
        input: PathBuf,
        /// Write the geometry JSON here.
        #[arg(long)]
        geometry: PathBuf,
    },
    /// Name the family behind a collinearity graph; exit 3 when unknown.
    Recognize {
        input: PathBuf,
        /// Write the full report JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run axiom checks against a geometry JSON file; exit 3 on failure.
    Verify {
        /// Comma-separated: partial-linear, gamma, shult, nondegenerate,
        /// polar, parapolar:R, grid:Q.
        #[arg(long)]
        axioms: String,
        input: PathBuf,
    },
    /// Exit 0 and print a vertex mapping iff the two graphs are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Strongly regular graph parameters, or NotStronglyRegular.
    Params { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    W,
    Q,
    #[value(name = "qplus")]
    QPlus,
    #[value(name = "qminus")]
    QMinus,
    Grassmann,
    Halfspin,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Graph6,
    Sparse6,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn bad_input(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_BAD_INPUT, message: message.into() }
    }

    fn analysis(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_ANALYSIS, message: message.into() }
    }

    fn too_large(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_TOO_LARGE, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap exits 2 on usage errors by default; our contract says 1
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    init_threads(cli.threads)?;
    match cli.command {
        Command::Gen { family, dim, n, q, graph, geometry, format } => {
            cmd_gen(family, dim, n, q, graph.as_deref(), geometry.as_deref(), format)
        }
        Command::Localgraph { input, vertex, out, format } => {
            cmd_localgraph(&input, vertex, &out, format)
        }
        Command::Cliqueext { input, q, out, format } => cmd_cliqueext(&input, q, &out, format),
        Command::Quotient { input, out, format } => cmd_quotient(&input, &out, format),
        Command::Reconstruct { input, geometry } => cmd_reconstruct(&input, &geometry),
        Command::Recognize { input, report } => cmd_recognize(&input, report.as_deref(), cli.seed),
        Command::Verify { axioms, input } => cmd_verify(&axioms, &input),
        Command::Iso { a, b } => cmd_iso(&a, &b),
        Command::Params { input } => cmd_params(&input),
    }
}

fn init_threads(flag: Option<usize>) -> Result<(), Failure> {
    let threads = match flag {
        Some(t) => t,
        None => match std::env::var("LIEPROBE_THREADS") {
            Ok(v) => v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
                Failure::usage(format!("LIEPROBE_THREADS must be a positive integer, got {v:?}"))
            })?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))
}

fn cmd_gen(
    family: FamilyArg,
    dim: Option<usize>,
    n: Option<usize>,
    q: u16,
    graph: Option<&Path>,
    geometry: Option<&Path>,
    format: GraphFormat,
) -> Result<ExitCode, Failure> {
    if graph.is_none() && geometry.is_none() {
        return Err(Failure::usage("nothing to write: pass --graph and/or --geometry"));
    }
    let (d, name) = build_family(family, dim, n, q)?;
    println!("{name}: {} points, {} lines", d.n_points(), d.lines().len());
    if let Some(path) = geometry {
        write_file(path, &d.to_json())?;
    }
    if let Some(path) = graph {
        write_file(path, &graph_text(&d.point_graph(), format)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn build_family(
    family: FamilyArg,
    dim: Option<usize>,
    n: Option<usize>,
    q: u16,
) -> Result<(Geometry, String), Failure> {
    let polar = |kind: PolarKind, prefix: &str| {
        if n.is_some() {
            return Err(Failure::usage("polar families take --dim, not --n"));
        }
        let dim = dim.ok_or_else(|| Failure::usage("polar families need --dim"))?;
        let d = polar_space(kind, dim, q).map_err(generator_failure)?;
        Ok((d, format!("{prefix}({dim}, {q})")))
    };
    let series = |gen: fn(usize, u16) -> Result<Geometry, GeneratorError>,
                  which: &str,
                  name: fn(usize, u16) -> String| {
        if dim.is_some() {
            return Err(Failure::usage(format!("{which} takes --n, not --dim")));
        }
        let n = n.ok_or_else(|| Failure::usage(format!("{which} needs --n")))?;
        let d = gen(n, q).map_err(generator_failure)?;
        Ok((d, name(n, q)))
    };
    match family {
        FamilyArg::W => polar(PolarKind::W, "W"),
        FamilyArg::Q => polar(PolarKind::Q, "Q"),
        FamilyArg::QPlus => polar(PolarKind::QPlus, "Q+"),
        FamilyArg::QMinus => polar(PolarKind::QMinus, "Q-"),
        FamilyArg::Grassmann => {
            series(grassmann_lines, "grassmann", |n, q| format!("A_{{{n},2}}({q})"))
        }
        FamilyArg::Halfspin => {
            series(half_spin, "halfspin", |n, q| format!("D_{{{n},{n}}}({q})"))
        }
    }
}

fn cmd_localgraph(
    input: &Path,
    vertex: usize,
    out: &Path,
    format: GraphFormat,
) -> Result<ExitCode, Failure> {
    let g = read_graph_file(input)?;
    if vertex >= g.n() {
        return Err(Failure::usage(format!(
            "vertex {vertex} out of range: graph has {} vertices",
            g.n()
        )));
    }
    let (h, _) = g.local_graph(vertex).map_err(graph_failure)?;
    println!("local graph at {vertex}: {} vertices, {} edges", h.n(), h.edge_count());
    write_file(out, &graph_text(&h, format)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_cliqueext(input: &Path, q: usize, out: &Path, format: GraphFormat) -> Result<ExitCode, Failure> {
    if q == 0 {
        return Err(Failure::usage("--q must be at least 1"));
    }
    let g = read_graph_file(input)?;
    match g.n().checked_mul(q) {
        Some(total) if total as u64 <= MAX_N => {}
        _ => {
            return Err(Failure::too_large(format!(
                "{q}-clique extension of {} vertices exceeds the format limit {MAX_N}",
                g.n()
            )))
        }
    }
    let h = g.clique_extension(q).map_err(graph_failure)?;
    println!("{q}-clique extension: {} vertices, {} edges", h.n(), h.edge_count());
    write_file(out, &graph_text(&h, format)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_quotient(input: &Path, out: &Path, format: GraphFormat) -> Result<ExitCode, Failure> {
    let g = read_graph_file(input)?;
    let part = recover_rays(&g).map_err(reconstruct_failure)?;
    let h = ray_quotient(&g, &part).map_err(reconstruct_failure)?;
    println!("height {}, {} rays", part.q(), part.rays().len());
    write_file(out, &graph_text(&h, format)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reconstruct(input: &Path, geometry: &Path) -> Result<ExitCode, Failure> {
    let g = read_graph_file(input)?;
    let d = build_geometry(&g).map_err(reconstruct_failure)?;
    println!("{} points, {} lines", d.n_points(), d.lines().len());
    write_file(geometry, &d.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_recognize(
    input: &Path,
    report_path: Option<&Path>,
    seed: Option<u64>,
) -> Result<ExitCode, Failure> {
    let g = read_graph_file(input)?;
    let mut report = recognize(&g);
    report.seed = seed;
    if report.is_recognized() {
        let level = match report.identification_level {
            Some(IdentificationLevel::LineSetVerified) => "line-set-verified",
            Some(IdentificationLevel::ParameterLevel) => "parameter-level",
            None => "unconfirmed",
        };
        println!("{} ({level})", report.outcome);
    } else {
        println!("unknown");
        for d in &report.diagnostics {
            println!("  {d}");
        }
    }
    if let Some(path) = report_path {
        write_file(path, &report.to_json())?;
    }
    Ok(if report.is_recognized() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ANALYSIS)
    })
}

enum AxiomSpec {
    PartialLinear,
    Gamma,
    Shult,
    Nondegenerate,
    Polar,
    Parapolar(usize),
    Grid(u16),
}

fn parse_axioms(list: &str) -> Result<Vec<AxiomSpec>, Failure> {
    list.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Some(r) = tok.strip_prefix("parapolar:") {
                return r.parse().map(AxiomSpec::Parapolar).map_err(|_| {
                    Failure::usage(format!("parapolar rank must be an integer, got {r:?}"))
                });
            }
            if let Some(qs) = tok.strip_prefix("grid:") {
                return qs.parse().map(AxiomSpec::Grid).map_err(|_| {
                    Failure::usage(format!("grid order must be an integer, got {qs:?}"))
                });
            }
            match tok {
                "partial-linear" | "partial_linear" => Ok(AxiomSpec::PartialLinear),
                "gamma" => Ok(AxiomSpec::Gamma),
                "shult" => Ok(AxiomSpec::Shult),
                "nondegenerate" => Ok(AxiomSpec::Nondegenerate),
                "polar" => Ok(AxiomSpec::Polar),
                _ => Err(Failure::usage(format!(
                    "unknown axiom {tok:?}; expected partial-linear, gamma, shult, \
                     nondegenerate, polar, parapolar:R or grid:Q"
                ))),
            }
        })
        .collect()
}

fn cmd_verify(axioms: &str, input: &Path) -> Result<ExitCode, Failure> {
    let specs = parse_axioms(axioms)?;
    let d = read_geometry_file(input)?;
    let mut all = true;
    for spec in &specs {
        let (line, ok) = run_axiom(&d, spec)?;
        println!("{line}");
        all &= ok;
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(EXIT_ANALYSIS) })
}

fn run_axiom(d: &Geometry, spec: &AxiomSpec) -> Result<(String, bool), Failure> {
    let (name, report) = match spec {
        AxiomSpec::PartialLinear => ("partial-linear".to_string(), check_partial_linear(d)),
        AxiomSpec::Gamma => ("gamma".to_string(), check_gamma(d)),
        AxiomSpec::Shult => ("shult".to_string(), check_shult(d)),
        AxiomSpec::Parapolar(r) => (format!("parapolar:{r}"), check_parapolar(d, *r)),
        AxiomSpec::Nondegenerate => {
            // check_degenerate holds when the geometry IS degenerate
            let r = check_degenerate(d);
            let line = if r.holds {
                let w = r.witness.as_ref().map(witness_json).unwrap_or_default();
                format!("nondegenerate: fails, witness {w}")
            } else {
                "nondegenerate: holds".to_string()
            };
            return Ok((line, !r.holds));
        }
        AxiomSpec::Grid(q) => {
            let ok = check_grid(d, *q);
            return Ok((format!("grid:{q}: {}", if ok { "holds" } else { "fails" }), ok));
        }
        AxiomSpec::Polar => match polar_rank(d) {
            Ok(r) => ("polar".to_string(), r),
            Err(e @ GeometryError::SizeLimitExceeded { .. }) => {
                return Err(Failure::too_large(e.to_string()))
            }
            Err(e) => return Ok((format!("polar: fails ({e})"), false)),
        },
    };
    Ok((format!("{name}: {}", describe(&report)), report.holds))
}

fn describe(report: &AxiomReport) -> String {
    let mut extras = Vec::new();
    if let Some(r) = report.rank {
        extras.push(format!("rank {r}"));
    }
    if let Some(s) = report.strong {
        extras.push(if s { "strong" } else { "not strong" }.to_string());
    }
    if let Some(u) = report.uniform {
        extras.push(if u { "uniform" } else { "mixed perp ranks" }.to_string());
    }
    let mut line = if report.holds { "holds" } else { "fails" }.to_string();
    if !extras.is_empty() {
        line += &format!(" ({})", extras.join(", "));
    }
    if let Some(w) = &report.witness {
        line += &format!(", witness {}", witness_json(w));
    }
    line
}

fn witness_json(w: &Witness) -> String {
    serde_json::to_string(w).expect("witnesses serialize")
}

fn cmd_iso(a: &Path, b: &Path) -> Result<ExitCode, Failure> {
    let g = read_graph_file(a)?;
    let h = read_graph_file(b)?;
    match are_isomorphic(&g, &h) {
        Ok(Some(map)) => {
            println!("isomorphic");
            let images: Vec<String> = map.iter().map(usize::to_string).collect();
            println!("{}", images.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Ok(None) => {
            println!("not isomorphic");
            Ok(ExitCode::from(EXIT_ANALYSIS))
        }
        Err(e) => Err(graph_failure(e)),
    }
}

fn cmd_params(input: &Path) -> Result<ExitCode, Failure> {
    let g = read_graph_file(input)?;
    println!("{}", srg_parameters(&g));
    Ok(ExitCode::SUCCESS)
}

fn read_graph_file(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))?;
    read_auto(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        match e {
            FormatError::GraphTooLarge { .. } => Failure::too_large(msg),
            _ => Failure::bad_input(msg),
        }
    })
}

fn read_geometry_file(path: &Path) -> Result<Geometry, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))?;
    Geometry::from_json(&text).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn graph_text(g: &Graph, format: GraphFormat) -> Result<String, Failure> {
    if g.n() as u64 > MAX_N {
        return Err(Failure::too_large(format!(
            "graph on {} vertices exceeds the format limit {MAX_N}",
            g.n()
        )));
    }
    Ok(match format {
        GraphFormat::Graph6 => write_graph6(g),
        GraphFormat::Sparse6 => write_sparse6(g),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    let mut data = text.to_string();
    if !data.ends_with('\n') {
        data.push('\n');
    }
    fs::write(path, data).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn generator_failure(e: GeneratorError) -> Failure {
    match e {
        GeneratorError::InstanceTooLarge { .. } => Failure::too_large(e.to_string()),
        GeneratorError::RankTooSmall { .. }
        | GeneratorError::InvalidDimension { .. }
        | GeneratorError::Algebra(_) => Failure::usage(e.to_string()),
        GeneratorError::Geometry(_) => Failure::analysis(e.to_string()),
    }
}

fn graph_failure(e: GraphError) -> Failure {
    match e {
        GraphError::SizeLimitExceeded { .. } => Failure::too_large(e.to_string()),
        _ => Failure::analysis(e.to_string()),
    }
}

fn reconstruct_failure(e: ReconstructError) -> Failure {
    fn too_large(e: &ReconstructError) -> bool {
        match e {
            ReconstructError::Graph(GraphError::SizeLimitExceeded { .. }) => true,
            ReconstructError::Geometry(GeometryError::SizeLimitExceeded { .. }) => true,
            ReconstructError::AtVertex { source, .. } => too_large(source),
            _ => false,
        }
    }
    if too_large(&e) {
        Failure::too_large(e.to_string())
    } else {
        Failure::analysis(e.to_string())
    }
}
