//! `bclique`: batch front end for the B-restricted clique polynomial toolkit.
//!
//! Exit codes: 0 ok, 1 selftest failure, 2 input error, 3 graph not regular,
//! 4 search limit exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use bclique::cpoly::{cpoly, cpoly_weighted, Method};
use bclique::graph::{generate, parse_edge_list, parse_vertex_set, parse_weights, Family, Graph, VertexSet};
use bclique::hom::{monotonicity_audit, AuditInstance, AuditStatus, SearchLimits};
use bclique::poly::rational_to_string;
use bclique::roots::{zeta_with_precision, RootKind, RootResult};
use bclique::selftest::{self, Scale};
use bclique::spectral::{clique_bound_report, spectral_profile, SpectralError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "bclique",
    version,
    about = "B-restricted clique polynomials, their roots and spectral checks"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Vertex,
    Edge,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Vertex => Method::Vertex,
            MethodArg::Edge => Method::Edge,
        }
    }
}

#[derive(Args)]
struct GraphB {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Vertex-set file; all vertices when omitted.
    #[arg(long)]
    b: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print C_B(G; x).
    Poly {
        #[command(flatten)]
        input: GraphB,
        /// Per-vertex weights for the blow-up polynomial (direct method only).
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Largest negative root of C_B, exact or bracketed.
    Zeta {
        #[command(flatten)]
        input: GraphB,
        /// Bracket width 2^-k.
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(20..=200))]
        precision: u32,
    },
    /// (n, d, λ) profile of a regular graph.
    Spectral {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Spectral clique-count bounds for B.
    Bounds {
        #[command(flatten)]
        input: GraphB,
    },
    /// Root criterion and exhaustive search for a surjective homomorphism G → H with f(B_G) = B_H.
    Hom {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        graph2: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        b2: Option<PathBuf>,
        #[arg(long, default_value_t = SearchLimits::default().max_nodes)]
        cap_nodes: u64,
        #[arg(long)]
        cap_ms: Option<u64>,
        /// Where counterexamples are written.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value = "small", value_parser = parse_scale)]
        scale: Scale,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a standard or seeded random graph as an edge list.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        d: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Complete,
    Cycle,
    Path,
    Star,
    Petersen,
    Gnp,
    Regular,
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse()
}

enum Failure {
    Input(String),
    NotRegular(String),
    Limit(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::NotRegular(_) => 3,
            Failure::Limit(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::NotRegular(m) | Failure::Limit(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_edge_list(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_b(path: Option<&Path>, g: &Graph) -> Result<VertexSet, Failure> {
    match path {
        None => Ok(VertexSet::full(g.n())),
        Some(p) => parse_vertex_set(&read(p)?, g).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
    }
}

fn spectral_failure(e: SpectralError) -> Failure {
    match e {
        SpectralError::NotRegular => Failure::NotRegular(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn root_text(r: &RootResult) -> String {
    let mut s = match r.kind() {
        RootKind::NoNegativeRoot => return "no_negative_root".to_string(),
        RootKind::Exact(x) => format!("exact {}", rational_to_string(x)),
        RootKind::Bracket { lo, hi } => format!("bracket ({}, {})", rational_to_string(lo), rational_to_string(hi)),
    };
    if let Some(f) = r.float_value() {
        s += &format!(" float {f}");
    }
    if let Some(m) = r.multiplicity() {
        s += &format!(" multiplicity {m}");
    }
    s
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Poly { input, weights, method } => {
            let g = load_graph(&input.graph)?;
            let b = load_b(input.b.as_deref(), &g)?;
            let p = match weights {
                None => cpoly(&g, &b, method.into()),
                Some(path) => {
                    if !matches!(method, MethodArg::Direct) {
                        return Err(Failure::Input("--weights supports only --method direct".into()));
                    }
                    let w = parse_weights(&read(&path)?, &g)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    cpoly_weighted(&g, &b, &w).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
                }
            };
            let out = if json {
                pretty(&json!({ "polynomial": p.to_string(), "coefficients": p }))
            } else {
                format!("{p}\n")
            };
            Ok((out, 0))
        }
        Command::Zeta { input, precision } => {
            let g = load_graph(&input.graph)?;
            let b = load_b(input.b.as_deref(), &g)?;
            let p = cpoly(&g, &b, Method::Direct);
            let r = zeta_with_precision(&p, precision).expect("clique polynomials are clique-shaped");
            let out = if json {
                pretty(&json!({ "polynomial": p.to_string(), "precision": precision, "zeta": r }))
            } else {
                format!("{}\n", root_text(&r))
            };
            Ok((out, 0))
        }
        Command::Spectral { graph } => {
            let g = load_graph(&graph)?;
            let profile = spectral_profile(&g).map_err(spectral_failure)?;
            let out = if json {
                pretty(&serde_json::to_value(&profile).unwrap())
            } else {
                let eig: Vec<String> = profile.eigenvalues.iter().map(|x| format!("{x:.9}")).collect();
                format!(
                    "n = {}\nd = {}\nlambda = {:.9}\neigenvalues = {}\n",
                    profile.n,
                    profile.d,
                    profile.lambda,
                    eig.join(" ")
                )
            };
            Ok((out, 0))
        }
        Command::Bounds { input } => {
            let g = load_graph(&input.graph)?;
            let b = load_b(input.b.as_deref(), &g)?;
            let report = clique_bound_report(&g, &b).map_err(spectral_failure)?;
            let out = if json {
                pretty(&json!({ "all_satisfied": report.all_satisfied(), "rows": report.rows }))
            } else {
                report.to_text()
            };
            Ok((out, 0))
        }
        Command::Hom {
            graph,
            graph2,
            b,
            b2,
            cap_nodes,
            cap_ms,
            out_dir,
        } => {
            let g = load_graph(&graph)?;
            let h = load_graph(&graph2)?;
            let b_g = load_b(b.as_deref(), &g)?;
            let b_h = load_b(b2.as_deref(), &h)?;
            if b_g.is_empty() || b_h.is_empty() {
                return Err(Failure::Input("the criterion needs nonempty B-sets".into()));
            }
            let limits = SearchLimits {
                max_nodes: cap_nodes,
                max_time: cap_ms.map(Duration::from_millis),
                ..SearchLimits::default()
            };
            if g.n() > limits.max_source_vertices {
                return Err(Failure::Limit(format!(
                    "source graph has {} vertices, above the search cap of {}",
                    g.n(),
                    limits.max_source_vertices
                )));
            }
            let inst = AuditInstance {
                id: "hom".into(),
                g,
                h,
                b_g,
                b_h,
            };
            let report = monotonicity_audit(std::slice::from_ref(&inst), &limits, out_dir.as_deref())
                .map_err(|e| Failure::Input(format!("cannot write counterexample: {e}")))?;
            let row = &report.rows[0];
            let verdict = row.verdict.as_ref().expect("both B-sets are nonempty");
            let outcome = match row.status {
                AuditStatus::Skipped => "limit",
                AuditStatus::NoHomomorphism => "none",
                AuditStatus::Satisfied | AuditStatus::Violated => "found",
            };
            let out = if json {
                pretty(&json!({
                    "criterion": verdict,
                    "search": { "outcome": outcome, "mapping": row.mapping },
                    "monotonicity_holds": row.status != AuditStatus::Violated,
                }))
            } else {
                let mut s = format!(
                    "zeta_g: {}\nzeta_h: {}\nverdict: {}\nmargin: {}\nsearch: {outcome}\n",
                    root_text(&verdict.zeta_g),
                    root_text(&verdict.zeta_h),
                    serde_json::to_value(verdict.verdict).unwrap().as_str().unwrap(),
                    verdict.margin
                );
                if let Some(m) = &row.mapping {
                    let tokens: Vec<String> =
                        m.0.iter()
                            .enumerate()
                            .map(|(v, &x)| format!("{}->{}", inst.g.token(v), inst.h.token(x)))
                            .collect();
                    s += &format!("mapping: {}\n", tokens.join(" "));
                }
                if row.status == AuditStatus::Violated {
                    s += "root monotonicity FAILED for this pair\n";
                }
                s
            };
            if row.status == AuditStatus::Skipped {
                print!("{out}");
                return Err(Failure::Limit("homomorphism search exceeded its limits".into()));
            }
            Ok((out, 0))
        }
        Command::Selftest { scale, seed } => {
            let summary = selftest::run(scale, seed);
            let out = if json { summary.to_json() } else { summary.to_text() };
            Ok((out, if summary.passed { 0 } else { 1 }))
        }
        Command::Generate { family, n, d, p, seed } => {
            let f = match family {
                FamilyArg::Complete => Family::Complete { n },
                FamilyArg::Cycle => Family::Cycle { n },
                FamilyArg::Path => Family::Path { n },
                FamilyArg::Star => Family::Star { leaves: n },
                FamilyArg::Petersen => Family::Petersen,
                FamilyArg::Gnp => Family::Gnp { n, p, seed },
                FamilyArg::Regular => Family::RandomRegular {
                    n,
                    d,
                    seed,
                    max_attempts: bclique::graph::DEFAULT_REGULAR_ATTEMPTS,
                },
            };
            let g = generate(f).map_err(|e| Failure::Input(e.to_string()))?;
            Ok((g.to_edge_list(), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
