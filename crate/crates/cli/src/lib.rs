//! Command-line surface over the `monalg` library. Every command prints one
//! JSON report; see `schema/report.schema.json`.

pub mod input;

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monalg::algebras::{build_algebra, ehrhart_equality, is_normal, AlgebraKind};
use monalg::arith::{fmt_scalar, ExactScalar};
use monalg::canonical::{
    canonical_module_s, canonical_via_dual_cone, complete_intersection_check, gorenstein_experiment,
    observe_gorenstein, GorensteinObservation, GorensteinReport, DEFAULT_OMEGA_POINT_CAP,
};
use monalg::clutters::{
    alexander_dual, clutters_up_to_isomorphism, connected_graphs_up_to_isomorphism, dual_matrix, primitive_cycles,
    verify_duality_theorem, Graph,
};
use monalg::hilbert::{
    hilbert_basis_with_cap, ConeSpec, Lattice, DEFAULT_MEMBERSHIP_STATE_CAP, DEFAULT_SIMPLEX_VOLUME_CAP,
};
use monalg::polyhedra::{
    covering_polyhedron, is_integral_polytope, maximal_vertex_data, packing_polytope, Inequality, PolyhedronRep,
    DEFAULT_DOWN_SET_CAP,
};
use monalg::rounding::{
    irp_check, mfmc_check, RoundingCounterexample, RoundingSystem, DEFAULT_IP_POINT_CAP, DEFAULT_ORACLE_BOX,
    DEFAULT_ORACLE_GRID_CAP,
};
use monalg::Error;
use serde_json::{json, Map, Value};
use thiserror::Error as ThisError;

use input::{parse_input_with, parse_json_input, InputDocument, Validation};

pub const SCHEMA_VERSION: u64 = 1;
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) => e.exit_code(),
            _ => 1,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            CliError::Library(Error::Resource { .. }) => "resource_cap",
            CliError::Library(Error::Soundness(_)) => "soundness_failure",
            CliError::Library(Error::Parse { .. }) => "parse_error",
            _ => "domain_error",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "monalg", version, about = "Normality, integer rounding and canonical modules of monomial algebras")]
pub struct Cli {
    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the input document comes from. The document's own header decides
/// its kind; `--matrix`, `--clutter` and `--graph` are synonyms of `--input`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub clutter: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Read the document from standard input.
    #[arg(long)]
    pub stdin: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    #[command(flatten)]
    pub from: InputArgs,
    /// The document is JSON rather than the text format.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Also run the brute-force oracle route.
    #[arg(long)]
    pub oracle: bool,
    /// Right-hand sides range over `[0, B]^n` in the oracle.
    #[arg(long = "box", value_name = "B", default_value_t = DEFAULT_ORACLE_BOX)]
    pub bound: u32,
}

impl OracleArgs {
    fn box_bound(&self) -> Option<u32> {
        self.oracle.then_some(self.bound)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PolyhedronKind {
    /// `{x >= 0 : xA <= 1}`
    Packing,
    /// `{x >= 0 : xA >= 1}`
    Covering,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LatticeChoice {
    Full,
    Generated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepFamily {
    /// `xA = 1` rounding against bipartiteness over connected graphs.
    Bipartite,
    /// The five duality conditions over clutters.
    Duality,
    /// Gorenstein observations over connected graphs.
    Gorenstein,
}

fn algebra_kind(s: &str) -> Result<AlgebraKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn rounding_system(s: &str) -> Result<RoundingSystem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normality of the monomial algebras attached to `A`.
    Normality {
        #[command(flatten)]
        source: Source,
        /// Algebras (a)-(g) or their names; all when omitted.
        #[arg(long, value_delimiter = ',', value_parser = algebra_kind)]
        algebra: Vec<AlgebraKind>,
        #[arg(long, default_value_t = DEFAULT_DOWN_SET_CAP)]
        down_set_cap: u64,
    },
    /// Integer rounding of `xA <= 1`, `xA >= 1` and `xA = 1`.
    Irp {
        #[command(flatten)]
        source: Source,
        /// leq1, geq1 or eq1; all when omitted.
        #[arg(long, value_delimiter = ',', value_parser = rounding_system)]
        system: Vec<RoundingSystem>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = DEFAULT_DOWN_SET_CAP)]
        down_set_cap: u64,
    },
    /// Max-flow min-cut property of a clutter.
    Mfmc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// The five equivalent conditions relating a clutter and its dual.
    Duality {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Canonical module description and generators.
    Canmod {
        #[command(flatten)]
        source: Source,
        /// Grading vector `x0`, comma separated, rationals allowed. Selects the
        /// dual-cone technique on the columns of the input matrix.
        #[arg(long, allow_hyphen_values = true)]
        grading: Option<String>,
        #[arg(long, default_value_t = DEFAULT_OMEGA_POINT_CAP)]
        omega_point_cap: u64,
    },
    /// The a-invariant.
    Ainvariant {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        grading: Option<String>,
        #[arg(long, default_value_t = DEFAULT_OMEGA_POINT_CAP)]
        omega_point_cap: u64,
    },
    /// Gorenstein criteria for the down-set subring.
    Gorenstein {
        #[command(flatten)]
        source: Source,
        /// Also report the graph observations (open condition, unmixedness,
        /// denominators). Never asserted.
        #[arg(long)]
        experiment: bool,
        #[arg(long, default_value_t = DEFAULT_OMEGA_POINT_CAP)]
        omega_point_cap: u64,
    },
    /// Complete intersection criterion for a connected graph.
    CiCheck {
        #[command(flatten)]
        source: Source,
    },
    /// Minimal vertex covers.
    AlexanderDual {
        #[command(flatten)]
        source: Source,
    },
    /// Vertices and facets of the packing or covering polyhedron.
    Vertices {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = PolyhedronKind::Packing)]
        polyhedron: PolyhedronKind,
    },
    /// Hilbert basis of the cone over the columns.
    HilbertBasis {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = LatticeChoice::Full)]
        lattice: LatticeChoice,
        #[arg(long, default_value_t = DEFAULT_SIMPLEX_VOLUME_CAP)]
        simplex_volume_cap: u64,
    },
    /// Runs a check over every small instance of a family.
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamily,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        /// Edge bound for the clutter family.
        #[arg(long, default_value_t = 5)]
        max_edges: usize,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normality { .. } => "normality",
            Command::Irp { .. } => "irp",
            Command::Mfmc { .. } => "mfmc",
            Command::Duality { .. } => "duality",
            Command::Canmod { .. } => "canmod",
            Command::Ainvariant { .. } => "ainvariant",
            Command::Gorenstein { .. } => "gorenstein",
            Command::CiCheck { .. } => "ci-check",
            Command::AlexanderDual { .. } => "alexander-dual",
            Command::Vertices { .. } => "vertices",
            Command::HilbertBasis { .. } => "hilbert-basis",
            Command::Sweep { .. } => "sweep",
        }
    }

    fn source(&self) -> Option<&Source> {
        match self {
            Command::Normality { source, .. }
            | Command::Irp { source, .. }
            | Command::Mfmc { source, .. }
            | Command::Duality { source, .. }
            | Command::Canmod { source, .. }
            | Command::Ainvariant { source, .. }
            | Command::Gorenstein { source, .. }
            | Command::CiCheck { source }
            | Command::AlexanderDual { source }
            | Command::Vertices { source, .. }
            | Command::HilbertBasis { source, .. } => Some(source),
            Command::Sweep { .. } => None,
        }
    }

    fn validation(&self) -> Validation {
        match self {
            Command::HilbertBasis { .. } => Validation::Shape,
            Command::Canmod { grading: Some(_), .. } | Command::Ainvariant { grading: Some(_), .. } => {
                Validation::Shape
            }
            _ => Validation::Strict,
        }
    }
}

fn read_source(source: &Source, stdin: &mut dyn Read) -> Result<String, CliError> {
    let f = &source.from;
    let path = f.input.as_ref().or(f.matrix.as_ref()).or(f.clutter.as_ref()).or(f.graph.as_ref());
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Read { path: p.display().to_string(), source: e }),
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Read { path: "<stdin>".into(), source: e })?;
            Ok(s)
        }
    }
}

fn load(command: &Command, stdin: &mut dyn Read) -> Result<Option<InputDocument>, CliError> {
    let Some(source) = command.source() else { return Ok(None) };
    let text = read_source(source, stdin)?;
    let doc = if source.json {
        parse_json_input(&text, command.validation())?
    } else {
        parse_input_with(&text, command.validation())?
    };
    Ok(Some(doc))
}

fn scalar(x: &ExactScalar) -> Value {
    Value::String(fmt_scalar(x))
}

fn scalars(v: &[ExactScalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

fn inequality(h: &Inequality) -> Value {
    json!({"normal": scalars(&h.normal), "offset": scalar(&h.offset)})
}

/// `<c, x> >= bound` form.
fn lower_bound(h: &Inequality) -> Value {
    let c: Vec<ExactScalar> = h.normal.iter().map(|x| -x).collect();
    json!({"coefficients": scalars(&c), "at_least": scalar(&-&h.offset)})
}

fn one_based(e: &[usize]) -> Vec<usize> {
    e.iter().map(|v| v + 1).collect()
}

fn parse_grading(s: &str) -> Result<Vec<ExactScalar>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (num, den) = t.split_once('/').unwrap_or((t, "1"));
            match (num.parse::<i64>(), den.parse::<i64>()) {
                (Ok(p), Ok(q)) if q != 0 => Ok(monalg::arith::frac(p, q)),
                _ => Err(CliError::Usage(format!("grading entry `{t}` is not a rational number"))),
            }
        })
        .collect()
}

fn counterexample(c: &Option<RoundingCounterexample>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!({
            "a": c.a,
            "lp_value": scalar(&c.lp_value),
            "rounded": c.rounded.to_string(),
            "ip_value": c.ip_value,
        }),
    }
}

fn gorenstein_json(g: &GorensteinReport) -> Value {
    json!({
        "gorenstein": g.gorenstein,
        "route": g.route.name(),
        "sufficient_condition": g.sufficient_condition,
        "packing_integral": g.packing_integral,
        "integral_condition": g.integral_condition,
        "necessary_condition": g.necessary_condition,
    })
}

fn observation_json(o: &GorensteinObservation) -> Value {
    json!({
        "gorenstein": o.gorenstein,
        "norm_condition": o.norm_condition,
        "mismatch": o.mismatch,
        "unmixed": o.unmixed,
        "denominators_in_one_two": o.denominators_in_one_two,
        "floor_form_agrees": o.floor_form_agrees,
    })
}

fn polyhedron_json(p: &PolyhedronRep) -> Value {
    json!({
        "vertices": p.vertices.iter().map(|v| scalars(v)).collect::<Vec<_>>(),
        "rays": p.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "inequalities": p.inequalities.iter().map(inequality).collect::<Vec<_>>(),
    })
}

fn graph_json(g: &Graph) -> Value {
    json!({"vertices": g.vertex_count(), "edges": g.edges().iter().map(|(u, v)| [u + 1, v + 1]).collect::<Vec<_>>()})
}

fn canmod_result(
    doc: &InputDocument,
    grading: &Option<String>,
    point_cap: u64,
    caps: &mut Map<String, Value>,
    full: bool,
) -> Result<Value, CliError> {
    if let Some(g) = grading {
        let x0 = parse_grading(g)?;
        let r = canonical_via_dual_cone(&doc.columns()?, &x0)?;
        caps.insert("simplex_volume_cap".into(), json!(DEFAULT_SIMPLEX_VOLUME_CAP));
        let mut out = json!({"route": "dual_cone", "a_invariant": r.a_invariant});
        if full {
            out["grading"] = scalars(&r.data.grading);
            out["integral_basis"] = json!(r.data.integral_basis);
            out["b_vector"] = json!(r.data.b_vector);
            out["omega_inequalities"] = Value::Array(r.omega_inequalities.iter().map(lower_bound).collect());
            out["minimizer"] = json!(r.minimizer);
        }
        return Ok(out);
    }
    let a = doc.matrix()?;
    let r = canonical_module_s(&a, point_cap)?;
    caps.insert("omega_point_cap".into(), json!(point_cap));
    caps.insert("down_set_cap".into(), json!(DEFAULT_DOWN_SET_CAP));
    caps.insert("simplex_volume_cap".into(), json!(DEFAULT_SIMPLEX_VOLUME_CAP));
    let mut out = json!({
        "route": "maximal_vertices",
        "a_invariant": r.a_invariant,
        "a_invariant_from_omega": r.a_invariant_from_omega,
        "floor_form_agrees": r.floor_form_agrees,
    });
    if full {
        let mvd = &r.maximal_vertex_data;
        out["maximal_vertices"] = Value::Array(
            mvd.maximal_vertices
                .iter()
                .zip(&mvd.denominators)
                .zip(&mvd.norms)
                .map(|((v, d), n)| json!({"vertex": scalars(v), "denominator": d.to_string(), "norm": scalar(n)}))
                .collect(),
        );
        out["omega_inequalities"] = Value::Array(r.omega_inequalities.iter().map(lower_bound).collect());
        out["omega_generators"] =
            Value::Array(r.omega_generators.iter().map(|(a, b)| json!({"a": a, "degree": b})).collect());
        out["degree_bound"] = json!(r.degree_bound);
        out["gorenstein"] = gorenstein_json(&r.gorenstein);
    }
    Ok(out)
}

fn execute(command: &Command, doc: Option<&InputDocument>, caps: &mut Map<String, Value>) -> Result<Value, CliError> {
    let doc = || doc.ok_or_else(|| CliError::Usage("this command needs an input document".into()));
    match command {
        Command::Normality { algebra, down_set_cap, .. } => {
            let a = doc()?.matrix()?;
            caps.insert("down_set_cap".into(), json!(down_set_cap));
            caps.insert("simplex_volume_cap".into(), json!(DEFAULT_SIMPLEX_VOLUME_CAP));
            let kinds = if algebra.is_empty() { AlgebraKind::ALL.to_vec() } else { algebra.clone() };
            let mut out = Vec::new();
            for kind in kinds {
                let spec = build_algebra(kind, &a, *down_set_cap)?;
                let cert = is_normal(&spec)?;
                let mut entry = json!({
                    "algebra": kind.name(),
                    "normal": cert.verdict,
                    "generators": spec.generators.len(),
                    "witness": cert.witness,
                });
                if kind == AlgebraKind::Ehrhart {
                    let eq = ehrhart_equality(&a)?;
                    entry["ehrhart_equality"] = json!(eq.verdict);
                    entry["ehrhart_witness"] = json!(eq.witness);
                }
                out.push(entry);
            }
            Ok(json!({"algebras": out}))
        }
        Command::Irp { system, oracle, down_set_cap, .. } => {
            let a = doc()?.matrix()?;
            caps.insert("down_set_cap".into(), json!(down_set_cap));
            caps.insert("oracle_box".into(), json!(oracle.box_bound()));
            caps.insert("oracle_grid_cap".into(), json!(DEFAULT_ORACLE_GRID_CAP));
            caps.insert("ip_point_cap".into(), json!(DEFAULT_IP_POINT_CAP));
            let systems = if system.is_empty() { RoundingSystem::ALL.to_vec() } else { system.clone() };
            let mut out = Vec::new();
            for s in systems {
                let v = irp_check(s, &a, oracle.box_bound(), *down_set_cap)?;
                out.push(json!({
                    "system": s.name(),
                    "verdict": v.theorem_route,
                    "theorem_route": v.theorem_route,
                    "torsion_route": v.torsion_route,
                    "oracle_route": v.oracle_route,
                    "oracle_box": v.oracle_box,
                    "counterexample": counterexample(&v.counterexample),
                }));
            }
            Ok(json!({"systems": out}))
        }
        Command::Mfmc { oracle, .. } => {
            let a = doc()?.matrix()?;
            caps.insert("oracle_box".into(), json!(oracle.box_bound()));
            let v = mfmc_check(&a, oracle.box_bound())?;
            Ok(json!({
                "verdict": v.theorem_route,
                "theorem_route": v.theorem_route,
                "covering_integral": v.covering_integral,
                "rees_normal": v.rees_normal,
                "fractional_vertex": v.fractional_vertex.as_deref().map(scalars),
                "oracle_route": v.oracle_route,
                "oracle_box": v.oracle_box,
                "counterexample": v.counterexample.map(|c| json!({
                    "a": c.a,
                    "lp_value": scalar(&c.lp_value),
                    "cover_ip": c.cover_ip,
                    "pack_ip": c.pack_ip,
                })),
            }))
        }
        Command::Duality { oracle, .. } => {
            let c = doc()?.clutter()?;
            caps.insert("oracle_box".into(), json!(oracle.box_bound()));
            caps.insert("down_set_cap".into(), json!(DEFAULT_DOWN_SET_CAP));
            let r = verify_duality_theorem(&c, oracle.box_bound())?;
            let star = dual_matrix(&doc()?.matrix()?)?;
            let dual_rees = is_normal(&build_algebra(AlgebraKind::Rees, &star, 0)?)?;
            Ok(json!({
                "verdict": r.verdict,
                "conditions": {
                    "rees_normal": r.rees_normal,
                    "dual_downset_normal": r.dual_downset_normal,
                    "gamma_hilbert_basis": r.gamma_hilbert_basis,
                    "geq1_rounding": r.geq1_rounding,
                    "dual_leq1_rounding": r.dual_leq1_rounding,
                },
                "dual_rees_normal": dual_rees.verdict,
                "dual_rees_witness": dual_rees.witness,
                "oracle_box": r.oracle_box,
            }))
        }
        Command::Canmod { grading, omega_point_cap, .. } => canmod_result(doc()?, grading, *omega_point_cap, caps, true),
        Command::Ainvariant { grading, omega_point_cap, .. } => {
            canmod_result(doc()?, grading, *omega_point_cap, caps, false)
        }
        Command::Gorenstein { experiment, omega_point_cap, .. } => {
            let d = doc()?;
            let r = canonical_module_s(&d.matrix()?, *omega_point_cap)?;
            caps.insert("omega_point_cap".into(), json!(omega_point_cap));
            let mut out = gorenstein_json(&r.gorenstein);
            out["a_invariant"] = json!(r.a_invariant);
            if *experiment {
                let g = d.graph()?;
                out["experiment"] = match observe_gorenstein(&g)? {
                    Some(o) => observation_json(&o),
                    None => Value::Null,
                };
            }
            Ok(out)
        }
        Command::CiCheck { .. } => {
            let g = doc()?.graph()?;
            let ci = complete_intersection_check(&g)?;
            let cycles = primitive_cycles(&g);
            Ok(json!({
                "complete_intersection": ci,
                "bipartite": g.is_bipartite(),
                "primitive_cycles": cycles.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
                "cycle_rank": g.edges().len() as i64 - g.vertex_count() as i64 + 1,
            }))
        }
        Command::AlexanderDual { .. } => {
            let dual = alexander_dual(&doc()?.clutter()?)?;
            let d = InputDocument::Clutter(dual.clone());
            Ok(json!({
                "vertices": dual.vertex_count(),
                "edges": dual.edges().iter().map(|e| one_based(e)).collect::<Vec<_>>(),
                "text": d.to_text(),
            }))
        }
        Command::Vertices { polyhedron, .. } => {
            let a = doc()?.matrix()?;
            let mut out = match polyhedron {
                PolyhedronKind::Packing => {
                    let p = packing_polytope(&a)?;
                    let mvd = maximal_vertex_data(&p)?;
                    let mut o = polyhedron_json(&p);
                    o["integral"] = json!(is_integral_polytope(&p)?);
                    o["maximal_vertices"] = Value::Array(
                        mvd.maximal_vertices
                            .iter()
                            .zip(&mvd.denominators)
                            .map(|(v, d)| json!({"vertex": scalars(v), "denominator": d.to_string()}))
                            .collect(),
                    );
                    o
                }
                PolyhedronKind::Covering => {
                    let q = covering_polyhedron(&a)?;
                    let mut o = polyhedron_json(&q);
                    o["integral"] = json!(q.vertices.iter().all(|v| v.iter().all(|x| x.is_integer())));
                    o
                }
            };
            out["polyhedron"] = json!(match polyhedron {
                PolyhedronKind::Packing => "packing",
                PolyhedronKind::Covering => "covering",
            });
            Ok(out)
        }
        Command::HilbertBasis { lattice, simplex_volume_cap, .. } => {
            let d = doc()?;
            let cols = d.columns()?;
            let dim = cols[0].len();
            let l = match lattice {
                LatticeChoice::Full => Lattice::Full,
                LatticeChoice::Generated => Lattice::Generated,
            };
            caps.insert("simplex_volume_cap".into(), json!(simplex_volume_cap));
            let basis = hilbert_basis_with_cap(&ConeSpec::new(dim, cols.clone())?.with_lattice(l), *simplex_volume_cap)?;
            let mut gens = cols;
            gens.sort();
            gens.dedup();
            gens.retain(|g| g.iter().any(|&x| x != 0));
            Ok(json!({
                "lattice": match lattice { LatticeChoice::Full => "full", LatticeChoice::Generated => "generated" },
                "basis": basis,
                "size": basis.len(),
                "generators_are_basis": basis == gens,
            }))
        }
        Command::Sweep { family, max_vertices, max_edges, oracle } => {
            caps.insert("max_vertices".into(), json!(max_vertices));
            caps.insert("oracle_box".into(), json!(oracle.box_bound()));
            sweep(*family, *max_vertices, *max_edges, oracle.box_bound(), caps)
        }
    }
}

fn connected_graphs(max_vertices: usize) -> Result<Vec<Graph>, Error> {
    let mut out = Vec::new();
    for n in 2..=max_vertices {
        out.extend(connected_graphs_up_to_isomorphism(n)?);
    }
    Ok(out)
}

fn sweep(
    family: SweepFamily,
    max_vertices: usize,
    max_edges: usize,
    bound: Option<u32>,
    caps: &mut Map<String, Value>,
) -> Result<Value, CliError> {
    match family {
        SweepFamily::Bipartite => {
            let graphs = connected_graphs(max_vertices)?;
            let mut mismatches = Vec::new();
            for g in &graphs {
                let v = irp_check(RoundingSystem::Eq1, &g.incidence_matrix()?, bound, DEFAULT_DOWN_SET_CAP)?;
                if v.theorem_route != g.is_bipartite() || v.oracle_route.is_some_and(|o| o != g.is_bipartite()) {
                    mismatches.push(graph_json(g));
                }
            }
            Ok(json!({"family": "bipartite", "instances": graphs.len(), "mismatches": mismatches}))
        }
        SweepFamily::Duality => {
            caps.insert("max_edges".into(), json!(max_edges));
            let (mut instances, mut inadmissible, mut holding) = (0usize, 0usize, 0usize);
            for n in 1..=max_vertices {
                for c in clutters_up_to_isomorphism(n, max_edges)? {
                    instances += 1;
                    match verify_duality_theorem(&c, bound) {
                        Ok(r) => holding += r.verdict as usize,
                        Err(Error::Domain(_)) => inadmissible += 1,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            Ok(json!({
                "family": "duality",
                "instances": instances,
                "inadmissible": inadmissible,
                "conditions_true": holding,
                "conditions_false": instances - inadmissible - holding,
                "mismatches": [],
            }))
        }
        SweepFamily::Gorenstein => {
            caps.insert("omega_point_cap".into(), json!(DEFAULT_OMEGA_POINT_CAP));
            let obs = gorenstein_experiment(max_vertices)?;
            let pick = |f: &dyn Fn(&GorensteinObservation) -> bool| -> Vec<Value> {
                obs.iter().filter(|o| f(o)).map(|o| graph_json(&o.graph)).collect()
            };
            Ok(json!({
                "family": "gorenstein",
                "instances": obs.len(),
                "gorenstein": obs.iter().filter(|o| o.gorenstein).count(),
                "mismatches": pick(&|o| o.mismatch),
                "gorenstein_not_unmixed": pick(&|o| o.gorenstein && !o.unmixed),
                "denominators_outside_one_two": pick(&|o| !o.denominators_in_one_two),
                "floor_form_disagrees": pick(&|o| !o.floor_form_agrees),
            }))
        }
    }
}

/// Report document and exit code for one parsed invocation.
pub fn run_command(command: &Command, stdin: &mut dyn Read) -> (Value, i32) {
    let start = Instant::now();
    let mut caps = Map::new();
    caps.insert("membership_state_cap".into(), json!(DEFAULT_MEMBERSHIP_STATE_CAP));
    let loaded = load(command, stdin);
    let input = match &loaded {
        Ok(Some(d)) => json!({"kind": d.kind(), "digest": d.digest(), "document": d.to_json()}),
        _ => Value::Null,
    };
    let outcome = loaded.and_then(|d| execute(command, d.as_ref(), &mut caps));
    let (status, result, error, code) = match outcome {
        Ok(r) => ("ok", r, Value::Null, 0),
        Err(e) => {
            let mut err = json!({"message": e.to_string()});
            match &e {
                CliError::Library(Error::Resource { cap, limit, .. }) => {
                    err["cap"] = json!(cap);
                    err["limit"] = json!(limit);
                }
                CliError::Library(Error::Parse { line, column, .. }) => {
                    err["line"] = json!(line);
                    err["column"] = json!(column);
                }
                _ => {}
            }
            (e.status(), Value::Null, err, e.exit_code())
        }
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command.name(),
        "status": status,
        "input": input,
        "caps": caps,
        "result": result,
        "error": error,
        "timings": {"total_ms": start.elapsed().as_secs_f64() * 1e3},
    });
    (report, code)
}

/// Parses `args` (including the program name), runs the command and
/// delivers the report. Returns the process exit code.
pub fn main_with(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn std::io::Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = run_command(&cli.command, stdin);
    if let Some(msg) = report["error"]["message"].as_str() {
        eprintln!("monalg {}: {msg}", cli.command.name());
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let written = match &cli.output {
        Some(path) => write_atomically(path, &text),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Write { path: "<stdout>".into(), source: e }),
    };
    if let Err(e) = written {
        eprintln!("monalg: {e}");
        return 1;
    }
    code
}

fn write_atomically(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let err = |e: std::io::Error| CliError::Write { path: path.display().to_string(), source: e };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(text.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
