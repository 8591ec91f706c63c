//! The `hermlat` command line: argument parsing, structured input, JSON and
//! plain-text reports, exit codes and run manifests.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 usage or parse
//! error, 3 domain error, 4 budget or cap exceeded.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::ball::Interval;
use crate::bounds::{self, verify, BigBound, FieldParams, KParams};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::field::{load_field_file, preset, FieldElement, FractionalIdeal, NumberField};
use crate::hermitian::{bounded_basis, coefficient_bound_check, phi_enumerate, FVector, HermitianLattice};
use crate::homology::{card_ell, card_ell_brute_force, gabber_check, smith_normal_form, ElementaryDivisors, IntMatrix};
use crate::ideal_lattice::{residue_representatives, IdealLattice};
use crate::rational::{fmt_rat, parse_rat, to_f64, Rat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hermlat", version, about = "Exact Hermitian lattice geometry and torsion bound arithmetic")]
pub struct Cli {
    /// Emit JSON instead of a plain-text report
    #[arg(long, global = true)]
    json: bool,
    /// TOML file with `precision` and `node_budget`
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Embedding precision in bits (overrides HERMLAT_PRECISION)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Enumeration node cap (overrides HERMLAT_NODE_BUDGET)
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Write a run manifest (JSON) to this path
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Preset: rational, gaussian, eisenstein, real_quad_2, real_quad_5, cyclotomic_5
    #[arg(long, default_value = "gaussian")]
    field: String,
    /// Field description file (JSON, or TOML by extension); overrides --field
    #[arg(long)]
    field_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct IdealArgs {
    /// Generator of a principal ideal, as integral-basis coordinates "a,b,..."
    #[arg(long, conflicts_with = "ideal_basis")]
    ideal_gen: Option<String>,
    /// Z-basis of the ideal, elements separated by ';'
    #[arg(long)]
    ideal_basis: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct GramArgs {
    /// Hermitian Gram matrix as JSON; entries are rationals ("1/2") or
    /// coordinate lists (["1/2", "1"]). Prefix with @ to read a file.
    #[arg(long)]
    gram: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a number field
    Field {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Closest vector of an ideal lattice to a field element
    Cvp {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        ideal: IdealArgs,
        /// Target element as integral-basis coordinates
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Shortest nonzero vector of an ideal lattice
    Svp {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        ideal: IdealArgs,
    },
    /// Small representatives of O_F modulo an integral ideal
    Residues {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        ideal: IdealArgs,
        /// Largest ideal norm accepted
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
    },
    /// Minimum and minimal vectors of a Hermitian lattice
    Minvecs {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        gram: GramArgs,
    },
    /// Well-roundedness of a Hermitian lattice
    Wellrounded {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        gram: GramArgs,
    },
    /// Bounded basis of a well-rounded lattice and the coefficient bound
    Basis {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        gram: GramArgs,
    },
    /// Enumerate combinations of a basis with small coefficients
    Phicount {
        #[command(flatten)]
        field: FieldArgs,
        /// Basis vectors as JSON (list of coordinate vectors); default identity
        #[arg(long)]
        basis: Option<String>,
        /// Rank for the default identity basis
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Coefficient bound T on sum |sigma(x)|^2
        #[arg(long)]
        t: String,
        /// Largest number of vectors to list
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
    },
    /// Smith normal form of an integer matrix
    Snf {
        /// Integer matrix: "[[1,2],[3,4]]", "1 2; 3 4", or @file
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Cokernel torsion against the column-norm bound
    Gabber {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Order of a finite abelian group modulo its elements of order <= l
    Cardell {
        /// Cyclic orders "2,8"
        #[arg(long, conflicts_with = "matrix")]
        orders: Option<String>,
        /// Or: the torsion of the cokernel of this matrix
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long)]
        ell: u64,
    },
    /// Every constant of the K-theory torsion bound for one field signature
    Kbound {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r1: u32,
        #[arg(long)]
        r2: u32,
        #[arg(long)]
        disc: String,
        #[arg(long)]
        n: u32,
    },
    /// Run every inequality grid
    VerifyPaper {
        /// Include every individual check in the report
        #[arg(long)]
        full: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Field { .. } => "field",
            Command::Cvp { .. } => "cvp",
            Command::Svp { .. } => "svp",
            Command::Residues { .. } => "residues",
            Command::Minvecs { .. } => "minvecs",
            Command::Wellrounded { .. } => "wellrounded",
            Command::Basis { .. } => "basis",
            Command::Phicount { .. } => "phicount",
            Command::Snf { .. } => "snf",
            Command::Gabber { .. } => "gabber",
            Command::Cardell { .. } => "cardell",
            Command::Kbound { .. } => "kbound",
            Command::VerifyPaper { .. } => "verify-paper",
        }
    }
}

/// A command's result: the JSON report and whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

/// Inputs and digests of one run; identical inputs give identical digests.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs_sha256: String,
    pub version: String,
    pub precision_bits: u32,
    pub node_budget: u64,
    pub elapsed_ms: u128,
    pub result_sha256: String,
    pub exit_code: i32,
}

/// Output of a run, for callers that do their own printing.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Dimension(_) => EXIT_USAGE,
        Error::BudgetExceeded(_)
        | Error::CapExceeded(_)
        | Error::SearchExhausted(_)
        | Error::PrecisionUnreachable(_)
        | Error::Undecided => EXIT_BUDGET,
        _ => EXIT_DOMAIN,
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parse `args` (program name first), run, and collect the output.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    RunOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let start = Instant::now();
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => return RunOutput { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let result = execute(&cli.command, config);
    let (code, stdout, stderr, digest_src) = match result {
        Ok(out) => {
            let code = if out.ok { EXIT_OK } else { EXIT_CHECK_FAILED };
            let text =
                if cli.json { serde_json::to_string_pretty(&out.report).expect("serializable") + "\n" } else { render_text(&out.report) };
            (code, text, String::new(), out.report.to_string())
        }
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n"), format!("error: {e}")),
    };
    let mut stderr = stderr;
    if let Some(path) = &cli.manifest {
        let inputs: Vec<String> = manifest_inputs(&args);
        let m = RunManifest {
            command: cli.command.name().to_string(),
            inputs_sha256: sha256_hex(inputs.join("\0").as_bytes()),
            version: env!("CARGO_PKG_VERSION").to_string(),
            precision_bits: config.precision_bits,
            node_budget: config.node_budget,
            elapsed_ms: start.elapsed().as_millis(),
            result_sha256: sha256_hex(digest_src.as_bytes()),
            exit_code: code,
        };
        let text = serde_json::to_string_pretty(&m).expect("serializable");
        if let Err(e) = std::fs::write(path, text + "\n") {
            stderr.push_str(&format!("warning: cannot write manifest {}: {e}\n", path.display()));
        }
    }
    RunOutput { code, stdout, stderr }
}

/// Arguments that determine the result: everything but the program name
/// and the manifest path, with `@file` contents inlined.
fn manifest_inputs(args: &[OsString]) -> Vec<String> {
    let mut out = vec![];
    let mut skip = false;
    for a in args.iter().skip(1) {
        let s = a.to_string_lossy().to_string();
        if skip {
            skip = false;
            continue;
        }
        if s == "--manifest" {
            skip = true;
            continue;
        }
        if s.starts_with("--manifest=") {
            continue;
        }
        match s.strip_prefix('@').map(std::fs::read_to_string) {
            Some(Ok(text)) => out.push(text),
            _ => out.push(s),
        }
    }
    out
}

fn resolve_config(cli: &Cli) -> Result<Config> {
    let mut c = Config::default();
    if let Some(p) = &cli.config {
        c = c.merge_file(p)?;
    }
    c = c.merge_env()?;
    if let Some(p) = cli.precision {
        c.precision_bits = p;
    }
    if let Some(b) = cli.node_budget {
        c.node_budget = b;
    }
    Ok(c)
}

pub fn execute_command(cli: &Cli) -> Result<Outcome> {
    execute(&cli.command, resolve_config(cli)?)
}

fn execute(cmd: &Command, config: Config) -> Result<Outcome> {
    match cmd {
        Command::Field { field } => cmd_field(&load_field(field, config)?),
        Command::Cvp { field, ideal, target } => {
            let f = load_field(field, config)?;
            let i = load_ideal(&f, ideal)?;
            cmd_cvp(&f, i, &parse_element(&f, target)?)
        }
        Command::Svp { field, ideal } => {
            let f = load_field(field, config)?;
            let i = load_ideal(&f, ideal)?;
            cmd_svp(&f, i)
        }
        Command::Residues { field, ideal, cap } => {
            let f = load_field(field, config)?;
            let i = load_ideal(&f, ideal)?;
            cmd_residues(&f, &i, *cap)
        }
        Command::Minvecs { field, gram } => cmd_minvecs(&load_lattice(field, gram, config)?),
        Command::Wellrounded { field, gram } => cmd_wellrounded(&load_lattice(field, gram, config)?),
        Command::Basis { field, gram } => cmd_basis(&load_lattice(field, gram, config)?),
        Command::Phicount { field, basis, rank, t, cap } => {
            let f = load_field(field, config)?;
            let basis = match basis {
                Some(text) => parse_vectors(&f, &read_arg(text)?)?,
                None => crate::hermitian::linalg::identity(&f, *rank),
            };
            cmd_phicount(&f, &basis, &parse_rat(t)?, *cap)
        }
        Command::Snf { matrix } => cmd_snf(&parse_matrix(matrix)?),
        Command::Gabber { matrix } => cmd_gabber(&parse_matrix(matrix)?),
        Command::Cardell { orders, matrix, ell } => cmd_cardell(orders.as_deref(), matrix.as_deref(), *ell),
        Command::Kbound { d, r1, r2, disc, n } => {
            let disc = disc.trim().parse().map_err(|_| Error::Parse(format!("bad discriminant `{disc}`")))?;
            cmd_kbound(&FieldParams::with_disc(*d, *r1, *r2, disc)?, *n)
        }
        Command::VerifyPaper { full } => cmd_verify(*full),
    }
}

// ---- input parsing ----

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn load_field(a: &FieldArgs, config: Config) -> Result<NumberField> {
    match &a.field_file {
        Some(p) => load_field_file(p, config),
        None => preset(&a.field, config),
    }
}

/// `"a,b,..."` in integral-basis coordinates, or a single rational.
pub fn parse_element(field: &NumberField, s: &str) -> Result<FieldElement> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let coords: Vec<Rat> = s.split(',').map(parse_rat).collect::<Result<_>>()?;
    match coords.len() {
        1 => Ok(field.from_rational(&coords[0])),
        n if n == field.degree() => Ok(FieldElement(coords)),
        n => Err(Error::Parse(format!("element has {n} coordinates, field has degree {}", field.degree()))),
    }
}

fn load_ideal(field: &NumberField, a: &IdealArgs) -> Result<FractionalIdeal> {
    if let Some(g) = &a.ideal_gen {
        return field.principal_ideal(&parse_element(field, g)?);
    }
    if let Some(b) = &a.ideal_basis {
        let elems: Vec<FieldElement> =
            b.split(';').filter(|t| !t.trim().is_empty()).map(|t| parse_element(field, t)).collect::<Result<_>>()?;
        return field.ideal_from_z_basis(&elems);
    }
    Ok(field.unit_ideal())
}

fn json_element(field: &NumberField, v: &Value) -> Result<FieldElement> {
    match v {
        Value::String(s) => Ok(field.from_rational(&parse_rat(s)?)),
        Value::Number(n) => Ok(field.from_rational(&parse_rat(&n.to_string())?)),
        Value::Array(a) => {
            let c: Vec<Rat> = a
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_rat(s),
                    Value::Number(n) => parse_rat(&n.to_string()),
                    other => Err(Error::Parse(format!("bad coordinate {other}"))),
                })
                .collect::<Result<_>>()?;
            if c.len() != field.degree() {
                return Err(Error::Parse(format!("element {v} needs {} coordinates", field.degree())));
            }
            Ok(FieldElement(c))
        }
        other => Err(Error::Parse(format!("bad field element {other}"))),
    }
}

/// A JSON list of lists of field elements.
fn parse_vectors(field: &NumberField, text: &str) -> Result<Vec<FVector>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    let rows = v.as_array().ok_or_else(|| Error::Parse("expected a list of rows".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array().ok_or_else(|| Error::Parse("expected a list of rows".into()))?.iter().map(|x| json_element(field, x)).collect()
        })
        .collect()
}

fn load_lattice(f: &FieldArgs, g: &GramArgs, config: Config) -> Result<HermitianLattice> {
    let field = load_field(f, config)?;
    let h = parse_vectors(&field, &read_arg(&g.gram)?)?;
    HermitianLattice::new(&field, h)
}

fn parse_matrix(s: &str) -> Result<IntMatrix> {
    read_arg(s)?.parse()
}

// ---- JSON helpers ----

fn jr(q: &Rat) -> Value {
    Value::String(fmt_rat(q))
}

fn ji(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn jel(e: &FieldElement) -> Value {
    Value::Array(e.0.iter().map(jr).collect())
}

fn jvec(v: &[FieldElement]) -> Value {
    Value::Array(v.iter().map(jel).collect())
}

fn jiv(iv: &Interval) -> Value {
    json!({ "lo": jr(&iv.lo), "hi": jr(&iv.hi) })
}

fn jcoords(c: &[BigInt]) -> Value {
    Value::Array(c.iter().map(ji).collect())
}

fn jmatrix(m: &IntMatrix) -> Value {
    Value::Array(m.entries().iter().map(|r| jcoords(r)).collect())
}

/// Factors as `[base, exp_num, exp_den]` plus an advisory `log10`.
fn jbound(b: &BigBound) -> Value {
    let mut o = Map::new();
    o.insert("factors".into(), b.to_json());
    match b.log10_certified(1e-9) {
        Ok(iv) => {
            o.insert("log10".into(), json!(iv.mid_f64()));
            o.insert("log10_width".into(), json!(to_f64(&iv.width())));
        }
        Err(_) => {
            o.insert("log10".into(), json!(b.log10_f64()));
        }
    }
    Value::Object(o)
}

fn jbool_opt(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

// ---- commands ----

fn cmd_field(f: &NumberField) -> Result<Outcome> {
    let (r1, r2) = f.signature();
    let embeddings: Vec<Value> = f.embedding_table().iter().map(|b| json!([b.re.to_string(), b.im.to_string()])).collect();
    let approx: Vec<Value> = f.embedding_table().iter().map(|b| json!(b.to_f64())).collect();
    let basis: Vec<Value> = f.integral_basis().iter().map(|r| Value::Array(r.iter().map(jr).collect())).collect();
    let report = json!({
        "name": f.name(),
        "degree": f.degree(),
        "signature": [r1, r2],
        "discriminant": ji(f.discriminant()),
        "min_poly": f.min_poly().0.iter().map(jr).collect::<Vec<_>>(),
        "integral_basis": basis,
        "embedding_roots": embeddings,
        "embedding_roots_approx": approx,
        "conjugation_closed": f.is_conjugation_closed(),
        "class_number_one": f.is_class_number_one(),
    });
    Ok(Outcome { report, ok: true })
}

fn lattice_header(lat: &IdealLattice) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("field".into(), json!(lat.field().name()));
    o.insert("ideal_basis".into(), jvec(lat.ideal().z_basis()));
    o.insert("ideal_norm".into(), jr(lat.ideal().norm()));
    let cover = lat.covering_bound();
    o.insert("covering_r2_upper".into(), jr(&cover.r2_upper));
    o.insert("covering_r_approx".into(), json!(cover.approx));
    o
}

fn cmd_cvp(f: &NumberField, ideal: FractionalIdeal, target: &FieldElement) -> Result<Outcome> {
    let lat = IdealLattice::of_ideal(f, ideal)?;
    let cv = lat.closest_to_element(target)?;
    let covers = lat.covering_bound().covers(&cv.dist2);
    let mut o = lattice_header(&lat);
    o.insert("target".into(), jel(target));
    o.insert("coords".into(), jcoords(&cv.coords));
    o.insert("closest".into(), jel(&cv.element));
    o.insert("dist2".into(), jiv(&cv.dist2));
    o.insert("certified".into(), json!(cv.certified));
    o.insert("ties".into(), json!(cv.ties));
    o.insert("within_covering_bound".into(), json!(covers));
    Ok(Outcome { report: Value::Object(o), ok: covers })
}

fn cmd_svp(f: &NumberField, ideal: FractionalIdeal) -> Result<Outcome> {
    let lat = IdealLattice::of_ideal(f, ideal)?;
    let sv = lat.shortest_vector()?;
    let ok = lat.covering_bound().covers_twice(&sv.len2);
    let mut o = lattice_header(&lat);
    o.insert("coords".into(), jcoords(&sv.coords));
    o.insert("shortest".into(), jel(&sv.element));
    o.insert("len2".into(), jiv(&sv.len2));
    o.insert("certified".into(), json!(sv.certified));
    o.insert("ties".into(), json!(sv.ties));
    o.insert("within_twice_covering_bound".into(), json!(ok));
    Ok(Outcome { report: Value::Object(o), ok })
}

fn cmd_residues(f: &NumberField, ideal: &FractionalIdeal, cap: u64) -> Result<Outcome> {
    let reps = residue_representatives(f, ideal, cap)?;
    let all_within = reps.iter().all(|r| r.within);
    let list: Vec<Value> = reps.iter().map(|r| json!({ "element": jel(&r.element), "l1": jiv(&r.l1), "within": r.within })).collect();
    let report = json!({
        "field": f.name(),
        "ideal_basis": jvec(ideal.z_basis()),
        "ideal_norm": jr(ideal.norm()),
        "count": reps.len(),
        "all_within_bound": all_within,
        "representatives": list,
    });
    Ok(Outcome { report, ok: all_within })
}

fn cmd_minvecs(lat: &HermitianLattice) -> Result<Outcome> {
    let mv = lat.minimal_vectors()?;
    let report = json!({
        "field": lat.field().name(),
        "rank": lat.rank(),
        "minimum": jr(&mv.minimum),
        "count": mv.count(),
        "count_mod_sign": mv.count_mod_sign(),
        "vectors": mv.vectors.iter().map(|v| jvec(v)).collect::<Vec<_>>(),
    });
    Ok(Outcome { report, ok: true })
}

fn cmd_wellrounded(lat: &HermitianLattice) -> Result<Outcome> {
    let mv = lat.minimal_vectors()?;
    let wr = lat.well_roundedness()?;
    let report = json!({
        "field": lat.field().name(),
        "rank": lat.rank(),
        "minimum": jr(&mv.minimum),
        "minimal_vectors": mv.count(),
        "well_rounded": wr.well_rounded,
        "witness": wr.witness.iter().map(|&i| jvec(&mv.vectors[i])).collect::<Vec<_>>(),
        "reason": wr.reason,
    });
    Ok(Outcome { report, ok: true })
}

fn cmd_basis(lat: &HermitianLattice) -> Result<Outcome> {
    let bb = bounded_basis(lat)?;
    let coeff = coefficient_bound_check(lat, &bb)?;
    let ok = bb.within_general != Some(false) && bb.within_simplified != Some(false) && coeff.violations == 0;
    let report = json!({
        "field": lat.field().name(),
        "rank": lat.rank(),
        "basis": bb.basis.iter().map(|v| jvec(v)).collect::<Vec<_>>(),
        "max_norm": jr(&bb.max_norm),
        "search_radius": jr(&bb.search_radius),
        "general_bound": bb.certificate.as_ref().map(jbound),
        "within_general_bound": jbool_opt(bb.within_general),
        "simplified_bound": bb.simplified.as_ref().map(jbound),
        "within_simplified_bound": jbool_opt(bb.within_simplified),
        "coefficients": {
            "checked": coeff.checked,
            "max_sum": jr(&coeff.max_sum),
            "t_observed": jbound(&coeff.t_observed),
            "t_certificate": coeff.t_certificate.as_ref().map(jbound),
            "violations": coeff.violations,
            "log10_ratio": coeff.log10_ratio,
        },
    });
    Ok(Outcome { report, ok })
}

fn cmd_phicount(f: &NumberField, basis: &[FVector], t: &Rat, cap: u64) -> Result<Outcome> {
    let p = phi_enumerate(f, basis, t, cap)?;
    let ok = p.within_bound || !p.bound_applies;
    let report = json!({
        "field": f.name(),
        "t": jr(t),
        "coordinate_count": p.coordinates.len(),
        "coordinates": p.coordinates.iter().map(jel).collect::<Vec<_>>(),
        "count_bound": p.count_bound.as_ref().map(jbound),
        "bound_applies": p.bound_applies,
        "within_bound": p.within_bound,
        "total": p.total.to_string(),
        "vectors": p.vectors.as_ref().map(|vs| vs.iter().map(|v| jvec(v)).collect::<Vec<_>>()),
    });
    Ok(Outcome { report, ok })
}

fn cmd_snf(m: &IntMatrix) -> Result<Outcome> {
    let s = smith_normal_form(m);
    let report = json!({
        "shape": [m.rows(), m.cols()],
        "rank": s.rank,
        "divisors": s.divisors.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "cokernel": s.divisors.to_string(),
        "cokernel_torsion": s.divisors.torsion_order().to_string(),
        "U": jmatrix(&s.u),
        "D": jmatrix(&s.d),
        "V": jmatrix(&s.v),
    });
    Ok(Outcome { report, ok: true })
}

fn cmd_gabber(m: &IntMatrix) -> Result<Outcome> {
    let g = gabber_check(m);
    let report = json!({
        "shape": [m.rows(), m.cols()],
        "alpha2": g.alpha2.to_string(),
        "exponent": g.exponent,
        "bound": jbound(&g.bound),
        "torsion": g.torsion.to_string(),
        "equality": g.equality,
        "verdict": if g.holds { "PASS" } else { "FAIL" },
    });
    Ok(Outcome { report, ok: g.holds })
}

fn cmd_cardell(orders: Option<&str>, matrix: Option<&str>, ell: u64) -> Result<Outcome> {
    if ell == 0 {
        return Err(Error::Domain("l must be at least 1".into()));
    }
    let (group, brute) = match (orders, matrix) {
        (Some(o), _) => {
            let os: Vec<u64> = o
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad order `{t}`"))))
                .collect::<Result<_>>()?;
            let brute = card_ell_brute_force(&os, ell).ok();
            (ElementaryDivisors::from_cyclic_orders(&os)?, brute)
        }
        (None, Some(m)) => {
            let mut ed = smith_normal_form(&parse_matrix(m)?).divisors;
            ed.free_rank = 0;
            let os: Option<Vec<u64>> = ed.torsion_factors().iter().map(|d| d.to_u64()).collect();
            let brute = os.and_then(|os| card_ell_brute_force(&os, ell).ok());
            (ed, brute)
        }
        (None, None) => return Err(Error::Parse("give --orders or --matrix".into())),
    };
    let card = card_ell(&group, ell);
    let agree = brute.is_none_or(|b| card == b.into());
    let report = json!({
        "group": group.to_string(),
        "order": group.torsion_order().to_string(),
        "ell": ell,
        "card_ell": card.to_string(),
        "brute_force": brute,
        "agree": agree,
    });
    Ok(Outcome { report, ok: agree })
}

fn check(name: &str, r: Result<bool>) -> (Value, bool) {
    match r {
        Ok(b) => (json!({ "check": name, "passed": b }), b),
        Err(e) => (json!({ "check": name, "passed": false, "detail": e.to_string() }), false),
    }
}

fn cmd_kbound(fp: &FieldParams, n: u32) -> Result<Outcome> {
    let kp = KParams::new(n, fp.d)?;
    let kb = bounds::k_bound(fp, &kp)?;
    let bb = bounds::basis_bound(fp, kp.big_n)?;
    let closed = kb.phi.closed.clone().expect("N >= 5");
    let (dim, dim_upper) = bounds::dim_x(fp, kp.big_n as u64);
    let top = fp.d as u64 * kp.big_n as u64 * (kp.big_n as u64 + 1) / 2;
    let alphas: Vec<Value> = (0..=n as u64 + 1)
        .map(|k| bounds::alpha_k(&closed, fp.d as u64, kp.big_n as u64, k).map(|a| json!({ "k": k, "alpha": jbound(&a) })))
        .collect::<Result<_>>()?;
    let beta = bounds::beta(&closed, kp.big_n as u64);
    let one = BigBound::one();
    let mut checks = vec![];
    let mut ok = true;
    let le = |a: &BigBound, b: &BigBound| a.le(b);
    for (name, r) in [
        ("e(d,n) + n + 1 <= (15/4) n^2 d", Ok(bounds::exponent_slack(fp.d as u64, n as u64) >= Rat::from_integer(0.into()))),
        ("2n + 1 <= (5/2) n", Ok(bounds::rank_slack(n as u64) >= Rat::from_integer(0.into()))),
        ("C_2 >= 1", bounds::c2_at_least_one(fp)),
        ("general basis bound <= simplified", le(&bb.general, bb.simplified.as_ref().unwrap_or(&bb.general))),
        ("expanded card(Phi) <= closed form", le(&kb.phi.expanded, &closed)),
        ("assembled <= relaxed", le(&kb.assembled, &kb.relaxed)),
        ("relaxed <= closed-form torsion bound", le(&kb.relaxed, &kb.closed_form)),
        ("assembled <= closed-form torsion bound", le(&kb.assembled, &kb.closed_form)),
        ("closed-form torsion bound >= 1", le(&one, &kb.closed_form)),
    ] {
        let (v, b) = check(name, r);
        ok &= b;
        checks.push(v);
    }
    let report = json!({
        "d": fp.d,
        "r1": fp.r1,
        "r2": fp.r2,
        "abs_disc": fp.abs_disc.to_string(),
        "n": kp.n,
        "N": kp.big_n,
        "ell": kp.ell,
        "t": kp.t(),
        "e": kb.e,
        "dim_x": dim,
        "dim_x_upper": dim_upper,
        "top_degree": top,
        "C1": jbound(&bounds::c1(fp)),
        "C2": jbound(&bounds::c2(fp)),
        "C3": jbound(&bounds::c3(fp)),
        "basis_general": jbound(&bb.general),
        "basis_simplified": bb.simplified.as_ref().map(jbound),
        "T": jbound(&kb.phi.t),
        "gamma": jbound(&bounds::icaza_gamma(fp, kp.big_n)),
        "card_phi_expanded": jbound(&kb.phi.expanded),
        "card_phi_closed": jbound(&closed),
        "alpha": alphas,
        "beta": jbound(&beta),
        "log_torsion_assembled": jbound(&kb.assembled),
        "log_torsion_relaxed": jbound(&kb.relaxed),
        "log_torsion_closed_form": jbound(&kb.closed_form),
        "checks": checks,
    });
    Ok(Outcome { report, ok })
}

fn cmd_verify(full: bool) -> Result<Outcome> {
    let reports = verify::verify_all();
    let ok = reports.iter().all(|r| r.passed());
    let grids: Vec<Value> = reports
        .iter()
        .map(|r| {
            let (passed, total) = r.count();
            let mut o = json!({
                "grid": r.name,
                "passed": passed,
                "total": total,
                "failures": r.failures().take(50).cloned().collect::<Vec<_>>(),
            });
            if full {
                o["checks"] = serde_json::to_value(&r.checks).expect("serializable");
            }
            o
        })
        .collect();
    Ok(Outcome { report: json!({ "all_passed": ok, "grids": grids }), ok })
}

// ---- plain text ----

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a)
            if a.len() <= 8 && a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) =>
        {
            Some(format!("[{}]", a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn bound_text(v: &Value) -> Option<String> {
    let o = v.as_object()?;
    let factors = o.get("factors")?.as_array()?;
    let log10 = o.get("log10")?.as_f64()?;
    let terms: Vec<String> = factors
        .iter()
        .filter_map(|t| {
            let t = t.as_array()?;
            let (b, p, q) = (t[0].as_str()?, t[1].as_str()?, t[2].as_str()?);
            Some(match (p, q) {
                ("1", "1") => b.to_string(),
                (_, "1") => format!("{b}^{p}"),
                _ => format!("{b}^({p}/{q})"),
            })
        })
        .collect();
    let body = if terms.is_empty() { "1".to_string() } else { terms.join(" * ") };
    Some(format!("{body}  (log10 ~ {log10:.6})"))
}

fn render_into(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    if let Some(s) = bound_text(v).or_else(|| scalar_text(v)) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                render_into(out, k, x, indent + 1);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                render_into(out, &format!("[{i}]"), x, indent + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

/// Indented `key: value` lines; bounds shown as products with their log10.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                render_into(&mut out, k, x, 0);
            }
        }
        other => render_into(&mut out, "result", other, 0),
    }
    out
}
