//! Command-line front end. Every command prints one JSON document.

use std::fmt;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use ortho_core::dl::{
    closed_form_average, double_cosets_brute, double_cosets_solver, pairing_sides, FixedGroupData, InvolutionData,
    TorusCharacter, TorusSpec, XiStructure,
};
use ortho_core::distinction::{
    distinguished_dimension, padic_depth_zero_crosscheck, DistinctionInput, InvolutionOrbitLabel,
};
use ortho_core::ff::{TorusChar, FF};
use ortho_core::green::green_function;
use ortho_core::mat::{enumerate_gl, gl_order, SymFormFF};
use ortho_core::orth::{cartan_dieudonne, orth_group, spinor_norm, spinor_sign, GroupKind, OrthChar};
use ortho_core::qform::{classify_orbit, hilbert_symbol, invariants, scalar_orbit, similar_to_j, OrbitLabel};
use ortho_core::rat::{format_rat, parse_rat, SymMatQ};
use ortho_core::tame::{construct_j_pair, AlgElem, JCertificate, TameExt};

use crate::formats::{
    elem_json, form_over, load_matrix, load_matrix_sized, matrix_ff_json, matrix_json, matrix_over, parse_coords,
    FormatError,
};
use crate::selftest;

#[derive(Parser, Debug)]
#[command(name = "ortho", version, about = "Exact invariants of orthogonal involutions and their distinction data")]
pub struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for orthogonal-group sums.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hilbert symbol (a, b) over Q_p.
    Hilbert {
        #[arg(long)]
        p: u64,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Discriminant, Hasse invariants and orbit label of a symmetric matrix.
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        matrix: String,
    },
    /// Whether θ_ν lies in the orbit of θ_J.
    InThetaJ {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        matrix: String,
    },
    /// Trace form ν^a of a tame extension.
    TraceForm {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        f: u32,
        /// Coordinates of a in the basis y^i x^k (default a = 1).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long)]
        unit: Option<String>,
        /// `standard` (y^i x^k) or `power` (powers of x + y).
        #[arg(long, default_value = "standard")]
        basis: String,
    },
    /// An element a and a basis with ν^a = J, with certificate.
    ConstructJ {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        f: u32,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long)]
        unit: Option<String>,
    },
    /// y_{E/F}: one more than the number of quadratic subextensions.
    YEf {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        unit: Option<String>,
    },
    /// Green function of GL_K(F_Q).
    Green {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ambient: u32,
        /// Torus type, a partition such as `2,1`.
        #[arg(long)]
        torus: String,
        /// Unipotent Jordan type.
        #[arg(long)]
        unip: String,
    },
    /// Orthogonal average of R_{T,λ}·χ against the double-coset sum.
    DlAverage {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: u64,
        #[arg(long, default_value = "trivial")]
        chi: String,
        #[arg(long, default_value = "identity")]
        nu: String,
        #[arg(long, default_value = "O")]
        fixed: String,
        /// Largest |GL_n(F_q)| scanned for the double-coset side.
        #[arg(long, default_value_t = 200_000)]
        cap: u64,
    },
    /// Double cosets T\Ξ_T/G^θ and the fixed points T ∩ G^{g·θ}.
    Lemma66 {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "identity")]
        nu: String,
        /// `auto`, `brute` or `solver`.
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = 200_000)]
        cap: u64,
    },
    /// Dimension of the space of G^θ-invariant functionals.
    Distinguish {
        /// `split` (the orbit of θ_J) or `other`.
        #[arg(long, conflicts_with_all = ["matrix", "e"])]
        orbit: Option<String>,
        #[arg(long, conflicts_with = "e")]
        matrix: Option<String>,
        #[arg(long)]
        p: u64,
        #[arg(long, requires = "f")]
        e: Option<u32>,
        #[arg(long, requires = "e")]
        f: Option<u32>,
        #[arg(long, allow_hyphen_values = true, requires = "e")]
        a: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        sign: i32,
        /// Also run the depth-zero finite-field reduction.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Spinor norm and reflection decomposition of g in O(ν) over F_q.
    Spinor {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        g: String,
    },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(ortho_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_internal() => 3,
            CliError::Core(_) => 2,
        }
    }
    fn kind(&self) -> &'static str {
        match self.exit_code() {
            1 => "usage",
            2 => "domain",
            _ => "internal",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<ortho_core::Error> for CliError {
    fn from(e: ortho_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Usage(e.0)
    }
}

type CliResult = Result<Value, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs the command line and returns the exit code with the text for
/// standard output.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (1, render(&json!({"error": {"kind": "usage", "message": e.to_string()}}), false)),
            };
        }
    };
    let pretty = cli.pretty;
    match execute(&cli) {
        Ok(v) => {
            let failed = v.get("passed") == Some(&Value::Bool(false));
            (if failed { 3 } else { 0 }, render(&v, pretty))
        }
        Err(e) => {
            let code = e.exit_code();
            (code, render(&json!({"error": {"kind": e.kind(), "message": e.to_string()}}), pretty))
        }
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        let mut out = String::new();
        table(v, "", &mut out);
        out
    } else {
        let mut s = v.to_string();
        s.push('\n');
        s
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| r.is_array()) => {
            let cells: Vec<Vec<String>> =
                rows.iter().map(|r| r.as_array().unwrap().iter().map(scalar_text).collect()).collect();
            let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
            out.push_str(&format!("{prefix}:\n"));
            for r in cells {
                let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&format!("    [ {} ]\n", line.join("  ")));
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object()) => {
            for (i, x) in xs.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            out.push_str(&format!("{prefix:<28} [{}]\n", items.join(", ")));
        }
        other => out.push_str(&format!("{prefix:<28} {}\n", scalar_text(other))),
    }
}

fn rat_arg(s: &str) -> Result<ortho_core::rat::Rat, CliError> {
    parse_rat(s).map_err(|e| usage(format!("bad rational {s:?}: {e}")))
}

fn partition_arg(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| usage(format!("bad partition {s:?}")))).collect()
}

fn sym(m: ortho_core::rat::MatQ) -> Result<SymMatQ, CliError> {
    Ok(SymMatQ::new(m)?)
}

fn label_json(l: &OrbitLabel) -> Value {
    json!({"disc": l.disc.label(), "hasse": l.hasse})
}

fn field(q: u64) -> Result<FF, CliError> {
    let p = (2..=q.max(2)).find(|d| q % d == 0).unwrap_or(q);
    let mut k = 0;
    let mut r = q;
    while r > 1 && r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || k == 0 {
        return Err(ortho_core::Error::NotPrime(q).into());
    }
    Ok(FF::new(p, k)?)
}

fn tame(p: u64, e: u32, f: u32, unit: &Option<String>) -> Result<TameExt, CliError> {
    let unit = unit.as_deref().map(rat_arg).transpose()?;
    Ok(TameExt::new(p, e, f, unit)?)
}

fn elem_arg(ext: &TameExt, a: &Option<String>) -> Result<AlgElem, CliError> {
    match a {
        None => Ok(ext.one()),
        Some(s) => Ok(ext.element(parse_coords(s)?)?),
    }
}

fn certificate_json(c: &JCertificate) -> Value {
    json!({
        "exact": c.exact,
        "ramified_exact": c.ramified_exact,
        "tensor_exact": c.tensor_exact,
        "unramified_exact": c.unramified_exact,
        "unramified_precision": c.unramified_precision,
        "achieved_valuation": c.achieved_valuation,
    })
}

fn fixed_kind(s: &str) -> Result<GroupKind, CliError> {
    match s {
        "O" | "o" => Ok(GroupKind::O),
        "SO" | "so" => Ok(GroupKind::SO),
        _ => Err(usage(format!("--fixed must be O or SO, got {s:?}"))),
    }
}

/// `FixedGroupData` computed on `workers` threads; the result does not
/// depend on the thread count.
fn fixed_data(f: &FF, nu: &SymFormFF, kind: GroupKind, workers: usize) -> Result<FixedGroupData, CliError> {
    let cat = orth_group(f, nu, kind)?;
    let workers = workers.max(1);
    let chunk = cat.elements.len().div_ceil(workers).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<ortho_core::Result<FixedGroupData>> = pool.install(|| {
        cat.elements.par_chunks(chunk).map(|c| FixedGroupData::from_elements(f, nu, kind, c)).collect()
    });
    let mut acc: Option<FixedGroupData> = None;
    for p in parts {
        let p = p?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.merge(p),
        });
    }
    acc.ok_or_else(|| CliError::Core(ortho_core::Error::Integrality("empty orthogonal group".into())))
}

fn execute(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Hilbert { p, a, b } => {
            let (x, y) = (rat_arg(a)?, rat_arg(b)?);
            Ok(json!({"p": p, "a": format_rat(&x), "b": format_rat(&y), "symbol": hilbert_symbol(&x, &y, *p)?}))
        }
        Command::Classify { p, matrix } => {
            let a = sym(load_matrix(matrix)?)?;
            let inv = invariants(&a, *p)?;
            let label = classify_orbit(&a, *p)?;
            Ok(json!({
                "p": p,
                "dim": inv.dim,
                "disc": inv.disc.label(),
                "signed_disc": inv.signed_disc.label(),
                "hasse": inv.hasse,
                "hasse0": inv.hasse0,
                "label": label_json(&label),
                "similar_to_j": similar_to_j(&a, *p)?,
            }))
        }
        Command::InThetaJ { p, matrix } => {
            let a = sym(load_matrix(matrix)?)?;
            let l = InvolutionOrbitLabel::of(&a, *p)?;
            let orbit: Vec<Value> =
                scalar_orbit(&a, *p)?.iter().map(|(c, l)| json!({"scalar": c.label(), "label": label_json(l)})).collect();
            Ok(json!({"p": p, "n": l.n, "in_theta_j": l.in_theta_j, "scalar_orbit": orbit}))
        }
        Command::TraceForm { p, e, f, a, unit, basis } => {
            let ext = tame(*p, *e, *f, unit)?;
            let a = elem_arg(&ext, a)?;
            let basis = match basis.as_str() {
                "standard" => (0..ext.degree()).map(|i| ext.basis_elem(i)).collect(),
                "power" => ext.power_basis(&ext.add(&ext.x(), &ext.y()))?,
                other => return Err(usage(format!("--basis must be standard or power, got {other:?}"))),
            };
            let nu = ext.trace_form(&a, &basis)?;
            Ok(json!({
                "p": p, "e": e, "f": f,
                "a": elem_json(&a),
                "basis": basis.iter().map(elem_json).collect::<Vec<_>>(),
                "nu": matrix_json(nu.matrix()),
                "det": format_rat(&nu.det()),
                "norm_a": format_rat(&ext.norm(&a)?),
                "theta_split": ext.theta_split_check(&nu, &basis)?,
                "in_theta_j": InvolutionOrbitLabel::of(&nu, *p)?.in_theta_j,
            }))
        }
        Command::ConstructJ { p, e, f, prec, unit } => {
            let ext = tame(*p, *e, *f, unit)?;
            let pair = construct_j_pair(&ext, *prec)?;
            let again = construct_j_pair(&ext, prec + 4)?;
            let stable = again.certificate.unramified_precision == Some(prec + 4)
                && again.certificate.ramified_exact == pair.certificate.ramified_exact
                && again.certificate.tensor_exact;
            let mut cert = certificate_json(&pair.certificate);
            cert["stable_at"] = json!(prec + 4);
            cert["stable"] = json!(stable);
            Ok(json!({
                "p": p, "e": e, "f": f, "precision": prec,
                "a": elem_json(&pair.a),
                "basis": pair.basis.iter().map(elem_json).collect::<Vec<_>>(),
                "nu": matrix_json(pair.nu.matrix()),
                "certificate": cert,
            }))
        }
        Command::YEf { p, e, f, unit } => {
            let ext = tame(*p, *e, *f, unit)?;
            Ok(json!({"p": p, "e": e, "f": f, "y": ext.y_ef()?}))
        }
        Command::Green { q, ambient, torus, unip } => {
            let (t, u) = (partition_arg(torus)?, partition_arg(unip)?);
            Ok(json!({"q": q, "ambient": ambient, "torus": t, "unip": u, "value": green_function(*ambient, *q, &t, &u)?}))
        }
        Command::DlAverage { q, n, lambda, chi, nu, fixed, cap } => dl_average(cli, *q, *n, *lambda, chi, nu, fixed, *cap),
        Command::Lemma66 { q, n, nu, method, cap } => {
            let f = field(*q)?;
            let t = TorusSpec::elliptic(&f, *n as u32)?;
            let form = form_over(&f, &load_matrix_sized(nu, *n)?)?;
            let brute = match method.as_str() {
                "brute" => true,
                "solver" => false,
                "auto" => gl_order(*q, *n as u32) <= *cap,
                other => return Err(usage(format!("--method must be auto, brute or solver, got {other:?}"))),
            };
            let rep = if brute {
                let group = enumerate_gl(&f, *n, *cap)?;
                double_cosets_brute(&f, &t, &form, &group)?
            } else {
                double_cosets_solver(&f, &t, &form)?
            };
            let fixed: Vec<Vec<Value>> =
                rep.fixed_points.iter().map(|s| s.iter().map(|m| matrix_ff_json(&f, m)).collect()).collect();
            Ok(json!({
                "q": q, "n": n,
                "method": rep.method,
                "double_cosets": rep.double_cosets,
                "fixed_points": fixed,
                "fixed_points_are_pm_one": rep.fixed_points_are_pm_one(&f, *n),
            }))
        }
        Command::Distinguish { orbit, matrix, p, e, f, a, n, sign, crosscheck } => {
            let (input, nu, echo) = if let (Some(e), Some(f)) = (e, f) {
                let ext = TameExt::new(*p, *e, *f, None)?;
                let a = elem_arg(&ext, a)?;
                let basis: Vec<AlgElem> = (0..ext.degree()).map(|i| ext.basis_elem(i)).collect();
                let nu = ext.trace_form(&a, &basis)?;
                let echo = json!({"p": p, "e": e, "f": f, "a": elem_json(&a), "sign": sign});
                (DistinctionInput::Howe { ext, nu: nu.clone(), sign: *sign }, nu, echo)
            } else {
                let nu = match (orbit, matrix) {
                    (Some(o), None) => {
                        let split = match o.as_str() {
                            "split" | "theta-j" => true,
                            "other" => false,
                            x => return Err(usage(format!("--orbit must be split or other, got {x:?}"))),
                        };
                        InvolutionOrbitLabel::representative(*p, n.unwrap_or(3), split)?
                    }
                    (None, Some(m)) => sym(load_matrix(m)?)?,
                    _ => return Err(usage("give one of --orbit, --matrix or --e/--f")),
                };
                let label = InvolutionOrbitLabel::of(&nu, *p)?;
                let echo = json!({"p": p, "nu": matrix_json(nu.matrix()), "sign": sign});
                (DistinctionInput::Orbit { label, sign: *sign }, nu, echo)
            };
            let d = distinguished_dimension(&input)?;
            let mut out = json!({"dimension": d.dimension, "reason": d.reason, "method": d.method, "inputs": echo});
            if *crosscheck {
                let c = padic_depth_zero_crosscheck(&nu, *p, *sign)?;
                if c.dimension != d.dimension {
                    return Err(ortho_core::Error::Integrality(format!(
                        "depth-zero cross-check gives {} but the closed form gives {}",
                        c.dimension, d.dimension
                    ))
                    .into());
                }
                out["crosscheck"] = json!({
                    "dimension": c.dimension,
                    "method": c.method,
                    "scalar": c.reduction.as_ref().map(|(s, _)| format_rat(s)),
                    "precision": c.reduction.as_ref().map(|(_, n)| n),
                    "lambda": c.lambda_index,
                });
            }
            Ok(out)
        }
        Command::Spinor { q, nu, g } => {
            let f = field(*q)?;
            let form = form_over(&f, &load_matrix(nu)?)?;
            let gm = matrix_over(&f, &load_matrix(g)?)?;
            let vs = cartan_dieudonne(&f, &form, &gm)?;
            let det = gm.det(&f);
            Ok(json!({
                "q": q,
                "det": if det == f.one() { 1 } else { -1 },
                "spinor_norm": spinor_norm(&f, &form, &gm)?.code(),
                "spinor_sign": spinor_sign(&f, &form, &gm)?,
                "reflections": vs.iter().map(|v| v.iter().map(|x| x.code()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }))
        }
        Command::Selftest { suite } => selftest::run(suite.as_deref()).map_err(usage),
    }
}

#[allow(clippy::too_many_arguments)]
fn dl_average(cli: &Cli, q: u64, n: usize, lambda: u64, chi: &str, nu: &str, fixed: &str, cap: u64) -> CliResult {
    let f = field(q)?;
    let kind = fixed_kind(fixed)?;
    let chi = OrthChar::parse(chi).ok_or_else(|| usage(format!("--chi must be trivial, det, spinor or det-spinor, got {chi:?}")))?;
    let form = form_over(&f, &load_matrix_sized(nu, n)?)?;
    let t = TorusSpec::elliptic(&f, n as u32)?;
    let lam = TorusCharacter::elliptic(TorusChar::new(q, n as u32, lambda));
    let inv = InvolutionData::new(form.clone(), kind, chi)?;
    let data = fixed_data(&f, &form, kind, cli.workers)?;
    let lhs = data.average(&t, &lam, chi)?;
    let mut out = Map::new();
    out.insert("q".into(), json!(q));
    out.insert("n".into(), json!(n));
    out.insert("lambda".into(), json!(lam.factors()[0].index));
    out.insert("chi".into(), json!(chi.name()));
    out.insert("fixed".into(), json!(if kind == GroupKind::O { "O" } else { "SO" }));
    out.insert("fixed_order".into(), json!(data.order));
    out.insert("regular".into(), json!(lam.is_regular()));
    out.insert("lambda_minus_one".into(), json!(lam.at_minus_one()));
    out.insert("lhs".into(), json!(lhs));
    let chi_m1 = if kind == GroupKind::O || n % 2 == 0 { Some(inv.chi_at_minus_one(&f)?) } else { None };
    out.insert("chi_minus_one".into(), json!(chi_m1));
    let closed = match chi_m1 {
        Some(c) if lam.is_regular() && n % 2 == 1 => Some(closed_form_average(&lam, c)?),
        _ => None,
    };
    if let Some(c) = closed {
        if kind == GroupKind::O && c != lhs {
            return Err(ortho_core::Error::Integrality(format!("average {lhs} differs from closed form {c}")).into());
        }
    }
    out.insert("closed_form".into(), json!(closed));
    let size = gl_order(q, n as u32);
    if lam.is_regular() && size <= cap {
        let group = enumerate_gl(&f, n, cap)?;
        let xi = XiStructure::new(&f, &t, &form, kind, &group)?;
        let sides = pairing_sides(&t, &lam, &inv, &data, &xi)?;
        if sides.lhs != sides.rhs {
            return Err(ortho_core::Error::Integrality(format!("lhs {} differs from rhs {}", sides.lhs, sides.rhs)).into());
        }
        out.insert("rhs".into(), json!(sides.rhs));
        out.insert("contributing_cosets".into(), json!(sides.contributing_cosets));
    } else {
        out.insert("rhs".into(), Value::Null);
        let why = if lam.is_regular() { format!("|GL_{n}(F_{q})| = {size} exceeds --cap {cap}") } else { "λ is not regular".into() };
        out.insert("rhs_skipped".into(), json!(why));
    }
    Ok(Value::Object(out))
}
