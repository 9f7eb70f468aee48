//! Command-line front end: spec files in, JSON or CSV out.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input,
//! 3 uncertified output under `--strict`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::basis::RationalVector;
use crate::error::Error;
use crate::model::{
    validate_sum, BasisSymbol, ExponentialSum, IndependenceStatus, RawSum, RawTerm, TailBound, Tolerances,
    VerticalStrip,
};
use crate::rset::{
    b_value, certify_empty, classify_boundary, compute_rset, inf_modulus, BoundaryKind, EndpointKind, RSetResult,
};
use crate::zerofind::{crosscheck_rset, locate_zeros, CrosscheckReport, Rectangle, ZeroRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

/// A strip edge: a number or one of the strings `"-inf"`, `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Text(String),
}

impl Bound {
    fn value(&self) -> Result<f64, String> {
        match self {
            Bound::Number(x) => Ok(*x),
            Bound::Text(s) => match s.as_str() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "inf" | "+inf" => Ok(f64::INFINITY),
                other => Err(format!(
                    "strip bound {other:?} is neither a number nor \"-inf\"/\"inf\""
                )),
            },
        }
    }

    fn from_f64(x: f64) -> Self {
        if x == f64::NEG_INFINITY {
            Bound::Text("-inf".into())
        } else if x == f64::INFINITY {
            Bound::Text("inf".into())
        } else {
            Bound::Number(x)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub coeff: CoeffEntry,
    pub exponent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    /// The coefficient is `coeff · e^{log_scale}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_scale: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripEntry {
    pub alpha: Bound,
    pub beta: Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cert_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_step: Option<f64>,
}

/// The JSON spec file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<BasisEntry>>,
    pub terms: Vec<TermEntry>,
    /// Missing means the whole plane.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strip: Option<StripEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceEntry>,
}

/// A spec file turned into validated objects.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedSpec {
    pub sum: ExponentialSum,
    pub strip: VerticalStrip,
    pub tol: Tolerances,
}

impl SumSpecFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed spec: {e}"))
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serialises");
        s.push('\n');
        s
    }

    pub fn load(&self) -> Result<LoadedSpec, String> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut raw = RawTerm::new(Complex64::new(t.coeff.re, t.coeff.im), t.exponent);
                if let Some(ls) = t.log_scale {
                    raw = raw.with_log_scale(ls);
                }
                if let Some(c) = &t.coords {
                    raw = raw.with_coords(RationalVector::parse(c).map_err(|e| e.to_string())?);
                }
                Ok(raw)
            })
            .collect::<Result<Vec<_>, String>>()?;
        let tail = self
            .tail
            .map(|t| {
                let on = VerticalStrip::new(t.alpha, t.beta)?;
                TailBound::new(t.epsilon, on)
            })
            .transpose()
            .map_err(|e| e.to_string())?;
        let raw = RawSum {
            terms,
            basis_symbols: self.basis.as_ref().map(|b| {
                b.iter()
                    .map(|e| BasisSymbol {
                        name: e.name.clone(),
                        value: e.value,
                    })
                    .collect()
            }),
            independent: self.independent.unwrap_or(false),
            tail,
        };
        let sum = validate_sum(&raw).map_err(|e| e.to_string())?;
        let strip = match &self.strip {
            None => VerticalStrip::whole_plane(),
            Some(s) => VerticalStrip::new(s.alpha.value()?, s.beta.value()?).map_err(|e| e.to_string())?,
        };
        let mut tol = Tolerances::default();
        if let Some(t) = self.tolerances {
            tol.root_tol = t.root_tol.unwrap_or(tol.root_tol);
            tol.cert_margin = t.cert_margin.unwrap_or(tol.cert_margin);
            tol.phase_grid = t.phase_grid.unwrap_or(tol.phase_grid);
            tol.scan_step = t.scan_step.or(tol.scan_step);
        }
        tol.validate().map_err(|e| e.to_string())?;
        Ok(LoadedSpec { sum, strip, tol })
    }

    /// Spec file for a validated sum, terms in their original order.
    pub fn from_sum(f: &ExponentialSum, strip: VerticalStrip) -> Self {
        let raw = f.to_raw();
        SumSpecFile {
            basis: raw.basis_symbols.map(|b| {
                b.into_iter()
                    .map(|s| BasisEntry {
                        name: s.name,
                        value: s.value,
                    })
                    .collect()
            }),
            terms: raw
                .terms
                .iter()
                .map(|t| TermEntry {
                    coeff: CoeffEntry {
                        re: t.coeff.re,
                        im: t.coeff.im,
                    },
                    exponent: t.exponent,
                    coords: t.coords.as_ref().map(|c| c.to_strings()),
                    log_scale: (t.log_scale != 0.0).then_some(t.log_scale),
                })
                .collect(),
            strip: Some(StripEntry {
                alpha: Bound::from_f64(strip.alpha()),
                beta: Bound::from_f64(strip.beta()),
            }),
            tail: raw.tail.map(|t| TailEntry {
                epsilon: t.epsilon(),
                alpha: t.valid_on().alpha(),
                beta: t.valid_on().beta(),
            }),
            independent: raw.independent.then_some(true),
            tolerances: None,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "apzeros", version, about = "Real projections of zeros of exponential sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Path to the JSON spec file.
    pub spec: PathBuf,
    /// Root bracket width (overrides the spec file).
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Exit with 3 when the result is not certified.
    #[arg(long)]
    pub strict: bool,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The set of real parts of zeros in the strip.
    Rset(Common),
    /// Zeros in a rectangle.
    Zeros {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box", num_args = 4, required = true, allow_negative_numbers = true,
              value_names = ["SIGMA0", "SIGMA1", "T0", "T1"])]
        rect: Vec<f64>,
    },
    /// Cross-validates the set against located zeros and its structural properties.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Height of the zero search.
        #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
        tmax: f64,
        /// Number of σ samples for the closed-form consistency check.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// CSV of inf |f(σ+it)| and every B_j on a σ grid.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long = "sigma-grid", num_args = 3, required = true, allow_negative_numbers = true,
              value_names = ["LO", "HI", "N"])]
        sigma_grid: Vec<f64>,
    },
    /// Natural basis and independence verdict.
    Basis(Common),
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvariantViolated(_) | Error::AmbiguousBoundary { .. } => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut stderr = String::new();
    let result = dispatch(&cli.command, &mut stderr);
    match result {
        Ok((code, body)) => {
            let common = cli.command.common();
            match &common.out {
                Some(path) => match std::fs::write(path, &body) {
                    Ok(()) => CliOutput {
                        code,
                        stdout: String::new(),
                        stderr,
                    },
                    Err(e) => CliOutput {
                        code: EXIT_INPUT,
                        stdout: String::new(),
                        stderr: format!("{stderr}error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => CliOutput {
                    code,
                    stdout: body,
                    stderr,
                },
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            CliOutput {
                code: f.code,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Rset(c) | Command::Basis(c) => c,
            Command::Zeros { common, .. } | Command::Verify { common, .. } | Command::Profile { common, .. } => common,
        }
    }
}

fn load(common: &Common) -> Result<LoadedSpec, Failure> {
    let spec = SumSpecFile::read(&common.spec).map_err(input_error)?;
    let mut loaded = spec.load().map_err(input_error)?;
    if let Some(t) = common.tol {
        loaded.tol.root_tol = t;
        loaded.tol.validate().map_err(|e| input_error(e.to_string()))?;
    }
    Ok(loaded)
}

fn dispatch(cmd: &Command, stderr: &mut String) -> Result<(i32, String), Failure> {
    let common = cmd.common();
    let spec = load(common)?;
    match cmd {
        Command::Rset(_) => {
            let r = compute_rset(&spec.sum, spec.strip, &spec.tol)?;
            let code = if common.strict && !r.certified {
                let _ = writeln!(stderr, "result not certified");
                EXIT_UNCERTIFIED
            } else {
                EXIT_OK
            };
            Ok((code, to_json_text(&rset_json(&spec.sum, &r))))
        }
        Command::Zeros { rect, .. } => {
            let rect = Rectangle::new(rect[0], rect[1], rect[2], rect[3])?;
            let z = locate_zeros(&spec.sum, &rect, &spec.tol)?;
            let body = json!({
                "box": rect_json(&z.searched),
                "complete": z.complete,
                "zeros": z.zeros.iter().map(zero_json).collect::<Vec<_>>(),
            });
            let code = if common.strict && !z.complete {
                let _ = writeln!(stderr, "zero search incomplete");
                EXIT_UNCERTIFIED
            } else {
                EXIT_OK
            };
            Ok((code, to_json_text(&body)))
        }
        Command::Verify { tmax, grid, .. } => {
            if !(tmax.is_finite() && *tmax > 0.0) {
                return Err(input_error(format!("--tmax must be positive, got {tmax}")));
            }
            let report = verify(&spec, *tmax, *grid);
            for c in &report.checks {
                let _ = writeln!(
                    stderr,
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if let Some(s) = &report.summary {
                let _ = writeln!(stderr, "{s}");
            }
            let passed = report.checks.iter().all(|c| c.passed);
            let code = if !passed {
                EXIT_VIOLATION
            } else if common.strict && !report.rset_certified && report.empty_certificate.is_none() {
                EXIT_UNCERTIFIED
            } else {
                EXIT_OK
            };
            Ok((code, to_json_text(&report.json)))
        }
        Command::Profile { sigma_grid, .. } => {
            let (lo, hi, n) = (sigma_grid[0], sigma_grid[1], sigma_grid[2]);
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) || n < 1.0 || n.fract() != 0.0 || (n == 1.0 && lo != hi)
            {
                return Err(input_error(format!("invalid sigma grid {lo} {hi} {n}")));
            }
            Ok((EXIT_OK, profile_csv(&spec.sum, lo, hi, n as usize)?))
        }
        Command::Basis(_) => Ok((EXIT_OK, to_json_text(&basis_json(&spec.sum)?))),
    }
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialises");
    s.push('\n');
    s
}

/// Finite numbers as JSON numbers, infinities as `"inf"` / `"-inf"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// One-based original position of the term at sorted index `j`.
fn label_of(f: &ExponentialSum, j: usize) -> usize {
    f.terms()[j].label() + 1
}

fn kind_str(k: EndpointKind) -> &'static str {
    match k {
        EndpointKind::ClosedBoundary => "closed",
        EndpointKind::StripEdge => "strip-edge",
        EndpointKind::Undetermined => "undetermined",
    }
}

/// JSON form of a set computation; term indices are one-based input
/// positions.
pub fn rset_json(f: &ExponentialSum, r: &RSetResult) -> Value {
    let attr = |a: Option<usize>| a.map_or(Value::Null, |j| json!(label_of(f, j)));
    json!({
        "strip": {"alpha": num(r.strip.alpha()), "beta": num(r.strip.beta())},
        "intervals": r.intervals.iter().map(|i| json!({
            "lo": num(i.lo),
            "hi": num(i.hi),
            "lo_kind": kind_str(i.lo_kind),
            "hi_kind": kind_str(i.hi_kind),
            "lo_attribution": attr(i.lo_attribution),
            "hi_attribution": attr(i.hi_attribution),
        })).collect::<Vec<_>>(),
        "a_f": r.a_f.map_or(Value::Null, num),
        "b_f": r.b_f.map_or(Value::Null, num),
        "certified": r.certified,
        "uncertified_regions": r.uncertified_regions.iter()
            .map(|i| json!({"lo": num(i.lo), "hi": num(i.hi)})).collect::<Vec<_>>(),
        "negative_intervals": r.negative_intervals.iter().map(|n| json!({
            "j": label_of(f, n.j),
            "lo": num(n.lo),
            "hi": num(n.hi),
            "roots": n.roots,
        })).collect::<Vec<_>>(),
        "independence": f.independence().as_str(),
        "caveats": r.caveats,
    })
}

fn rect_json(r: &Rectangle) -> Value {
    json!({"sigma_lo": num(r.sigma_lo), "sigma_hi": num(r.sigma_hi), "t_lo": num(r.t_lo), "t_hi": num(r.t_hi)})
}

fn zero_json(z: &ZeroRecord) -> Value {
    json!({
        "re": num(z.location.re),
        "im": num(z.location.im),
        "multiplicity": z.multiplicity,
        "residual": num(z.residual),
        "box_width": num(z.box_width),
    })
}

fn basis_json(f: &ExponentialSum) -> Result<Value, Failure> {
    let rep = f.basis_representation()?;
    let order = f.label_order();
    let certificate = match f.independence() {
        IndependenceStatus::Dependent { certificate } => json!(certificate.to_strings()),
        _ => Value::Null,
    };
    Ok(json!({
        "basis_indices": rep.rep.basis_indices.iter().map(|&k| label_of(f, order[k])).collect::<Vec<_>>(),
        "matrix": (0..rep.rep.len()).map(|k| rep.rep.row(k).to_strings()).collect::<Vec<_>>(),
        "integral": rep.rep.integral,
        "independence": f.independence().as_str(),
        "certificate": certificate,
    }))
}

/// `%.17g`: 17 significant digits, trailing zeros dropped, scientific
/// notation outside `1e-4 ≤ |x| < 1e17`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn profile_csv(f: &ExponentialSum, lo: f64, hi: f64, n: usize) -> Result<String, Failure> {
    let order = f.label_order();
    let mut out = String::from("sigma,inf_modulus");
    for k in 1..=order.len() {
        let _ = write!(out, ",B_{k}");
    }
    out.push('\n');
    for i in 0..n {
        let sigma = if n == 1 {
            lo
        } else if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        };
        out.push_str(&format_g17(sigma));
        out.push(',');
        out.push_str(&format_g17(inf_modulus(f, sigma).value));
        for &j in &order {
            out.push(',');
            out.push_str(&format_g17(b_value(f, j, sigma)?.lo));
        }
        out.push('\n');
    }
    Ok(out)
}

/// One named check of `verify`.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub rset_certified: bool,
    pub empty_certificate: Option<(f64, f64)>,
    pub summary: Option<String>,
    pub json: Value,
}

/// Runs every structural and cross-validation check on a loaded spec.
pub fn verify(spec: &LoadedSpec, tmax: f64, grid: usize) -> VerifyReport {
    let (f, strip, tol) = (&spec.sum, spec.strip, &spec.tol);
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| checks.push(Check { name, passed, detail });

    let r = match compute_rset(f, strip, tol) {
        Ok(r) => r,
        Err(e) => {
            let name = match e {
                Error::InvariantViolated(_) => "disjoint gaps and no isolated points",
                _ => "set computation",
            };
            push(name, false, e.to_string());
            let json = json!({"passed": false, "checks": checks_json(&checks)});
            return VerifyReport {
                checks,
                rset_certified: false,
                empty_certificate: None,
                summary: None,
                json,
            };
        }
    };

    // Boundary classification at every closed endpoint.
    let mut ambiguous = Vec::new();
    let mut mismatched = Vec::new();
    let mut classified = 0;
    for i in &r.intervals {
        for (sigma, kind, attr) in [(i.lo, i.lo_kind, i.lo_attribution), (i.hi, i.hi_kind, i.hi_attribution)] {
            if kind != EndpointKind::ClosedBoundary {
                continue;
            }
            classified += 1;
            match classify_boundary(f, sigma, tol) {
                Err(e) => ambiguous.push(e.to_string()),
                Ok(c) if c.kind == BoundaryKind::Boundary && (attr.is_none() || c.equality_index == attr) => {}
                Ok(c) => mismatched.push(format!("sigma = {sigma}: {:?} {:?}", c.kind, c.equality_index)),
            }
        }
    }
    if f.len() <= 2 {
        // Two moduli are equal exactly where both inequalities are tight.
        push(
            "boundary classification",
            true,
            format!("not applicable ({} terms)", f.len()),
        );
    } else if !ambiguous.is_empty() {
        push(
            "boundary classification",
            false,
            format!("ambiguous: {}", ambiguous.join("; ")),
        );
    } else if !mismatched.is_empty() {
        push("boundary classification", false, mismatched.join("; "));
    } else {
        push(
            "boundary classification",
            true,
            format!("{classified} endpoint(s) with a single equality"),
        );
    }

    // Disjoint negative sets.
    let overlaps = r
        .negative_intervals
        .windows(2)
        .filter(|w| f.len() >= 3 && w[0].hi >= w[1].lo)
        .count();
    push(
        "disjoint gaps",
        overlaps == 0,
        format!(
            "{} negative interval(s), {overlaps} overlap(s)",
            r.negative_intervals.len()
        ),
    );

    // No isolated points under verified independence.
    let independent = f.len() >= 3 && f.independence() == &IndependenceStatus::Verified;
    let thin: Vec<f64> = r
        .intervals
        .iter()
        .filter(|i| i.width() <= 10.0 * tol.root_tol)
        .map(|i| i.lo)
        .collect();
    if independent {
        push(
            "no isolated points",
            thin.is_empty(),
            if thin.is_empty() {
                "every component has positive width".into()
            } else {
                format!("degenerate components at {thin:?}")
            },
        );
    } else {
        push(
            "no isolated points",
            true,
            format!(
                "not applicable ({} terms, independence {})",
                f.len(),
                f.independence().as_str()
            ),
        );
    }

    // Each internal gap comes from a single B_j with two roots.
    let mut gap_problems = Vec::new();
    let mut gaps = 0;
    for (a, b) in r.internal_gaps() {
        if a.hi_kind != EndpointKind::ClosedBoundary || b.lo_kind != EndpointKind::ClosedBoundary {
            continue;
        }
        gaps += 1;
        match (a.hi_attribution, b.lo_attribution) {
            (Some(x), Some(y)) if x == y && r.b_roots[x].roots.len() == 2 => {}
            (x, y) => gap_problems.push(format!("gap ({}, {}) attributed to {x:?} / {y:?}", a.hi, b.lo)),
        }
    }
    push(
        "gap attribution",
        gap_problems.is_empty(),
        if gap_problems.is_empty() {
            format!("{gaps} internal gap(s), each from one equation with two roots")
        } else {
            gap_problems.join("; ")
        },
    );

    // Closed form of the infimum against the polygon inequalities.
    let (lo, hi) = sample_range(strip, &r);
    let mut disagreements = Vec::new();
    for k in 0..grid {
        let sigma = if grid == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (grid - 1) as f64
        };
        if !strip.contains(sigma) {
            continue;
        }
        let d = inf_modulus(f, sigma);
        if d.straddles_zero {
            continue;
        }
        let Ok(b) = (0..f.len())
            .map(|j| b_value(f, j, sigma))
            .collect::<Result<Vec<_>, _>>()
        else {
            continue;
        };
        let total = f.log_total_at(sigma).exp();
        if d.value.abs() <= 1e-12 * total || b.iter().any(|v| v.lo.abs() <= tol.cert_margin.max(1e-12)) {
            continue;
        }
        if (d.value == 0.0) != b.iter().all(|v| v.lo >= 0.0) {
            disagreements.push(sigma);
        }
    }
    push(
        "infimum closed form",
        disagreements.is_empty(),
        if disagreements.is_empty() {
            format!("{grid} sample(s) consistent")
        } else {
            format!("disagreement at {disagreements:?}")
        },
    );

    // Zeros located directly must project into the set.
    let cross = crosscheck_rset(f, strip, tmax, tol);
    let cross_json = match &cross {
        Ok(c) => {
            push(
                "zero projections",
                c.sound(),
                format!(
                    "{} zero(s) up to height {tmax}, max distance to the set {:e}",
                    c.zeros.len(),
                    c.max_violation
                ),
            );
            push(
                "zero search complete",
                c.complete,
                if c.complete {
                    "all boxes resolved".into()
                } else {
                    "box budget exhausted".into()
                },
            );
            crosscheck_json(c)
        }
        Err(e) => {
            push("zero projections", false, e.to_string());
            Value::Null
        }
    };

    // A dominant term certifies emptiness where the set is empty.
    let domain = f.tail().map_or(strip, |t| t.valid_on());
    let empty = if r.intervals.is_empty() {
        certify_empty(f, domain.alpha(), domain.beta(), tol)
    } else {
        None
    };
    let summary = empty.map(|c| {
        format!(
            "empty set certified on [{}, {}] by term {} (margin {:e})",
            c.lo,
            c.hi,
            label_of(f, c.j),
            -c.worst
        )
    });

    let passed = checks.iter().all(|c| c.passed);
    let json = json!({
        "passed": passed,
        "checks": checks_json(&checks),
        "rset": rset_json(f, &r),
        "empty_set_certified": empty.map(|c| json!({
            "lo": num(c.lo),
            "hi": num(c.hi),
            "term": label_of(f, c.j),
            "margin": num(-c.worst),
        })),
        "crosscheck": cross_json,
    });
    VerifyReport {
        checks,
        rset_certified: r.certified,
        empty_certificate: empty.map(|c| (c.lo, c.hi)),
        summary,
        json,
    }
}

/// Finite σ range for sampling: the strip, or the hull widened by 2 where
/// the strip is unbounded.
fn sample_range(strip: VerticalStrip, r: &RSetResult) -> (f64, f64) {
    let centre = r.a_f.map_or(0.0, |a| a + (r.b_f.unwrap_or(a) - a) / 2.0);
    let lo = if strip.alpha().is_finite() {
        strip.alpha()
    } else {
        r.a_f.unwrap_or(centre) - 2.0
    };
    let hi = if strip.beta().is_finite() {
        strip.beta()
    } else {
        r.b_f.unwrap_or(centre) + 2.0
    };
    (lo, hi)
}

fn checks_json(checks: &[Check]) -> Value {
    json!(checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect::<Vec<_>>())
}

fn crosscheck_json(c: &CrosscheckReport) -> Value {
    json!({
        "searched": rect_json(&c.searched),
        "zeros_found": c.zeros.len(),
        "complete": c.complete,
        "violations": c.violations.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "max_violation": num(c.max_violation),
        "density": c.density.iter().map(|d| json!({"sigma": num(d.sigma), "distance": num(d.distance)})).collect::<Vec<_>>(),
        "max_density_distance": num(c.max_density_distance),
        "histogram": c.histogram,
    })
}
