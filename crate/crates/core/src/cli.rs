//! The `nconvex` command-line tool.
//!
//! Exit codes: 0 success, 1 a checked property fails (or cannot be
//! decided), 2 invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::document::{Document, MeasureDoc};
use crate::domain::Domain;
use crate::error::Error;
use crate::measure::{Continuity, Decision, Measure};
use crate::monotone::{decompose_multimonotone, MonotoneConfig, MonotoneVerdict};
use crate::oracle::{check_difference, check_function, OracleConfig, Verdict};
use crate::order::{
    compare_by_parts, criteria_report, is_strongly_convex, lattice_max, lattice_min, relative_convex,
    strong_modulus, RatioCriterion,
};
use crate::spectral::NConvexFn;
use crate::support::{relative_support, support_polynomial, SupportResult, SupportSpec};

#[derive(Debug, Parser)]
#[command(name = "nconvex", version, about = "Higher-order convex functions from spectral measures")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write grid values to this CSV file (header `x,value`).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Number of interior grid points.
    #[arg(long, default_value_t = 101, global = true)]
    pub grid: usize,
    /// Relative tolerance of numerical checks.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate at a point, or on the grid.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<f64>,
    },
    /// One-sided derivative of order m ≤ n.
    Deriv {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Sign behaviour of the n-th derivative: A, B or C.
    Classify { file: PathBuf },
    /// Measure of n-th order convexity and its Lebesgue parts.
    Measure { file: PathBuf },
    /// Rewrite with a new anchor and print the resulting document.
    Reanchor {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
    },
    /// Decompose into multiply monotone or Lebesgue parts.
    Decompose {
        #[command(subcommand)]
        kind: DecomposeKind,
    },
    /// Decide f ⪰_n g and report the equivalent criteria.
    Compare { f: PathBuf, g: PathBuf },
    /// Lattice bound of two functions, printed as a document.
    Lattice {
        #[command(subcommand)]
        kind: LatticeKind,
    },
    /// Strong n-convexity modulus.
    Strong {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        modulus: Option<f64>,
    },
    /// Support polynomial of a given multiplicity type.
    Support {
        file: PathBuf,
        /// Nodes as "x:l,x:l".
        #[arg(long, allow_hyphen_values = true)]
        nodes: String,
        /// Support relative to this function.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Brute-force divided-difference check.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Check the difference with this function instead.
        #[arg(long)]
        minus: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DecomposeKind {
    Monotone { file: PathBuf },
    Lebesgue { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum LatticeKind {
    Max { f: PathBuf, g: PathBuf },
    Min { f: PathBuf, g: PathBuf },
}

/// A failed command: exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Undecidable(_) | Error::Precondition(_) | Error::Inconsistent(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// What a command produced: text, the JSON report, and whether the checked
/// property held.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
    grid: Option<Vec<(f64, f64)>>,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            ok: true,
            grid: None,
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let (Some(path), Some(grid)) = (&cli.csv, &outcome.grid) {
                if let Err(e) = write_csv(path, grid) {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            }
            let _ = match cli.format {
                Format::Text => writeln!(out, "{}", outcome.text.trim_end()),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&outcome.json).unwrap()),
            };
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Plain decimal for moderate magnitudes, scientific otherwise; both are
/// shortest round-trip representations.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn nums(xs: &[f64]) -> String {
    format!("[{}]", xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", "))
}

fn write_csv(path: &Path, grid: &[(f64, f64)]) -> Result<(), String> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    w.write_record(["x", "value"]).map_err(|e| e.to_string())?;
    for (x, v) in grid {
        w.write_record([x.to_string(), v.to_string()]).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn load(path: &Path) -> Result<NConvexFn, Failure> {
    let doc = Document::load(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let form = doc.to_form().map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(NConvexFn::new(form))
}

fn load_pair(f: &Path, g: &Path) -> Result<(NConvexFn, NConvexFn), Failure> {
    let (f, g) = (load(f)?, load(g)?);
    f.check_compatible(&g)?;
    Ok((f, g))
}

fn grid(domain: Domain, count: usize) -> Result<Vec<f64>, Failure> {
    if count == 0 {
        return Err(invalid("--grid must be at least 1"));
    }
    Ok(domain.interior_grid(count))
}

fn oracle_config(cli: &Cli, trials: usize) -> OracleConfig {
    OracleConfig {
        trials,
        tol: cli.tol,
        seed: cli.seed,
        hints: Vec::new(),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    if !(cli.tol > 0.0) {
        return Err(invalid("--tol must be positive"));
    }
    match &cli.command {
        Command::Eval { file, at } => eval(cli, file, *at),
        Command::Deriv { file, order, at, side } => {
            let f = load(file)?;
            let side = match side {
                SideArg::Right => Continuity::Right,
                SideArg::Left => Continuity::Left,
            };
            let v = f.derivative(*order, *at, side)?;
            Ok(Outcome::ok(num(v), json!({ "order": order, "at": at, "side": side, "value": v })))
        }
        Command::Classify { file } => {
            let case = load(file)?.classify();
            Ok(Outcome::ok(format!("{case:?}"), json!({ "case": case })))
        }
        Command::Measure { file } => measure(&load(file)?),
        Command::Reanchor { file, xi } => {
            let form = load(file)?.re_anchor(*xi)?;
            let doc = Document::from_form(&form);
            Ok(Outcome::ok(doc.to_json(), serde_json::to_value(&doc).unwrap()))
        }
        Command::Decompose { kind } => match kind {
            DecomposeKind::Monotone { file } => decompose_monotone(cli, &load(file)?),
            DecomposeKind::Lebesgue { file } => decompose_lebesgue(cli, &load(file)?),
        },
        Command::Compare { f, g } => compare(cli, f, g),
        Command::Lattice { kind } => {
            let (h, f, g) = match kind {
                LatticeKind::Max { f, g } => {
                    let (f, g) = load_pair(f, g)?;
                    (lattice_max(&f, &g)?, f, g)
                }
                LatticeKind::Min { f, g } => {
                    let (f, g) = load_pair(f, g)?;
                    (lattice_min(&f, &g)?, f, g)
                }
            };
            let _ = (f, g);
            let doc = Document::from_form(h.form());
            Ok(Outcome::ok(doc.to_json(), serde_json::to_value(&doc).unwrap()))
        }
        Command::Strong { file, modulus } => {
            let f = load(file)?;
            let m = strong_modulus(&f);
            let mut text = format!("modulus: {}", num(m));
            let mut report = json!({ "modulus": m });
            let mut ok = true;
            if let Some(c) = modulus {
                ok = is_strongly_convex(&f, *c)?;
                text.push_str(&format!("\nstrongly {}-convex with modulus {}: {ok}", f.order(), num(*c)));
                report["requested"] = json!(c);
                report["strongly_convex"] = json!(ok);
            }
            Ok(Outcome { ok, ..Outcome::ok(text, report) })
        }
        Command::Support { file, nodes, against } => support(file, nodes, against.as_deref()),
        Command::Oracle { file, trials, minus } => {
            if *trials == 0 {
                return Err(invalid("--trials must be at least 1"));
            }
            let f = load(file)?;
            let cfg = oracle_config(cli, *trials);
            let verdict = match minus {
                Some(g) => {
                    let g = load(g)?;
                    f.check_compatible(&g)?;
                    check_difference(&f, &g, &cfg)?
                }
                None => check_function(&f, &cfg)?,
            };
            let subject = if minus.is_some() { "f - g" } else { "f" };
            let text = oracle_text(subject, f.order(), &verdict);
            Ok(Outcome {
                ok: verdict.passed,
                ..Outcome::ok(text, serde_json::to_value(&verdict).unwrap())
            })
        }
    }
}

fn eval(cli: &Cli, file: &Path, at: Option<f64>) -> Result<Outcome, Failure> {
    let f = load(file)?;
    if let Some(x) = at {
        let v = f.evaluate(x)?;
        return Ok(Outcome {
            grid: Some(vec![(x, v)]),
            ..Outcome::ok(num(v), json!({ "at": x, "value": v }))
        });
    }
    let points = grid(f.domain(), cli.grid)?;
    let values = points
        .iter()
        .map(|&x| f.evaluate(x).map(|v| (x, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let text = values.iter().map(|(x, v)| format!("{} {}", num(*x), num(*v))).collect::<Vec<_>>().join("\n");
    let report = json!({ "grid": values.iter().map(|(x, v)| json!({ "x": x, "value": v })).collect::<Vec<_>>() });
    Ok(Outcome {
        grid: Some(values),
        ..Outcome::ok(text, report)
    })
}

fn describe_measure(mu: &Measure) -> String {
    let mut lines = Vec::new();
    for a in mu.atoms() {
        lines.push(format!("  atom at {}: mass {}", num(a.location), num(a.mass)));
    }
    if let Some(rho) = mu.density() {
        for (c, d, p) in rho.segments() {
            lines.push(format!("  density on [{}, {}): {}", num(c), num(d), nums(p.coeffs())));
        }
    }
    for p in mu.singular() {
        lines.push(format!("  cantor on [{}, {}]: mass {}", num(p.start), num(p.end), num(p.mass)));
    }
    if lines.is_empty() {
        lines.push("  zero".into());
    }
    lines.join("\n")
}

fn measure(f: &NConvexFn) -> Result<Outcome, Failure> {
    let mu = f.convexity_measure();
    let (cont, sing, pp) = mu.lebesgue_split();
    let text = format!(
        "measure of convexity of order {}:\n{}\ntotal mass: {}\ncontinuous: {}\nsingular: {}\npure point: {}",
        f.order(),
        describe_measure(mu),
        num(mu.total_mass()),
        num(cont.total_mass()),
        num(sing.total_mass()),
        num(pp.total_mass())
    );
    let report = json!({
        "measure": MeasureDoc::from_measure(mu),
        "total_mass": mu.total_mass(),
        "parts": { "cont": cont.total_mass(), "sing": sing.total_mass(), "pp": pp.total_mass() },
    });
    Ok(Outcome::ok(text, report))
}

fn monotone_line(name: &str, v: &MonotoneVerdict) -> String {
    match &v.witness {
        None => format!("{name}: pass ({} checks)", v.checks),
        Some(w) => format!("{name}: fail at x = {} (k = {}, steps {}, value {})", num(w.x), w.k, nums(&w.steps), num(w.value)),
    }
}

fn decompose_monotone(cli: &Cli, f: &NConvexFn) -> Result<Outcome, Failure> {
    let dec = decompose_multimonotone(f);
    let n = f.order();
    let dom = f.domain();
    let points = grid(dom, cli.grid)?;
    let mut resum_err: f64 = 0.0;
    let mut sup: f64 = 0.0;
    let mut values = Vec::with_capacity(points.len());
    for &x in &points {
        let (v, r) = (f.evaluate(x)?, dec.evaluate(x)?);
        sup = sup.max(v.abs());
        resum_err = resum_err.max((v - r).abs());
        values.push((x, r));
    }
    let cfg = MonotoneConfig {
        trials: 200,
        tol: cli.tol,
        seed: cli.seed,
    };
    let (m1, m2) = dec.check_parts(&points, &cfg)?;
    let resum_ok = resum_err <= cli.tol * sup.max(1.0);
    let signs_ok = dec.sign_conditions_hold(cli.tol);
    let ok = resum_ok && signs_ok && m1.as_ref().is_none_or(|v| v.passed) && m2.as_ref().is_none_or(|v| v.passed);
    let mut text = vec![
        format!("xi: {}", num(dec.xi)),
        format!("case: {:?}", dec.case),
        format!("q: {}", nums(dec.q.coeffs())),
        format!("c_n: {} ({})", num(dec.leading()), if signs_ok { "sign conditions hold" } else { "sign conditions fail" }),
    ];
    text.push(match &m1 {
        None => "M1: zero".into(),
        Some(v) => monotone_line(&format!("M1 ((n+1)-monotone non-increasing up to sign, order {})", n + 1), v),
    });
    text.push(match &m2 {
        None => "M2: zero".into(),
        Some(v) => monotone_line(&format!("M2 ((n+1)-monotone non-decreasing, order {})", n + 1), v),
    });
    text.push(format!("M1 + M2 + Q vs f: max error {}", num(resum_err)));
    let report = json!({
        "xi": dec.xi,
        "case": dec.case,
        "q": dec.q.coeffs(),
        "c_n": dec.leading(),
        "sign_conditions": signs_ok,
        "m1": { "measure": MeasureDoc::from_measure(dec.m1.convexity_measure()), "check": m1 },
        "m2": { "measure": MeasureDoc::from_measure(dec.m2.convexity_measure()), "check": m2 },
        "resum_error": resum_err,
        "p": [0.0],
    });
    Ok(Outcome {
        ok,
        grid: Some(values),
        ..Outcome::ok(text.join("\n"), report)
    })
}

fn decompose_lebesgue(cli: &Cli, f: &NConvexFn) -> Result<Outcome, Failure> {
    let (c, s, p) = f.lebesgue_parts();
    let points = grid(f.domain(), cli.grid)?;
    let mut err: f64 = 0.0;
    let mut sup: f64 = 0.0;
    let mut values = Vec::new();
    for &x in &points {
        let v = f.evaluate(x)?;
        let r = c.evaluate(x)? + s.evaluate(x)? + p.evaluate(x)?;
        sup = sup.max(v.abs());
        err = err.max((v - r).abs());
        values.push((x, r));
    }
    let ok = err <= cli.tol * sup.max(1.0);
    let text = format!(
        "f_cont:\n{}\nf_sing:\n{}\nf_pp:\n{}\nf_cont + f_sing + f_pp vs f: max error {}",
        describe_measure(c.convexity_measure()),
        describe_measure(s.convexity_measure()),
        describe_measure(p.convexity_measure()),
        num(err),
    );
    let report = json!({
        "cont": Document::from_form(c.form()),
        "sing": Document::from_form(s.form()),
        "pp": Document::from_form(p.form()),
        "resum_error": err,
    });
    Ok(Outcome {
        ok,
        grid: Some(values),
        ..Outcome::ok(text, report)
    })
}

fn oracle_text(subject: &str, n: usize, v: &Verdict) -> String {
    match &v.witness {
        None => format!("{subject} is {n}-convex on all sampled grids: pass ({} trials)", v.trials),
        Some(w) => format!(
            "{subject} fails the {n}-convexity check at trial {}: divided difference {} < {} at {}",
            v.trials, num(w.divided_difference), num(w.threshold), nums(&w.points)
        ),
    }
}

fn compare(cli: &Cli, f: &Path, g: &Path) -> Result<Outcome, Failure> {
    let (f, g) = load_pair(f, g)?;
    let relative = relative_convex(&f, &g)?;
    if relative == Decision::Undecidable {
        return Ok(Outcome {
            ok: false,
            ..Outcome::ok("f ⪰_n g: undecidable (Cantor parts are not aligned)".into(), json!({ "relative": relative }))
        });
    }
    let report = criteria_report(&f, &g, &oracle_config(cli, 500))?;
    let parts = compare_by_parts(&f, &g)?;
    let oracle = if report.oracle.passed {
        format!("pass ({} grids)", report.oracle.trials)
    } else {
        format!("fail (trial {})", report.oracle.trials)
    };
    let ratio = match report.radon_nikodym {
        RatioCriterion::NotApplicable => "not applicable".to_string(),
        RatioCriterion::Holds { max_ratio } => format!("holds (max ratio {})", num(max_ratio)),
        RatioCriterion::Fails { max_ratio } => format!("fails (max ratio {})", num(max_ratio)),
    };
    let text = [
        format!("f ⪰_n g: {relative}"),
        "criterion                         result".to_string(),
        format!("a) divided differences of f - g  {oracle}"),
        format!("b) measures mu^f >= mu^g         {}", report.measures),
        format!("c) f^(n+1) >= g^(n+1)            {}", report.derivatives),
        format!("d) d mu^g / d mu^f <= 1          {ratio}"),
        format!("parts: cont {}, sing {}, pp {}", parts.cont, parts.sing, parts.pp),
    ]
    .join("\n");
    let json = json!({ "relative": relative, "criteria": report, "parts": parts });
    Ok(Outcome {
        ok: relative.is_true(),
        ..Outcome::ok(text, json)
    })
}

fn support_text(r: &SupportResult) -> String {
    let mut lines = vec![format!("p: {}", nums(r.p.coeffs()))];
    for c in &r.intervals {
        let sign = if c.expected_sign > 0 { "+" } else { "-" };
        let status = if c.passed { "pass".to_string() } else { format!("fail at x = {}", num(c.witness.unwrap_or(f64::NAN))) };
        lines.push(format!("({}, {}) sign {sign}: {status}", num(c.start), num(c.end)));
    }
    lines.push(format!("node residual: {}", num(r.node_residual)));
    lines.push(format!("max violation: {} (scale {})", num(r.max_violation), num(r.scale)));
    lines.push(format!("verdict: {}", if r.passed { "pass" } else { "fail" }));
    lines.join("\n")
}

fn support(file: &Path, nodes: &str, against: Option<&Path>) -> Result<Outcome, Failure> {
    let f = load(file)?;
    let spec = SupportSpec::new(f.order(), f.domain(), SupportSpec::parse_nodes(nodes)?)?;
    let (result, g_plus_p) = match against {
        None => (support_polynomial(&f, &spec)?, None),
        Some(g) => {
            let g = load(g)?;
            f.check_compatible(&g)?;
            let r = relative_support(&f, &g, &spec)?;
            (r.result, Some(Document::from_form(r.g_plus_p.form())))
        }
    };
    let text = support_text(&result);
    let mut report = serde_json::to_value(&result).unwrap();
    if let Some(doc) = g_plus_p {
        report["g_plus_p"] = serde_json::to_value(doc).unwrap();
    }
    Ok(Outcome {
        ok: result.passed,
        ..Outcome::ok(text, report)
    })
}
