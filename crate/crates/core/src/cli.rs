//! Command-line front end.
//!
//! [`run`] takes the argument vector and the value of `HASSE_FORMS_THREADS`
//! and returns the exit code together with everything that would be printed,
//! so the whole interface can be tested in-process.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{HasseLevel, WeierstrassCurve, MAX_COUNT_ORDER};
use crate::forms::{missing_set, realizable_set, twisted_form_count, ClassGroup, PTorsionDescription};
use crate::gf::{is_prime, FieldCtx, FieldElement};
use crate::search::{
    census, find_curve_with_class, CensusOptions, FieldSummary, SearchMode, SearchOutcome, Verdict,
};
use crate::verify::{run_suite, Suite, SuiteReport, VerifyError};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "HASSE_FORMS_THREADS";

/// Largest `q` for which `A_q` is computed from `f^{(q-1)/2}` directly;
/// above it `A_q` is obtained as `A_p^{(q-1)/(p-1)}`.
pub const DIRECT_HASSE_Q_LIMIT: u64 = 1024;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hasse-forms",
    version,
    about = "Twisted forms of mu_p as Frobenius kernels of elliptic curves over finite fields"
)]
struct Cli {
    /// Emit a key-sorted JSON report envelope.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hasse invariant, point count and Frobenius-kernel class of a curve.
    Hasse(CurveArgs),
    /// Description of the p-torsion group scheme of a curve.
    Ptorsion(CurveArgs),
    /// Realizable classes predicted by the trace bound (no enumeration).
    Realizable(FieldArgs),
    /// Search for an ordinary curve with a given Hasse class.
    Search(SearchArgs),
    /// Witness search for every class of F_q.
    Census(CensusArgs),
    /// Run exhaustive property suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic.
    #[arg(short = 'p')]
    p: u64,
    /// Extension degree.
    #[arg(short = 'n', default_value_t = 1)]
    n: u32,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Coefficient of x^2 (characteristic 3 only); `c0,c1,...` in extensions.
    #[arg(long = "a2", default_value = "0", allow_hyphen_values = true)]
    a2: String,
    /// Coefficient of x.
    #[arg(long = "a4", default_value = "0", allow_hyphen_values = true)]
    a4: String,
    /// Constant coefficient.
    #[arg(long = "a6", default_value = "0", allow_hyphen_values = true)]
    a6: String,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Target residue phi([A_p]) in 1..p-1.
    #[arg(short = 'h')]
    h: u64,
    /// Scan every model even when the trace bound rules the class out.
    #[arg(long)]
    exhaustive: bool,
    /// Print help.
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Scan every model even when the trace bound rules a class out.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated suite names, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Characteristics: `a..b` (primes in the inclusive range) or `5,7,11`.
    #[arg(short = 'p')]
    p: Option<String>,
    /// Extension degrees: `a..b` or a list.
    #[arg(short = 'n')]
    n: Option<String>,
}

/// Rewrites the multi-letter short flags `-a2`, `-a4`, `-a6` to long form.
fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| {
            for flag in ["-a2", "-a4", "-a6"] {
                if a == flag || a.starts_with(&format!("{flag}=")) {
                    return format!("-{a}");
                }
            }
            a
        })
        .collect()
}

fn parse_threads(raw: Option<&str>) -> Result<usize, String> {
    match raw {
        None => Ok(0),
        Some(text) => match text.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!(
                "{THREADS_ENV} must be a positive integer, got {text:?}"
            )),
        },
    }
}

/// Parses `a..b` (inclusive) and comma lists. Ranges pass through `keep`.
fn parse_list(text: &str, keep: impl Fn(u64) -> bool) -> Result<Vec<u64>, String> {
    let mut out = BTreeSet::new();
    for item in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| format!("bad range {item:?}"))?;
            let hi: u64 = hi.trim().parse().map_err(|_| format!("bad range {item:?}"))?;
            if lo > hi {
                return Err(format!("empty range {item:?}"));
            }
            out.extend((lo..=hi).filter(|&v| keep(v)));
        } else {
            out.insert(item.parse::<u64>().map_err(|_| format!("bad value {item:?}"))?);
        }
    }
    if out.is_empty() {
        return Err(format!("{text:?} selects nothing"));
    }
    Ok(out.into_iter().collect())
}

fn field(args: &FieldArgs) -> Result<FieldCtx, String> {
    FieldCtx::new(args.p, args.n).map_err(|e| format!("invalid field (p = {}, n = {}): {e}", args.p, args.n))
}

fn element(ctx: &FieldCtx, name: &str, text: &str) -> Result<FieldElement, String> {
    let parsed = match text.trim().strip_prefix('-') {
        Some(rest) if ctx.degree() == 1 => rest.parse::<i64>().ok().map(|v| ctx.from_i64(-v)),
        Some(_) => None,
        None => ctx.parse_element(text).ok(),
    };
    parsed.ok_or_else(|| format!("invalid value for --{name}: {text:?} is not an element of F_{}", ctx.order()))
}

fn curve(ctx: &FieldCtx, args: &CurveArgs) -> Result<WeierstrassCurve, String> {
    let a2 = element(ctx, "a2", &args.a2)?;
    let a4 = element(ctx, "a4", &args.a4)?;
    let a6 = element(ctx, "a6", &args.a6)?;
    WeierstrassCurve::new(ctx, a2, a4, a6).map_err(|e| {
        format!(
            "rejected curve (a2 = {}, a4 = {}, a6 = {}): {e}",
            args.a2, args.a4, args.a6
        )
    })
}

fn field_header(ctx: &FieldCtx) -> String {
    if ctx.degree() == 1 {
        format!("field    F_{}\n", ctx.order())
    } else {
        format!(
            "field    F_{} = F_{}[t]/({})\n",
            ctx.order(),
            ctx.characteristic(),
            ctx.modulus_string()
        )
    }
}

fn field_params(args: &FieldArgs) -> Value {
    json!({ "p": args.p, "n": args.n })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

/// A rendered command: machine payload, human text, and exit code.
struct Rendered {
    params: Value,
    result: Value,
    text: String,
    code: i32,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_hasse(args: &CurveArgs) -> Result<Rendered, String> {
    let ctx = field(&args.field)?;
    let e = curve(&ctx, args)?;
    let p = ctx.characteristic();
    let q = ctx.order();
    let group = ClassGroup::new(&ctx);
    let a_p = e.hasse_p(&ctx);
    let m = (q - 1) / (p - 1);
    let (a_q, a_q_source) = if q <= DIRECT_HASSE_Q_LIMIT {
        (e.hasse_invariant(&ctx, HasseLevel::Full), "direct")
    } else {
        (ctx.pow(&a_p, m), "norm")
    };
    let frob = if q <= MAX_COUNT_ORDER {
        e.point_count(&ctx).ok()
    } else {
        None
    };
    let class = group.class_of(&a_p).ok();
    let phi = class.as_ref().map(|c| group.phi_residue(c));
    let ordinary = !a_p.is_zero();
    let result = json!({
        "field": FieldSummary::of(&ctx),
        "curve": { "a2": e.a2().to_string(), "a4": e.a4().to_string(), "a6": e.a6().to_string() },
        "discriminant": e.discriminant(&ctx).to_string(),
        "j": e.j_invariant(&ctx).to_string(),
        "count": frob.map(|f| f.count),
        "beta": frob.map(|f| f.beta),
        "ordinary": ordinary,
        "hasse_p": a_p.to_string(),
        "hasse_q": a_q.to_string(),
        "hasse_q_source": a_q_source,
        "class_exp": class.as_ref().map(|c| c.exp()),
        "phi": phi,
    });
    let mut text = field_header(&ctx);
    let _ = writeln!(text, "curve    {e}");
    let _ = writeln!(text, "Delta    {}", e.discriminant(&ctx));
    let _ = writeln!(text, "j        {}", e.j_invariant(&ctx));
    let _ = writeln!(text, "#E       {}", opt(frob.map(|f| f.count)));
    let _ = writeln!(text, "beta     {}", opt(frob.map(|f| f.beta)));
    let _ = writeln!(
        text,
        "type     {}",
        if ordinary { "ordinary" } else { "supersingular" }
    );
    let _ = writeln!(text, "A_p      {a_p}");
    let _ = writeln!(text, "A_q      {a_q} ({a_q_source})");
    let _ = writeln!(text, "class    {}", opt(class.as_ref().map(|c| format!("g^{}", c.exp()))));
    let _ = writeln!(text, "phi      {}", opt(phi));
    Ok(Rendered {
        params: curve_params(args),
        result,
        text,
        code: EXIT_OK,
    })
}

fn curve_params(args: &CurveArgs) -> Value {
    json!({ "p": args.field.p, "n": args.field.n, "a2": args.a2, "a4": args.a4, "a6": args.a6 })
}

fn cmd_ptorsion(args: &CurveArgs) -> Result<Rendered, String> {
    let ctx = field(&args.field)?;
    let e = curve(&ctx, args)?;
    let group = ClassGroup::new(&ctx);
    let mut text = field_header(&ctx);
    let _ = writeln!(text, "curve    {e}");
    let result = match group.ptorsion_description(&e) {
        PTorsionDescription::SupersingularM2 => {
            let _ = writeln!(text, "E[p]     M2 (supersingular: self-dual extension of alpha_p by alpha_p)");
            json!({ "field": FieldSummary::of(&ctx), "scheme": "M2" })
        }
        PTorsionDescription::OrdinaryScheme {
            hasse_class,
            hasse,
            j,
            l_root,
            etale_degrees,
        } => {
            let phi = group.phi_residue(&hasse_class);
            let degrees = etale_degrees
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(text, "E[p]     k + M + L (ordinary)");
            let _ = writeln!(text, "h        {hasse} (class g^{}, phi {phi})", hasse_class.exp());
            let _ = writeln!(text, "M        y^{} - h, factor degrees {{{degrees}}}", ctx.characteristic() - 1);
            let _ = writeln!(text, "j        {j}");
            let _ = writeln!(text, "L        x^p - j = (x - {l_root})^p");
            json!({
                "field": FieldSummary::of(&ctx),
                "scheme": "ordinary",
                "hasse": hasse.to_string(),
                "class_exp": hasse_class.exp(),
                "phi": phi,
                "etale_degrees": etale_degrees,
                "j": j.to_string(),
                "l_root": l_root.to_string(),
            })
        }
    };
    Ok(Rendered {
        params: curve_params(args),
        result,
        text,
        code: EXIT_OK,
    })
}

fn cmd_realizable(args: &FieldArgs) -> Result<Rendered, String> {
    let ctx = field(args)?;
    let p = ctx.characteristic();
    let q = ctx.order();
    let realizable: Vec<u64> = realizable_set(p, q).into_iter().collect();
    let missing: Vec<u64> = missing_set(p, q).into_iter().collect();
    let verdict = if missing.is_empty() {
        Verdict::Complete
    } else {
        Verdict::ProperSubset(missing.clone())
    };
    let mut text = field_header(&ctx);
    let _ = writeln!(text, "forms    {}", twisted_form_count(p));
    let _ = writeln!(text, "realizable {}", list(&realizable));
    let _ = writeln!(text, "missing    {}", list(&missing));
    let _ = writeln!(text, "verdict  {}", verdict_text(&verdict));
    Ok(Rendered {
        params: field_params(args),
        result: json!({
            "field": FieldSummary::of(&ctx),
            "forms": twisted_form_count(p),
            "realizable": realizable,
            "missing": missing,
            "verdict": verdict,
        }),
        text,
        code: EXIT_OK,
    })
}

fn list(v: &[u64]) -> String {
    let inner = v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    format!("{{{inner}}}")
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Complete => "complete".into(),
        Verdict::ProperSubset(m) => format!("proper subset, missing {}", list(m)),
    }
}

fn mode(exhaustive: bool) -> SearchMode {
    if exhaustive {
        SearchMode::Exhaustive
    } else {
        SearchMode::Shortcut
    }
}

fn cmd_search(args: &SearchArgs) -> Result<Rendered, String> {
    let ctx = field(&args.field)?;
    let mode = mode(args.exhaustive);
    let outcome = find_curve_with_class(&ctx, args.h, mode).map_err(|e| e.to_string())?;
    let mut text = field_header(&ctx);
    let _ = writeln!(text, "target   phi = {}", args.h);
    let witness = match outcome {
        SearchOutcome::Found(w) => {
            let _ = writeln!(text, "witness  {}", w.curve);
            let _ = writeln!(text, "index    {}", w.index);
            let _ = writeln!(text, "A_p      {} (class g^{})", w.hasse, w.class_exp);
            let _ = writeln!(text, "#E       {}", w.count);
            let _ = writeln!(text, "beta     {}", w.beta);
            Some(w)
        }
        SearchOutcome::NotRealizable => {
            let _ = writeln!(text, "result   not realizable");
            None
        }
    };
    Ok(Rendered {
        params: json!({ "p": args.field.p, "n": args.field.n, "h": args.h, "mode": mode }),
        result: json!({
            "field": FieldSummary::of(&ctx),
            "residue": args.h,
            "mode": mode,
            "found": witness.is_some(),
            "witness": witness,
        }),
        text,
        code: EXIT_OK,
    })
}

fn cmd_census(args: &CensusArgs, threads: usize) -> Result<Rendered, String> {
    let ctx = field(&args.field)?;
    let mode = mode(args.exhaustive);
    let report = census(&ctx, CensusOptions { mode, threads }).map_err(|e| e.to_string())?;
    let mut text = field_header(&ctx);
    let _ = writeln!(text, "{:>7} {:>5}  {:<24} witness", "residue", "class", "traces");
    for e in &report.entries {
        let traces = e
            .admissible_traces
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let witness = match &e.witness {
            Some(w) => format!("{} #E={} beta={}", w.curve, w.count, w.beta),
            None => "-".into(),
        };
        let _ = writeln!(text, "{:>7} {:>5}  {:<24} {witness}", e.residue, format!("g^{}", e.class_exp), traces);
    }
    let _ = writeln!(text, "verdict  {}", verdict_text(&report.verdict));
    let _ = writeln!(
        text,
        "formula  {}",
        if report.formula_agrees { "agrees" } else { "DISAGREES" }
    );
    let _ = writeln!(text, "scanned  {} models", report.models_scanned);
    Ok(Rendered {
        params: json!({ "p": args.field.p, "n": args.field.n, "mode": mode }),
        code: if report.formula_agrees { EXIT_OK } else { EXIT_FAILED },
        result: to_value(&report),
        text,
    })
}

#[derive(Serialize)]
struct SuiteRun {
    #[serde(flatten)]
    report: SuiteReport,
    /// Field orders left out because they are outside the suite's scope.
    skipped: Vec<u64>,
}

fn cmd_verify(args: &VerifyArgs, threads: usize) -> Result<Rendered, String> {
    let all = args.suite.trim() == "all";
    let suites: Vec<Suite> = if all {
        Suite::ALL.to_vec()
    } else {
        args.suite
            .split(',')
            .map(|s| Suite::parse(s.trim()).ok_or_else(|| format!("unknown suite {s:?}")))
            .collect::<Result<_, _>>()?
    };
    let ps = args
        .p
        .as_deref()
        .map(|t| parse_list(t, |v| v > 2 && is_prime(v)))
        .transpose()?;
    let ns = args
        .n
        .as_deref()
        .map(|t| parse_list(t, |v| v >= 1))
        .transpose()?;
    if ps.is_none() && ns.is_some() {
        return Err("-n needs -p".into());
    }
    let requested: Option<Vec<(u64, u32)>> = ps.map(|ps| {
        let ns = ns.unwrap_or_else(|| vec![1]);
        ps.iter()
            .flat_map(|&p| ns.iter().map(move |&n| (p, n as u32)))
            .collect()
    });

    let mut runs = Vec::new();
    for suite in suites {
        let mut skipped = Vec::new();
        let fields = match &requested {
            None => suite.default_fields(),
            Some(fields) if all => {
                // Under `all`, each suite takes the part of the range it covers.
                let mut keep = Vec::new();
                for &(p, n) in fields {
                    let ctx = FieldCtx::new(p, n).map_err(|e| format!("invalid field {p}^{n}: {e}"))?;
                    let q = ctx.order();
                    let applies = suite != Suite::ClosedForms || [5, 7, 11].contains(&p);
                    if applies && q <= suite.limit() {
                        keep.push((p, n));
                    } else {
                        skipped.push(q);
                    }
                }
                keep
            }
            Some(fields) => fields.clone(),
        };
        let report = match run_suite(suite, &fields, threads) {
            Ok(r) => r,
            Err(e @ (VerifyError::TooLarge { .. } | VerifyError::Unsupported { .. } | VerifyError::Field(_))) => {
                return Err(e.to_string())
            }
            Err(e) => return Err(format!("suite {suite}: {e}")),
        };
        runs.push(SuiteRun { report, skipped });
    }
    let passed = runs.iter().all(|r| r.report.passed());
    let mut text = String::new();
    for run in &runs {
        let r = &run.report;
        let fields = r.fields.iter().map(|q| format!("F_{q}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(
            text,
            "{} {:<14} cases {:>8}  failures {:>3}  over {}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.suite.name(),
            r.cases,
            r.failures,
            if fields.is_empty() { "-".into() } else { fields }
        );
        let _ = writeln!(text, "     {}", r.statement);
        if !run.skipped.is_empty() {
            let _ = writeln!(text, "     skipped q = {:?}", run.skipped);
        }
        for s in &r.failure_samples {
            let _ = writeln!(text, "     ! {s}");
        }
    }
    let _ = writeln!(text, "{}", if passed { "all suites passed" } else { "FAILED" });
    Ok(Rendered {
        params: json!({ "suite": args.suite, "p": args.p, "n": args.n }),
        result: json!({ "suites": runs, "passed": passed }),
        text,
        code: if passed { EXIT_OK } else { EXIT_FAILED },
    })
}

/// Machine-mode report.
#[derive(Serialize)]
struct ReportEnvelope<'a> {
    command: &'a str,
    params: Value,
    result: Value,
    #[serde(rename = "timing-ms")]
    timing_ms: u64,
    #[serde(rename = "tool-version")]
    tool_version: &'static str,
}

/// Runs the tool. `args` includes the program name; `threads_env` is the raw
/// value of [`THREADS_ENV`], if set.
pub fn run(args: impl IntoIterator<Item = String>, threads_env: Option<&str>) -> Outcome {
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(rendered)
            };
        }
    };
    let threads = match parse_threads(threads_env) {
        Ok(t) => t,
        Err(msg) => return Outcome::usage(format!("error: {msg}")),
    };
    let start = Instant::now();
    let (name, rendered) = match &cli.command {
        Command::Hasse(a) => ("hasse", cmd_hasse(a)),
        Command::Ptorsion(a) => ("ptorsion", cmd_ptorsion(a)),
        Command::Realizable(a) => ("realizable", cmd_realizable(a)),
        Command::Search(a) => ("search", cmd_search(a)),
        Command::Census(a) => ("census", cmd_census(a, threads)),
        Command::Verify(a) => ("verify", cmd_verify(a, threads)),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(msg) => return Outcome::usage(format!("error: {msg}")),
    };
    let body = if cli.json {
        let envelope = ReportEnvelope {
            command: name,
            params: rendered.params,
            result: rendered.result,
            timing_ms: start.elapsed().as_millis() as u64,
            tool_version: env!("CARGO_PKG_VERSION"),
        };
        // Round-tripping through `Value` sorts every object's keys.
        let sorted = to_value(&envelope);
        let mut s = serde_json::to_string_pretty(&sorted).expect("value serializes");
        s.push('\n');
        s
    } else {
        rendered.text
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome {
                code: rendered.code,
                stdout: String::new(),
                stderr: format!("wrote {}\n", path.display()),
            },
            Err(e) => Outcome::usage(format!("error: cannot write {}: {e}", path.display())),
        },
        None => Outcome {
            code: rendered.code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        let argv = std::iter::once("hasse-forms")
            .chain(args.iter().copied())
            .map(String::from);
        run(argv, None)
    }

    fn json(args: &[&str]) -> Value {
        let mut v: Vec<&str> = args.to_vec();
        v.push("--json");
        let out = go(&v);
        assert_eq!(out.code, 0, "{}", out.stderr);
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn short_coefficient_flags() {
        assert_eq!(
            normalize_args(["-a4".to_string(), "-a6=1".into(), "-p".into()]),
            ["--a4", "--a6=1", "-p"]
        );
    }

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("3..11", is_prime).unwrap(), [3, 5, 7, 11]);
        assert_eq!(parse_list("5,7,11", |_| true).unwrap(), [5, 7, 11]);
        assert!(parse_list("9..3", |_| true).is_err());
        assert!(parse_list("x", |_| true).is_err());
        assert!(parse_list("24..28", is_prime).is_err());
    }

    #[test]
    fn thread_variable() {
        assert_eq!(parse_threads(None), Ok(0));
        assert_eq!(parse_threads(Some("4")), Ok(4));
        assert!(parse_threads(Some("0")).is_err());
        assert!(parse_threads(Some("many")).is_err());
    }

    #[test]
    fn hasse_example() {
        let r = &json(&["hasse", "-p", "5", "-a4", "1", "-a6", "1"])["result"];
        assert_eq!(r["beta"], -3);
        assert_eq!(r["hasse_p"], "2");
        assert_eq!(r["phi"], 2);
        assert_eq!(r["ordinary"], true);
    }

    #[test]
    fn hasse_supersingular() {
        let r = &json(&["hasse", "-p", "5", "-a6", "1"])["result"];
        assert_eq!(r["hasse_p"], "0");
        assert_eq!(r["ordinary"], false);
        assert_eq!(r["phi"], Value::Null);
    }

    #[test]
    fn singular_model_is_a_usage_error() {
        let out = go(&["hasse", "-p", "5"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("singular"), "{}", out.stderr);
    }

    #[test]
    fn bad_coefficient_is_named() {
        let out = go(&["hasse", "-p", "5", "-a4", "x"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("--a4"), "{}", out.stderr);
    }

    #[test]
    fn negative_coefficients() {
        let r = &json(&["hasse", "-p", "5", "-a4", "-4", "-a6", "1"])["result"];
        assert_eq!(r["curve"]["a4"], "1");
    }

    #[test]
    fn realizable_examples() {
        let r = &json(&["realizable", "-p", "19"])["result"];
        assert_eq!(r["missing"], json!([9, 10]));
        let r = &json(&["realizable", "-p", "17"])["result"];
        assert_eq!(r["verdict"], "Complete");
        let r = &json(&["realizable", "-p", "19", "-n", "2"])["result"];
        assert_eq!(r["verdict"], "Complete");
        assert_eq!(r["field"]["modulus"], "t^2 + 1");
    }

    #[test]
    fn search_examples() {
        let r = &json(&["search", "-p", "5", "-h", "1"])["result"];
        assert_eq!(r["found"], true);
        let r = &json(&["search", "-p", "19", "-h", "9"])["result"];
        assert_eq!(r["found"], false);
        assert_eq!(go(&["search", "-p", "19", "-h", "0"]).code, 2);
        assert_eq!(go(&["search", "-p", "19", "-h", "19"]).code, 2);
    }

    #[test]
    fn ptorsion_examples() {
        let r = &json(&["ptorsion", "-p", "5", "-a4", "1", "-a6", "1"])["result"];
        assert_eq!(r["etale_degrees"], json!([4]));
        assert_eq!(r["j"], "2");
        assert_eq!(r["l_root"], "2");
        let r = &json(&["ptorsion", "-p", "5", "-a4", "3"])["result"];
        assert_eq!(r["etale_degrees"], json!([1, 1, 1, 1]));
        let r = &json(&["ptorsion", "-p", "5", "-a6", "1"])["result"];
        assert_eq!(r["scheme"], "M2");
    }

    #[test]
    fn verify_examples() {
        assert_eq!(go(&["verify", "--suite", "closed-forms", "-p", "5,7,11"]).code, 0);
        assert_eq!(go(&["verify", "--suite", "twists", "-p", "5"]).code, 0);
        assert_eq!(go(&["verify", "--suite", "closed-forms", "-p", "13"]).code, 2);
        assert_eq!(go(&["verify", "--suite", "nope"]).code, 2);
        assert_eq!(go(&["verify", "-p", "3..x"]).code, 2);
    }

    #[test]
    fn extension_header_names_modulus() {
        let out = go(&["realizable", "-p", "3", "-n", "2"]);
        assert!(out.stdout.starts_with("field    F_9 = F_3[t]/(t^2 + 1)\n"), "{}", out.stdout);
    }
}
