//! Command-line front end. Exit codes: 0 success, 1 a verification failed,
//! 2 the input did not parse, 3 the input is outside an operation's domain.

use std::io::{IsTerminal, Write};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::analysis::{
    annihilator_normal_form, composition_series_with, decompose_with, dot_orbit_dimension, solve_report,
    verify_degree_bounds, verify_dot_span, verify_lemma_3_1, verify_submodule_free, AnalysisError,
    TruncationSpec, DECOMPOSE_TRUNCATION, SERIES_TRUNCATION,
};
use crate::expr::{parse_poly, parse_uea, parse_value, ExprError, Value as ExprValue};
use crate::partitions::{PartitionParseError, Pseudopartition};
use crate::report::Report;
use crate::scalar::{parse_rational, Poly, ScalarError};
use crate::suite::{criteria, DEFAULT_SEED};
use crate::whittaker::{
    act, dot_act, is_whittaker_vector, nilpotency_index, whittaker_reduce, ModuleContext, ModuleElement,
    WhittakerError, WhittakerHom,
};
use crate::witt::{project, witt_act, WittError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "vira", version, about = "Exact computations in Whittaker modules over the Virasoro algebra")]
struct Cli {
    #[command(flatten)]
    global: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Globals {
    /// ψ(d₁), a nonzero rational
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    psi1: String,
    /// ψ(d₂), a nonzero rational
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    psi2: String,
    /// M, L:xi=<rational>, Q:p=<polynomial> or W
    #[arg(long, global = true, default_value = "M")]
    module: String,
    /// Largest |λ| in the search window
    #[arg(long, global = true)]
    maxdeg: Option<u32>,
    /// Largest λ(0) in the search window
    #[arg(long, global = true)]
    zerocap: Option<u32>,
    /// Largest power of z in the search window (universal module only)
    #[arg(long, global = true)]
    zcap: Option<u32>,
    /// Emit JSON reports
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal-order an element of U(V)
    Straighten {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Apply an element to the cyclic vector of the module
    Act {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Whittaker vectors in the search window
    Solve {
        /// Fail (exit 1) unless the dimension is this
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Run one check
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Direct-sum decomposition of M_ψ / U(V)p(z)w
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Composition series of M_ψ / U(V)(z-ξ)^a w
    Series {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        a: u32,
    },
    /// Normal form of an element modulo the annihilator of w
    Annihilate {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Defaults to the modulus of --module
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },
    /// Extract a Whittaker vector from the submodule generated by a vector
    Reduce {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Dimension of U(n⁺)·v under the shifted action
    Orbit {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Project to U(W), or act on L_{ψ,0} when the expression ends in w
    Witt {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Is the vector annihilated by d₁ - ψ₁ and d₂ - ψ₂?
    Whittaker {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Leading term of [d_{k+2}, d_{-k}^a] w
    Leading {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        a: u32,
    },
    /// Degree bound and leading term of [d_m, d_{-λ}] w
    Degree {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        lambda: String,
    },
    /// Span and vanishing of d_n · z^i d_{-λ} w
    Dotspan {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        i: u32,
        #[arg(long)]
        lambda: String,
    },
    /// Nilpotency index of d_n on d_{-λ} w against its bound
    Nilpotency {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lambda: String,
    },
    /// Freeness of U(V) q(z) w in the search window
    Submodule {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// The full reproduction grid
    All,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<PartitionParseError> for CliError {
    fn from(e: PartitionParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::BadRational(_) => CliError::Parse(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<WhittakerError> for CliError {
    fn from(e: WhittakerError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<WittError> for CliError {
    fn from(e: WittError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Scalar(s) => s.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// What a command produced: a report, and for computational verbs a plain
/// text rendering used instead of the aligned report.
struct Output {
    report: Report,
    text: Option<String>,
    /// Whether a failed report means exit 1.
    verifies: bool,
}

impl Output {
    fn computed(report: Report, text: String) -> Self {
        Output { report, text: Some(text), verifies: false }
    }

    fn verified(report: Report) -> Self {
        Output { report, text: None, verifies: true }
    }
}

struct Env {
    psi: WhittakerHom,
    ctx: Arc<ModuleContext>,
    witt: bool,
}

fn parse_module(desc: &str, psi: &WhittakerHom) -> Result<(Arc<ModuleContext>, bool), CliError> {
    let desc = desc.trim();
    if desc == "M" {
        return Ok((ModuleContext::universal(psi.clone()), false));
    }
    if desc == "W" {
        return Ok((ModuleContext::quotient(psi.clone(), Poly::z())?, true));
    }
    if let Some(xi) = desc.strip_prefix("L:xi=") {
        return Ok((ModuleContext::central(psi.clone(), &parse_rational(xi)?), false));
    }
    if let Some(p) = desc.strip_prefix("Q:p=") {
        return Ok((ModuleContext::quotient(psi.clone(), parse_poly(p)?)?, false));
    }
    Err(CliError::Parse(format!("unknown module descriptor {desc:?}; expected M, L:xi=r, Q:p=poly or W")))
}

fn element_json(v: &ModuleElement) -> Value {
    json!({ "text": v.to_string(), "element": v.to_json() })
}

fn truncation(g: &Globals, default: TruncationSpec) -> TruncationSpec {
    TruncationSpec::new(
        g.maxdeg.unwrap_or(default.max_degree),
        g.zerocap.unwrap_or(default.max_zero_count),
        g.zcap.unwrap_or(default.max_z_power),
    )
}

fn with_module(report: Report, env: &Env) -> Report {
    report
        .param("psi1", env.psi.psi1().to_string())
        .param("psi2", env.psi.psi2().to_string())
        .param("module", if env.witt { "W".to_string() } else { env.ctx.descriptor() })
}

fn parse_lambda(text: &str) -> Result<Pseudopartition, CliError> {
    Ok(text.parse::<Pseudopartition>()?)
}

fn vector(expr: &str, env: &Env) -> Result<ModuleElement, CliError> {
    let u = match parse_value(expr)? {
        ExprValue::Algebra(u) | ExprValue::Vector(u) => u,
    };
    let w = ModuleElement::cyclic(&env.ctx);
    Ok(if env.witt { witt_act(&project(&u), &w)? } else { act(&u, &w) })
}

fn dispatch(cli: &Cli, color: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = &cli.global;
    let psi = WhittakerHom::new(parse_rational(&g.psi1)?, parse_rational(&g.psi2)?)?;
    let (ctx, witt) = parse_module(&g.module, &psi)?;
    let env = Env { psi, ctx, witt };

    let output = match &cli.command {
        Command::Straighten { expr } => {
            let u = parse_uea(expr)?;
            let mut r = Report::new("straighten").param("input", expr.as_str());
            r.witness("result", u.to_string());
            Output::computed(r, u.to_string())
        }
        Command::Act { expr } => {
            let v = vector(expr, &env)?;
            let mut r = with_module(Report::new("act").param("input", expr.as_str()), &env);
            r.witness("result", element_json(&v));
            Output::computed(r, v.to_string())
        }
        Command::Solve { expect } => {
            let trunc = truncation(g, TruncationSpec::new(4, 2, 2));
            let (basis, mut r) = solve_report(&env.ctx, &trunc, *expect);
            r.witness("elements", basis.iter().map(element_json).collect::<Vec<_>>());
            let mut text = format!("dimension {}\nbasis\n", basis.len());
            for v in &basis {
                text.push_str(&format!("  {v}\n"));
            }
            Output { report: r, text: Some(text.trim_end().to_string()), verifies: true }
        }
        Command::Verify { check } => return verify(check, cli, &env, color, out),
        Command::Decompose { p } => {
            let p = parse_poly(p)?;
            let d = decompose_with(&env.psi, &p, &truncation(g, DECOMPOSE_TRUNCATION))?;
            Output::verified(d.report)
        }
        Command::Series { xi, a } => {
            let xi = parse_rational(xi)?;
            let s = composition_series_with(&env.psi, &xi, *a, &truncation(g, SERIES_TRUNCATION))?;
            Output::verified(s.report)
        }
        Command::Annihilate { expr, p } => {
            let u = parse_uea(expr)?;
            let p = match p {
                Some(text) => parse_poly(text)?,
                None => env
                    .ctx
                    .modulus()
                    .cloned()
                    .ok_or_else(|| CliError::Domain("annihilate needs --p or a quotient --module".into()))?,
            };
            let f = annihilator_normal_form(&u, &env.psi, &p)?;
            let reexpands = f.expand(&env.psi, &p) == u;
            let mut r = Report::new("annihilate")
                .param("input", expr.as_str())
                .param("p", p.to_string())
                .param("psi1", env.psi.psi1().to_string())
                .param("psi2", env.psi.psi2().to_string());
            r.witness("u0", f.u0.to_string());
            r.witness(
                "tail",
                f.tail.iter().map(|(i, ui)| json!({ "i": i, "u": ui.to_string() })).collect::<Vec<_>>(),
            );
            r.witness("residual", f.residual.to_string());
            r.witness("annihilates", f.residual.is_zero());
            r.require("reexpands", reexpands);
            let mut text = format!("u0        {}\n", f.u0);
            for (i, ui) in &f.tail {
                text.push_str(&format!("tail d{i:<4} {ui}\n"));
            }
            text.push_str(&format!("residual  {}\nannihilates w: {}", f.residual, f.residual.is_zero()));
            Output { report: r, text: Some(text), verifies: true }
        }
        Command::Reduce { expr } => {
            let v = vector(expr, &env)?;
            let red = whittaker_reduce(&v)?;
            let mut r = with_module(Report::new("reduce").param("input", expr.as_str()), &env);
            r.witness("trace", red.trace.clone());
            r.witness(
                "measures",
                red.measures.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
            );
            r.witness("result", element_json(&red.result));
            let trace: Vec<String> = red.trace.iter().map(|n| format!("d{n}")).collect();
            let text = format!("trace   {}\nresult  {}", trace.join(" "), red.result);
            Output::computed(r, text)
        }
        Command::Orbit { expr } => {
            let v = vector(expr, &env)?;
            let o = dot_orbit_dimension(&v)?;
            let mut r = with_module(Report::new("orbit").param("input", expr.as_str()), &env);
            r.witness("dimension", o.dimension);
            r.witness("spanning", o.spanning.iter().map(ToString::to_string).collect::<Vec<_>>());
            let mut text = format!("dimension {}\nspanning\n", o.dimension);
            for s in &o.spanning {
                text.push_str(&format!("  {s}\n"));
            }
            Output::computed(r, text.trim_end().to_string())
        }
        Command::Witt { expr } => match parse_value(expr)? {
            ExprValue::Algebra(u) => {
                let p = project(&u);
                let mut r = Report::new("witt_project").param("input", expr.as_str());
                r.witness("result", p.to_string());
                Output::computed(r, p.to_string())
            }
            ExprValue::Vector(u) => {
                let ctx = if env.witt || matches!(env.ctx.modulus(), Some(m) if *m == Poly::z()) {
                    env.ctx.clone()
                } else if g.module == "M" {
                    ModuleContext::quotient(env.psi.clone(), Poly::z())?
                } else {
                    return Err(WittError::WrongContext(env.ctx.descriptor()).into());
                };
                let v = witt_act(&project(&u), &ModuleElement::cyclic(&ctx))?;
                let mut r = Report::new("witt_act")
                    .param("input", expr.as_str())
                    .param("psi1", env.psi.psi1().to_string())
                    .param("psi2", env.psi.psi2().to_string());
                r.witness("result", element_json(&v));
                Output::computed(r, v.to_string())
            }
        },
    };
    emit(&output, g.json, color, out);
    Ok(if output.verifies && !output.report.pass { EXIT_FAILED } else { EXIT_OK })
}

fn emit(output: &Output, as_json: bool, color: bool, out: &mut dyn Write) {
    let text = if as_json {
        serde_json::to_string_pretty(&output.report.to_json()).expect("serializable")
    } else {
        match &output.text {
            Some(t) => t.clone(),
            None => output.report.to_text(color).trim_end().to_string(),
        }
    };
    let _ = writeln!(out, "{text}");
}

fn verify(check: &VerifyCommand, cli: &Cli, env: &Env, color: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = &cli.global;
    let report = match check {
        VerifyCommand::Whittaker { expr } => {
            let v = vector(expr, env)?;
            let mut r = with_module(Report::new("whittaker_vector").param("input", expr.as_str()), env);
            r.witness("vector", v.to_string());
            r.witness("dot_d1", dot_act(1, &v).to_string());
            r.witness("dot_d2", dot_act(2, &v).to_string());
            r.require("whittaker", is_whittaker_vector(&v));
            r
        }
        VerifyCommand::Leading { k, a } => {
            if *a == 0 {
                return Err(CliError::Domain("a must be at least 1".into()));
            }
            verify_lemma_3_1(*k, *a, &env.psi)
        }
        VerifyCommand::Degree { m, lambda } => {
            if *m == 0 {
                return Err(CliError::Domain("m must be at least 1".into()));
            }
            verify_degree_bounds(*m, &parse_lambda(lambda)?, &env.psi)?
        }
        VerifyCommand::Dotspan { n, i, lambda } => {
            if *n == 0 {
                return Err(CliError::Domain("n must be at least 1".into()));
            }
            verify_dot_span(*n, *i, &parse_lambda(lambda)?, &env.psi)
        }
        VerifyCommand::Nilpotency { n, lambda } => {
            if *n == 0 {
                return Err(CliError::Domain("n must be at least 1".into()));
            }
            let l = parse_lambda(lambda)?;
            let nil = nilpotency_index(&env.psi, *n, &l)?;
            let mut r = Report::new("nilpotency")
                .param("n", *n)
                .param("lambda", l.to_string())
                .param("psi1", env.psi.psi1().to_string())
                .param("psi2", env.psi.psi2().to_string());
            r.witness("index", nil.index);
            r.witness("bound", nil.bound);
            r.require("within_bound", nil.index <= nil.bound);
            r
        }
        VerifyCommand::Submodule { q } => {
            let q = parse_poly(q)?;
            verify_submodule_free(&env.psi, &q, &truncation(g, TruncationSpec::new(3, 1, 2)))?
        }
        VerifyCommand::All => return Ok(verify_all(g, color, out)),
    };
    let output = Output::verified(report);
    emit(&output, g.json, color, out);
    Ok(if output.report.pass { EXIT_OK } else { EXIT_FAILED })
}

fn verify_all(g: &Globals, color: bool, out: &mut dyn Write) -> i32 {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut emitted = Vec::new();
    let mut all = true;
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)(g.seed);
        let elapsed = start.elapsed();
        let pass = outcome.report.pass && elapsed <= c.budget;
        all &= pass;
        let mut json = outcome.report.to_json();
        json["elapsed_ms"] = json!(elapsed.as_millis() as u64);
        json["budget_ms"] = json!(c.budget.as_millis() as u64);
        reports.push(json);
        emitted.extend(outcome.emitted);
        rows.push((c.id, c.name.to_string(), pass, format!("{:.2}s / {}s", elapsed.as_secs_f64(), c.budget.as_secs())));
    }
    let bad: Vec<&str> = emitted.iter().filter(|e| !e.round_trips()).map(|e| e.text()).collect();
    let rt = bad.is_empty();
    all &= rt;
    rows.push((13, format!("print/parse round trip ({} strings)", emitted.len()), rt, String::new()));

    if g.json {
        let v = json!({ "check": "verify_all", "params": { "seed": g.seed }, "pass": all,
            "witness": { "criteria": reports, "round_trip_failures": bad } });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
    } else {
        let width = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
        for (id, name, pass, time) in &rows {
            let verdict = match (pass, color) {
                (true, true) => "\x1b[32mPASS\x1b[0m",
                (false, true) => "\x1b[31mFAIL\x1b[0m",
                (true, false) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "{id:>2}  {name:<width$}  {verdict}  {time}");
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn color_enabled() -> bool {
    std::env::var("VIRA_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

/// Runs the command line `argv` (including the program name), writing the
/// report to `out` and diagnostics to `err`.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_PARSE } else { EXIT_OK }
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_PARSE
                }
            };
        }
    };
    match dispatch(&cli, color_enabled(), out) {
        Ok(code) => code,
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Parse(m) => ("parse error", m),
                CliError::Domain(m) => ("domain error", m),
            };
            let _ = writeln!(err, "vira: {kind}: {msg}");
            e.code()
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("vira").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn straighten_prints_normal_form() {
        let (code, out, _) = run_str(&["straighten", "d2*d-2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "d-2*d2 - 4*d0 + (1/2)*z");
    }

    #[test]
    fn solve_in_central_quotient() {
        let (code, out, _) = run_str(&["solve", "--module", "L:xi=0", "--psi1", "1", "--psi2", "1", "--maxdeg", "5", "--zerocap", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "dimension 1\nbasis\n  w");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["verify", "whittaker", "d-1*w"]).0, EXIT_FAILED);
        assert_eq!(run_str(&["verify", "whittaker", "z^2*w"]).0, EXIT_OK);
        assert_eq!(run_str(&["straighten", "d"]).0, EXIT_PARSE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_PARSE);
        assert_eq!(run_str(&["decompose", "--p", "z^2+1"]).0, EXIT_DOMAIN);
        assert_eq!(run_str(&["straighten", "d1", "--psi1", "0"]).0, EXIT_DOMAIN);
        assert_eq!(run_str(&["witt", "d1*w", "--module", "L:xi=1"]).0, EXIT_DOMAIN);
        assert_eq!(run_str(&["solve", "--module", "L:xi=1", "--expect", "2"]).0, EXIT_FAILED);
        assert_eq!(run_str(&["act", "w", "--module", "X"]).0, EXIT_PARSE);
    }

    #[test]
    fn negative_flag_values() {
        let (code, out, _) = run_str(&["act", "d1*w", "--psi1", "-3/2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "-(3/2)*w");
    }

    #[test]
    fn json_reports() {
        let (code, out, _) = run_str(&["verify", "leading", "--k", "1", "--a", "2", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["check"], "leading_term");
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn decompose_prints_certificate() {
        let (code, out, _) = run_str(&["decompose", "--psi1", "1", "--psi2", "1", "--p", "(z-1)^2*(z+3)", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let comps = v["witness"]["components"].as_array().unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0]["bezout"], "(1/16)");
        assert_eq!(v["witness"]["bezout_identity"], true);
    }
}
