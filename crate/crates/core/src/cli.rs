//! The `pimodulo` command line.
//!
//! Exit codes: 0 success, 1 type error, 2 parse or usage error, 3 fuel
//! exhausted, 4 I/O error, 5 counterexample or inhabitant found. When a run
//! has several failures the first one in output order decides the code.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{enumerate_full_algebras, sample_full_algebras, FiniteAlgebra};
use crate::candidates::SnSearch;
use crate::gen::{cc_context, stt_context};
use crate::kernel::{Context, Term, Theory};
use crate::reduction::{normalize_with, Fuel, Mode, DEFAULT_FUEL};
use crate::scan::{self, ItemStatus, ModelKind, SweepReport};
use crate::syntax::{self, Judgement, ParseError, TheorySpans};
use crate::typing::{self, ItemKind, Site, TypeError, TypeErrorKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_FOUND: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "pimodulo", version, about = "Type checker and model checker for the lambda-Pi calculus modulo theory")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Reduction step budget.
    #[arg(long, global = true, env = "PIMODULO_FUEL", default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Seed for every sampled choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line.
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Beta,
    BetaR,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Beta => Mode::Beta,
            ModeArg::BetaR => Mode::BetaR,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a theory and the judgements of `.tm` files against it.
    Check {
        /// `stt`, `cc`, or a path to a `.th` file.
        #[arg(long, default_value = "stt")]
        theory: String,
        files: Vec<PathBuf>,
    },
    /// Print the normal form of a term (`-` reads standard input).
    Normalize {
        #[arg(long, default_value = "stt")]
        theory: String,
        #[arg(long, value_enum, default_value_t = ModeArg::BetaR)]
        mode: ModeArg,
        /// Print every step as `position <tab> rule <tab> term`.
        #[arg(long)]
        trace: bool,
        term: String,
    },
    /// Check the conversion and substitution lemmas in finite Π-algebras.
    ModelCheck {
        #[arg(long, default_value = "stt")]
        theory: String,
        /// Largest carrier size; sizes 1 and 2 are exhaustive, larger ones sampled.
        #[arg(short = 'n', long = "algebra-size", default_value_t = 2)]
        n: usize,
        /// Algebras sampled per carrier size above 2.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Largest generated term, in nodes.
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Generated convertible pairs.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        /// Generated substitution instances.
        #[arg(long, default_value_t = 1000)]
        subst: usize,
        /// Write the first counterexample here as an annotated `.alg` file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Search the normal terms up to a size for a proof of `eps x`.
    ConsistencyScan {
        #[arg(long, default_value = "stt")]
        theory: String,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
    /// Check strong normalization of generated well-typed terms.
    SnScan {
        #[arg(long, default_value = "stt")]
        theory: String,
        #[arg(long, default_value_t = 9)]
        max_size: usize,
        /// Terms checked; the pool is sampled when it is larger.
        #[arg(long, default_value_t = 5000)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Beta)]
        mode: ModeArg,
        /// Largest tolerated fraction of out-of-fuel verdicts.
        #[arg(long, default_value_t = 0.0)]
        unknown_threshold: f64,
    },
}

struct Out<'a> {
    format: Format,
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
    code: i32,
}

impl Out<'_> {
    /// One checked item. `text` is the human-readable line body.
    fn item(&mut self, id: &str, kind: &str, status: &str, text: &str, detail: Value) {
        let _ = match self.format {
            Format::Json => writeln!(self.out, "{}", json!({ "id": id, "kind": kind, "status": status, "detail": detail })),
            Format::Text => writeln!(self.out, "{status:<9} {kind} {id}: {text}"),
        };
    }

    fn text(&mut self, line: &str) {
        if self.format == Format::Text {
            let _ = writeln!(self.out, "{line}");
        }
    }

    fn diag(&mut self, line: &str) {
        let _ = writeln!(self.err, "{line}");
    }

    fn fail(&mut self, code: i32) {
        if self.code == EXIT_OK {
            self.code = code;
        }
    }

    fn summary(&mut self, command: &str, seed: u64, text: &str, mut detail: Value) {
        detail["command"] = json!(command);
        detail["seed"] = json!(seed);
        let status = if self.code == EXIT_OK { "ok" } else { "failed" };
        detail["exit"] = json!(self.code);
        match self.format {
            Format::Json => {
                let _ = writeln!(self.out, "{}", json!({ "id": "summary", "kind": "summary", "status": status, "detail": detail }));
            }
            Format::Text => {
                let _ = writeln!(self.out, "summary ({command}, seed {seed}): {text}");
            }
        }
    }
}

pub fn main() -> i32 {
    let mut out = io::BufWriter::new(io::stdout());
    run(std::env::args_os(), &mut out, &mut io::stderr())
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start workers: {e}");
            return EXIT_IO;
        }
    };
    let mut o = Out { format: cli.format, out, err, code: EXIT_OK };
    pool.install(|| dispatch(&cli, &mut o));
    let _ = o.out.flush();
    o.code
}

fn dispatch(cli: &Cli, o: &mut Out) {
    match &cli.command {
        Command::Check { theory, files } => cmd_check(cli, o, theory, files),
        Command::Normalize { theory, mode, trace, term } => cmd_normalize(cli, o, theory, (*mode).into(), *trace, term),
        Command::ModelCheck { theory, n, samples, max_size, pairs, subst, dump } => {
            let opts = ModelCheckOpts { n: *n, samples: *samples, max_size: *max_size, pairs: *pairs, subst: *subst, dump: dump.clone() };
            cmd_model_check(cli, o, theory, &opts)
        }
        Command::ConsistencyScan { theory, max_size } => cmd_consistency_scan(cli, o, theory, *max_size),
        Command::SnScan { theory, max_size, count, mode, unknown_threshold } => {
            cmd_sn_scan(cli, o, theory, *max_size, *count, (*mode).into(), *unknown_threshold)
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("<stdin>: {e}"))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// `stt` and `cc` name the shipped theories; anything else is a path.
fn load_theory(o: &mut Out, which: &str) -> Option<(Theory, TheorySpans)> {
    let (src, file) = match which {
        "stt" => (syntax::STT_SOURCE.to_string(), "stt.th".to_string()),
        "cc" => (syntax::CC_SOURCE.to_string(), "cc.th".to_string()),
        path => match read_file(Path::new(path)) {
            Ok(s) => (s, path.to_string()),
            Err(e) => {
                o.diag(&format!("error: {e}"));
                o.item(which, "theory", "io-error", &e, json!(e));
                o.fail(EXIT_IO);
                return None;
            }
        },
    };
    match syntax::load_theory(&src, &file) {
        Ok(t) => Some(t),
        Err(e) => {
            report_parse_error(o, which, "theory", &e);
            None
        }
    }
}

fn report_parse_error(o: &mut Out, id: &str, kind: &str, e: &ParseError) {
    o.diag(&format!("{e}"));
    o.item(id, kind, "parse-error", &e.to_string(), json!({ "location": e.span.to_string(), "expected": e.expected, "found": e.found }));
    o.fail(EXIT_PARSE);
}

fn type_error_code(e: &TypeError) -> i32 {
    if e.kind == TypeErrorKind::FuelExhausted {
        EXIT_FUEL
    } else {
        EXIT_TYPE
    }
}

fn type_error_detail(e: &TypeError, location: Option<String>) -> Value {
    json!({
        "error": e.kind.code(),
        "message": e.to_string(),
        "location": location,
        "term": e.term.to_string(),
        "expected": e.expected.as_ref().map(|t| t.to_string()),
        "found": e.actual.as_ref().map(|t| t.to_string()),
    })
}

/// Check the theory and report each declaration; false if any failed.
fn check_theory_items(cli: &Cli, o: &mut Out, theory: &Theory, spans: &TheorySpans) -> bool {
    let report = typing::check_theory(theory, &mut Fuel::new(cli.fuel));
    for w in &report.warnings {
        o.diag(&format!("warning: {w}"));
    }
    for item in &report.items {
        let (kind, span) = match item.kind {
            ItemKind::Constant => ("constant", spans.constants.get(item.id.as_str())),
            ItemKind::Rule => ("rule", spans.rules.get(&item.id)),
        };
        match &item.result {
            Ok(()) => o.item(&item.id, kind, "ok", "well-typed", Value::Null),
            Err(e) => {
                let loc = span.map(|s| s.to_string());
                o.diag(&format!("{}: {kind} {}: {e}", loc.clone().unwrap_or_default(), item.id));
                o.item(&item.id, kind, "error", &e.to_string(), type_error_detail(e, loc));
                o.fail(type_error_code(e));
            }
        }
    }
    report.is_ok()
}

fn judgement_location(j: &Judgement, e: &TypeError) -> String {
    let spans = match e.site {
        Site::Subject => Some(&j.term_spans),
        Site::Type => j.ty.as_ref().map(|(_, s)| s),
        Site::Context(i) => j.ctx.get(i).map(|(_, _, s)| s),
        Site::Lhs | Site::Rhs => None,
    };
    spans.and_then(|s| s.nearest(&e.position)).unwrap_or(&j.span).to_string()
}

fn cmd_check(cli: &Cli, o: &mut Out, which: &str, files: &[PathBuf]) {
    let Some((theory, spans)) = load_theory(o, which) else { return };
    let theory_ok = check_theory_items(cli, o, &theory, &spans);
    let (mut ok, mut bad) = (0usize, 0usize);
    if theory_ok {
        for path in files {
            let file = path.display().to_string();
            let text = match read_file(path) {
                Ok(t) => t,
                Err(e) => {
                    o.diag(&format!("error: {e}"));
                    o.item(&file, "file", "io-error", &e, json!(e));
                    o.fail(EXIT_IO);
                    bad += 1;
                    continue;
                }
            };
            let judgements = match syntax::parse_term_file(&text, &file) {
                Ok(j) => j,
                Err(e) => {
                    report_parse_error(o, &file, "file", &e);
                    bad += 1;
                    continue;
                }
            };
            for j in &judgements {
                let id = format!("{file}:{}", j.line);
                let (ctx, term, ty) = j.resolve(&theory);
                match typing::check_judgement(&theory, &ctx, &term, ty.as_ref(), &mut Fuel::new(cli.fuel)) {
                    Ok(a) => {
                        ok += 1;
                        o.item(&id, "judgement", "ok", &format!("{term} : {a}"), json!({ "term": term.to_string(), "type": a.to_string() }));
                    }
                    Err(e) => {
                        bad += 1;
                        let loc = judgement_location(j, &e);
                        o.diag(&format!("{loc}: {e}"));
                        o.item(&id, "judgement", "error", &e.to_string(), type_error_detail(&e, Some(loc)));
                        o.fail(type_error_code(&e));
                    }
                }
            }
        }
    }
    let text = format!("theory {}, {ok} judgements ok, {bad} failed", if theory_ok { "ok" } else { "ill-typed" });
    o.summary("check", cli.seed, &text, json!({ "theory_ok": theory_ok, "judgements_ok": ok, "failures": bad }));
}

fn cmd_normalize(cli: &Cli, o: &mut Out, which: &str, mode: Mode, trace: bool, input: &str) {
    let Some((theory, _)) = load_theory(o, which) else { return };
    let text = if input == "-" {
        match read_file(Path::new("-")) {
            Ok(t) => t,
            Err(e) => {
                o.diag(&format!("error: {e}"));
                o.fail(EXIT_IO);
                return;
            }
        }
    } else {
        input.to_string()
    };
    let term = match syntax::parse_term_spanned(text.trim(), "<term>") {
        Ok((t, _)) => theory.resolve(&t),
        Err(e) => return report_parse_error(o, "term", "term", &e),
    };
    let mut steps = Vec::new();
    let result = normalize_with(&term, &theory, mode, &mut Fuel::new(cli.fuel), |s| {
        if trace {
            steps.push((s.position.to_string(), s.kind.to_string(), s.result.to_string()));
        }
    });
    for (i, (pos, kind, t)) in steps.iter().enumerate() {
        match o.format {
            Format::Text => o.text(&format!("{pos}\t{kind}\t{t}")),
            Format::Json => o.item(&format!("step/{i}"), "step", "ok", "", json!({ "position": pos, "rule": kind, "term": t })),
        }
    }
    match result {
        Ok(nf) => match o.format {
            Format::Text => o.text(&nf.to_string()),
            Format::Json => o.item("result", "normal-form", "ok", "", json!(nf.to_string())),
        },
        Err(e) => {
            o.diag(&format!("fuel exhausted after {} steps; last term: {}", cli.fuel, e.last));
            if o.format == Format::Json {
                o.item("result", "normal-form", "fuel-exhausted", "", json!(e.last.to_string()));
            }
            o.fail(EXIT_FUEL);
        }
    }
}

struct ModelCheckOpts {
    n: usize,
    samples: usize,
    max_size: usize,
    pairs: usize,
    subst: usize,
    dump: Option<PathBuf>,
}

/// Every algebra with at most `n` elements for `n ≤ 2`, plus seeded
/// samples for each larger carrier size.
pub fn model_check_algebras(n: usize, samples: usize, seed: u64) -> Result<Vec<FiniteAlgebra>, String> {
    let mut out = Vec::new();
    for k in 1..=n.max(1) {
        if k <= 2 {
            out.extend(enumerate_full_algebras(k).map_err(|e| e.to_string())?);
        } else {
            out.extend(sample_full_algebras(k, samples, seed.wrapping_add(k as u64)).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn model_kind(o: &mut Out, theory: &Theory, which: &str) -> Option<ModelKind> {
    let kind = ModelKind::of(theory).filter(|k| *k == ModelKind::Cc || theory.is_constant("iota"));
    if kind.is_none() {
        o.diag(&format!("error: {which} declares neither the STT nor the CC constants; no model applies"));
        o.fail(EXIT_PARSE);
    }
    kind
}

fn sweep_items(o: &mut Out, kind: &str, report: &SweepReport) {
    for item in &report.items {
        let counts = json!({ "checks": item.checks, "skipped": item.skipped });
        match &item.status {
            ItemStatus::Pass => o.item(&item.id, kind, "pass", &format!("{} valuations", item.checks), counts),
            ItemStatus::Skip(why) => o.item(&item.id, kind, "skip", why, json!({ "checks": item.checks, "skipped": item.skipped, "reason": why })),
            ItemStatus::Fail(cx) => {
                let detail = json!({
                    "checks": item.checks,
                    "skipped": item.skipped,
                    "algebra": cx.algebra,
                    "valuation": cx.valuation,
                    "left": cx.left,
                    "right": cx.right,
                    "reason": cx.detail,
                });
                o.item(&item.id, kind, "fail", &format!("{}: {} vs {}", cx.detail, cx.left, cx.right), detail);
                o.fail(EXIT_FOUND);
            }
        }
    }
}

fn dump_text(cx: &scan::Counterexample) -> String {
    format!(
        "; counterexample {}: {}\n; valuation: {}\n; left:  {}\n; right: {}\n{}",
        cx.id, cx.detail, cx.valuation, cx.left, cx.right, cx.algebra
    )
}

fn cmd_model_check(cli: &Cli, o: &mut Out, which: &str, opts: &ModelCheckOpts) {
    let Some((theory, spans)) = load_theory(o, which) else { return };
    let Some(kind) = model_kind(o, &theory, which) else { return };
    if !typing::check_theory(&theory, &mut Fuel::new(cli.fuel)).is_ok() {
        check_theory_items(cli, o, &theory, &spans);
        return;
    }
    let algebras = match model_check_algebras(opts.n, opts.samples, cli.seed) {
        Ok(a) => a,
        Err(e) => {
            o.diag(&format!("error: {e}"));
            o.fail(EXIT_PARSE);
            return;
        }
    };
    let (ctx, rule_ctx) = match kind {
        ModelKind::Stt => (stt_context(), stt_context()),
        ModelKind::Cc => (cc_context(), Context::new().with("T", Term::constant("U_Type"))),
    };
    let mut pairs = scan::rule_pairs(&theory, &rule_ctx, 5, 4);
    pairs.extend(scan::generated_pairs(&theory, &ctx, opts.pairs, opts.max_size, cli.seed));
    let conversion = scan::conversion_sweep(kind, &theory, &pairs, &algebras);
    sweep_items(o, "conversion", &conversion);
    let instances = scan::substitution_instances(&theory, &ctx, opts.subst, opts.max_size, algebras.len(), cli.seed);
    let substitution = scan::substitution_sweep(kind, &theory, &instances, &algebras);
    sweep_items(o, "substitution", &substitution);

    let first = conversion.first_counterexample().or(substitution.first_counterexample());
    if let Some(cx) = first {
        let dump = dump_text(cx);
        o.diag("first counterexample:");
        o.diag(&dump);
        if let Some(path) = &opts.dump {
            if let Err(e) = fs::write(path, &dump) {
                o.diag(&format!("error: {}: {e}", path.display()));
                o.fail(EXIT_IO);
            }
        }
    }
    let lemma = |r: &SweepReport| {
        json!({ "items": r.items.len(), "passed": r.passed(), "failed": r.failed(), "skipped": r.skipped_items(), "checks": r.checks(), "skipped_checks": r.skipped_checks() })
    };
    let text = format!(
        "{} model, {} algebras; conversion {}/{} passed ({} skipped, {} checks); substitution {}/{} passed ({} skipped, {} checks)",
        kind.name(),
        algebras.len(),
        conversion.passed(),
        conversion.items.len(),
        conversion.skipped_items(),
        conversion.checks(),
        substitution.passed(),
        substitution.items.len(),
        substitution.skipped_items(),
        substitution.checks(),
    );
    o.summary(
        "model-check",
        cli.seed,
        &text,
        json!({ "model": kind.name(), "algebras": algebras.len(), "conversion": lemma(&conversion), "substitution": lemma(&substitution) }),
    );
}

fn cmd_consistency_scan(cli: &Cli, o: &mut Out, which: &str, max_size: usize) {
    let Some((theory, _)) = load_theory(o, which) else { return };
    let Some(kind) = model_kind(o, &theory, which) else { return };
    let (ctx, target) = scan::consistency_setup(kind);
    let target = theory.resolve(&target);
    let rep = scan::consistency_scan(&theory, &ctx, &target, max_size, cli.fuel);
    let (cctx, control) = scan::consistency_control(kind);
    let ctl = scan::consistency_scan(&theory, &cctx, &theory.resolve(&control), max_size, cli.fuel);
    for r in [&rep, &ctl] {
        if r.truncated {
            o.diag(&format!("warning: enumeration for {} was truncated", r.target));
        }
    }
    let found: Vec<String> = rep.inhabitants.iter().map(|t| t.to_string()).collect();
    if found.is_empty() {
        o.item("target", "consistency", "none-found", &format!("no normal term of type {target}"), json!({ "target": target.to_string(), "examined": rep.examined, "by_size": rep.by_size }));
    } else {
        for t in &found {
            o.diag(&format!("inhabitant of {target}: {t}"));
        }
        o.item("target", "consistency", "inhabited", &found.join(", "), json!({ "target": target.to_string(), "examined": rep.examined, "inhabitants": found }));
        o.fail(EXIT_FOUND);
    }
    let ctl_found: Vec<String> = ctl.inhabitants.iter().map(|t| t.to_string()).collect();
    let status = if ctl_found.is_empty() { "not-found" } else { "found" };
    o.item("control", "consistency-control", status, &ctl_found.join(", "), json!({ "target": ctl.target.to_string(), "examined": ctl.examined, "inhabitants": ctl_found }));
    let text = format!("{} normal terms up to size {max_size}, {} inhabitants of {target}; control {status}", rep.examined, found.len());
    o.summary("consistency-scan", cli.seed, &text, json!({ "max_size": max_size, "examined": rep.examined, "inhabitants": found.len(), "control": status }));
}

fn cmd_sn_scan(cli: &Cli, o: &mut Out, which: &str, max_size: usize, count: usize, mode: Mode, threshold: f64) {
    let Some((theory, _)) = load_theory(o, which) else { return };
    let ctx = match ModelKind::of(&theory) {
        Some(ModelKind::Cc) => cc_context(),
        Some(ModelKind::Stt) if theory.is_constant("iota") => stt_context(),
        _ => Context::new(),
    };
    let (terms, pool) = scan::scan_terms(&theory, &ctx, max_size, count, cli.seed);
    let items = scan::sn_scan(&theory, &terms, mode, cli.fuel);
    let report = scan::SnReport { items, pool };
    for item in &report.items {
        let (status, detail) = match item.verdict {
            SnSearch::Normalizing(h) => ("yes", json!({ "term": item.term.to_string(), "height": h })),
            SnSearch::Cycle => ("no", json!({ "term": item.term.to_string(), "reason": "reduction cycle" })),
            SnSearch::OutOfFuel => ("unknown", json!({ "term": item.term.to_string(), "reason": "fuel exhausted" })),
        };
        if o.format == Format::Json {
            o.item(&item.id, "sn", status, "", detail);
        } else if status != "yes" {
            o.item(&item.id, "sn", status, &item.term.to_string(), Value::Null);
        }
        if status == "no" {
            o.diag(&format!("not strongly normalizing: {}", item.term));
        }
    }
    let n = report.items.len();
    let rate = if n == 0 { 0.0 } else { report.unknown() as f64 / n as f64 };
    if report.cycles() > 0 {
        o.fail(EXIT_FOUND);
    } else if rate > threshold {
        o.fail(EXIT_FUEL);
    }
    o.text(&format!("{:<10} {:>8}", "verdict", "terms"));
    o.text(&format!("{:<10} {:>8}", "yes", report.normalizing()));
    o.text(&format!("{:<10} {:>8}", "no", report.cycles()));
    o.text(&format!("{:<10} {:>8}", "unknown", report.unknown()));
    let mode_name = if mode == Mode::Beta { "beta" } else { "beta-r" };
    let text = format!("{n} of {pool} terms up to size {max_size}, {mode_name}, longest reduction {}", report.max_height());
    o.summary(
        "sn-scan",
        cli.seed,
        &text,
        json!({ "terms": n, "pool": pool, "mode": mode_name, "yes": report.normalizing(), "no": report.cycles(), "unknown": report.unknown(), "max_height": report.max_height() }),
    );
}
