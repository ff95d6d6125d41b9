//! Concrete syntax: `.th` theory files, `.tm` judgement batches, and a
//! re-parseable printer.

mod lexer;
mod parser;
mod printer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{name, Context, Name, Position, RewriteRule, SchemaInstance, Term, Theory};
use lexer::Tok;
use parser::{Parser, SchemaRefs};
pub use printer::{print_simple_type, print_term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    /// Tokens that would have been accepted; empty for free-form messages.
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn message(span: SourceSpan, msg: &str) -> Self {
        ParseError { span, expected: Vec::new(), found: msg.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expected.is_empty() {
            write!(f, "{}: {}", self.span, self.found)
        } else {
            write!(f, "{}: expected {}, found {}", self.span, self.expected.join(" or "), self.found)
        }
    }
}

/// Source spans of the nodes of one parsed term, keyed by position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpanMap(BTreeMap<Position, SourceSpan>);

impl SpanMap {
    pub fn insert(&mut self, p: Position, s: SourceSpan) {
        self.0.insert(p, s);
    }

    pub fn get(&self, p: &Position) -> Option<&SourceSpan> {
        self.0.get(p)
    }

    /// Span of the deepest recorded node on the path to `p`.
    pub fn nearest(&self, p: &Position) -> Option<&SourceSpan> {
        (0..=p.0.len()).rev().find_map(|k| self.0.get(&Position(p.0[..k].to_vec())))
    }
}

fn file_name(f: &str) -> Arc<str> {
    Arc::from(f)
}

/// Parse a complete term; all names are left as [`Term::Free`].
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_spanned(text, "<input>").map(|(t, _)| t)
}

pub fn parse_term_spanned(text: &str, file: &str) -> Result<(Term, SpanMap), ParseError> {
    let mut p = Parser::new(text, &file_name(file), 0, 1)?;
    let r = p.term()?;
    if !p.at_eof() {
        return Err(p.error(&["end of input"]));
    }
    Ok(r)
}

/// Replace free names declared in `theory` by constants, except `keep`.
pub fn resolve_except(theory: &Theory, t: &Term, keep: &BTreeSet<Name>) -> Term {
    match t {
        Term::Free(n) if !keep.contains(n) && theory.is_constant(n) => Term::Const(n.clone()),
        Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(resolve_except(theory, a, keep)), Arc::new(resolve_except(theory, b, keep))),
        Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(resolve_except(theory, a, keep)), Arc::new(resolve_except(theory, b, keep))),
        Term::App(a, b) => Term::App(Arc::new(resolve_except(theory, a, keep)), Arc::new(resolve_except(theory, b, keep))),
        _ => t.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Const {
        schema_vars: Vec<String>,
        name: String,
        ty: Term,
        span: SourceSpan,
    },
    Rule {
        schema_vars: Vec<String>,
        ctx: Vec<(String, Term)>,
        lhs: Term,
        rhs: Term,
        ty: Term,
        span: SourceSpan,
    },
    SimpleTypes {
        types: Vec<Term>,
        span: SourceSpan,
    },
}

impl Decl {
    pub fn span(&self) -> &SourceSpan {
        match self {
            Decl::Const { span, .. } | Decl::Rule { span, .. } | Decl::SimpleTypes { span, .. } => span,
        }
    }

    /// Same declaration, spans ignored.
    pub fn same_as(&self, other: &Decl) -> bool {
        match (self, other) {
            (Decl::Const { schema_vars: s1, name: n1, ty: t1, .. }, Decl::Const { schema_vars: s2, name: n2, ty: t2, .. }) => {
                s1 == s2 && n1 == n2 && t1 == t2
            }
            (
                Decl::Rule { schema_vars: s1, ctx: c1, lhs: l1, rhs: r1, ty: t1, .. },
                Decl::Rule { schema_vars: s2, ctx: c2, lhs: l2, rhs: r2, ty: t2, .. },
            ) => s1 == s2 && c1 == c2 && l1 == l2 && r1 == r2 && t1 == t2,
            (Decl::SimpleTypes { types: a, .. }, Decl::SimpleTypes { types: b, .. }) => a == b,
            _ => false,
        }
    }
}

/// Parsed `.th` file before schema expansion.
#[derive(Clone, Debug, Default)]
pub struct TheoryFile {
    pub decls: Vec<Decl>,
    schema_refs: SchemaRefs,
}

/// Position of a declaration of the expanded theory in its source file.
#[derive(Clone, Debug, Default)]
pub struct TheorySpans {
    pub constants: BTreeMap<Name, SourceSpan>,
    pub rules: BTreeMap<String, SourceSpan>,
}

pub fn parse_theory(text: &str) -> Result<TheoryFile, ParseError> {
    parse_theory_named(text, "<theory>")
}

pub fn parse_theory_named(text: &str, file: &str) -> Result<TheoryFile, ParseError> {
    let mut p = Parser::new(text, &file_name(file), 0, 1)?;
    let mut decls = Vec::new();
    while !p.at_eof() {
        let start = p.span();
        if let Tok::Directive(d) = p.peek().clone() {
            if d != "simpletypes" {
                return Err(ParseError::message(start, &format!("unknown directive `#{d}`")));
            }
            p.bump();
            let mut types = vec![p.simple_type()?];
            while *p.peek() == Tok::Comma {
                p.bump();
                types.push(p.simple_type()?);
            }
            decls.push(Decl::SimpleTypes { types, span: start });
            continue;
        }
        let mut schema_vars = Vec::new();
        if *p.peek() == Tok::LAngle {
            p.bump();
            loop {
                schema_vars.push(p.ident()?.0);
                if *p.peek() == Tok::Comma {
                    p.bump();
                } else {
                    break;
                }
            }
            p.expect(Tok::RAngle, "`>`")?;
        }
        if *p.peek() == Tok::LBracket {
            p.bump();
            let mut ctx = Vec::new();
            if *p.peek() != Tok::RBracket {
                loop {
                    let (x, _) = p.ident()?;
                    p.expect(Tok::Colon, "`:`")?;
                    let (ty, _) = p.term()?;
                    ctx.push((x, ty));
                    if *p.peek() == Tok::Comma {
                        p.bump();
                    } else {
                        break;
                    }
                }
            }
            p.expect(Tok::RBracket, "`]`")?;
            let (lhs, _) = p.term()?;
            p.expect(Tok::LongArrow, "`-->`")?;
            let (rhs, _) = p.term()?;
            p.expect(Tok::Colon, "`:`")?;
            let (ty, _) = p.term()?;
            p.expect(Tok::Dot, "`.`")?;
            decls.push(Decl::Rule { schema_vars, ctx, lhs, rhs, ty, span: start });
        } else {
            let (name, _) = p.decl_name()?;
            p.expect(Tok::Colon, "`:`")?;
            let (ty, _) = p.term()?;
            p.expect(Tok::Dot, "`.`")?;
            decls.push(Decl::Const { schema_vars, name, ty, span: start });
        }
    }
    Ok(TheoryFile { decls, schema_refs: p.schema_refs })
}

fn print_schema_prefix(vars: &[String], out: &mut String) {
    if !vars.is_empty() {
        out.push('<');
        out.push_str(&vars.join(", "));
        out.push_str("> ");
    }
}

/// Text that parses back to the same declarations.
pub fn print_theory_file(f: &TheoryFile) -> String {
    let mut out = String::new();
    for d in &f.decls {
        match d {
            Decl::SimpleTypes { types, .. } => {
                let ts: Vec<String> = types.iter().map(|t| print_simple_type(t).unwrap_or_else(|| print_term(t))).collect();
                out.push_str("#simpletypes ");
                out.push_str(&ts.join(", "));
            }
            Decl::Const { schema_vars, name, ty, .. } => {
                print_schema_prefix(schema_vars, &mut out);
                out.push_str(&format!("{name} : {}.", print_term(ty)));
            }
            Decl::Rule { schema_vars, ctx, lhs, rhs, ty, .. } => {
                print_schema_prefix(schema_vars, &mut out);
                let entries: Vec<String> = ctx.iter().map(|(x, t)| format!("{x} : {}", print_term(t))).collect();
                out.push_str(&format!("[{}] {} --> {} : {}.", entries.join(", "), print_term(lhs), print_term(rhs), print_term(ty)));
            }
        }
        out.push('\n');
    }
    out
}

fn simple_type_over(t: &Term, bases: &BTreeSet<String>) -> bool {
    match t {
        Term::Free(n) | Term::Const(n) => bases.contains(&**n),
        Term::Pi(_, a, b) => !b.has_loose(0) && simple_type_over(a, bases) && simple_type_over(&b.instantiate(&Term::Type), bases),
        _ => false,
    }
}

/// Rule id, pattern context, lhs, rhs, type and source span.
type RawRule = (String, Vec<(String, Term)>, Term, Term, Term, SourceSpan);

impl TheoryFile {
    /// Simple types used to instantiate schematic declarations: those of the
    /// directive if present, otherwise every simple type occurring in the
    /// non-schematic part of the file (base types are the names declared
    /// `: Type`).
    pub fn simple_types(&self) -> Vec<Term> {
        for d in &self.decls {
            if let Decl::SimpleTypes { types, .. } = d {
                return types.clone();
            }
        }
        let bases: BTreeSet<String> = self
            .decls
            .iter()
            .filter_map(|d| match d {
                Decl::Const { schema_vars, name, ty: Term::Type, .. } if schema_vars.is_empty() => Some(name.clone()),
                _ => None,
            })
            .collect();
        let mut found: Vec<(String, Term)> = Vec::new();
        let add = |t: &Term, found: &mut Vec<(String, Term)>| {
            if t.is_locally_closed() && simple_type_over(t, &bases) {
                let key = print_simple_type(t).unwrap();
                if !found.iter().any(|(k, _)| *k == key) {
                    found.push((key, t.clone()));
                }
            }
        };
        for b in &bases {
            add(&Term::free(b), &mut found);
        }
        let visit = |t: &Term, found: &mut Vec<(String, Term)>| {
            for (_, s) in crate::kernel::subterm_positions(t) {
                add(&s, found);
            }
        };
        for d in &self.decls {
            match d {
                Decl::Const { schema_vars, ty, .. } if schema_vars.is_empty() => visit(ty, &mut found),
                Decl::Rule { schema_vars, ctx, lhs, rhs, ty, .. } if schema_vars.is_empty() => {
                    for (_, t) in ctx {
                        visit(t, &mut found);
                    }
                    visit(lhs, &mut found);
                    visit(rhs, &mut found);
                    visit(ty, &mut found);
                }
                _ => {}
            }
        }
        for (_, args) in self.schema_refs.values() {
            for a in args {
                if !a.contains(&|s| matches!(s, Term::Free(n) if !bases.contains(&**n))) {
                    visit(a, &mut found);
                }
            }
        }
        found.into_iter().map(|(_, t)| t).collect()
    }

    fn instantiate(&self, t: &Term, sub: &BTreeMap<String, Term>, instances: &mut BTreeMap<Name, SchemaInstance>) -> Term {
        match t {
            Term::Free(n) => {
                if let Some(ty) = sub.get(&**n) {
                    return ty.clone();
                }
                if let Some((family, args)) = self.schema_refs.get(&**n) {
                    let args: Vec<Term> = args.iter().map(|a| self.instantiate(a, sub, instances)).collect();
                    let parts: Vec<String> = args.iter().map(|a| print_simple_type(a).expect("simple type")).collect();
                    let canon = format!("{family}[{}]", parts.join(","));
                    instances.insert(name(&canon), SchemaInstance { family: name(family), args });
                    return Term::free(&canon);
                }
                t.clone()
            }
            Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(self.instantiate(a, sub, instances)), Arc::new(self.instantiate(b, sub, instances))),
            Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(self.instantiate(a, sub, instances)), Arc::new(self.instantiate(b, sub, instances))),
            Term::App(a, b) => Term::App(Arc::new(self.instantiate(a, sub, instances)), Arc::new(self.instantiate(b, sub, instances))),
            _ => t.clone(),
        }
    }

    /// Expand schemas and resolve constant names.
    pub fn elaborate(&self) -> Result<(Theory, TheorySpans), ParseError> {
        let types = self.simple_types();
        let mut consts: Vec<(Name, Term, SourceSpan)> = Vec::new();
        let mut raw_rules: Vec<RawRule> = Vec::new();
        let mut instances = BTreeMap::new();
        let mut rule_no = 0;
        for d in &self.decls {
            let vars = match d {
                Decl::Const { schema_vars, .. } | Decl::Rule { schema_vars, .. } => schema_vars.clone(),
                Decl::SimpleTypes { .. } => continue,
            };
            if let Decl::Rule { .. } = d {
                rule_no += 1;
            }
            let tuples = tuples(&types, vars.len());
            for tuple in tuples {
                let sub: BTreeMap<String, Term> = vars.iter().cloned().zip(tuple.iter().cloned()).collect();
                let suffix = if vars.is_empty() {
                    String::new()
                } else {
                    let parts: Vec<String> = tuple.iter().map(|t| print_simple_type(t).unwrap()).collect();
                    format!("[{}]", parts.join(","))
                };
                match d {
                    Decl::Const { name: n, ty, span, .. } => {
                        let c = self.instantiate(&Term::free(n), &sub, &mut instances);
                        let Term::Free(cn) = c else { unreachable!() };
                        if consts.iter().any(|(m, _, _)| *m == cn) {
                            return Err(ParseError::message(span.clone(), &format!("constant `{cn}` declared twice")));
                        }
                        consts.push((cn, self.instantiate(ty, &sub, &mut instances), span.clone()));
                    }
                    Decl::Rule { ctx, lhs, rhs, ty, span, .. } => {
                        let ctx = ctx.iter().map(|(x, t)| (x.clone(), self.instantiate(t, &sub, &mut instances))).collect();
                        raw_rules.push((
                            format!("R{rule_no}{suffix}"),
                            ctx,
                            self.instantiate(lhs, &sub, &mut instances),
                            self.instantiate(rhs, &sub, &mut instances),
                            self.instantiate(ty, &sub, &mut instances),
                            span.clone(),
                        ));
                    }
                    Decl::SimpleTypes { .. } => unreachable!(),
                }
            }
        }
        let mut spans = TheorySpans::default();
        let sig_only = Theory::new(Context::from_entries(consts.iter().map(|(n, t, _)| (n.clone(), t.clone()))), Vec::new());
        let none = BTreeSet::new();
        let signature = Context::from_entries(consts.iter().map(|(n, t, span)| {
            spans.constants.insert(n.clone(), span.clone());
            (n.clone(), resolve_except(&sig_only, t, &none))
        }));
        let mut rules = Vec::new();
        for (id, ctx, lhs, rhs, ty, span) in raw_rules {
            let keep: BTreeSet<Name> = ctx.iter().map(|(x, _)| name(x)).collect();
            let ctx = Context::from_entries(ctx.iter().map(|(x, t)| (name(x), resolve_except(&sig_only, t, &keep))));
            spans.rules.insert(id.clone(), span);
            rules.push(RewriteRule {
                id,
                ctx,
                lhs: resolve_except(&sig_only, &lhs, &keep),
                rhs: resolve_except(&sig_only, &rhs, &keep),
                ty: resolve_except(&sig_only, &ty, &keep),
            });
        }
        let instances = instances.into_iter().filter(|(n, _)| sig_only.is_constant(n)).map(|(n, mut i)| {
            i.args = i.args.iter().map(|a| resolve_except(&sig_only, a, &none)).collect();
            (n, i)
        });
        let theory = Theory::new(signature, rules).with_instances(instances.collect());
        Ok((theory, spans))
    }
}

fn tuples(types: &[Term], k: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                types.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Parse and elaborate a `.th` text.
pub fn load_theory(text: &str, file: &str) -> Result<(Theory, TheorySpans), ParseError> {
    parse_theory_named(text, file)?.elaborate()
}

pub const STT_SOURCE: &str = include_str!("../../theories/stt.th");
pub const CC_SOURCE: &str = include_str!("../../theories/cc.th");

/// One of the shipped theories, `stt` or `cc`.
pub fn load_builtin(which: &str) -> Result<Theory, ParseError> {
    let src = match which {
        "stt" => STT_SOURCE,
        "cc" => CC_SOURCE,
        other => {
            let span = SourceSpan { file: file_name(other), start: 0, end: 0, line: 1, column: 1 };
            return Err(ParseError::message(span, &format!("no builtin theory `{other}`")));
        }
    };
    load_theory(src, &format!("{which}.th")).map(|(t, _)| t)
}

/// One line of a `.tm` file: `ctx |- term : type` or `ctx |- term`.
#[derive(Clone, Debug)]
pub struct Judgement {
    pub line: usize,
    pub ctx: Vec<(String, Term, SpanMap)>,
    pub term: Term,
    pub term_spans: SpanMap,
    pub ty: Option<(Term, SpanMap)>,
    pub span: SourceSpan,
}

impl Judgement {
    /// Context and terms with declared constants resolved against `theory`;
    /// context names stay free.
    pub fn resolve(&self, theory: &Theory) -> (Context, Term, Option<Term>) {
        let keep: BTreeSet<Name> = self.ctx.iter().map(|(x, _, _)| name(x)).collect();
        let mut ctx = Context::new();
        for (x, t, _) in &self.ctx {
            ctx.push(name(x), resolve_except(theory, t, &keep));
        }
        let term = resolve_except(theory, &self.term, &keep);
        let ty = self.ty.as_ref().map(|(t, _)| resolve_except(theory, t, &keep));
        (ctx, term, ty)
    }
}

pub fn parse_judgement(line_text: &str, file: &str, base: usize, line: usize) -> Result<Judgement, ParseError> {
    let mut p = Parser::new(line_text, &file_name(file), base, line)?;
    let span = p.span();
    let mut ctx = Vec::new();
    if *p.peek() != Tok::Turnstile {
        loop {
            let (x, _) = p.ident()?;
            p.expect(Tok::Colon, "`:`")?;
            let (t, spans) = p.term()?;
            ctx.push((x, t, spans));
            if *p.peek() == Tok::Comma {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect(Tok::Turnstile, "`|-`")?;
    let (term, term_spans) = p.term()?;
    let ty = if *p.peek() == Tok::Colon {
        p.bump();
        Some(p.term()?)
    } else {
        None
    };
    if !p.at_eof() {
        return Err(p.error(&["`:`", "end of line"]));
    }
    let _ = p.last_span();
    Ok(Judgement { line, ctx, term, term_spans, ty, span })
}

/// All judgements of a `.tm` text; blank and comment-only lines are skipped.
pub fn parse_term_file(text: &str, file: &str) -> Result<Vec<Judgement>, ParseError> {
    let mut out = Vec::new();
    let mut base = 0;
    for (i, l) in text.split('\n').enumerate() {
        let body = l.split(';').next().unwrap_or("");
        if !body.trim().is_empty() {
            out.push(parse_judgement(l, file, base, i + 1)?);
        }
        base += l.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_term_examples() {
        assert_eq!(parse_term("Type").unwrap(), Term::Type);
        assert!(parse_term("a b )").is_err());
        let e = parse_term("").unwrap_err();
        assert!(!e.expected.is_empty());
    }

    #[test]
    fn shipped_theories_have_expected_shape() {
        let stt = parse_theory(STT_SOURCE).unwrap();
        let consts = stt.decls.iter().filter(|d| matches!(d, Decl::Const { .. })).count();
        let rules = stt.decls.iter().filter(|d| matches!(d, Decl::Rule { .. })).count();
        assert_eq!((consts, rules), (5, 2));
        let cc = parse_theory(CC_SOURCE).unwrap();
        let consts = cc.decls.iter().filter(|d| matches!(d, Decl::Const { .. })).count();
        let rules = cc.decls.iter().filter(|d| matches!(d, Decl::Rule { .. })).count();
        assert_eq!((consts, rules), (9, 5));
    }

    #[test]
    fn stt_schemas_expand_over_directive_types() {
        let th = load_builtin("stt").unwrap();
        for c in ["iota", "o", "eps", "imp", "all[iota]", "all[o]", "all[iota->o]"] {
            assert!(th.is_constant(c), "{c}");
        }
        assert_eq!(th.signature().len(), 7);
        let ids: Vec<&str> = th.rules().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, vec!["R1", "R2[iota]", "R2[o]", "R2[iota->o]"]);
        let inst = th.instance("all[iota->o]").unwrap();
        assert_eq!(&*inst.family, "all");
        assert_eq!(inst.args, vec![Term::arrow(Term::constant("iota"), Term::constant("o"))]);
        // pattern variables stay free, constants resolve
        let r = &th.rules()[0];
        assert_eq!(r.lhs, Term::app(Term::constant("eps"), Term::apps(Term::constant("imp"), [Term::free("X"), Term::free("Y")])));
    }

    #[test]
    fn empty_file_is_empty_theory() {
        let (th, _) = load_theory("", "e.th").unwrap();
        assert!(th.signature().is_empty());
        assert!(th.rules().is_empty());
        let (th, _) = load_theory("; only a comment\n", "e.th").unwrap();
        assert!(th.signature().is_empty());
    }

    #[test]
    fn closure_without_directive() {
        let src = "b : Type.\nc : Type.\nf : b -> c.\n<A> all[A] : (A -> c) -> c.\n";
        let file = parse_theory(src).unwrap();
        let names: Vec<String> = file.simple_types().iter().map(|t| print_simple_type(t).unwrap()).collect();
        assert_eq!(names, vec!["b", "c", "b->c"]);
        let (th, _) = file.elaborate().unwrap();
        assert!(th.is_constant("all[b->c]"));
    }

    #[test]
    fn theory_file_round_trip() {
        for src in [STT_SOURCE, CC_SOURCE] {
            let f1 = parse_theory(src).unwrap();
            let printed = print_theory_file(&f1);
            let f2 = parse_theory(&printed).unwrap();
            assert_eq!(f1.decls.len(), f2.decls.len());
            for (a, b) in f1.decls.iter().zip(&f2.decls) {
                assert!(a.same_as(b), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn duplicate_constants_are_rejected() {
        assert!(load_theory("a : Type.\na : Type.\n", "d.th").is_err());
    }

    #[test]
    fn judgements() {
        let js = parse_term_file("; header\nx : o, a : eps x |- a : eps x\n\n|- Type\n", "j.tm").unwrap();
        assert_eq!(js.len(), 2);
        assert_eq!(js[0].line, 2);
        assert_eq!(js[0].ctx.len(), 2);
        assert!(js[0].ty.is_some());
        assert!(js[1].ty.is_none());
        let th = Theory::stt();
        let (ctx, t, ty) = js[0].resolve(&th);
        assert_eq!(ctx.lookup("a"), Some(&Term::app(Term::constant("eps"), Term::free("x"))));
        assert_eq!(t, Term::free("a"));
        assert_eq!(ty, Some(Term::app(Term::constant("eps"), Term::free("x"))));
        let e = parse_term_file("x : o |- \n", "j.tm").unwrap_err();
        assert_eq!(e.span.line, 1);
        assert!(parse_term_file("x o |- x\n", "j.tm").is_err());
    }

    #[test]
    fn spans_point_into_the_right_line() {
        let js = parse_term_file("|- a\n|- f (g b)\n", "j.tm").unwrap();
        let s = js[1].term_spans.get(&Position(vec![1])).unwrap();
        assert_eq!((s.line, s.column), (2, 6));
        assert_eq!(s.start, 10);
        assert_eq!(js[1].term_spans.nearest(&Position(vec![1, 1, 0])).unwrap().column, 9);
    }
}
