//! Syntax-directed type inference and checking modulo βR, and validation of
//! contexts, rewrite rules, and theories.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::kernel::{free_vars, name, Context, Name, Position, RewriteRule, Term, Theory};
use crate::reduction::{self, convertible_in, normalize, whnf, Fuel, FuelExhausted, Mode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundVariable(Name),
    NotAFunction,
    DomainMismatch,
    IllegalSort,
    FuelExhausted,
    TypeMismatch,
    DuplicateName(Name),
    NotBetaNormal,
    NonAlgebraicLhs,
    UnboundRhsVariable(Name),
}

impl TypeErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable(_) => "unbound-variable",
            TypeErrorKind::NotAFunction => "not-a-function",
            TypeErrorKind::DomainMismatch => "domain-mismatch",
            TypeErrorKind::IllegalSort => "illegal-sort",
            TypeErrorKind::FuelExhausted => "fuel-exhausted",
            TypeErrorKind::TypeMismatch => "type-mismatch",
            TypeErrorKind::DuplicateName(_) => "duplicate-name",
            TypeErrorKind::NotBetaNormal => "not-beta-normal",
            TypeErrorKind::NonAlgebraicLhs => "non-algebraic-lhs",
            TypeErrorKind::UnboundRhsVariable(_) => "unbound-rhs-variable",
        }
    }
}

/// Which part of a judgement or rule an error position refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    Subject,
    Type,
    Context(usize),
    Lhs,
    Rhs,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub site: Site,
    pub position: Position,
    /// Offending subterm.
    pub term: Term,
    pub expected: Option<Term>,
    pub actual: Option<Term>,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: ", self.kind.code(), self.position)?;
        match &self.kind {
            TypeErrorKind::UnboundVariable(x) => write!(f, "unbound variable `{x}`")?,
            TypeErrorKind::DuplicateName(x) => write!(f, "`{x}` is already declared")?,
            TypeErrorKind::UnboundRhsVariable(x) => write!(f, "`{x}` occurs on the right but not on the left")?,
            TypeErrorKind::NotAFunction => write!(f, "`{}` is applied but its type is not a product", self.term)?,
            TypeErrorKind::DomainMismatch => write!(f, "argument `{}` has the wrong type", self.term)?,
            TypeErrorKind::IllegalSort => write!(f, "`{}` is not in a legal sort", self.term)?,
            TypeErrorKind::FuelExhausted => write!(f, "reduction budget exhausted on `{}`", self.term)?,
            TypeErrorKind::TypeMismatch => write!(f, "`{}` has the wrong type", self.term)?,
            TypeErrorKind::NotBetaNormal => write!(f, "`{}` is not beta-normal", self.term)?,
            TypeErrorKind::NonAlgebraicLhs => write!(f, "left-hand side `{}` is not an algebraic pattern", self.term)?,
        }
        if let Some(e) = &self.expected {
            write!(f, "; expected {e}")?;
        }
        if let Some(a) = &self.actual {
            write!(f, "; found {a}")?;
        }
        Ok(())
    }
}

impl TypeError {
    fn new(kind: TypeErrorKind, path: &[u8], term: &Term) -> Self {
        TypeError { kind, site: Site::Subject, position: Position(path.to_vec()), term: term.clone(), expected: None, actual: None }
    }

    fn with_types(mut self, expected: Term, actual: Term) -> Self {
        self.expected = Some(expected);
        self.actual = Some(actual);
        self
    }

    fn at_site(mut self, site: Site) -> Self {
        self.site = site;
        self
    }
}

struct Checker<'a> {
    theory: &'a Theory,
    /// Only constants declared before this index are visible.
    sig_limit: usize,
    mode: Mode,
}

fn fuel_err(e: FuelExhausted, path: &[u8]) -> TypeError {
    TypeError::new(TypeErrorKind::FuelExhausted, path, &e.last)
}

impl<'a> Checker<'a> {
    fn full(theory: &'a Theory) -> Self {
        let mode = if theory.rules().is_empty() { Mode::Beta } else { Mode::BetaR };
        Checker { theory, sig_limit: usize::MAX, mode }
    }

    fn fresh(&self, hint: &str, ctx: &Context) -> Name {
        let base = if hint.is_empty() || hint == "_" { "x" } else { hint };
        let mut cand = base.to_string();
        let mut k = 0;
        while ctx.contains(&cand) || self.theory.is_constant(&cand) {
            k += 1;
            cand = format!("{base}_{k}");
        }
        name(&cand)
    }

    fn whnf(&self, t: &Term, fuel: &mut Fuel, path: &[u8]) -> Result<Term, TypeError> {
        whnf(t, self.theory, self.mode, fuel).map_err(|e| fuel_err(e, path))
    }

    fn conv(&self, a: &Term, b: &Term, fuel: &mut Fuel, path: &[u8]) -> Result<bool, TypeError> {
        convertible_in(a, b, self.theory, self.mode, fuel).map_err(|e| fuel_err(e, path))
    }

    fn nf(&self, t: &Term, fuel: &mut Fuel, path: &[u8]) -> Result<Term, TypeError> {
        normalize(t, self.theory, self.mode, fuel).map_err(|e| fuel_err(e, path))
    }

    /// Weak-head form that is a product, normalizing fully when the head is
    /// stuck on a redex hidden below the root.
    fn expose_pi(&self, t: &Term, fuel: &mut Fuel, path: &[u8]) -> Result<Term, TypeError> {
        let w = self.whnf(t, fuel, path)?;
        if matches!(w, Term::Pi(..)) {
            return Ok(w);
        }
        self.nf(&w, fuel, path)
    }

    fn expect_sort(&self, ty: &Term, fuel: &mut Fuel, path: &[u8], subject: &Term) -> Result<Term, TypeError> {
        let w = self.whnf(ty, fuel, path)?;
        if w.is_sort() {
            Ok(w)
        } else {
            Err(TypeError::new(TypeErrorKind::IllegalSort, path, subject).with_types(Term::Type, w))
        }
    }

    fn infer(&self, ctx: &mut Context, t: &Term, fuel: &mut Fuel, path: &mut Vec<u8>) -> Result<Term, TypeError> {
        match t {
            Term::Bound(_) => Err(TypeError::new(TypeErrorKind::UnboundVariable(name(&t.to_string())), path, t)),
            Term::Free(x) => ctx.lookup(x).cloned().ok_or_else(|| TypeError::new(TypeErrorKind::UnboundVariable(x.clone()), path, t)),
            Term::Const(c) => match self.theory.constant_index(c) {
                Some(i) if i < self.sig_limit => Ok(self.theory.signature().entries()[i].1.clone()),
                _ => Err(TypeError::new(TypeErrorKind::UnboundVariable(c.clone()), path, t)),
            },
            Term::Type => Ok(Term::Kind),
            Term::Kind => Err(TypeError::new(TypeErrorKind::IllegalSort, path, t)),
            Term::Pi(h, a, b) => {
                self.check_domain(ctx, a, fuel, path)?;
                let x = self.fresh(h, ctx);
                let body = b.instantiate(&Term::Free(x.clone()));
                ctx.push(x, (**a).clone());
                path.push(1);
                let s = self.infer(ctx, &body, fuel, path);
                let s = s.and_then(|s| self.expect_sort(&s, fuel, path, &body));
                path.pop();
                ctx.pop();
                s
            }
            Term::Lam(h, a, b) => {
                self.check_domain(ctx, a, fuel, path)?;
                let x = self.fresh(h, ctx);
                let body = b.instantiate(&Term::Free(x.clone()));
                ctx.push(x.clone(), (**a).clone());
                path.push(1);
                let ty = self.infer(ctx, &body, fuel, path);
                let ty = ty.and_then(|ty| {
                    if ty == Term::Kind {
                        Err(TypeError::new(TypeErrorKind::IllegalSort, path, &body).with_types(Term::Type, Term::Kind))
                    } else {
                        Ok(ty)
                    }
                });
                path.pop();
                ctx.pop();
                Ok(Term::Pi(h.clone(), a.clone(), ty?.abstract_name(&x).into()))
            }
            Term::App(f, a) => {
                path.push(0);
                let tf = self.infer(ctx, f, fuel, path);
                let tf = tf.and_then(|tf| self.expose_pi(&tf, fuel, path));
                path.pop();
                let tf = tf?;
                let Term::Pi(_, dom, cod) = tf else {
                    path.push(0);
                    let e = TypeError::new(TypeErrorKind::NotAFunction, path, f).with_types(Term::pi_raw("_", Term::free("?"), Term::free("?")), tf);
                    path.pop();
                    return Err(e);
                };
                path.push(1);
                let ta = self.infer(ctx, a, fuel, path);
                let r = ta.and_then(|ta| {
                    if self.conv(&ta, &dom, fuel, path)? {
                        Ok(())
                    } else {
                        let e = self.nf(&dom, fuel, path)?;
                        let g = self.nf(&ta, fuel, path)?;
                        Err(TypeError::new(TypeErrorKind::DomainMismatch, path, a).with_types(e, g))
                    }
                });
                path.pop();
                r?;
                Ok(cod.instantiate(a))
            }
        }
    }

    /// Binder domains must have type Type.
    fn check_domain(&self, ctx: &mut Context, a: &Term, fuel: &mut Fuel, path: &mut Vec<u8>) -> Result<(), TypeError> {
        path.push(0);
        let r = self.infer(ctx, a, fuel, path).and_then(|s| {
            let w = self.whnf(&s, fuel, path)?;
            if w == Term::Type {
                Ok(())
            } else {
                Err(TypeError::new(TypeErrorKind::IllegalSort, path, a).with_types(Term::Type, w))
            }
        });
        path.pop();
        r
    }

    fn infer_top(&self, ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Term, TypeError> {
        let mut ctx = ctx.clone();
        let ty = self.infer(&mut ctx, t, fuel, &mut Vec::new())?;
        self.nf(&ty, fuel, &[])
    }

    fn check_top(&self, ctx: &Context, t: &Term, expected: &Term, fuel: &mut Fuel) -> Result<(), TypeError> {
        let mut work = ctx.clone();
        let ty = self.infer(&mut work, t, fuel, &mut Vec::new())?;
        if self.conv(&ty, expected, fuel, &[])? {
            Ok(())
        } else {
            let e = self.nf(expected, fuel, &[])?;
            let a = self.nf(&ty, fuel, &[])?;
            Err(TypeError::new(TypeErrorKind::TypeMismatch, &[], t).with_types(e, a))
        }
    }

    /// `A` is `Kind` or has a sort.
    fn check_is_type(&self, ctx: &Context, a: &Term, fuel: &mut Fuel) -> Result<(), TypeError> {
        if *a == Term::Kind {
            return Ok(());
        }
        let mut work = ctx.clone();
        let s = self.infer(&mut work, a, fuel, &mut Vec::new())?;
        self.expect_sort(&s, fuel, &[], a).map(|_| ())
    }

    fn check_context(&self, ctx: &Context, fuel: &mut Fuel) -> Result<(), TypeError> {
        let mut prefix = Context::new();
        for (i, (x, a)) in ctx.entries().iter().enumerate() {
            if prefix.contains(x) || self.theory.constant_index(x).is_some_and(|k| k < self.sig_limit) {
                return Err(TypeError::new(TypeErrorKind::DuplicateName(x.clone()), &[], &Term::Free(x.clone())).at_site(Site::Context(i)));
            }
            let mut work = prefix.clone();
            let s = self.infer(&mut work, a, fuel, &mut Vec::new()).map_err(|e| e.at_site(Site::Context(i)))?;
            self.expect_sort(&s, fuel, &[], a).map_err(|e| e.at_site(Site::Context(i)))?;
            prefix.push(x.clone(), a.clone());
        }
        Ok(())
    }
}

/// A type of `t` in `ctx`, in βR-normal form.
pub fn infer(theory: &Theory, ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<Term, TypeError> {
    Checker::full(theory).infer_top(ctx, t, fuel)
}

/// `t` has a type βR-convertible to `a`.
pub fn check(theory: &Theory, ctx: &Context, t: &Term, a: &Term, fuel: &mut Fuel) -> Result<(), TypeError> {
    Checker::full(theory).check_top(ctx, t, a, fuel)
}

pub fn check_context(theory: &Theory, ctx: &Context, fuel: &mut Fuel) -> Result<(), TypeError> {
    Checker::full(theory).check_context(ctx, fuel)
}

/// `ctx` well-formed, `ty` a type (or `Kind`), and `t : ty`. Without `ty`,
/// infers and returns the type.
pub fn check_judgement(theory: &Theory, ctx: &Context, t: &Term, ty: Option<&Term>, fuel: &mut Fuel) -> Result<Term, TypeError> {
    let c = Checker::full(theory);
    c.check_context(ctx, fuel)?;
    match ty {
        Some(a) => {
            c.check_is_type(ctx, a, fuel).map_err(|e| e.at_site(Site::Type))?;
            c.check_top(ctx, t, a, fuel)?;
            Ok(a.clone())
        }
        None => c.infer_top(ctx, t, fuel),
    }
}

/// The type of `t` has type `Type`.
pub fn is_object(theory: &Theory, ctx: &Context, t: &Term, fuel: &mut Fuel) -> Result<bool, TypeError> {
    let c = Checker::full(theory);
    let a = c.infer_top(ctx, t, fuel)?;
    if a == Term::Kind {
        return Ok(false);
    }
    let s = c.infer_top(ctx, &a, fuel)?;
    Ok(s == Term::Type)
}

/// Constant applied to patterns; pattern variables linear; no binders.
pub fn is_algebraic_lhs(rule: &RewriteRule) -> bool {
    fn pat(t: &Term, rule: &RewriteRule, seen: &mut BTreeSet<Name>) -> bool {
        match t {
            Term::Free(x) if rule.is_pattern_var(x) => seen.insert(x.clone()),
            _ => {
                let (head, args) = t.spine();
                matches!(head, Term::Const(_)) && args.into_iter().all(|a| pat(a, rule, seen))
            }
        }
    }
    matches!(rule.lhs.spine().0, Term::Const(_)) && pat(&rule.lhs, rule, &mut BTreeSet::new())
}

/// Check a rule against the bare signature with β-conversion only.
pub fn check_rule(sig_only: &Theory, rule: &RewriteRule, fuel: &mut Fuel) -> Result<(), TypeError> {
    check_rule_with_limit(sig_only, rule, usize::MAX, fuel)
}

fn check_rule_with_limit(sig_only: &Theory, rule: &RewriteRule, sig_limit: usize, fuel: &mut Fuel) -> Result<(), TypeError> {
    let c = Checker { theory: sig_only, sig_limit, mode: Mode::Beta };
    for (site, t) in [(Site::Lhs, &rule.lhs), (Site::Rhs, &rule.rhs), (Site::Type, &rule.ty)] {
        if let Some(p) = reduction::beta_redex_positions(t).into_iter().next() {
            let sub = t.subterm(&p).cloned().unwrap_or_else(|| t.clone());
            return Err(TypeError { position: p, ..TypeError::new(TypeErrorKind::NotBetaNormal, &[], &sub) }.at_site(site));
        }
    }
    if !is_algebraic_lhs(rule) {
        return Err(TypeError::new(TypeErrorKind::NonAlgebraicLhs, &[], &rule.lhs).at_site(Site::Lhs));
    }
    let lhs_vars = free_vars(&rule.lhs);
    for x in free_vars(&rule.rhs) {
        if !lhs_vars.contains(&x) {
            return Err(TypeError::new(TypeErrorKind::UnboundRhsVariable(x.clone()), &[], &Term::Free(x)).at_site(Site::Rhs));
        }
    }
    for x in &lhs_vars {
        if !rule.ctx.contains(x) {
            return Err(TypeError::new(TypeErrorKind::UnboundVariable(x.clone()), &[], &Term::Free(x.clone())).at_site(Site::Lhs));
        }
    }
    c.check_context(&rule.ctx, fuel)?;
    c.check_is_type(&rule.ctx, &rule.ty, fuel).map_err(|e| e.at_site(Site::Type))?;
    c.check_top(&rule.ctx, &rule.lhs, &rule.ty, fuel).map_err(|e| e.at_site(Site::Lhs))?;
    c.check_top(&rule.ctx, &rule.rhs, &rule.ty, fuel).map_err(|e| e.at_site(Site::Rhs))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemKind {
    Constant,
    Rule,
}

#[derive(Clone, Debug)]
pub struct ItemReport {
    pub id: String,
    pub kind: ItemKind,
    pub result: Result<(), TypeError>,
}

#[derive(Clone, Debug, Default)]
pub struct TheoryReport {
    pub items: Vec<ItemReport>,
    pub warnings: Vec<String>,
}

impl TheoryReport {
    pub fn is_ok(&self) -> bool {
        self.items.iter().all(|i| i.result.is_ok())
    }

    pub fn errors(&self) -> impl Iterator<Item = &ItemReport> {
        self.items.iter().filter(|i| i.result.is_err())
    }
}

/// Check every declaration against the signature prefix before it (plain
/// λΠ) and every rule against the whole signature; warn about overlapping
/// left-hand sides.
pub fn check_theory(theory: &Theory, fuel: &mut Fuel) -> TheoryReport {
    let sig_only = theory.without_rules();
    let mut report = TheoryReport::default();
    let mut seen = BTreeSet::new();
    for (i, (c, ty)) in theory.signature().entries().iter().enumerate() {
        let checker = Checker { theory: &sig_only, sig_limit: i, mode: Mode::Beta };
        let result = if !seen.insert(c.clone()) {
            Err(TypeError::new(TypeErrorKind::DuplicateName(c.clone()), &[], &Term::Const(c.clone())))
        } else {
            checker.check_is_type(&Context::new(), ty, fuel).map_err(|e| e.at_site(Site::Type))
        };
        report.items.push(ItemReport { id: c.to_string(), kind: ItemKind::Constant, result });
    }
    for rule in theory.rules() {
        let result = check_rule(&sig_only, rule, fuel);
        report.items.push(ItemReport { id: rule.id.clone(), kind: ItemKind::Rule, result });
    }
    report.warnings = overlap_warnings(theory);
    report
}

fn rename_pattern_vars(t: &Term, rule: &RewriteRule, tag: &str) -> Term {
    match t {
        Term::Free(x) if rule.is_pattern_var(x) => Term::free(&format!("{tag}{x}")),
        Term::App(f, a) => Term::app(rename_pattern_vars(f, rule, tag), rename_pattern_vars(a, rule, tag)),
        _ => t.clone(),
    }
}

fn is_var(t: &Term) -> Option<&Name> {
    match t {
        Term::Free(x) if x.contains('|') => Some(x),
        _ => None,
    }
}

fn occurs(x: &Name, t: &Term, sub: &std::collections::BTreeMap<Name, Term>) -> bool {
    match t {
        Term::Free(y) if y == x => true,
        Term::Free(y) => sub.get(y).is_some_and(|u| occurs(x, u, sub)),
        Term::App(f, a) => occurs(x, f, sub) || occurs(x, a, sub),
        _ => false,
    }
}

/// First-order unification of two algebraic patterns with disjoint variables.
fn unify(a: &Term, b: &Term, sub: &mut std::collections::BTreeMap<Name, Term>) -> bool {
    let walk = |t: &Term, sub: &std::collections::BTreeMap<Name, Term>| {
        let mut t = t.clone();
        while let Some(x) = is_var(&t) {
            match sub.get(x) {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    };
    let a = walk(a, sub);
    let b = walk(b, sub);
    match (is_var(&a), is_var(&b)) {
        (Some(x), Some(y)) if x == y => true,
        (Some(x), _) => {
            if occurs(x, &b, sub) {
                return false;
            }
            sub.insert(x.clone(), b.clone());
            true
        }
        (_, Some(y)) => {
            if occurs(y, &a, sub) {
                return false;
            }
            sub.insert(y.clone(), a.clone());
            true
        }
        _ => match (&a, &b) {
            (Term::App(f1, a1), Term::App(f2, a2)) => unify(f1, f2, sub) && unify(a1, a2, sub),
            _ => a == b,
        },
    }
}

/// Pairs of left-hand sides that overlap at the root or at a non-variable
/// subterm.
pub fn overlap_warnings(theory: &Theory) -> Vec<String> {
    let rules = theory.rules();
    let mut out = Vec::new();
    for (i, r1) in rules.iter().enumerate() {
        let l1 = rename_pattern_vars(&r1.lhs, r1, "1|");
        for (j, r2) in rules.iter().enumerate() {
            let l2 = rename_pattern_vars(&r2.lhs, r2, "2|");
            for (p, sub) in crate::kernel::subterm_positions(&l1) {
                if is_var(&sub).is_some() || (p.0.is_empty() && j <= i) {
                    continue;
                }
                if unify(&sub, &l2, &mut Default::default()) {
                    let at = if p.0.is_empty() { "the root".to_string() } else { format!("position {p}") };
                    out.push(format!("rules {} and {} overlap at {at} of {}", r1.id, r2.id, r1.id));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, resolve_except};

    fn term(th: &Theory, s: &str) -> Term {
        th.resolve(&parse_term(s).unwrap())
    }

    fn ctx(th: &Theory, entries: &[(&str, &str)]) -> Context {
        let mut c = Context::new();
        for (x, t) in entries {
            c.push(name(x), term(th, t));
        }
        c
    }

    #[test]
    fn infer_examples() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        assert_eq!(infer(&stt, &Context::new(), &Term::Type, &mut fuel).unwrap(), Term::Kind);
        let g = ctx(&stt, &[("x", "o")]);
        let t = term(&stt, "\\a : eps x. a");
        let ty = infer(&stt, &g, &t, &mut fuel).unwrap();
        assert_eq!(ty, term(&stt, "eps x -> eps x"));
        check(&stt, &g, &t, &term(&stt, "eps (imp x x)"), &mut fuel).unwrap();
        let e = infer(&stt, &Context::new(), &term(&stt, "iota iota"), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::NotAFunction);
        assert_eq!(e.position, Position(vec![0]));
    }

    #[test]
    fn check_examples() {
        let cc = Theory::cc();
        let mut fuel = Fuel::default();
        check(&cc, &Context::new(), &term(&cc, "dType"), &term(&cc, "U_Kind"), &mut fuel).unwrap();
        let stt = Theory::stt();
        let e = check(&stt, &Context::new(), &term(&stt, "iota"), &Term::Kind, &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::TypeMismatch);
        assert_eq!(e.actual, Some(Term::Type));
        let g = ctx(&cc, &[("x", "U_Type")]);
        check(&cc, &g, &Term::free("x"), &term(&cc, "eps_Kind dType"), &mut fuel).unwrap();
    }

    #[test]
    fn errors_have_positions() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        let g = ctx(&stt, &[("x", "o")]);
        let e = infer(&stt, &g, &term(&stt, "imp x iota"), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::DomainMismatch);
        assert_eq!(e.position, Position(vec![1]));
        assert_eq!(e.expected, Some(term(&stt, "o")));
        assert_eq!(e.actual, Some(Term::Type));
        let e = infer(&stt, &g, &term(&stt, "\\y : o. y z"), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::NotAFunction);
        let e = infer(&stt, &g, &term(&stt, "\\y : o. eps z"), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::UnboundVariable(name("z")));
        assert_eq!(e.position, Position(vec![1, 1]));
        let e = infer(&stt, &g, &Term::Kind, &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::IllegalSort);
    }

    #[test]
    fn products_and_sorts() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        assert_eq!(infer(&stt, &Context::new(), &term(&stt, "o -> Type"), &mut fuel).unwrap(), Term::Kind);
        assert_eq!(infer(&stt, &Context::new(), &term(&stt, "o -> o"), &mut fuel).unwrap(), Term::Type);
        // a domain of type Kind is rejected
        let e = infer(&stt, &Context::new(), &term(&stt, "Type -> o"), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::IllegalSort);
        assert_eq!(e.position, Position(vec![0]));
        let e = infer(&stt, &Context::new(), &term(&stt, "\\x : o. Type"), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::IllegalSort);
        assert_eq!(infer(&stt, &Context::new(), &term(&stt, "\\x : o. o"), &mut fuel).unwrap(), term(&stt, "o -> Type"));
    }

    #[test]
    fn dependent_application() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        let g = ctx(&stt, &[("f", "iota -> o"), ("p", "Pi z : iota. eps (f z)"), ("c", "iota")]);
        assert_eq!(infer(&stt, &g, &term(&stt, "p c"), &mut fuel).unwrap(), term(&stt, "eps (f c)"));
        // a proof of eps (all[iota] f) is a function via the second rule
        let g = g.with("q", term(&stt, "eps (all[iota] f)"));
        assert_eq!(infer(&stt, &g, &term(&stt, "q c"), &mut fuel).unwrap(), term(&stt, "eps (f c)"));
    }

    #[test]
    fn fresh_names_avoid_context() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        let g = ctx(&stt, &[("x", "o")]);
        // binder named like a context variable
        let t = term(&stt, "\\x : eps x. x");
        assert_eq!(infer(&stt, &g, &t, &mut fuel).unwrap(), term(&stt, "eps x -> eps x"));
    }

    #[test]
    fn check_context_examples() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        check_context(&stt, &Context::new(), &mut fuel).unwrap();
        check_context(&stt, &ctx(&stt, &[("x", "o"), ("y", "eps x")]), &mut fuel).unwrap();
        let e = check_context(&stt, &ctx(&stt, &[("x", "o"), ("x", "o")]), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::DuplicateName(name("x")));
        assert_eq!(e.site, Site::Context(1));
        let e = check_context(&stt, &ctx(&stt, &[("x", "Kind")]), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::IllegalSort);
        let e = check_context(&stt, &ctx(&stt, &[("o", "Type")]), &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::DuplicateName(name("o")));
    }

    #[test]
    fn is_object_examples() {
        let stt = Theory::stt();
        let mut fuel = Fuel::default();
        let g = ctx(&stt, &[("x", "o"), ("a", "eps x")]);
        assert!(is_object(&stt, &g, &Term::free("x"), &mut fuel).unwrap());
        assert!(!is_object(&stt, &g, &term(&stt, "o"), &mut fuel).unwrap());
        assert!(is_object(&stt, &g, &Term::free("a"), &mut fuel).unwrap());
        assert!(!is_object(&stt, &g, &Term::Type, &mut fuel).unwrap());
    }

    fn rule(th: &Theory, ctx_entries: &[(&str, &str)], lhs: &str, rhs: &str, ty: &str) -> RewriteRule {
        let c = ctx(th, ctx_entries);
        let keep: BTreeSet<Name> = c.names().cloned().collect();
        let r = |s: &str| resolve_except(th, &parse_term(s).unwrap(), &keep);
        RewriteRule { id: "T".into(), ctx: c, lhs: r(lhs), rhs: r(rhs), ty: r(ty) }
    }

    #[test]
    fn check_rule_examples() {
        let stt = Theory::stt();
        let sig = stt.without_rules();
        let mut fuel = Fuel::default();
        for r in stt.rules() {
            check_rule(&sig, r, &mut fuel).unwrap();
        }
        let cc = Theory::cc();
        check_rule(&cc.without_rules(), &cc.rules()[0], &mut fuel).unwrap();

        let bad = rule(&stt, &[("X", "o"), ("Y", "o")], "eps (imp X X)", "eps Y", "Type");
        assert!(matches!(check_rule(&sig, &bad, &mut fuel).unwrap_err().kind, TypeErrorKind::NonAlgebraicLhs));
        let bad = rule(&stt, &[("X", "o"), ("Y", "o")], "eps X", "eps Y", "Type");
        assert_eq!(check_rule(&sig, &bad, &mut fuel).unwrap_err().kind, TypeErrorKind::UnboundRhsVariable(name("Y")));
        let bad = rule(&stt, &[("X", "o")], "eps X", "(\\y : Type. y) (eps X)", "Type");
        let e = check_rule(&sig, &bad, &mut fuel).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::NotBetaNormal);
        assert_eq!(e.site, Site::Rhs);
        // rhs of the wrong type
        let bad = rule(&stt, &[("X", "o"), ("Y", "o")], "eps (imp X Y)", "imp X Y", "Type");
        assert_eq!(check_rule(&sig, &bad, &mut fuel).unwrap_err().kind, TypeErrorKind::TypeMismatch);
        // typing the rhs would need the rules themselves
        let strat = rule(&stt, &[("X", "o"), ("a", "eps (imp X X)")], "eps (imp X X)", "eps X -> eps X", "Type");
        assert!(check_rule(&sig, &strat, &mut fuel).is_err());
    }

    #[test]
    fn shipped_theories_check() {
        let mut fuel = Fuel::default();
        for th in [Theory::stt(), Theory::cc()] {
            let rep = check_theory(&th, &mut fuel);
            assert!(rep.is_ok(), "{:?}", rep.errors().collect::<Vec<_>>());
            assert!(rep.warnings.is_empty(), "{:?}", rep.warnings);
        }
        assert_eq!(check_theory(&Theory::cc(), &mut fuel).items.len(), 14);
    }

    #[test]
    fn check_theory_pinpoints_bad_rule() {
        let stt = Theory::stt();
        let mut rules = stt.rules().to_vec();
        rules[0].ty = Term::constant("o");
        let rep = check_theory(&stt.with_rules(rules), &mut Fuel::default());
        let bad: Vec<_> = rep.errors().map(|i| i.id.clone()).collect();
        assert_eq!(bad, vec!["R1".to_string()]);
    }

    #[test]
    fn signature_is_checked_in_order() {
        let (th, _) = crate::syntax::load_theory("a : b.\nb : Type.\n", "o.th").unwrap();
        let rep = check_theory(&th, &mut Fuel::default());
        assert!(rep.items[0].result.is_err());
        assert!(rep.items[1].result.is_ok());
    }

    #[test]
    fn overlaps_are_reported() {
        let src = "o : Type.\nc : o.\nf : o -> o.\n[X : o] f X --> c : o.\n[] f c --> c : o.\n[Y : o] f (f Y) --> Y : o.\n";
        let (th, _) = crate::syntax::load_theory(src, "ov.th").unwrap();
        let w = overlap_warnings(&th);
        assert!(w.iter().any(|s| s.contains("R1 and R2") && s.contains("root")), "{w:?}");
        assert!(w.iter().any(|s| s.contains("R3 and R1") && s.contains("position 1")), "{w:?}");
    }
}
