//! Terms of the λΠ-calculus modulo theory, contexts, and theories.
//!
//! Bound variables are de Bruijn indices; free variables (context entries)
//! and constants (signature entries) are named. Binder names are kept only as
//! printing hints and never take part in equality, so `==` on [`Term`] is
//! α-equivalence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Identifier of a free variable or a constant.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Debug)]
pub enum Term {
    /// De Bruijn index, 0 is the innermost binder.
    Bound(u32),
    Free(Name),
    Const(Name),
    Type,
    Kind,
    Pi(Name, Arc<Term>, Arc<Term>),
    Lam(Name, Arc<Term>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Bound(i), Bound(j)) => i == j,
            (Free(a), Free(b)) | (Const(a), Const(b)) => a == b,
            (Type, Type) | (Kind, Kind) => true,
            (Pi(_, a1, b1), Pi(_, a2, b2)) | (Lam(_, a1, b1), Lam(_, a2, b2)) => {
                (Arc::ptr_eq(a1, a2) || a1 == a2) && (Arc::ptr_eq(b1, b2) || b1 == b2)
            }
            (App(f1, a1), App(f2, a2)) => {
                (Arc::ptr_eq(f1, f2) || f1 == f2) && (Arc::ptr_eq(a1, a2) || a1 == a2)
            }
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Term::Bound(i) => i.hash(state),
            Term::Free(n) | Term::Const(n) => n.hash(state),
            Term::Type | Term::Kind => {}
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => {
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

/// Path of 0-based child indices from the root. Children are numbered
/// domain/annotation = 0, codomain/body = 1 for binders and
/// function = 0, argument = 1 for applications.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u8>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: u8) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl Term {
    pub fn free(s: &str) -> Term {
        Term::Free(name(s))
    }

    pub fn constant(s: &str) -> Term {
        Term::Const(name(s))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// `f a1 ... an`
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Raw constructor: `body` is already expressed with de Bruijn indices.
    pub fn pi_raw(hint: &str, dom: Term, body: Term) -> Term {
        Term::Pi(name(hint), Arc::new(dom), Arc::new(body))
    }

    pub fn lam_raw(hint: &str, ann: Term, body: Term) -> Term {
        Term::Lam(name(hint), Arc::new(ann), Arc::new(body))
    }

    /// `Πx:dom. body` where `x` occurs free (by name) in `body`.
    pub fn pi(x: &str, dom: Term, body: Term) -> Term {
        let body = body.abstract_name(x);
        Term::pi_raw(x, dom, body)
    }

    /// `λx:ann. body` where `x` occurs free (by name) in `body`.
    pub fn lam(x: &str, ann: Term, body: Term) -> Term {
        let body = body.abstract_name(x);
        Term::lam_raw(x, ann, body)
    }

    /// Non-dependent product `a → b`.
    pub fn arrow(a: Term, b: Term) -> Term {
        Term::pi_raw("_", a, b.lift(1, 0))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Term::Type | Term::Kind)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Head and argument spine of an application.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in &pos.0 {
            t = *t.children().get(i as usize)?;
        }
        Some(t)
    }

    /// Rebuild the term with the subterm at `pos` replaced.
    pub fn replace_at(&self, pos: &[u8], new: Term) -> Term {
        let Some((&first, rest)) = pos.split_first() else {
            return new;
        };
        match (self, first) {
            (Term::Pi(h, a, b), 0) => Term::Pi(h.clone(), Arc::new(a.replace_at(rest, new)), b.clone()),
            (Term::Pi(h, a, b), 1) => Term::Pi(h.clone(), a.clone(), Arc::new(b.replace_at(rest, new))),
            (Term::Lam(h, a, b), 0) => Term::Lam(h.clone(), Arc::new(a.replace_at(rest, new)), b.clone()),
            (Term::Lam(h, a, b), 1) => Term::Lam(h.clone(), a.clone(), Arc::new(b.replace_at(rest, new))),
            (Term::App(f, a), 0) => Term::App(Arc::new(f.replace_at(rest, new)), a.clone()),
            (Term::App(f, a), 1) => Term::App(f.clone(), Arc::new(a.replace_at(rest, new))),
            _ => panic!("replace_at: invalid position"),
        }
    }

    /// Smallest `k` such that every loose index is `< k` (0 when locally closed).
    pub fn loose_bound(&self) -> u32 {
        match self {
            Term::Bound(i) => i + 1,
            Term::Pi(_, a, b) | Term::Lam(_, a, b) => a.loose_bound().max(b.loose_bound().saturating_sub(1)),
            Term::App(a, b) => a.loose_bound().max(b.loose_bound()),
            _ => 0,
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        self.loose_bound() == 0
    }

    /// Does index `idx` (relative to this term's root) occur?
    pub fn has_loose(&self, idx: u32) -> bool {
        match self {
            Term::Bound(i) => *i == idx,
            Term::Pi(_, a, b) | Term::Lam(_, a, b) => a.has_loose(idx) || b.has_loose(idx + 1),
            Term::App(a, b) => a.has_loose(idx) || b.has_loose(idx),
            _ => false,
        }
    }

    /// Add `by` to every index `>= cutoff`.
    pub fn lift(&self, by: u32, cutoff: u32) -> Term {
        if by == 0 || self.loose_bound() <= cutoff {
            return self.clone();
        }
        self.lift_rec(by, cutoff)
    }

    fn lift_rec(&self, by: u32, cutoff: u32) -> Term {
        match self {
            Term::Bound(i) if *i >= cutoff => Term::Bound(i + by),
            Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(a.lift_rec(by, cutoff)), Arc::new(b.lift_rec(by, cutoff + 1))),
            Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(a.lift_rec(by, cutoff)), Arc::new(b.lift_rec(by, cutoff + 1))),
            Term::App(a, b) => Term::App(Arc::new(a.lift_rec(by, cutoff)), Arc::new(b.lift_rec(by, cutoff))),
            _ => self.clone(),
        }
    }

    /// `self[0 := arg]`: substitute the innermost loose index and shift the
    /// remaining loose indices down by one. This is the body side of β.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.instantiate_at(arg, 0)
    }

    fn instantiate_at(&self, arg: &Term, depth: u32) -> Term {
        if self.loose_bound() <= depth {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i == depth => arg.lift(depth, 0),
            Term::Bound(i) if *i > depth => Term::Bound(i - 1),
            Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(a.instantiate_at(arg, depth)), Arc::new(b.instantiate_at(arg, depth + 1))),
            Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(a.instantiate_at(arg, depth)), Arc::new(b.instantiate_at(arg, depth + 1))),
            Term::App(a, b) => Term::App(Arc::new(a.instantiate_at(arg, depth)), Arc::new(b.instantiate_at(arg, depth))),
            _ => self.clone(),
        }
    }

    /// Turn free occurrences of `x` into the index of a new enclosing binder.
    pub fn abstract_name(&self, x: &str) -> Term {
        self.abstract_at(x, 0)
    }

    fn abstract_at(&self, x: &str, depth: u32) -> Term {
        match self {
            Term::Free(n) if &**n == x => Term::Bound(depth),
            Term::Bound(i) if *i >= depth => Term::Bound(i + 1),
            Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(a.abstract_at(x, depth)), Arc::new(b.abstract_at(x, depth + 1))),
            Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(a.abstract_at(x, depth)), Arc::new(b.abstract_at(x, depth + 1))),
            Term::App(a, b) => Term::App(Arc::new(a.abstract_at(x, depth)), Arc::new(b.abstract_at(x, depth))),
            _ => self.clone(),
        }
    }

    /// Simultaneous substitution of free variables. Replacements are lifted
    /// under binders, so no free variable of a replacement is captured.
    pub fn subst_free_many(&self, map: &BTreeMap<Name, Term>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        self.subst_many_at(map, 0)
    }

    fn subst_many_at(&self, map: &BTreeMap<Name, Term>, depth: u32) -> Term {
        match self {
            Term::Free(n) => match map.get(n) {
                Some(u) => u.lift(depth, 0),
                None => self.clone(),
            },
            Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(a.subst_many_at(map, depth)), Arc::new(b.subst_many_at(map, depth + 1))),
            Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(a.subst_many_at(map, depth)), Arc::new(b.subst_many_at(map, depth + 1))),
            Term::App(a, b) => Term::App(Arc::new(a.subst_many_at(map, depth)), Arc::new(b.subst_many_at(map, depth))),
            _ => self.clone(),
        }
    }

    pub fn mentions_free(&self, x: &str) -> bool {
        match self {
            Term::Free(n) => &**n == x,
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => a.mentions_free(x) || b.mentions_free(x),
            _ => false,
        }
    }

    pub fn mentions_const(&self, c: &str) -> bool {
        match self {
            Term::Const(n) => &**n == c,
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => a.mentions_const(c) || b.mentions_const(c),
            _ => false,
        }
    }

    pub fn contains(&self, pred: &impl Fn(&Term) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.contains(pred))
    }

    /// Every constant name occurring in the term.
    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Const(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}

/// α-equivalence. With nameless binders this is structural equality.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

/// Capture-avoiding `(u/x)t`.
pub fn substitute(t: &Term, x: &str, u: &Term) -> Term {
    let mut map = BTreeMap::new();
    map.insert(name(x), u.clone());
    t.subst_free_many(&map)
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    t.walk(&mut |s| {
        if let Term::Free(n) = s {
            out.insert(n.clone());
        }
    });
    out
}

/// Preorder enumeration of every subterm occurrence. Subterms below binders
/// keep their loose indices.
pub fn subterm_positions(t: &Term) -> Vec<(Position, Term)> {
    fn go(t: &Term, path: &mut Vec<u8>, out: &mut Vec<(Position, Term)>) {
        out.push((Position(path.clone()), t.clone()));
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i as u8);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Ordered list of typed declarations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Name, Term)>) -> Self {
        Context { entries: entries.into_iter().collect() }
    }

    pub fn with(mut self, x: &str, ty: Term) -> Self {
        self.push(name(x), ty);
        self
    }

    pub fn push(&mut self, x: Name, ty: Term) {
        self.entries.push((x, ty));
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.entries.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    pub fn lookup(&self, x: &str) -> Option<&Term> {
        self.entries.iter().rev().find(|(n, _)| &**n == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.entries.iter().any(|(n, _)| &**n == x)
    }

    pub fn entries(&self) -> &[(Name, Term)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(n, _)| n)
    }
}

/// `lhs --> rhs` at type `ty`, with pattern variables declared in `ctx`.
/// Pattern variables appear in `lhs`/`rhs` as [`Term::Free`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: String,
    pub ctx: Context,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Term,
}

impl RewriteRule {
    pub fn is_pattern_var(&self, x: &str) -> bool {
        self.ctx.contains(x)
    }

    /// Head constant of the left-hand side, if it has one.
    pub fn head(&self) -> Option<&Name> {
        match self.lhs.spine().0 {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }
}

/// A constant produced by instantiating a schematic declaration, e.g.
/// `all[iota]` from the family `all` at simple type `iota`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaInstance {
    pub family: Name,
    pub args: Vec<Term>,
}

/// Signature plus rewrite rules.
#[derive(Clone, Debug, Default)]
pub struct Theory {
    signature: Context,
    rules: Vec<RewriteRule>,
    instances: BTreeMap<Name, SchemaInstance>,
    by_name: HashMap<Name, usize>,
    rules_by_head: HashMap<Name, Vec<usize>>,
}

impl Theory {
    pub fn new(signature: Context, rules: Vec<RewriteRule>) -> Self {
        let mut th = Theory { signature, rules, ..Default::default() };
        th.reindex();
        th
    }

    fn reindex(&mut self) {
        self.by_name.clear();
        for (i, (n, _)) in self.signature.entries().iter().enumerate() {
            self.by_name.entry(n.clone()).or_insert(i);
        }
        self.rules_by_head.clear();
        for (i, r) in self.rules.iter().enumerate() {
            if let Some(h) = r.head() {
                self.rules_by_head.entry(h.clone()).or_default().push(i);
            }
        }
    }

    pub fn with_instances(mut self, instances: BTreeMap<Name, SchemaInstance>) -> Self {
        self.instances = instances;
        self
    }

    pub fn signature(&self) -> &Context {
        &self.signature
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn instance(&self, c: &str) -> Option<&SchemaInstance> {
        self.instances.get(c)
    }

    pub fn instances(&self) -> &BTreeMap<Name, SchemaInstance> {
        &self.instances
    }

    pub fn constant_type(&self, c: &str) -> Option<&Term> {
        self.by_name.get(c).map(|&i| &self.signature.entries()[i].1)
    }

    /// Index of the declaration of `c` in the signature.
    pub fn constant_index(&self, c: &str) -> Option<usize> {
        self.by_name.get(c).copied()
    }

    pub fn is_constant(&self, c: &str) -> bool {
        self.by_name.contains_key(c)
    }

    pub fn rules_for_head(&self, c: &str) -> &[usize] {
        self.rules_by_head.get(c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Same signature, no rules.
    pub fn without_rules(&self) -> Theory {
        Theory::new(self.signature.clone(), Vec::new()).with_instances(self.instances.clone())
    }

    pub fn with_rules(&self, rules: Vec<RewriteRule>) -> Theory {
        Theory::new(self.signature.clone(), rules).with_instances(self.instances.clone())
    }

    /// Turn free names that are declared constants into [`Term::Const`].
    pub fn resolve(&self, t: &Term) -> Term {
        match t {
            Term::Free(n) if self.is_constant(n) => Term::Const(n.clone()),
            Term::Pi(h, a, b) => Term::Pi(h.clone(), Arc::new(self.resolve(a)), Arc::new(self.resolve(b))),
            Term::Lam(h, a, b) => Term::Lam(h.clone(), Arc::new(self.resolve(a)), Arc::new(self.resolve(b))),
            Term::App(a, b) => Term::App(Arc::new(self.resolve(a)), Arc::new(self.resolve(b))),
            _ => t.clone(),
        }
    }

    /// The built-in Simple Type Theory embedding.
    pub fn stt() -> Theory {
        crate::syntax::load_builtin("stt").expect("shipped stt theory parses")
    }

    /// The built-in Calculus of Constructions embedding.
    pub fn cc() -> Theory {
        crate::syntax::load_builtin("cc").expect("shipped cc theory parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::free("A")
    }

    #[test]
    fn alpha_eq_ignores_hints() {
        let l1 = Term::lam("x", a(), Term::free("x"));
        let l2 = Term::lam("y", a(), Term::free("y"));
        assert!(alpha_eq(&l1, &l2));
        assert!(!alpha_eq(&Term::free("x"), &Term::free("y")));
        let eps = Term::constant("eps");
        let iota = Term::constant("iota");
        let p1 = Term::pi("x", iota.clone(), Term::app(eps.clone(), Term::free("x")));
        let p2 = Term::pi("z", iota, Term::app(eps, Term::free("z")));
        assert!(alpha_eq(&p1, &p2));
    }

    #[test]
    fn substitution_basics() {
        let u = Term::constant("c");
        assert_eq!(substitute(&Term::free("x"), "x", &u), u);
        assert_eq!(substitute(&Term::constant("d"), "x", &u), Term::constant("d"));
        // (y/x)(λy:A.x) = λy':A.y — the free y must not be captured.
        let t = Term::lam("y", a(), Term::free("x"));
        let r = substitute(&t, "x", &Term::free("y"));
        assert_eq!(r, Term::lam_raw("z", a(), Term::free("y")));
        assert_ne!(r, Term::lam("y", a(), Term::free("y")));
        let printed = r.to_string();
        assert!(printed.starts_with("\\y'"), "{printed}");
    }

    #[test]
    fn free_vars_examples() {
        let t = Term::lam("x", a(), Term::free("x"));
        assert_eq!(free_vars(&t), [name("A")].into_iter().collect());
        let e = Term::app(Term::constant("eps"), Term::free("x"));
        assert_eq!(free_vars(&e), [name("x")].into_iter().collect());
        assert!(free_vars(&Term::Type).is_empty());
    }

    #[test]
    fn positions_are_preorder() {
        assert_eq!(subterm_positions(&Term::free("x")), vec![(Position::root(), Term::free("x"))]);
        let app = Term::app(Term::free("f"), Term::free("a"));
        let ps: Vec<_> = subterm_positions(&app).into_iter().map(|(p, _)| p.0).collect();
        assert_eq!(ps, vec![vec![], vec![0], vec![1]]);
        let lam = Term::lam("x", a(), Term::free("x"));
        let ps = subterm_positions(&lam);
        assert_eq!(ps[1], (Position(vec![0]), a()));
        assert_eq!(ps[2], (Position(vec![1]), Term::Bound(0)));
    }

    #[test]
    fn instantiate_shifts_loose_indices() {
        // body of λ under another binder: (#0 #1)[0 := #3] = (#3 #0)
        let body = Term::app(Term::Bound(0), Term::Bound(1));
        assert_eq!(body.instantiate(&Term::Bound(3)), Term::app(Term::Bound(3), Term::Bound(0)));
        // under a binder the argument is lifted
        let body = Term::lam_raw("y", a(), Term::Bound(1));
        assert_eq!(body.instantiate(&Term::Bound(0)), Term::lam_raw("y", a(), Term::Bound(1)));
    }

    #[test]
    fn replace_at_rebuilds() {
        let t = Term::app(Term::free("f"), Term::free("a"));
        let r = t.replace_at(&[1], Term::free("b"));
        assert_eq!(r, Term::app(Term::free("f"), Term::free("b")));
    }
}
