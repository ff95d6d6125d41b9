//! Batch runs over generated terms: model sweeps for the conversion and
//! substitution lemmas, the consistency scan and the termination scan.
//!
//! Every run is deterministic for a given seed. Work is split with rayon,
//! and results are collected in input order.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::FiniteAlgebra;
use crate::candidates::{sn_search, SnSearch};
use crate::gen::{sample, EnumConfig, Enumerator, TypedTerm};
use crate::kernel::{free_vars, Context, Name, Term, Theory};
use crate::model::cc::{is_cc_theory, CcModel};
use crate::model::stt::SttModel;
use crate::model::ModelError;
use crate::reduction::{normalize, one_step_reducts, Fuel, Mode, DEFAULT_FUEL};
use crate::typing;

/// Which of the two models a theory is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Stt,
    Cc,
}

impl ModelKind {
    /// Picked from the constants the theory declares.
    pub fn of(theory: &Theory) -> Option<ModelKind> {
        if is_cc_theory(theory) {
            Some(ModelKind::Cc)
        } else if ["o", "eps", "imp"].iter().all(|c| theory.is_constant(c)) {
            Some(ModelKind::Stt)
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Stt => "stt",
            ModelKind::Cc => "cc",
        }
    }
}

/// Two βR-convertible terms in a context.
#[derive(Clone, Debug)]
pub struct Pair {
    pub id: String,
    pub ctx: Context,
    pub t: Term,
    pub u: Term,
}

/// A substitution instance `(u/x)t` in a context.
#[derive(Clone, Debug)]
pub struct SubstInstance {
    pub id: String,
    pub ctx: Context,
    pub t: Term,
    pub x: Name,
    pub u: Term,
    /// Index into the algebra list the instance is checked in.
    pub algebra: usize,
}

/// Where an equality failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub id: String,
    pub algebra: String,
    pub valuation: String,
    pub left: String,
    pub right: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemStatus {
    Pass,
    Fail(Box<Counterexample>),
    /// The model could not evaluate the item at all.
    Skip(String),
}

/// Outcome for one pair or instance over every algebra and valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemResult {
    pub id: String,
    pub status: ItemStatus,
    /// Valuations checked.
    pub checks: u64,
    /// (algebra, valuation) combinations the model could not evaluate.
    pub skipped: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub items: Vec<ItemResult>,
}

impl SweepReport {
    pub fn passed(&self) -> usize {
        self.items.iter().filter(|i| i.status == ItemStatus::Pass).count()
    }

    pub fn failed(&self) -> usize {
        self.items.iter().filter(|i| matches!(i.status, ItemStatus::Fail(_))).count()
    }

    pub fn skipped_items(&self) -> usize {
        self.items.iter().filter(|i| matches!(i.status, ItemStatus::Skip(_))).count()
    }

    pub fn checks(&self) -> u64 {
        self.items.iter().map(|i| i.checks).sum()
    }

    pub fn skipped_checks(&self) -> u64 {
        self.items.iter().map(|i| i.skipped).sum()
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.items.iter().find_map(|i| match &i.status {
            ItemStatus::Fail(c) => Some(&**c),
            _ => None,
        })
    }
}

fn mode_of(theory: &Theory) -> Mode {
    if theory.rules().is_empty() {
        Mode::Beta
    } else {
        Mode::BetaR
    }
}

fn nf(theory: &Theory, t: &Term) -> Term {
    normalize(t, theory, mode_of(theory), &mut Fuel::new(DEFAULT_FUEL)).unwrap_or_else(|e| e.last)
}

/// Each rule with its pattern variables left free, followed by up to
/// `per_rule` instances whose pattern variables are replaced by terms of
/// `ctx` up to `max_size` nodes.
pub fn rule_pairs(theory: &Theory, ctx: &Context, max_size: usize, per_rule: usize) -> Vec<Pair> {
    let mut out = Vec::new();
    let pool = Enumerator::new(theory, ctx, EnumConfig::default()).up_to(max_size);
    for rule in theory.rules() {
        out.push(Pair { id: format!("{}/open", rule.id), ctx: rule.ctx.clone(), t: rule.lhs.clone(), u: rule.rhs.clone() });
        let mut partial: Vec<BTreeMap<Name, Term>> = vec![BTreeMap::new()];
        for (x, a) in rule.ctx.entries() {
            let mut next = Vec::new();
            for sigma in &partial {
                let want = nf(theory, &a.subst_free_many(sigma));
                for cand in pool.iter().filter(|c| c.ty == want) {
                    let mut s = sigma.clone();
                    s.insert(x.clone(), cand.term.clone());
                    next.push(s);
                    if next.len() >= per_rule {
                        break;
                    }
                }
                if next.len() >= per_rule {
                    break;
                }
            }
            partial = next;
        }
        for (k, sigma) in partial.iter().enumerate() {
            out.push(Pair {
                id: format!("{}/{k}", rule.id),
                ctx: ctx.clone(),
                t: rule.lhs.subst_free_many(sigma),
                u: rule.rhs.subst_free_many(sigma),
            });
        }
    }
    out
}

/// `count` pairs `(t, u)` where `t` is a well-typed reducible term of at
/// most `max_size` nodes and `u` is one of its one-step reducts (even
/// index) or its normal form (odd index).
pub fn generated_pairs(theory: &Theory, ctx: &Context, count: usize, max_size: usize, seed: u64) -> Vec<Pair> {
    let mode = mode_of(theory);
    let pool: Vec<TypedTerm> = Enumerator::new(theory, ctx, EnumConfig::default())
        .up_to(max_size)
        .into_iter()
        .filter(|t| !one_step_reducts(&t.term, theory, mode).is_empty())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    sample(&pool, count, seed)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let u = if i % 2 == 0 {
                let reducts = one_step_reducts(&t.term, theory, mode);
                reducts.choose(&mut rng).cloned().unwrap_or_else(|| t.term.clone())
            } else {
                nf(theory, &t.term)
            };
            Pair { id: format!("gen/{i}"), ctx: ctx.clone(), t: t.term, u }
        })
        .collect()
}

/// `count` substitution instances: `x` is a variable of `ctx` that no
/// other free variable of `t` depends on, and `u` has the type of `x`.
pub fn substitution_instances(theory: &Theory, ctx: &Context, count: usize, max_size: usize, algebras: usize, seed: u64) -> Vec<SubstInstance> {
    let pool = Enumerator::new(theory, ctx, EnumConfig::default()).up_to(max_size);
    let mut by_type: BTreeMap<usize, Vec<&TypedTerm>> = BTreeMap::new();
    let types: Vec<Term> = ctx.entries().iter().map(|(_, a)| nf(theory, a)).collect();
    for (i, ty) in types.iter().enumerate() {
        by_type.insert(i, pool.iter().filter(|t| &t.ty == ty).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 100 && !pool.is_empty() {
        attempts += 1;
        let t = &pool[rng.gen_range(0..pool.len())];
        let fv = free_vars(&t.term);
        let eligible: Vec<usize> = (0..ctx.len())
            .filter(|&i| {
                let x = &ctx.entries()[i].0;
                !by_type[&i].is_empty() && ctx.entries().iter().all(|(y, b)| y == x || !fv.contains(y) || !b.mentions_free(x))
            })
            .collect();
        let Some(&i) = eligible.choose(&mut rng) else { continue };
        let u = by_type[&i].choose(&mut rng).unwrap();
        out.push(SubstInstance {
            id: format!("subst/{}", out.len()),
            ctx: ctx.clone(),
            t: t.term.clone(),
            x: ctx.entries()[i].0.clone(),
            u: u.term.clone(),
            algebra: rng.gen_range(0..algebras.max(1)),
        });
    }
    out
}

fn valuation_string<K: std::fmt::Display, V: std::fmt::Display>(entries: impl IntoIterator<Item = (K, V)>) -> String {
    entries.into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

/// Returns the name of the failing layer, if any.
type Compare<'a> = dyn Fn(&Evaluator, &Valuations) -> Result<Option<String>, ModelError> + 'a;

/// How an item is shown in a counterexample.
struct Labels<'a> {
    id: &'a str,
    left: &'a str,
    right: &'a str,
}

/// One comparison per valuation of `ctx` in `alg`.
fn sweep_one(kind: ModelKind, theory: &Theory, ctx: &Context, alg: &FiniteAlgebra, labels: &Labels, cmp: &Compare) -> (u64, u64, Option<Counterexample>) {
    let ev = match kind {
        ModelKind::Stt => Evaluator::Stt(SttModel::new(theory, alg)),
        ModelKind::Cc => Evaluator::Cc(CcModel::new(alg)),
    };
    let vals = match &ev {
        Evaluator::Stt(m) => m.valuations(ctx).map(|v| v.into_iter().map(Valuations::Stt).collect::<Vec<_>>()),
        Evaluator::Cc(m) => m.valuations(ctx).map(|v| v.into_iter().map(Valuations::Cc).collect::<Vec<_>>()),
    };
    let Ok(vals) = vals else { return (0, 1, None) };
    let (mut checks, mut skipped) = (0, 0);
    for v in &vals {
        match cmp(&ev, v) {
            Ok(None) => checks += 1,
            Ok(Some(layer)) => {
                let cx = Counterexample {
                    id: labels.id.to_string(),
                    algebra: alg.to_alg_string(),
                    valuation: v.to_string(),
                    left: labels.left.to_string(),
                    right: labels.right.to_string(),
                    detail: layer,
                };
                return (checks + 1, skipped, Some(cx));
            }
            Err(_) => skipped += 1,
        }
    }
    (checks, skipped, None)
}

enum Evaluator<'a> {
    Stt(SttModel<'a>),
    Cc(CcModel<'a>),
}

enum Valuations {
    Stt(crate::model::stt::Valuation),
    Cc(crate::model::cc::Env),
}

impl std::fmt::Display for Valuations {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuations::Stt(phi) => write!(f, "{}", valuation_string(phi.iter())),
            Valuations::Cc(env) => write!(f, "{env}"),
        }
    }
}

fn layers(a: crate::model::cc::Agreement) -> Option<String> {
    let mut bad = Vec::new();
    if !a.n {
        bad.push("N");
    }
    if !a.m {
        bad.push("M");
    }
    if !a.interp {
        bad.push("interpretation");
    }
    (!bad.is_empty()).then(|| format!("{} differ", bad.join(", ")))
}

fn fold(id: &str, parts: impl Iterator<Item = (u64, u64, Option<Counterexample>)>) -> ItemResult {
    let (mut checks, mut skipped) = (0, 0);
    for (c, s, cx) in parts {
        checks += c;
        skipped += s;
        if let Some(cx) = cx {
            return ItemResult { id: id.to_string(), status: ItemStatus::Fail(Box::new(cx)), checks, skipped };
        }
    }
    let status = if checks == 0 { ItemStatus::Skip("no valuation could be evaluated".into()) } else { ItemStatus::Pass };
    ItemResult { id: id.to_string(), status, checks, skipped }
}

/// Conversion lemma: both sides of every pair have the same domain and the
/// same interpretation, in every algebra and every valuation.
pub fn conversion_sweep(kind: ModelKind, theory: &Theory, pairs: &[Pair], algebras: &[FiniteAlgebra]) -> SweepReport {
    let items = pairs
        .par_iter()
        .map(|p| {
            let cmp = |ev: &Evaluator, v: &Valuations| -> Result<Option<String>, ModelError> {
                match (ev, v) {
                    (Evaluator::Stt(m), Valuations::Stt(phi)) => Ok((!m.check_conversion(&p.t, &p.u, phi)?).then(|| "domain or interpretation differ".into())),
                    (Evaluator::Cc(m), Valuations::Cc(env)) => Ok(layers(m.check_conversion(&p.t, &p.u, env)?)),
                    _ => unreachable!(),
                }
            };
            let (left, right) = (p.t.to_string(), p.u.to_string());
            let labels = Labels { id: &p.id, left: &left, right: &right };
            fold(&p.id, algebras.iter().map(|alg| sweep_one(kind, theory, &p.ctx, alg, &labels, &cmp)))
        })
        .collect();
    SweepReport { items }
}

/// Substitution lemma, each instance in its own algebra and every
/// valuation of it.
pub fn substitution_sweep(kind: ModelKind, theory: &Theory, instances: &[SubstInstance], algebras: &[FiniteAlgebra]) -> SweepReport {
    let items = instances
        .par_iter()
        .map(|s| {
            let cmp = |ev: &Evaluator, v: &Valuations| -> Result<Option<String>, ModelError> {
                match (ev, v) {
                    (Evaluator::Stt(m), Valuations::Stt(phi)) => Ok((!m.check_substitution(&s.t, &s.x, &s.u, phi)?).then(|| "interpretation differs".into())),
                    (Evaluator::Cc(m), Valuations::Cc(env)) => Ok(layers(m.check_substitution(&s.t, &s.x, &s.u, env)?)),
                    _ => unreachable!(),
                }
            };
            let alg = &algebras[s.algebra % algebras.len()];
            let left = crate::kernel::substitute(&s.t, &s.x, &s.u).to_string();
            let right = format!("{} with {} := {}", s.t, s.x, s.u);
            let labels = Labels { id: &s.id, left: &left, right: &right };
            fold(&s.id, std::iter::once(sweep_one(kind, theory, &s.ctx, alg, &labels, &cmp)))
        })
        .collect();
    SweepReport { items }
}

/// Result of searching for an inhabitant of a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub target: Term,
    /// Normal terms examined, all sizes.
    pub examined: usize,
    /// Per size: number of normal terms enumerated.
    pub by_size: Vec<usize>,
    /// Inhabitants, confirmed by the type checker.
    pub inhabitants: Vec<Term>,
    pub truncated: bool,
}

/// Every βR-normal term of `ctx` with at most `max_size` nodes whose type
/// is convertible to `target`.
pub fn consistency_scan(theory: &Theory, ctx: &Context, target: &Term, max_size: usize, fuel: u64) -> ConsistencyReport {
    let want = normalize(target, theory, mode_of(theory), &mut Fuel::new(fuel)).unwrap_or_else(|e| e.last);
    let mut en = Enumerator::new(theory, ctx, EnumConfig { normal_only: true, ..Default::default() });
    let mut by_size = Vec::new();
    let mut inhabitants = Vec::new();
    let mut examined = 0;
    for s in 1..=max_size {
        let terms = en.of_size(s);
        by_size.push(terms.len());
        examined += terms.len();
        for t in terms.iter().filter(|t| t.ty == want) {
            if typing::check(theory, ctx, &t.term, target, &mut Fuel::new(fuel)).is_ok() {
                inhabitants.push(t.term.clone());
            }
        }
    }
    ConsistencyReport { target: target.clone(), examined, by_size, inhabitants, truncated: en.truncated() }
}

/// The contexts and targets of the consistency scan: a proposition `x`
/// and the type of its proofs.
pub fn consistency_setup(kind: ModelKind) -> (Context, Term) {
    match kind {
        ModelKind::Stt => (Context::new().with("x", Term::constant("o")), Term::app(Term::constant("eps"), Term::free("x"))),
        ModelKind::Cc => (Context::new().with("x", Term::constant("U_Type")), Term::app(Term::constant("eps_Type"), Term::free("x"))),
    }
}

/// `ε x → ε x`, which `λα. α` inhabits.
pub fn consistency_control(kind: ModelKind) -> (Context, Term) {
    let (ctx, target) = consistency_setup(kind);
    (ctx, Term::arrow(target.clone(), target))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnItem {
    pub id: String,
    pub term: Term,
    pub verdict: SnSearch,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SnReport {
    pub items: Vec<SnItem>,
    /// Size of the pool the items were drawn from.
    pub pool: usize,
}

impl SnReport {
    pub fn normalizing(&self) -> usize {
        self.items.iter().filter(|i| matches!(i.verdict, SnSearch::Normalizing(_))).count()
    }

    pub fn cycles(&self) -> usize {
        self.items.iter().filter(|i| i.verdict == SnSearch::Cycle).count()
    }

    pub fn unknown(&self) -> usize {
        self.items.iter().filter(|i| i.verdict == SnSearch::OutOfFuel).count()
    }

    pub fn max_height(&self) -> u64 {
        self.items.iter().filter_map(|i| if let SnSearch::Normalizing(h) = i.verdict { Some(h) } else { None }).max().unwrap_or(0)
    }
}

/// Well-typed terms of at most `max_size` nodes: all of them when there
/// are at most `count`, a seeded sample of `count` otherwise.
pub fn scan_terms(theory: &Theory, ctx: &Context, max_size: usize, count: usize, seed: u64) -> (Vec<Term>, usize) {
    let pool = Enumerator::new(theory, ctx, EnumConfig::default()).up_to(max_size);
    let n = pool.len();
    let terms = if n <= count { pool.into_iter().map(|t| t.term).collect() } else { sample(&pool, count, seed).into_iter().map(|t| t.term).collect() };
    (terms, n)
}

/// Strong normalization of each term under `mode`.
pub fn sn_scan(theory: &Theory, terms: &[Term], mode: Mode, fuel: u64) -> Vec<SnItem> {
    terms
        .par_iter()
        .enumerate()
        .map(|(i, t)| SnItem { id: format!("sn/{i}"), term: t.clone(), verdict: sn_search(t, theory, mode, &mut Fuel::new(fuel)) })
        .collect()
}
