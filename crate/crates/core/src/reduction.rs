//! β and rewrite-rule steps, fuel-bounded normalization, and βR-conversion.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kernel::{Name, Position, RewriteRule, Term, Theory};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Budget of one-step reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(steps: u64) -> Self {
        Fuel { remaining: steps }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }

    /// Pay for one step. Fails without decrementing when empty.
    pub fn tick(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        true
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

/// Reduction ran out of fuel; `last` is the term reached so far.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("fuel exhausted")]
pub struct FuelExhausted {
    pub last: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Beta,
    BetaR,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Beta,
    Rule(String),
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Beta => f.write_str("beta"),
            StepKind::Rule(id) => f.write_str(id),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub position: Position,
    pub kind: StepKind,
    /// The whole term after the step.
    pub result: Term,
}

/// Pattern-variable bindings produced by matching.
pub type MatchSubstitution = BTreeMap<Name, Term>;

pub fn beta_root(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match f.as_ref() {
            Term::Lam(_, _, body) => Some(body.instantiate(a)),
            _ => None,
        },
        _ => None,
    }
}

/// First-order matching of an algebraic left-hand side.
pub fn match_pattern(rule: &RewriteRule, t: &Term) -> Option<MatchSubstitution> {
    let mut subst = MatchSubstitution::new();
    if match_into(rule, &rule.lhs, t, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn match_into(rule: &RewriteRule, pat: &Term, t: &Term, subst: &mut MatchSubstitution) -> bool {
    match pat {
        Term::Free(x) if rule.is_pattern_var(x) => match subst.get(x) {
            Some(bound) => bound == t,
            None => {
                subst.insert(x.clone(), t.clone());
                true
            }
        },
        Term::App(pf, pa) => match t {
            Term::App(tf, ta) => match_into(rule, pf, tf, subst) && match_into(rule, pa, ta, subst),
            _ => false,
        },
        _ => pat == t,
    }
}

/// First rule (declaration order) whose left-hand side matches at the root.
pub fn r_root(t: &Term, theory: &Theory) -> Option<(Term, String)> {
    let Term::Const(head) = t.spine().0 else {
        return None;
    };
    for &i in theory.rules_for_head(head) {
        let rule = &theory.rules()[i];
        if let Some(theta) = match_pattern(rule, t) {
            return Some((rule.rhs.subst_free_many(&theta), rule.id.clone()));
        }
    }
    None
}

fn root_step(t: &Term, theory: &Theory, mode: Mode) -> Option<(Term, StepKind)> {
    if let Some(u) = beta_root(t) {
        return Some((u, StepKind::Beta));
    }
    if mode == Mode::BetaR {
        if let Some((u, id)) = r_root(t, theory) {
            return Some((u, StepKind::Rule(id)));
        }
    }
    None
}

/// Every root step at every position, without deduplication.
pub fn one_step_reducts_traced(t: &Term, theory: &Theory, mode: Mode) -> Vec<Step> {
    fn go(t: &Term, theory: &Theory, mode: Mode, path: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, StepKind, Term)>) {
        if let Some(beta) = beta_root(t) {
            out.push((path.clone(), StepKind::Beta, beta));
        }
        if mode == Mode::BetaR {
            if let Some((u, id)) = r_root(t, theory) {
                out.push((path.clone(), StepKind::Rule(id), u));
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i as u8);
            go(c, theory, mode, path, out);
            path.pop();
        }
    }
    let mut local = Vec::new();
    go(t, theory, mode, &mut Vec::new(), &mut local);
    local
        .into_iter()
        .map(|(p, kind, sub)| Step { result: t.replace_at(&p, sub), position: Position(p), kind })
        .collect()
}

/// All one-step reducts, deduplicated up to α.
pub fn one_step_reducts(t: &Term, theory: &Theory, mode: Mode) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for s in one_step_reducts_traced(t, theory, mode) {
        if !out.contains(&s.result) {
            out.push(s.result);
        }
    }
    out
}

/// Leftmost-outermost step.
pub fn step_leftmost(t: &Term, theory: &Theory, mode: Mode) -> Option<(Position, StepKind, Term)> {
    fn go(t: &Term, theory: &Theory, mode: Mode, path: &mut Vec<u8>) -> Option<(Vec<u8>, StepKind, Term)> {
        if let Some((u, k)) = root_step(t, theory, mode) {
            return Some((path.clone(), k, u));
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i as u8);
            let r = go(c, theory, mode, path);
            path.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
    let (p, kind, sub) = go(t, theory, mode, &mut Vec::new())?;
    let result = t.replace_at(&p, sub);
    Some((Position(p), kind, result))
}

pub fn normalize(t: &Term, theory: &Theory, mode: Mode, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    normalize_with(t, theory, mode, fuel, |_| {})
}

/// Normalize, reporting every step to `on_step`.
pub fn normalize_with(
    t: &Term,
    theory: &Theory,
    mode: Mode,
    fuel: &mut Fuel,
    mut on_step: impl FnMut(&Step),
) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    loop {
        let Some((position, kind, next)) = step_leftmost(&cur, theory, mode) else {
            return Ok(cur);
        };
        if !fuel.tick() {
            return Err(FuelExhausted { last: cur });
        }
        on_step(&Step { position, kind, result: next.clone() });
        cur = next;
    }
}

/// Contract root redexes until none is left at the root.
pub fn whnf(t: &Term, theory: &Theory, mode: Mode, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    while let Some((next, _)) = root_step(&cur, theory, mode) {
        if !fuel.tick() {
            return Err(FuelExhausted { last: cur });
        }
        cur = next;
    }
    Ok(cur)
}

/// βR-convertibility by comparison of weak-head forms, falling back to full
/// normal forms for neutral terms. Complete when the rules are confluent and
/// terminating.
pub fn convertible(t: &Term, u: &Term, theory: &Theory, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    convertible_in(t, u, theory, Mode::BetaR, fuel)
}

pub fn convertible_in(t: &Term, u: &Term, theory: &Theory, mode: Mode, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    if t == u {
        return Ok(true);
    }
    let tw = whnf(t, theory, mode, fuel)?;
    let uw = whnf(u, theory, mode, fuel)?;
    match (&tw, &uw) {
        (Term::Pi(_, a1, b1), Term::Pi(_, a2, b2)) | (Term::Lam(_, a1, b1), Term::Lam(_, a2, b2)) => {
            Ok(convertible_in(a1, a2, theory, mode, fuel)? && convertible_in(b1, b2, theory, mode, fuel)?)
        }
        (Term::Type, Term::Type) | (Term::Kind, Term::Kind) => Ok(true),
        (Term::Type | Term::Kind, Term::Type | Term::Kind) => Ok(false),
        (Term::Pi(..), Term::Lam(..)) | (Term::Lam(..), Term::Pi(..)) => Ok(false),
        (Term::Pi(..) | Term::Lam(..) | Term::Type | Term::Kind, Term::Pi(..) | Term::Lam(..) | Term::Type | Term::Kind) => {
            Ok(false)
        }
        _ => {
            let tn = normalize(&tw, theory, mode, fuel)?;
            let un = normalize(&uw, theory, mode, fuel)?;
            Ok(tn == un)
        }
    }
}

/// Whether `t` has no redex for the given mode.
pub fn is_normal(t: &Term, theory: &Theory, mode: Mode) -> bool {
    step_leftmost(t, theory, mode).is_none()
}

/// β-redexes at any position.
pub fn beta_redex_positions(t: &Term) -> Vec<Position> {
    crate::kernel::subterm_positions(t)
        .into_iter()
        .filter(|(_, s)| beta_root(s).is_some())
        .map(|(p, _)| p)
        .collect()
}

/// The term with the subterm at `p` replaced by the contractum of a root rule
/// step, together with the θ used; `None` if no rule applies there.
pub fn r_step_at(t: &Term, p: &Position, theory: &Theory) -> Option<(Term, usize, MatchSubstitution)> {
    let sub = t.subterm(p)?;
    let Term::Const(head) = sub.spine().0 else {
        return None;
    };
    for &i in theory.rules_for_head(head) {
        let rule = &theory.rules()[i];
        if let Some(theta) = match_pattern(rule, sub) {
            let contractum = rule.rhs.subst_free_many(&theta);
            return Some((t.replace_at(&p.0, contractum), i, theta));
        }
    }
    None
}
