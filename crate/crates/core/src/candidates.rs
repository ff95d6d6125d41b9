//! Bounded strong-normalization checks and reducibility candidates.
//!
//! Candidates are infinite sets of terms, so only membership is decided
//! here, and only approximately: the quantifier over the members of a
//! candidate is replaced by a finite list of probe terms.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::kernel::{Position, Term, Theory};
use crate::reduction::{beta_redex_positions, one_step_reducts, one_step_reducts_traced, r_step_at, Fuel, Mode, StepKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnVerdict {
    /// The reduction tree is finite; the payload is its height.
    StronglyNormalizing(u64),
    /// The budget ran out, or a reduction cycle was found.
    FuelExhausted,
}

impl SnVerdict {
    pub fn is_sn(&self) -> bool {
        matches!(self, SnVerdict::StronglyNormalizing(_))
    }
}

struct Frame {
    term: Term,
    children: Vec<Term>,
    next: usize,
    best: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Budget,
    /// A term reduces to itself: not strongly normalizing.
    Cycle,
}

/// Every term reachable from `t`, with the height of its reduction tree.
fn explore(t: &Term, theory: &Theory, mode: Mode, fuel: &mut Fuel) -> Result<HashMap<Term, u64>, Stop> {
    let mut memo: HashMap<Term, u64> = HashMap::new();
    let mut on_stack: HashSet<Term> = HashSet::new();
    if !fuel.tick() {
        return Err(Stop::Budget);
    }
    let mut stack = vec![Frame { children: one_step_reducts(t, theory, mode), term: t.clone(), next: 0, best: 0 }];
    on_stack.insert(t.clone());
    while let Some(top) = stack.last_mut() {
        if top.next < top.children.len() {
            let c = top.children[top.next].clone();
            top.next += 1;
            if let Some(&h) = memo.get(&c) {
                top.best = top.best.max(h + 1);
                continue;
            }
            if on_stack.contains(&c) {
                return Err(Stop::Cycle);
            }
            if !fuel.tick() {
                return Err(Stop::Budget);
            }
            on_stack.insert(c.clone());
            stack.push(Frame { children: one_step_reducts(&c, theory, mode), term: c, next: 0, best: 0 });
        } else {
            let done = stack.pop().unwrap();
            on_stack.remove(&done.term);
            if let Some(parent) = stack.last_mut() {
                parent.best = parent.best.max(done.best + 1);
            }
            memo.insert(done.term, done.best);
        }
    }
    Ok(memo)
}

/// Strong β-normalization by exhaustive search of the reduction tree.
pub fn sn_check(t: &Term, fuel: &mut Fuel) -> SnVerdict {
    sn_check_in(t, &Theory::default(), Mode::Beta, fuel)
}

/// [`sn_check`] for β or βR reduction in a theory.
pub fn sn_check_in(t: &Term, theory: &Theory, mode: Mode, fuel: &mut Fuel) -> SnVerdict {
    match sn_search(t, theory, mode, fuel) {
        SnSearch::Normalizing(h) => SnVerdict::StronglyNormalizing(h),
        SnSearch::Cycle | SnSearch::OutOfFuel => SnVerdict::FuelExhausted,
    }
}

/// Like [`SnVerdict`], but keeps a found reduction cycle apart from an
/// exhausted budget: a cycle is a definite counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnSearch {
    Normalizing(u64),
    Cycle,
    OutOfFuel,
}

pub fn sn_search(t: &Term, theory: &Theory, mode: Mode, fuel: &mut Fuel) -> SnSearch {
    match explore(t, theory, mode, fuel) {
        Ok(memo) => SnSearch::Normalizing(memo[t]),
        Err(Stop::Cycle) => SnSearch::Cycle,
        Err(Stop::Budget) => SnSearch::OutOfFuel,
    }
}

/// A candidate built from `T̃`, `Π̃` and finite non-empty intersections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CandidateExpr {
    /// All strongly normalizing terms.
    TTop,
    /// `Π̃(C, S)`
    PiC(Box<CandidateExpr>, Vec<CandidateExpr>),
    Intersect(Vec<CandidateExpr>),
}

impl CandidateExpr {
    pub fn pi(dom: CandidateExpr, cods: Vec<CandidateExpr>) -> Self {
        CandidateExpr::PiC(Box::new(dom), cods)
    }

    /// `None` for the empty intersection.
    pub fn intersect(parts: Vec<CandidateExpr>) -> Option<Self> {
        (!parts.is_empty()).then_some(CandidateExpr::Intersect(parts))
    }

    pub fn depth(&self) -> usize {
        match self {
            CandidateExpr::TTop => 1,
            CandidateExpr::PiC(c, s) => 1 + s.iter().chain(std::iter::once(c.as_ref())).map(CandidateExpr::depth).max().unwrap_or(0),
            CandidateExpr::Intersect(s) => 1 + s.iter().map(CandidateExpr::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for CandidateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &[CandidateExpr]| s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            CandidateExpr::TTop => f.write_str("T"),
            CandidateExpr::PiC(c, s) => write!(f, "Pi({c}, {{{}}})", list(s)),
            CandidateExpr::Intersect(s) => write!(f, "Inter{{{}}}", list(s)),
        }
    }
}

/// Every candidate of depth at most `depth`, with domain sets and
/// intersections of one or two members.
pub fn enumerate_candidates(depth: usize) -> Vec<CandidateExpr> {
    let mut all = Vec::new();
    if depth == 0 {
        return all;
    }
    all.push(CandidateExpr::TTop);
    for _ in 1..depth {
        let prev = all.clone();
        let mut sets: Vec<Vec<CandidateExpr>> = prev.iter().map(|c| vec![c.clone()]).collect();
        for i in 0..prev.len() {
            for j in i + 1..prev.len() {
                sets.push(vec![prev[i].clone(), prev[j].clone()]);
            }
        }
        let mut next = vec![CandidateExpr::TTop];
        for c in &prev {
            for s in &sets {
                next.push(CandidateExpr::pi(c.clone(), s.clone()));
            }
        }
        for s in &sets {
            next.push(CandidateExpr::Intersect(s.clone()));
        }
        all = next;
    }
    all
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl Membership {
    fn and(self, other: Membership) -> Membership {
        match (self, other) {
            (Membership::No, _) | (_, Membership::No) => Membership::No,
            (Membership::Unknown, _) | (_, Membership::Unknown) => Membership::Unknown,
            _ => Membership::Yes,
        }
    }
}

/// Default probes: fresh variables, an application of two of them, and
/// two closed abstractions.
pub fn default_probes() -> Vec<Term> {
    let a = Term::free("A");
    vec![
        Term::free("p0"),
        Term::free("p1"),
        Term::app(Term::free("p0"), Term::free("p1")),
        Term::lam("x", a.clone(), Term::free("x")),
        Term::lam("x", a.clone(), Term::lam("y", a, Term::free("x"))),
    ]
}

/// Membership oracle. `fuel` is the budget for each reduction-tree search.
pub struct CandidateOracle {
    pub fuel: u64,
    pub probes: Vec<Term>,
    theory: Theory,
}

impl CandidateOracle {
    pub fn new(fuel: u64, probes: Vec<Term>) -> Self {
        CandidateOracle { fuel, probes, theory: Theory::default() }
    }

    fn tree(&self, t: &Term) -> Result<HashMap<Term, u64>, Membership> {
        explore(t, &self.theory, Mode::Beta, &mut Fuel::new(self.fuel)).map_err(|s| match s {
            Stop::Budget => Membership::Unknown,
            Stop::Cycle => Membership::No,
        })
    }

    pub fn sn(&self, t: &Term) -> SnVerdict {
        sn_check(t, &mut Fuel::new(self.fuel))
    }

    /// `No` only when a reduction cycle proves `t` is not strongly
    /// normalizing; every candidate is a set of such terms.
    pub fn member(&self, t: &Term, c: &CandidateExpr) -> Membership {
        match c {
            CandidateExpr::TTop => match self.tree(t) {
                Ok(_) => Membership::Yes,
                Err(m) => m,
            },
            CandidateExpr::Intersect(parts) => parts.iter().fold(Membership::Yes, |acc, p| {
                if acc == Membership::No {
                    acc
                } else {
                    acc.and(self.member(t, p))
                }
            }),
            CandidateExpr::PiC(dom, cods) => {
                let tree = match self.tree(t) {
                    Ok(tree) => tree,
                    Err(m) => return m,
                };
                let mut acc = Membership::Yes;
                let mut lams: Vec<&Term> = tree.keys().filter(|u| matches!(u, Term::Lam(..))).collect();
                lams.sort_by_key(|u| u.to_string());
                for lam in lams {
                    let Term::Lam(_, _, body) = lam else { unreachable!() };
                    for p in &self.probes {
                        match self.member(p, dom) {
                            Membership::Yes => {}
                            Membership::No => continue,
                            Membership::Unknown => {
                                acc = acc.and(Membership::Unknown);
                                continue;
                            }
                        }
                        let inst = body.instantiate(p);
                        for d in cods {
                            acc = acc.and(self.member(&inst, d));
                            if acc == Membership::No {
                                return acc;
                            }
                        }
                    }
                }
                acc
            }
        }
    }
}

/// `in_candidate` with a fresh oracle.
pub fn in_candidate(t: &Term, c: &CandidateExpr, fuel: u64, probes: &[Term]) -> Membership {
    CandidateOracle::new(fuel, probes.to_vec()).member(t, c)
}

/// Outcome of one lemma instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaOutcome {
    Holds,
    /// The precondition is not established.
    Vacuous,
    /// Some sub-check ran out of fuel.
    Unknown,
    Fails(String),
}

/// A variable not occurring in the probes belongs to `c`.
pub fn check_variables_lemma(c: &CandidateExpr, oracle: &CandidateOracle) -> LemmaOutcome {
    match oracle.member(&Term::free("v_fresh"), c) {
        Membership::Yes => LemmaOutcome::Holds,
        Membership::Unknown => LemmaOutcome::Unknown,
        Membership::No => LemmaOutcome::Fails(format!("variable not in {c}")),
    }
}

/// Members of `c` stay in `c` after one β-step.
pub fn check_closure_lemma(t: &Term, c: &CandidateExpr, oracle: &CandidateOracle) -> LemmaOutcome {
    match oracle.member(t, c) {
        Membership::Yes => {}
        Membership::Unknown => return LemmaOutcome::Unknown,
        Membership::No => return LemmaOutcome::Vacuous,
    }
    let mut out = LemmaOutcome::Holds;
    for u in one_step_reducts(t, &Theory::default(), Mode::Beta) {
        match oracle.member(&u, c) {
            Membership::Yes => {}
            Membership::Unknown => out = LemmaOutcome::Unknown,
            Membership::No => return LemmaOutcome::Fails(format!("{t} is in {c} but its reduct {u} is not")),
        }
    }
    out
}

/// `t1 ∈ Π̃(C, S)` and `t2 ∈ C` give `(t1 t2) ∈ D` for every `D ∈ S`.
pub fn check_application_lemma(t1: &Term, t2: &Term, dom: &CandidateExpr, cods: &[CandidateExpr], oracle: &CandidateOracle) -> LemmaOutcome {
    let pi = CandidateExpr::pi(dom.clone(), cods.to_vec());
    match oracle.member(t1, &pi).and(oracle.member(t2, dom)) {
        Membership::Yes => {}
        Membership::Unknown => return LemmaOutcome::Unknown,
        Membership::No => return LemmaOutcome::Vacuous,
    }
    let app = Term::app(t1.clone(), t2.clone());
    let mut out = LemmaOutcome::Holds;
    for d in cods {
        match oracle.member(&app, d) {
            Membership::Yes => {}
            Membership::Unknown => out = LemmaOutcome::Unknown,
            Membership::No => return LemmaOutcome::Fails(format!("({t1}) ({t2}) is not in {d}")),
        }
    }
    out
}

/// Number of `imp` and `all[A]` occurrences.
pub fn stt_measure(t: &Term, theory: &Theory) -> usize {
    match t {
        Term::Const(c) => {
            let is_all = theory.instance(c).is_some_and(|i| &*i.family == "all");
            usize::from(&**c == "imp" || is_all)
        }
        Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => stt_measure(a, theory) + stt_measure(b, theory),
        _ => 0,
    }
}

/// β-redexes created by a rule step at `p`: redexes of the contractum whose
/// application node comes from the right-hand side, plus a redex formed
/// with the parent when the contractum is an abstraction. Each is reported
/// by its position and argument.
pub fn created_beta_redices(t: &Term, p: &Position, theory: &Theory) -> Vec<(Position, Term)> {
    let Some((u, idx, theta)) = r_step_at(t, p, theory) else {
        return Vec::new();
    };
    let rule = &theory.rules()[idx];
    let mut out = Vec::new();
    for (q, node) in crate::kernel::subterm_positions(&rule.rhs) {
        let Term::App(f, _) = &node else { continue };
        let Term::Free(x) = f.as_ref() else { continue };
        if !matches!(theta.get(x), Some(Term::Lam(..))) {
            continue;
        }
        let mut pos = p.0.clone();
        pos.extend(&q.0);
        let pos = Position(pos);
        if let Some(Term::App(_, arg)) = u.subterm(&pos) {
            out.push((pos, (**arg).clone()));
        }
    }
    if let (Some((&last, parent)), Some(Term::Lam(..))) = (p.0.split_last(), u.subterm(p)) {
        let parent = Position(parent.to_vec());
        if last == 0 {
            if let Some(Term::App(_, arg)) = u.subterm(&parent) {
                out.push((parent, (**arg).clone()));
            }
        }
    }
    out
}

/// Every β-redex created by an R-step from `t` has a variable argument.
pub fn created_beta_redices_are_trivial(t: &Term, theory: &Theory) -> bool {
    one_step_reducts_traced(t, theory, Mode::BetaR)
        .iter()
        .filter(|s| matches!(s.kind, StepKind::Rule(_)))
        .all(|s| created_beta_redices(t, &s.position, theory).iter().all(|(_, arg)| matches!(arg, Term::Bound(_) | Term::Free(_))))
}

/// Positions of β-redexes in `u` that are not β-redexes at the same
/// position of `t`. Coarser than [`created_beta_redices`]: redexes that
/// moved also show up.
pub fn new_redex_positions(t: &Term, u: &Term) -> Vec<Position> {
    let before: HashSet<Position> = beta_redex_positions(t).into_iter().collect();
    beta_redex_positions(u).into_iter().filter(|q| !before.contains(q) || t.subterm(q) != u.subterm(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn omega() -> Term {
        p("(\\x : A. x x) (\\x : A. x x)")
    }

    #[test]
    fn sn_examples() {
        assert_eq!(sn_check(&p("x"), &mut Fuel::new(10)), SnVerdict::StronglyNormalizing(0));
        assert_eq!(sn_check(&p("(\\x : A. x) y"), &mut Fuel::new(10)), SnVerdict::StronglyNormalizing(1));
        assert_eq!(sn_check(&omega(), &mut Fuel::new(1000)), SnVerdict::FuelExhausted);
        // two redexes: longest path has length 2
        assert_eq!(sn_check(&p("(\\x : A. x) ((\\y : A. y) z)"), &mut Fuel::new(100)), SnVerdict::StronglyNormalizing(2));
        // duplicating redex: (\x. f x x) ((\y. y) z) has a 3-step path
        assert_eq!(sn_check(&p("(\\x : A. f x x) ((\\y : A. y) z)"), &mut Fuel::new(100)), SnVerdict::StronglyNormalizing(3));
        assert_eq!(sn_check(&p("(\\x : A. x) y"), &mut Fuel::new(1)), SnVerdict::FuelExhausted);
    }

    #[test]
    fn sn_under_rules() {
        let th = Theory::stt();
        let t = th.resolve(&p("eps (imp a (imp a b))"));
        assert_eq!(sn_check_in(&t, &th, Mode::BetaR, &mut Fuel::new(100)), SnVerdict::StronglyNormalizing(2));
        assert_eq!(sn_check_in(&t, &th, Mode::Beta, &mut Fuel::new(100)), SnVerdict::StronglyNormalizing(0));
    }

    #[test]
    fn candidate_enumeration() {
        assert_eq!(enumerate_candidates(1), vec![CandidateExpr::TTop]);
        assert_eq!(enumerate_candidates(2).len(), 3);
        let three = enumerate_candidates(3);
        assert_eq!(three.len(), 1 + 3 * 6 + 6);
        assert!(three.iter().all(|c| c.depth() <= 3));
        assert!(CandidateExpr::intersect(vec![]).is_none());
    }

    #[test]
    fn membership_examples() {
        let probes = default_probes();
        let top = CandidateExpr::TTop;
        let arrow = CandidateExpr::pi(top.clone(), vec![top.clone()]);
        assert_eq!(in_candidate(&p("x"), &top, 100, &probes), Membership::Yes);
        assert_eq!(in_candidate(&p("\\x : A. x"), &arrow, 100, &probes), Membership::Yes);
        // Ω reduces to itself
        assert_eq!(in_candidate(&omega(), &top, 50, &probes), Membership::No);
        assert_eq!(in_candidate(&p("(\\x : A. x) ((\\y : A. y) z)"), &top, 2, &probes), Membership::Unknown);
        // with λx. x x itself as a probe the instance is Ω
        let delta = p("\\x : A. x x");
        let probes2 = vec![delta.clone()];
        assert_eq!(in_candidate(&delta, &arrow, 50, &probes2), Membership::No);
        assert_eq!(in_candidate(&delta, &arrow, 50, &probes), Membership::Yes);
        let both = CandidateExpr::Intersect(vec![top.clone(), arrow.clone()]);
        assert_eq!(in_candidate(&p("\\x : A. x"), &both, 100, &probes), Membership::Yes);
    }

    #[test]
    fn lemma_examples() {
        let oracle = CandidateOracle::new(200, default_probes());
        let top = CandidateExpr::TTop;
        let arrow = CandidateExpr::pi(top.clone(), vec![top.clone()]);
        for c in enumerate_candidates(3) {
            assert_eq!(check_variables_lemma(&c, &oracle), LemmaOutcome::Holds, "{c}");
        }
        assert_eq!(check_closure_lemma(&p("(\\x : A. x) y"), &top, &oracle), LemmaOutcome::Holds);
        assert_eq!(check_closure_lemma(&p("\\z : A. (\\x : A. x) z"), &arrow, &oracle), LemmaOutcome::Holds);
        assert_eq!(check_closure_lemma(&p("y"), &top, &oracle), LemmaOutcome::Holds);
        assert_eq!(check_application_lemma(&p("\\x : A. x"), &p("y"), &top, std::slice::from_ref(&top), &oracle), LemmaOutcome::Holds);
        assert_eq!(check_application_lemma(&p("f"), &p("y"), &top, std::slice::from_ref(&top), &oracle), LemmaOutcome::Holds);
        let small = CandidateOracle::new(3, default_probes());
        assert_eq!(check_application_lemma(&omega(), &p("y"), &top, std::slice::from_ref(&top), &small), LemmaOutcome::Vacuous);
        let long = p("(\\x : A. x) ((\\x : A. x) ((\\x : A. x) y))");
        assert_eq!(check_application_lemma(&long, &p("y"), &top, std::slice::from_ref(&top), &small), LemmaOutcome::Unknown);
    }

    #[test]
    fn measure_examples() {
        let th = Theory::stt();
        let t = th.resolve(&p("eps (imp a b)"));
        assert_eq!(stt_measure(&t, &th), 1);
        let (u, _) = crate::reduction::r_root(&t, &th).unwrap();
        assert_eq!(stt_measure(&u, &th), 0);
        let t = th.resolve(&p("all[o] (\\x : o. imp x (all[iota] (\\y : iota. x)))"));
        assert_eq!(stt_measure(&t, &th), 3);
    }

    #[test]
    fn created_redices() {
        let th = Theory::stt();
        let t = th.resolve(&p("eps (all[iota] (\\y : iota. c))"));
        let created = created_beta_redices(&t, &Position::root(), &th);
        assert_eq!(created.len(), 1);
        assert_eq!(created[0].0, Position(vec![1, 1]));
        assert_eq!(created[0].1, Term::Bound(0));
        assert!(created_beta_redices_are_trivial(&t, &th));
        let t = th.resolve(&p("eps (imp a b)"));
        assert!(created_beta_redices(&t, &Position::root(), &th).is_empty());
        let cc = Theory::cc();
        let t = cc.resolve(&p("eps_Kind (dPi_KKK dType (\\x : eps_Kind dType. dType))"));
        assert!(created_beta_redices_are_trivial(&t, &cc));
        assert_eq!(created_beta_redices(&t, &Position::root(), &cc).len(), 1);
    }
}
