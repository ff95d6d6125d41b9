//! The model of the Calculus of Constructions over a full Π-algebra.
//!
//! Three layers: the syntactic family `N_t`, the set-valued family `M_t`
//! (which depends on a valuation ψ onto `N`), and the interpretation.
//! A variable carries both its ψ-value and its φ-value ([`Binding`]), so a
//! λ whose body's sets depend on the parameter is kept as a closure and
//! applied to the argument's pair of values.
//!
//! The universe `E` is never materialized. Functions out of `E` are
//! closures or [`Builtin`]s and are compared on a fixed set of probe sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    apply_table, carrier_identity, enumerate_set, mask_of, tabulate, Binding, Builtin, Closure, ElemValue, Level, ModelError, ModelResult, SetValue,
    DEFAULT_CAP,
};
use crate::algebra::FiniteAlgebra;
use crate::kernel::{substitute, Context, Name, Term, Theory};

/// Bindings for the free variables of a term plus a stack for the
/// bound ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Env {
    names: Arc<BTreeMap<Name, Binding>>,
    stack: Vec<Binding>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn insert(&mut self, x: Name, b: Binding) {
        Arc::make_mut(&mut self.names).insert(x, b);
    }

    pub fn get(&self, x: &str) -> Option<&Binding> {
        self.names.get(x)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Name, &Binding)> {
        self.names.iter()
    }

    fn push(&mut self, b: Binding) {
        self.stack.push(b);
    }

    fn pop(&mut self) {
        self.stack.pop();
    }

    fn lookup(&self, t: &Term) -> ModelResult<&Binding> {
        match t {
            Term::Bound(i) => self
                .stack
                .len()
                .checked_sub(1 + *i as usize)
                .map(|k| &self.stack[k])
                .ok_or_else(|| ModelError::Unsupported(format!("loose index {i}"))),
            Term::Free(x) => self.names.get(x).ok_or_else(|| ModelError::Unsupported(format!("no value for `{x}`"))),
            _ => unreachable!("lookup on a non-variable"),
        }
    }

    pub fn contains_opaque(&self) -> bool {
        self.names.values().chain(self.stack.iter()).any(|b| b.m.contains_opaque() || b.v.contains_opaque())
    }
}

impl std::fmt::Display for Env {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.names.iter().map(|(x, b)| format!("{x} = ({}, {})", b.m, b.v)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The syntactic family `N_t`.
pub fn domain_n(t: &Term) -> SetValue {
    match t {
        Term::Kind | Term::Type => SetValue::Universe,
        Term::Const(c) if &**c == "U_Kind" => SetValue::Universe,
        Term::Pi(_, a, b) => SetValue::fun_space(domain_n(a), domain_n(b)),
        Term::Lam(_, _, b) => domain_n(b),
        Term::App(f, _) => domain_n(f),
        Term::Const(_) | Term::Free(_) | Term::Bound(_) => SetValue::Singleton,
    }
}

/// `N_t = {e}` for terms without `Kind`, `Type`, `U_Kind`.
pub fn check_lemma1_cc(t: &Term) -> bool {
    domain_n(t) == SetValue::Singleton
}

/// Candidate ψ-values for a variable with `N`-domain `n`, the default first.
pub fn psi_choices(n: &SetValue) -> Vec<ElemValue> {
    match n {
        SetValue::Singleton => vec![ElemValue::E],
        SetValue::Universe => vec![
            ElemValue::Set(SetValue::Carrier),
            ElemValue::Set(SetValue::Singleton),
            ElemValue::Set(SetValue::fun_space(SetValue::Carrier, SetValue::Carrier)),
        ],
        SetValue::FunSpace(a, b) => {
            let outs = psi_choices(b);
            if **a == SetValue::Singleton {
                outs.into_iter().map(|o| ElemValue::Table(SetValue::Singleton, Arc::new(vec![o]))).collect()
            } else {
                outs.into_iter().map(|o| ElemValue::Builtin(Builtin::Constant, vec![o])).collect()
            }
        }
        // only reachable for malformed N-domains
        SetValue::Carrier => vec![ElemValue::Alg(0)],
    }
}

/// Default ψ-value: `e`, `B`, or a constant function.
pub fn default_psi(n: &SetValue) -> ElemValue {
    psi_choices(n).swap_remove(0)
}

/// Outcome of a three-layer comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub n: bool,
    pub m: bool,
    pub interp: bool,
}

impl Agreement {
    pub fn all(&self) -> bool {
        self.n && self.m && self.interp
    }
}

pub struct CcModel<'a> {
    alg: &'a FiniteAlgebra,
    cap: u128,
}

const PROBE_DEPTH: u32 = 4;

impl<'a> CcModel<'a> {
    pub fn new(alg: &'a FiniteAlgebra) -> Self {
        CcModel { alg, cap: DEFAULT_CAP }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.alg
    }

    fn top(&self) -> ElemValue {
        ElemValue::Alg(self.alg.top())
    }

    /// `M_{t,ψ}`
    pub fn domain_m(&self, t: &Term, env: &Env) -> ModelResult<ElemValue> {
        let r = self.m_eval(t, &mut env.clone());
        settle(r)
    }

    /// `⟦t⟧_φ`
    pub fn interp(&self, t: &Term, env: &Env) -> ModelResult<ElemValue> {
        let r = self.i_eval(t, &mut env.clone());
        settle(r)
    }

    fn m_constant(&self, c: &str) -> ModelResult<ElemValue> {
        Ok(match c {
            "U_Type" | "U_Kind" | "dType" => ElemValue::Set(SetValue::Carrier),
            "eps_Kind" => ElemValue::Builtin(Builtin::IdUniverse, Vec::new()),
            "eps_Type" => ElemValue::Table(SetValue::Singleton, Arc::new(vec![ElemValue::Set(SetValue::Singleton)])),
            "dPi_TTT" | "dPi_KTT" => ElemValue::E,
            "dPi_TKK" => ElemValue::Builtin(Builtin::SetPiTypeKind, Vec::new()),
            "dPi_KKK" => ElemValue::Builtin(Builtin::SetPiKindKind, Vec::new()),
            _ => return Err(ModelError::Unsupported(format!("no interpretation for constant `{c}`"))),
        })
    }

    fn m_eval(&self, t: &Term, env: &mut Env) -> ModelResult<ElemValue> {
        match t {
            Term::Kind | Term::Type => Ok(ElemValue::Set(SetValue::Carrier)),
            Term::Const(c) => self.m_constant(c),
            Term::Bound(_) | Term::Free(_) => Ok(env.lookup(t)?.m.clone()),
            Term::Lam(_, c, body) => {
                if domain_n(c) == SetValue::Singleton {
                    env.push(Binding { m: ElemValue::E, v: ElemValue::Opaque });
                    let r = self.m_eval(body, env);
                    env.pop();
                    return match r? {
                        ElemValue::E => Ok(ElemValue::E),
                        v => Ok(ElemValue::Table(SetValue::Singleton, Arc::new(vec![v]))),
                    };
                }
                env.push(Binding { m: ElemValue::Opaque, v: ElemValue::Opaque });
                let r = self.m_eval(body, env);
                env.pop();
                match r {
                    Ok(ElemValue::E) => Ok(ElemValue::E),
                    Ok(v) if !v.contains_opaque() => Ok(ElemValue::Builtin(Builtin::Constant, vec![v])),
                    Ok(_) | Err(ModelError::Dependent) => Ok(self.closure(Level::Set, c, body, env)),
                    Err(e) => Err(e),
                }
            }
            Term::App(f, a) => {
                let fv = self.m_eval(f, env)?;
                if fv == ElemValue::E {
                    return Ok(ElemValue::E);
                }
                let av = self.m_eval(a, env)?;
                self.apply(&fv, &av)
            }
            Term::Pi(_, c, d) => {
                let mc = self.m_eval(c, env)?.as_set()?;
                let union = if domain_n(c) == SetValue::Singleton {
                    env.push(Binding { m: ElemValue::E, v: ElemValue::Opaque });
                    let r = self.m_eval(d, env);
                    env.pop();
                    r?
                } else {
                    env.push(Binding { m: ElemValue::Opaque, v: ElemValue::Opaque });
                    let r = self.m_eval(d, env);
                    env.pop();
                    match r {
                        Ok(v) if !v.contains_opaque() => v,
                        Ok(_) | Err(ModelError::Dependent) => {
                            return Err(ModelError::UnenumerableUnion(format!("codomain of a product over {}", domain_n(c))));
                        }
                        Err(e) => return Err(e),
                    }
                };
                Ok(ElemValue::Set(SetValue::fun_space(mc, union.as_set()?)))
            }
        }
    }

    fn closure(&self, level: Level, c: &Term, body: &Term, env: &Env) -> ElemValue {
        ElemValue::Closure(Arc::new(Closure { level, domain: c.clone(), body: body.clone(), env: env.clone() }))
    }

    fn i_eval(&self, t: &Term, env: &mut Env) -> ModelResult<ElemValue> {
        match t {
            Term::Kind | Term::Type => Ok(self.top()),
            Term::Const(c) => match &**c {
                "U_Type" | "U_Kind" | "dType" => Ok(self.top()),
                "eps_Type" | "eps_Kind" => Ok(carrier_identity(self.alg)),
                "dPi_TTT" | "dPi_TKK" | "dPi_KTT" | "dPi_KKK" => Ok(ElemValue::Builtin(Builtin::AlgPi, Vec::new())),
                _ => Err(ModelError::Unsupported(format!("no interpretation for constant `{c}`"))),
            },
            Term::Bound(_) | Term::Free(_) => Ok(env.lookup(t)?.v.clone()),
            Term::Lam(_, c, body) => {
                if domain_n(c) == SetValue::Singleton {
                    let mc = self.m_eval(c, env)?.as_set()?;
                    return tabulate(&mc, self.alg, self.cap, |x| {
                        env.push(Binding { m: ElemValue::E, v: x });
                        let r = self.i_eval(body, env);
                        env.pop();
                        r
                    });
                }
                let mc = match self.m_eval(c, env).and_then(|m| m.as_set()) {
                    Ok(mc) => mc,
                    Err(ModelError::Dependent) => return Err(ModelError::Dependent),
                    Err(_) => return Ok(self.closure(Level::Interp, c, body, env)),
                };
                let r = tabulate(&mc, self.alg, self.cap, |x| {
                    env.push(Binding { m: ElemValue::Opaque, v: x });
                    let r = self.i_eval(body, env);
                    env.pop();
                    r
                });
                match r {
                    Ok(v) if !v.contains_opaque() => Ok(v),
                    Ok(_) | Err(ModelError::Dependent) => Ok(self.closure(Level::Interp, c, body, env)),
                    Err(e) => Err(e),
                }
            }
            Term::App(f, a) => {
                let fv = self.i_eval(f, env)?;
                match fv {
                    ElemValue::E => Ok(ElemValue::E),
                    ElemValue::Closure(ref cl) if cl.level == Level::Interp => {
                        let m = self.m_eval(a, env)?;
                        let v = self.i_eval(a, env)?;
                        self.enter(cl, Binding { m, v })
                    }
                    _ => {
                        let av = self.i_eval(a, env)?;
                        self.apply(&fv, &av)
                    }
                }
            }
            Term::Pi(_, c, d) => {
                let w = self.i_eval(c, env)?.as_alg()?;
                let mc = self.m_eval(c, env)?.as_set()?;
                let m = default_psi(&domain_n(c));
                let mut vals = Vec::new();
                for x in enumerate_set(&mc, self.alg, self.cap)? {
                    env.push(Binding { m: m.clone(), v: x });
                    let r = self.i_eval(d, env);
                    env.pop();
                    vals.push(r?);
                }
                Ok(ElemValue::Alg(self.alg.pi(w, mask_of(&vals)?)))
            }
        }
    }

    fn enter(&self, cl: &Closure, b: Binding) -> ModelResult<ElemValue> {
        let mut env = cl.env.clone();
        env.push(b);
        match cl.level {
            Level::Set => self.m_eval(&cl.body, &mut env),
            Level::Interp => self.i_eval(&cl.body, &mut env),
        }
    }

    /// Application of a value that is not an interpretation closure.
    pub fn apply(&self, f: &ElemValue, arg: &ElemValue) -> ModelResult<ElemValue> {
        match f {
            ElemValue::Builtin(b, args) => {
                let mut args = args.clone();
                args.push(arg.clone());
                if args.len() < b.arity() {
                    return Ok(ElemValue::Builtin(*b, args));
                }
                self.saturate(*b, &args)
            }
            ElemValue::Closure(cl) if cl.level == Level::Set => self.enter(cl, Binding { m: arg.clone(), v: ElemValue::Opaque }),
            ElemValue::Closure(_) => Err(ModelError::NotAFunction("interpretation closure applied to a bare value".into())),
            _ => apply_table(f, arg, self.alg),
        }
    }

    fn saturate(&self, b: Builtin, args: &[ElemValue]) -> ModelResult<ElemValue> {
        match b {
            Builtin::IdUniverse => Ok(args[0].clone()),
            Builtin::Constant => Ok(args[0].clone()),
            Builtin::SetPiTypeKind => {
                let he = self.apply(&args[1], &ElemValue::E)?.as_set()?;
                Ok(ElemValue::Set(SetValue::fun_space(SetValue::Singleton, he)))
            }
            Builtin::SetPiKindKind => {
                let a = args[0].as_set()?;
                let he = self.apply(&args[1], &ElemValue::E)?.as_set()?;
                Ok(ElemValue::Set(SetValue::fun_space(a, he)))
            }
            Builtin::AlgPi => {
                let w = args[0].as_alg()?;
                match &args[1] {
                    ElemValue::Table(_, outs) => Ok(ElemValue::Alg(self.alg.pi(w, mask_of(outs.iter())?))),
                    ElemValue::Opaque => Err(ModelError::Dependent),
                    v => Err(ModelError::Unsupported(format!("product family {v}"))),
                }
            }
        }
    }

    /// Arguments on which two functions are compared, for a function that
    /// is not a table.
    fn probes(&self, f: &ElemValue) -> ModelResult<Option<Vec<Binding>>> {
        let bare = |ms: Vec<ElemValue>| ms.into_iter().map(|m| Binding { m: m.clone(), v: m }).collect();
        Ok(match f {
            ElemValue::Closure(cl) => {
                let n = domain_n(&cl.domain);
                match cl.level {
                    Level::Set => Some(bare(psi_choices(&n))),
                    Level::Interp => {
                        let mut out = Vec::new();
                        let mc = self.m_eval(&cl.domain, &mut cl.env.clone())?.as_set()?;
                        let elems = enumerate_set(&mc, self.alg, self.cap)?;
                        for m in psi_choices(&n) {
                            for v in &elems {
                                out.push(Binding { m: m.clone(), v: v.clone() });
                            }
                        }
                        Some(out)
                    }
                }
            }
            ElemValue::Builtin(b, args) => match (b, args.len()) {
                (Builtin::IdUniverse | Builtin::SetPiKindKind, 0) => Some(bare(psi_choices(&SetValue::Universe))),
                (Builtin::SetPiTypeKind, 0) => Some(bare(vec![ElemValue::E])),
                (Builtin::SetPiTypeKind | Builtin::SetPiKindKind, 1) => {
                    Some(bare(psi_choices(&SetValue::fun_space(SetValue::Singleton, SetValue::Universe))))
                }
                (Builtin::AlgPi, 0) => Some(bare((0..self.alg.n() as u32).map(ElemValue::Alg).collect())),
                _ => None,
            },
            _ => None,
        })
    }

    fn apply_probe(&self, f: &ElemValue, b: &Binding, level: Level) -> ModelResult<ElemValue> {
        match (f, level) {
            (ElemValue::Closure(cl), _) if cl.level == Level::Interp => self.enter(cl, b.clone()),
            (_, Level::Set) => self.apply(f, &b.m),
            (_, Level::Interp) => self.apply(f, &b.v),
        }
    }

    /// Equality of values; tables and sets structurally, other functions
    /// pointwise on probe arguments.
    pub fn sem_eq(&self, a: &ElemValue, b: &ElemValue, level: Level) -> ModelResult<bool> {
        self.sem_eq_at(a, b, level, PROBE_DEPTH)
    }

    fn sem_eq_at(&self, a: &ElemValue, b: &ElemValue, level: Level, depth: u32) -> ModelResult<bool> {
        use ElemValue::*;
        match (a, b) {
            (Table(d1, o1), Table(d2, o2)) => {
                if d1 != d2 || o1.len() != o2.len() {
                    return Ok(false);
                }
                for (x, y) in o1.iter().zip(o2.iter()) {
                    if !self.sem_eq_at(x, y, level, depth)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Builtin(b1, a1), Builtin(b2, a2)) if b1 == b2 && a1.len() == a2.len() => {
                for (x, y) in a1.iter().zip(a2.iter()) {
                    if !self.sem_eq_at(x, y, level, depth)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Closure(_) | Builtin(..), _) | (_, Closure(_) | Builtin(..)) if depth > 0 => {
                let probes = match self.probes(a)? {
                    Some(p) => p,
                    None => match self.probes(b)? {
                        Some(p) => p,
                        None => return Ok(a == b),
                    },
                };
                for p in &probes {
                    let ra = self.apply_probe(a, p, level)?;
                    let rb = self.apply_probe(b, p, level)?;
                    if !self.sem_eq_at(&ra, &rb, level, depth - 1)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(a == b),
        }
    }

    /// `N_t = N_u`, `M_{t,ψ} = M_{u,ψ}` and `⟦t⟧ = ⟦u⟧`.
    pub fn check_conversion(&self, t: &Term, u: &Term, env: &Env) -> ModelResult<Agreement> {
        let n = domain_n(t) == domain_n(u);
        let m = self.sem_eq(&self.domain_m(t, env)?, &self.domain_m(u, env)?, Level::Set)?;
        let interp = self.sem_eq(&self.interp(t, env)?, &self.interp(u, env)?, Level::Interp)?;
        Ok(Agreement { n, m, interp })
    }

    /// `M_{(u/x)t,ψ} = M_{t,ψ+x=M_u}` and `⟦(u/x)t⟧ = ⟦t⟧_{φ+x=⟦u⟧}`. The
    /// `n` field records `N_{(u/x)t} = N_t`, which holds when `u` avoids
    /// `Kind`, `Type`, `U_Kind`.
    pub fn check_substitution(&self, t: &Term, x: &str, u: &Term, env: &Env) -> ModelResult<Agreement> {
        let s = substitute(t, x, u);
        let mut env2 = env.clone();
        env2.insert(crate::kernel::name(x), Binding { m: self.domain_m(u, env)?, v: self.interp(u, env)? });
        let n = domain_n(&s) == domain_n(t);
        let m = self.sem_eq(&self.domain_m(&s, env)?, &self.domain_m(t, &env2)?, Level::Set)?;
        let interp = self.sem_eq(&self.interp(&s, env)?, &self.interp(t, &env2)?, Level::Interp)?;
        Ok(Agreement { n, m, interp })
    }

    /// Environments for `ctx`: every ψ-choice and every φ-value.
    pub fn valuations(&self, ctx: &Context) -> ModelResult<Vec<Env>> {
        self.valuations_with(ctx, psi_choices)
    }

    /// Environments for `ctx` with the default ψ and every φ-value.
    pub fn default_valuations(&self, ctx: &Context) -> ModelResult<Vec<Env>> {
        self.valuations_with(ctx, |n| vec![default_psi(n)])
    }

    fn valuations_with(&self, ctx: &Context, choices: impl Fn(&SetValue) -> Vec<ElemValue>) -> ModelResult<Vec<Env>> {
        let mut out = vec![Env::new()];
        for (x, a) in ctx.entries() {
            let ms = choices(&domain_n(a));
            let mut next = Vec::new();
            for env in &out {
                let set = self.domain_m(a, env)?.as_set()?;
                let elems = enumerate_set(&set, self.alg, self.cap)?;
                for m in &ms {
                    for v in &elems {
                        let mut e = env.clone();
                        e.insert(x.clone(), Binding { m: m.clone(), v: v.clone() });
                        next.push(e);
                    }
                }
                if next.len() as u128 > self.cap {
                    return Err(ModelError::SizeLimitExceeded { size: format!(">{}", next.len()), cap: self.cap });
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// A top-level result never mentions the opaque marker.
fn settle(r: ModelResult<ElemValue>) -> ModelResult<ElemValue> {
    match r {
        Err(ModelError::Dependent) => Err(ModelError::Unsupported("value depends on a variable without a value".into())),
        r => r,
    }
}

/// Free-function form of [`CcModel::check_conversion`].
pub fn check_conversion_cc(t: &Term, u: &Term, env: &Env, alg: &FiniteAlgebra) -> ModelResult<Agreement> {
    CcModel::new(alg).check_conversion(t, u, env)
}

/// Free-function form of [`CcModel::check_substitution`].
pub fn check_substitution_cc(t: &Term, x: &str, u: &Term, env: &Env, alg: &FiniteAlgebra) -> ModelResult<Agreement> {
    CcModel::new(alg).check_substitution(t, x, u, env)
}

/// The theory the model is built for.
pub fn is_cc_theory(theory: &Theory) -> bool {
    ["U_Type", "U_Kind", "dType", "eps_Type", "eps_Kind", "dPi_TTT", "dPi_TKK", "dPi_KTT", "dPi_KKK"].iter().all(|c| theory.is_constant(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_full_algebras, sweep_algebras};
    use crate::reduction::r_root;
    use crate::syntax::parse_term;

    fn term(th: &Theory, s: &str) -> Term {
        th.resolve(&parse_term(s).unwrap())
    }

    #[test]
    fn n_domains() {
        let th = Theory::cc();
        assert_eq!(domain_n(&term(&th, "U_Kind")), SetValue::Universe);
        assert_eq!(domain_n(&term(&th, "U_Type")), SetValue::Singleton);
        assert_eq!(domain_n(&term(&th, "Pi x : U_Kind. U_Kind")), SetValue::fun_space(SetValue::Universe, SetValue::Universe));
        assert_eq!(domain_n(&term(&th, "U_Kind -> U_Type")), SetValue::Singleton);
        for s in ["U_Type", "eps_Type X", "dPi_KKK dType (\\x : eps_Kind dType. dType)", "\\x : U_Type. x"] {
            assert!(check_lemma1_cc(&term(&th, s)), "{s}");
        }
    }

    #[test]
    fn m_values() {
        let th = Theory::cc();
        let alg = FiniteAlgebra::trivial();
        let m = CcModel::new(&alg);
        let env = Env::new();
        let b = ElemValue::Set(SetValue::Carrier);
        assert_eq!(m.domain_m(&term(&th, "eps_Kind dType"), &env).unwrap(), b);
        assert_eq!(m.domain_m(&term(&th, "U_Type"), &env).unwrap(), b);
        let t = term(&th, "eps_Type (dPi_TTT U U')");
        let mut env2 = Env::new();
        for x in ["U", "U'"] {
            env2.insert(crate::kernel::name(x), Binding { m: ElemValue::E, v: ElemValue::Alg(0) });
        }
        assert_eq!(m.domain_m(&t, &env2).unwrap(), ElemValue::Set(SetValue::Singleton));
        let kkk = term(&th, "eps_Kind (dPi_KKK dType (\\x : eps_Kind dType. dType))");
        assert_eq!(m.domain_m(&kkk, &env).unwrap(), ElemValue::Set(SetValue::fun_space(SetValue::Carrier, SetValue::Carrier)));
    }

    #[test]
    fn interp_values() {
        let th = Theory::cc();
        for alg in sweep_algebras() {
            let m = CcModel::new(&alg);
            let env = Env::new();
            let top = ElemValue::Alg(alg.top());
            assert_eq!(m.interp(&term(&th, "eps_Kind dType"), &env).unwrap(), top);
            assert_eq!(m.interp(&term(&th, "U_Type"), &env).unwrap(), top);
            // Kind-domain product: the image ranges over M_C
            let v = m.interp(&term(&th, "eps_Kind (dPi_KKK dType (\\x : eps_Kind dType. dType))"), &env).unwrap();
            assert_eq!(v, ElemValue::Alg(alg.pi(alg.top(), 1 << alg.top())));
            let v = m.interp(&term(&th, "Pi X : U_Kind. eps_Kind X"), &env).unwrap();
            assert_eq!(v, ElemValue::Alg(alg.pi(alg.top(), (1 << alg.n()) - 1)));
        }
    }

    fn closed_rule_instances(th: &Theory) -> Vec<Term> {
        [
            "eps_Kind dType",
            "eps_Type (dPi_TTT (dPi_TTT U_T (\\x : eps_Type U_T. U_T)) (\\x : eps_Type (dPi_TTT U_T (\\y : eps_Type U_T. U_T)). U_T))",
            "eps_Kind (dPi_TKK U_T (\\x : eps_Type U_T. dType))",
            "eps_Type (dPi_KTT dType (\\x : eps_Kind dType. dPi_TTT x (\\y : eps_Type x. x)))",
            "eps_Kind (dPi_KKK dType (\\x : eps_Kind dType. dType))",
            "eps_Kind (dPi_KKK (dPi_KKK dType (\\x : eps_Kind dType. dType)) (\\x : eps_Kind (dPi_KKK dType (\\y : eps_Kind dType. dType)). dType))",
        ]
        .iter()
        .map(|s| term(th, s))
        .collect()
    }

    #[test]
    fn rules_are_valid_on_closed_instances() {
        let th = Theory::cc();
        let ctx = Context::new().with("U_T", Term::constant("U_Type"));
        for alg in sweep_algebras() {
            let m = CcModel::new(&alg);
            for env in m.valuations(&ctx).unwrap() {
                for t in closed_rule_instances(&th) {
                    let (u, id) = r_root(&t, &th).unwrap();
                    let ag = m.check_conversion(&t, &u, &env).unwrap();
                    assert!(ag.all(), "{id}: {t} vs {u}: {ag:?}");
                }
            }
        }
    }

    #[test]
    fn beta_with_kind_argument() {
        let th = Theory::cc();
        let ctx = Context::new().with("K", Term::constant("U_Kind")).with("k", term(&th, "eps_Kind K"));
        let t = term(&th, "(\\X : U_Kind. \\y : eps_Kind X. y) K k");
        let u = Term::free("k");
        for alg in enumerate_full_algebras(2).unwrap().take(64) {
            let m = CcModel::new(&alg);
            for env in m.valuations(&ctx).unwrap() {
                assert!(m.check_conversion(&t, &u, &env).unwrap().all(), "{env}");
            }
        }
    }

    #[test]
    fn substitution_examples() {
        let th = Theory::cc();
        let ctx = Context::new().with("K", Term::constant("U_Kind")).with("J", Term::constant("U_Kind"));
        let t = term(&th, "eps_Kind (dPi_KKK K (\\x : eps_Kind K. J))");
        let u = term(&th, "dPi_KKK J (\\x : eps_Kind J. J)");
        for alg in sweep_algebras().iter().take(40) {
            let m = CcModel::new(alg);
            for env in m.valuations(&ctx).unwrap() {
                assert!(m.check_substitution(&t, "K", &u, &env).unwrap().all());
                assert!(m.check_substitution(&Term::free("K"), "K", &u, &env).unwrap().all());
                assert!(m.check_substitution(&Term::free("J"), "K", &u, &env).unwrap().all());
            }
        }
    }

    #[test]
    fn identity_on_kinds_is_a_closure() {
        let th = Theory::cc();
        let alg = FiniteAlgebra::trivial();
        let m = CcModel::new(&alg);
        let f = m.interp(&term(&th, "\\X : U_Kind. \\y : eps_Kind X. y"), &Env::new()).unwrap();
        assert!(matches!(f, ElemValue::Closure(_)));
        let g = m.interp(&term(&th, "\\Y : U_Kind. \\z : eps_Kind Y. z"), &Env::new()).unwrap();
        assert!(m.sem_eq(&f, &g, Level::Interp).unwrap());
        let set_f = m.domain_m(&term(&th, "\\X : U_Kind. X"), &Env::new()).unwrap();
        assert!(m.sem_eq(&set_f, &ElemValue::Builtin(Builtin::IdUniverse, vec![]), Level::Set).unwrap());
        assert!(matches!(m.domain_m(&term(&th, "Pi X : U_Kind. eps_Kind X"), &Env::new()), Err(ModelError::UnenumerableUnion(_))));
    }
}
