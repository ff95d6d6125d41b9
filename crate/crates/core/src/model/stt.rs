//! The model of Simple Type Theory over a full Π-algebra.
//!
//! Objects all live in `{e}`; only `Kind`, `Type`, `o` and products
//! building on them have larger domains.

use std::collections::BTreeMap;

use super::{apply_table, carrier_identity, enumerate_set, mask_of, tabulate, ElemValue, ModelError, ModelResult, SetValue, DEFAULT_CAP};
use crate::algebra::FiniteAlgebra;
use crate::kernel::{substitute, Context, Name, Term, Theory};

/// Values of the free variables of a term.
pub type Valuation = BTreeMap<Name, ElemValue>;

/// The domain `M_t`, computed syntactically. Variables and constants other
/// than `o` get `{e}`.
pub fn domain_stt(t: &Term) -> SetValue {
    match t {
        Term::Kind | Term::Type => SetValue::Carrier,
        Term::Const(c) if &**c == "o" => SetValue::Carrier,
        Term::Const(_) | Term::Free(_) | Term::Bound(_) => SetValue::Singleton,
        Term::Lam(_, _, b) => domain_stt(b),
        Term::App(f, _) => domain_stt(f),
        Term::Pi(_, a, b) => SetValue::fun_space(domain_stt(a), domain_stt(b)),
    }
}

/// `M_t = {e}` for terms without `Kind`, `Type`, `o`.
pub fn check_lemma1_stt(t: &Term) -> bool {
    domain_stt(t) == SetValue::Singleton
}

pub struct SttModel<'a> {
    theory: &'a Theory,
    alg: &'a FiniteAlgebra,
    cap: u128,
}

impl<'a> SttModel<'a> {
    pub fn new(theory: &'a Theory, alg: &'a FiniteAlgebra) -> Self {
        SttModel { theory, alg, cap: DEFAULT_CAP }
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

    /// `⟦t⟧_φ`
    pub fn interp(&self, t: &Term, phi: &Valuation) -> ModelResult<ElemValue> {
        self.eval(t, phi, &mut Vec::new())
    }

    fn eval(&self, t: &Term, phi: &Valuation, env: &mut Vec<ElemValue>) -> ModelResult<ElemValue> {
        match t {
            Term::Kind | Term::Type => Ok(self.top()),
            Term::Bound(i) => env
                .len()
                .checked_sub(1 + *i as usize)
                .map(|k| env[k].clone())
                .ok_or_else(|| ModelError::Unsupported(format!("loose index {i}"))),
            Term::Free(x) => phi.get(x).cloned().ok_or_else(|| ModelError::Unsupported(format!("no value for `{x}`"))),
            Term::Const(c) => self.constant(c),
            Term::Lam(_, a, b) => {
                let dom = domain_stt(a);
                tabulate(&dom, self.alg, self.cap, |c| {
                    env.push(c);
                    let r = self.eval(b, phi, env);
                    env.pop();
                    r
                })
            }
            Term::App(f, a) => {
                let fv = self.eval(f, phi, env)?;
                if fv == ElemValue::E {
                    return Ok(ElemValue::E);
                }
                let av = self.eval(a, phi, env)?;
                apply_table(&fv, &av, self.alg)
            }
            Term::Pi(_, a, b) => {
                let w = self.eval(a, phi, env)?.as_alg()?;
                let mut vals = Vec::new();
                for c in enumerate_set(&domain_stt(a), self.alg, self.cap)? {
                    env.push(c);
                    let r = self.eval(b, phi, env);
                    env.pop();
                    vals.push(r?);
                }
                Ok(ElemValue::Alg(self.alg.pi(w, mask_of(&vals)?)))
            }
        }
    }

    fn constant(&self, c: &str) -> ModelResult<ElemValue> {
        match c {
            "iota" | "o" => Ok(self.top()),
            "eps" => Ok(carrier_identity(self.alg)),
            "imp" => tabulate(&SetValue::Carrier, self.alg, self.cap, |w| {
                let w = w.as_alg()?;
                tabulate(&SetValue::Carrier, self.alg, self.cap, |w2| Ok(ElemValue::Alg(self.alg.arrow(w, w2.as_alg()?))))
            }),
            _ => match self.theory.instance(c) {
                Some(inst) if &*inst.family == "all" && inst.args.len() == 1 => {
                    let ty = &inst.args[0];
                    let wc = self.interp(ty, &Valuation::new())?.as_alg()?;
                    let fs = SetValue::fun_space(domain_stt(ty), SetValue::Carrier);
                    tabulate(&fs, self.alg, self.cap, |f| match f {
                        ElemValue::Table(_, outs) => Ok(ElemValue::Alg(self.alg.pi(wc, mask_of(outs.iter())?))),
                        v => Err(ModelError::Unsupported(format!("predicate value {v}"))),
                    })
                }
                _ => Err(ModelError::Unsupported(format!("no interpretation for constant `{c}`"))),
            },
        }
    }

    /// `⟦(u/x)t⟧_φ = ⟦t⟧_{φ, x = ⟦u⟧_φ}`
    pub fn check_substitution(&self, t: &Term, x: &str, u: &Term, phi: &Valuation) -> ModelResult<bool> {
        let lhs = self.interp(&substitute(t, x, u), phi)?;
        let mut phi2 = phi.clone();
        phi2.insert(crate::kernel::name(x), self.interp(u, phi)?);
        Ok(lhs == self.interp(t, &phi2)?)
    }

    /// Same domain and same interpretation.
    pub fn check_conversion(&self, t: &Term, u: &Term, phi: &Valuation) -> ModelResult<bool> {
        Ok(domain_stt(t) == domain_stt(u) && self.interp(t, phi)? == self.interp(u, phi)?)
    }

    /// Every valuation of `ctx`; the domains of context types do not depend
    /// on earlier entries.
    pub fn valuations(&self, ctx: &Context) -> ModelResult<Vec<Valuation>> {
        let mut out = vec![Valuation::new()];
        for (x, a) in ctx.entries() {
            let elems = enumerate_set(&domain_stt(a), self.alg, self.cap)?;
            let total = out.len() as u128 * elems.len() as u128;
            if total > self.cap {
                return Err(ModelError::SizeLimitExceeded { size: total.to_string(), cap: self.cap });
            }
            out = out
                .into_iter()
                .flat_map(|phi| {
                    elems.iter().map(move |c| {
                        let mut p = phi.clone();
                        p.insert(x.clone(), c.clone());
                        p
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// [`SttModel::check_substitution`] as a free function.
pub fn check_substitution_stt(theory: &Theory, t: &Term, x: &str, u: &Term, phi: &Valuation, alg: &FiniteAlgebra) -> ModelResult<bool> {
    SttModel::new(theory, alg).check_substitution(t, x, u, phi)
}

/// [`SttModel::check_conversion`] as a free function.
pub fn check_conversion_stt(theory: &Theory, t: &Term, u: &Term, phi: &Valuation, alg: &FiniteAlgebra) -> ModelResult<bool> {
    SttModel::new(theory, alg).check_conversion(t, u, phi)
}
