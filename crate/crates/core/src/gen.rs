//! Well-typed term generation.
//!
//! Terms are built bottom-up by size: every candidate is assembled from
//! already typed parts and kept only if it types, so the typing judgement
//! filters the raw enumeration as it is produced. Types are kept in
//! βR-normal form, which makes convertibility a plain `==`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kernel::{name, Context, Name, Term, Theory};
use crate::reduction::{normalize, r_root, Fuel, Mode, DEFAULT_FUEL};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedTerm {
    pub term: Term,
    /// βR-normal type.
    pub ty: Term,
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    /// Keep only βR-normal terms.
    pub normal_only: bool,
    /// Stop growing a size class beyond this many terms.
    pub limit: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { normal_only: false, limit: 5_000_000 }
    }
}

type Key = (Vec<Term>, usize);

/// Enumerates well-typed terms of a context, including terms under
/// binders (whose extra context entries are part of the memo key).
pub struct Enumerator<'a> {
    theory: &'a Theory,
    base: Context,
    mode: Mode,
    cfg: EnumConfig,
    memo: HashMap<Key, Arc<Vec<TypedTerm>>>,
    truncated: bool,
}

fn binder_var(k: usize) -> Name {
    name(&format!("_v{k}"))
}

impl<'a> Enumerator<'a> {
    pub fn new(theory: &'a Theory, ctx: &Context, cfg: EnumConfig) -> Self {
        let mode = if theory.rules().is_empty() { Mode::Beta } else { Mode::BetaR };
        let mut fuel = Fuel::new(DEFAULT_FUEL);
        let base = Context::from_entries(
            ctx.entries().iter().map(|(x, a)| (x.clone(), normalize(a, theory, mode, &mut fuel).unwrap_or_else(|e| e.last))),
        );
        Enumerator { theory, base, mode, cfg, memo: HashMap::new(), truncated: false }
    }

    /// Some size class hit [`EnumConfig::limit`].
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// All well-typed terms of exactly `size` nodes in the base context.
    pub fn of_size(&mut self, size: usize) -> Arc<Vec<TypedTerm>> {
        self.at(&[], size)
    }

    /// All well-typed terms of at most `max` nodes, smallest first.
    pub fn up_to(&mut self, max: usize) -> Vec<TypedTerm> {
        (1..=max).flat_map(|s| self.of_size(s).iter().cloned().collect::<Vec<_>>()).collect()
    }

    fn nf(&self, t: &Term) -> Term {
        let mut fuel = Fuel::new(DEFAULT_FUEL);
        normalize(t, self.theory, self.mode, &mut fuel).unwrap_or_else(|e| e.last)
    }

    fn leaves(&self, ext: &[Term]) -> Vec<TypedTerm> {
        let mut out = vec![TypedTerm { term: Term::Type, ty: Term::Kind }];
        for (x, a) in self.base.entries() {
            out.push(TypedTerm { term: Term::Free(x.clone()), ty: a.clone() });
        }
        for (k, a) in ext.iter().enumerate() {
            out.push(TypedTerm { term: Term::Free(binder_var(k)), ty: a.clone() });
        }
        for (c, a) in self.theory.signature().entries() {
            out.push(TypedTerm { term: Term::Const(c.clone()), ty: self.nf(a) });
        }
        out
    }

    fn at(&mut self, ext: &[Term], size: usize) -> Arc<Vec<TypedTerm>> {
        let key = (ext.to_vec(), size);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = Arc::new(self.build(ext, size));
        self.memo.insert(key, v.clone());
        v
    }

    fn push(&mut self, out: &mut Vec<TypedTerm>, t: TypedTerm) -> bool {
        if out.len() >= self.cfg.limit {
            self.truncated = true;
            return false;
        }
        out.push(t);
        true
    }

    fn build(&mut self, ext: &[Term], size: usize) -> Vec<TypedTerm> {
        if size == 0 {
            return Vec::new();
        }
        if size == 1 {
            return self.leaves(ext);
        }
        let mut out = Vec::new();
        // applications
        for k in 1..size - 1 {
            let fs = self.at(ext, k);
            let args = self.at(ext, size - 1 - k);
            let mut by_type: HashMap<&Term, Vec<&TypedTerm>> = HashMap::new();
            for a in args.iter() {
                by_type.entry(&a.ty).or_default().push(a);
            }
            for f in fs.iter() {
                let Term::Pi(_, dom, cod) = &f.ty else { continue };
                if self.cfg.normal_only && matches!(f.term, Term::Lam(..)) {
                    continue;
                }
                let Some(matching) = by_type.get(dom.as_ref()) else { continue };
                for a in matching {
                    let term = Term::app(f.term.clone(), a.term.clone());
                    if self.cfg.normal_only && r_root(&term, self.theory).is_some() {
                        continue;
                    }
                    let ty = self.nf(&cod.instantiate(&a.term));
                    if !self.push(&mut out, TypedTerm { term, ty }) {
                        return out;
                    }
                }
            }
        }
        // products and abstractions
        let depth = ext.len();
        let x = binder_var(depth);
        for k in 1..size - 1 {
            let doms: Vec<TypedTerm> = self.at(ext, k).iter().filter(|d| d.ty == Term::Type).cloned().collect();
            for d in doms {
                let dn = self.nf(&d.term);
                let mut ext2 = ext.to_vec();
                ext2.push(dn.clone());
                let bodies = self.at(&ext2, size - 1 - k);
                for b in bodies.iter() {
                    let body = b.term.abstract_name(&x);
                    if b.ty.is_sort() {
                        let t = TypedTerm { term: Term::pi_raw("x", d.term.clone(), body.clone()), ty: b.ty.clone() };
                        if !self.push(&mut out, t) {
                            return out;
                        }
                    }
                    if b.ty != Term::Kind {
                        let ty = Term::pi_raw("x", dn.clone(), b.ty.abstract_name(&x));
                        let t = TypedTerm { term: Term::lam_raw("x", d.term.clone(), body), ty };
                        if !self.push(&mut out, t) {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Seeded sample of `count` items, without replacement when the pool is
/// large enough and cycling through a shuffled pool otherwise.
pub fn sample<T: Clone>(pool: &[T], count: usize, seed: u64) -> Vec<T> {
    if pool.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.shuffle(&mut rng);
    idx.iter().cycle().take(count).map(|&i| pool[i].clone()).collect()
}

/// The context used for STT sweeps: two propositions and one individual.
pub fn stt_context() -> Context {
    Context::new().with("a", Term::constant("o")).with("b", Term::constant("o")).with("c", Term::constant("iota"))
}

/// The context used for CC sweeps: a type code, a kind code, and an
/// inhabitant of each.
pub fn cc_context() -> Context {
    Context::new()
        .with("T", Term::constant("U_Type"))
        .with("K", Term::constant("U_Kind"))
        .with("t", Term::app(Term::constant("eps_Type"), Term::free("T")))
        .with("k", Term::app(Term::constant("eps_Kind"), Term::free("K")))
}
