//! Finite set-theoretic models valued in a full Π-algebra.
//!
//! Sets are symbolic ([`SetValue`]) and are only expanded when a quantifier
//! or a λ needs their elements. Every set that gets enumerated is finite
//! because the carrier is.

pub mod cc;
pub mod stt;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::kernel::Term;

/// Default bound on the size of an enumerated set.
pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("set too large to enumerate ({size} elements, cap {cap})")]
    SizeLimitExceeded { size: String, cap: u128 },
    #[error("union over an infinite index set: {0}")]
    UnenumerableUnion(String),
    /// Internal: a value depended on a variable evaluated symbolically.
    #[error("value depends on an unknown variable")]
    Dependent,
    #[error("not a function: {0}")]
    NotAFunction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type ModelResult<T> = Result<T, ModelError>;

/// A set of the model. `FunSpace(_, Singleton)` is never built: use
/// [`SetValue::fun_space`], which collapses it to `Singleton`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetValue {
    /// The carrier of the algebra.
    Carrier,
    /// `{e}`
    Singleton,
    FunSpace(Box<SetValue>, Box<SetValue>),
    /// The universe of sets `E`. Never enumerated.
    Universe,
}

impl SetValue {
    pub fn fun_space(dom: SetValue, cod: SetValue) -> SetValue {
        if cod == SetValue::Singleton {
            SetValue::Singleton
        } else {
            SetValue::FunSpace(Box::new(dom), Box::new(cod))
        }
    }

    /// Number of elements, `None` for `Universe` or on overflow.
    pub fn cardinality(&self, alg: &FiniteAlgebra) -> Option<u128> {
        match self {
            SetValue::Carrier => Some(alg.n() as u128),
            SetValue::Singleton => Some(1),
            SetValue::FunSpace(a, b) => {
                let a = a.cardinality(alg)?;
                let b = b.cardinality(alg)?;
                b.checked_pow(u32::try_from(a).ok()?)
            }
            SetValue::Universe => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            SetValue::Universe => false,
            SetValue::FunSpace(a, b) => a.is_finite() && b.is_finite(),
            _ => true,
        }
    }
}

impl std::fmt::Display for SetValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SetValue::Carrier => f.write_str("B"),
            SetValue::Singleton => f.write_str("{e}"),
            SetValue::FunSpace(a, b) => write!(f, "({a} => {b})"),
            SetValue::Universe => f.write_str("E"),
        }
    }
}

/// Primitive functions of the CC model, applied once `arity` arguments
/// have been collected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Identity on `E`.
    IdUniverse,
    /// `(e, h) ↦ {e} => h e`
    SetPiTypeKind,
    /// `(a, h) ↦ a => h e`
    SetPiKindKind,
    /// `(C, f) ↦ Π̃(C, image of f)`
    AlgPi,
    /// Constant function; the first argument is the constant.
    Constant,
}

impl Builtin {
    pub fn arity(self) -> usize {
        match self {
            Builtin::IdUniverse => 1,
            _ => 2,
        }
    }
}

/// Which family a closure belongs to in the CC model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// The set-valued family `M`.
    Set,
    /// The interpretation.
    Interp,
}

/// Values bound to a variable while evaluating CC terms: its `M`-value
/// and its interpretation.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub m: ElemValue,
    pub v: ElemValue,
}

/// A λ over a domain that cannot be tabulated.
#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub level: Level,
    pub domain: Term,
    /// Body with the parameter as `Bound(0)`.
    pub body: Term,
    pub env: cc::Env,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElemValue {
    Alg(u32),
    /// The point of `{e}`.
    E,
    /// A set, as an element of `E`.
    Set(SetValue),
    /// Total function on an enumerable domain, outputs in enumeration order.
    /// A table whose outputs are all `E` is never built.
    Table(SetValue, Arc<Vec<ElemValue>>),
    Builtin(Builtin, Vec<ElemValue>),
    Closure(Arc<Closure>),
    /// Placeholder for a variable whose value is not known; any use of it
    /// is reported as [`ModelError::Dependent`].
    Opaque,
}

impl std::fmt::Display for ElemValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ElemValue::Alg(w) => write!(f, "{w}"),
            ElemValue::E => f.write_str("e"),
            ElemValue::Set(s) => write!(f, "{s}"),
            ElemValue::Table(_, outs) => {
                f.write_str("[")?;
                for (i, o) in outs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{o}")?;
                }
                f.write_str("]")
            }
            ElemValue::Builtin(b, args) => write!(f, "{b:?}/{}", args.len()),
            ElemValue::Closure(c) => write!(f, "<closure \\{}>", c.body),
            ElemValue::Opaque => f.write_str("?"),
        }
    }
}

impl ElemValue {
    pub fn as_alg(&self) -> ModelResult<u32> {
        match self {
            ElemValue::Alg(w) => Ok(*w),
            ElemValue::Opaque => Err(ModelError::Dependent),
            v => Err(ModelError::Unsupported(format!("expected an algebra element, got {v}"))),
        }
    }

    pub fn as_set(&self) -> ModelResult<SetValue> {
        match self {
            ElemValue::Set(s) => Ok(s.clone()),
            ElemValue::Opaque => Err(ModelError::Dependent),
            v => Err(ModelError::Unsupported(format!("expected a set, got {v}"))),
        }
    }

    pub fn contains_opaque(&self) -> bool {
        match self {
            ElemValue::Opaque => true,
            ElemValue::Table(_, outs) => outs.iter().any(ElemValue::contains_opaque),
            ElemValue::Builtin(_, args) => args.iter().any(ElemValue::contains_opaque),
            ElemValue::Closure(c) => c.env.contains_opaque(),
            _ => false,
        }
    }
}

/// Elements of `s` in a fixed order: carrier order, and for function
/// spaces the table with outputs `o_i` has index `Σ idx(o_i)·|cod|^i`.
pub fn enumerate_set(s: &SetValue, alg: &FiniteAlgebra, cap: u128) -> ModelResult<Vec<ElemValue>> {
    match s {
        SetValue::Carrier => Ok((0..alg.n() as u32).map(ElemValue::Alg).collect()),
        SetValue::Singleton => Ok(vec![ElemValue::E]),
        SetValue::Universe => Err(ModelError::UnenumerableUnion("the universe of sets".into())),
        SetValue::FunSpace(a, b) => {
            let size = s.cardinality(alg);
            match size {
                Some(k) if k <= cap => {}
                _ => {
                    let size = size.map_or_else(|| "unbounded".to_string(), |k| k.to_string());
                    return Err(ModelError::SizeLimitExceeded { size, cap });
                }
            }
            let dom = enumerate_set(a, alg, cap)?;
            let cod = enumerate_set(b, alg, cap)?;
            let total = size.unwrap() as usize;
            let mut out = Vec::with_capacity(total);
            for k in 0..total {
                let mut rest = k;
                let outs: Vec<ElemValue> = (0..dom.len())
                    .map(|_| {
                        let o = cod[rest % cod.len()].clone();
                        rest /= cod.len();
                        o
                    })
                    .collect();
                out.push(ElemValue::Table((**a).clone(), Arc::new(outs)));
            }
            Ok(out)
        }
    }
}

/// Position of `v` in [`enumerate_set`]`(s)`.
pub fn index_of(s: &SetValue, v: &ElemValue, alg: &FiniteAlgebra) -> ModelResult<usize> {
    if matches!(v, ElemValue::Opaque) {
        return Err(ModelError::Dependent);
    }
    match (s, v) {
        (SetValue::Carrier, ElemValue::Alg(w)) if (*w as usize) < alg.n() => Ok(*w as usize),
        (SetValue::Singleton, ElemValue::E) => Ok(0),
        (SetValue::FunSpace(a, b), ElemValue::Table(dom, outs)) if **a == *dom => {
            let base = b.cardinality(alg).ok_or_else(|| ModelError::Unsupported(format!("codomain {b} is infinite")))? as usize;
            let mut idx = 0usize;
            for o in outs.iter().rev() {
                idx = idx * base + index_of(b, o, alg)?;
            }
            Ok(idx)
        }
        _ => Err(ModelError::Unsupported(format!("{v} is not an element of {s}"))),
    }
}

/// Structural membership test.
pub fn member(v: &ElemValue, s: &SetValue, alg: &FiniteAlgebra) -> bool {
    match (s, v) {
        (SetValue::Universe, ElemValue::Set(_)) => true,
        (SetValue::FunSpace(a, b), ElemValue::Table(dom, outs)) => {
            **a == *dom && a.cardinality(alg).is_some_and(|k| k == outs.len() as u128) && outs.iter().all(|o| member(o, b, alg))
        }
        // functions on infinite domains are not tabulated
        (SetValue::FunSpace(a, _), ElemValue::Closure(_) | ElemValue::Builtin(..)) => !a.is_finite(),
        _ => index_of(s, v, alg).is_ok(),
    }
}

/// Function on `dom` given pointwise, collapsed to `E` when every output is.
pub fn tabulate(
    dom: &SetValue,
    alg: &FiniteAlgebra,
    cap: u128,
    mut f: impl FnMut(ElemValue) -> ModelResult<ElemValue>,
) -> ModelResult<ElemValue> {
    let elems = enumerate_set(dom, alg, cap)?;
    let outs = elems.into_iter().map(&mut f).collect::<ModelResult<Vec<_>>>()?;
    if outs.iter().all(|o| matches!(o, ElemValue::E)) {
        Ok(ElemValue::E)
    } else {
        Ok(ElemValue::Table(dom.clone(), Arc::new(outs)))
    }
}

/// Application of a tabulated function, with the `e` collapse.
pub fn apply_table(f: &ElemValue, arg: &ElemValue, alg: &FiniteAlgebra) -> ModelResult<ElemValue> {
    match f {
        ElemValue::E => Ok(ElemValue::E),
        ElemValue::Table(dom, outs) => Ok(outs[index_of(dom, arg, alg)?].clone()),
        ElemValue::Opaque => Err(ModelError::Dependent),
        v => Err(ModelError::NotAFunction(v.to_string())),
    }
}

/// Subset mask of a collection of algebra elements.
pub fn mask_of<'a>(vals: impl IntoIterator<Item = &'a ElemValue>) -> ModelResult<u32> {
    vals.into_iter().try_fold(0u32, |m, v| Ok(m | 1 << v.as_alg()?))
}

/// Identity on the carrier, as a table.
pub fn carrier_identity(alg: &FiniteAlgebra) -> ElemValue {
    ElemValue::Table(SetValue::Carrier, Arc::new((0..alg.n() as u32).map(ElemValue::Alg).collect()))
}
