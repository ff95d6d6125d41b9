//! Finite full Π-algebras: a carrier `0..n`, a top element, and a total
//! table for Π̃ over (element, subset) pairs. Subsets are bitmasks, bit `i`
//! standing for element `i`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest carrier accepted anywhere (subsets must fit in a `u32` mask).
pub const MAX_CARRIER: usize = 8;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("exhaustive enumeration is limited to n <= 2 (got n = {0})")]
    SizeTooLargeForExhaustive(usize),
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    n: usize,
    top: u32,
    /// `table[w * 2^n + mask]`
    table: Vec<u32>,
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra(n={}, top={}, table={:?})", self.n, self.top, self.table)
    }
}

impl FiniteAlgebra {
    pub fn new(n: usize, top: u32, table: Vec<u32>) -> Result<Self, AlgebraError> {
        if n == 0 || n > MAX_CARRIER {
            return Err(AlgebraError::Invalid(format!("carrier size {n} out of range 1..={MAX_CARRIER}")));
        }
        if top as usize >= n {
            return Err(AlgebraError::Invalid(format!("top {top} outside carrier")));
        }
        if table.len() != n << n {
            return Err(AlgebraError::Invalid(format!("table has {} entries, expected {}", table.len(), n << n)));
        }
        if let Some(v) = table.iter().find(|&&v| v as usize >= n) {
            return Err(AlgebraError::Invalid(format!("table entry {v} outside carrier")));
        }
        Ok(FiniteAlgebra { n, top, table })
    }

    /// The one-point algebra.
    pub fn trivial() -> Self {
        FiniteAlgebra { n: 1, top: 0, table: vec![0, 0] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn subsets(&self) -> u32 {
        1 << self.n
    }

    /// Π̃(w, S)
    pub fn pi(&self, w: u32, mask: u32) -> u32 {
        self.table[((w as usize) << self.n) + mask as usize]
    }

    /// w ~> w' = Π̃(w, {w'})
    pub fn arrow(&self, w: u32, w2: u32) -> u32 {
        self.pi(w, 1 << w2)
    }

    /// `.alg` text: `n top`, then one line of `2^n` entries per element.
    pub fn to_alg_string(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.top);
        for w in 0..self.n {
            let row: Vec<String> = (0..self.subsets()).map(|m| self.pi(w as u32, m).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_alg(text: &str) -> Result<Self, AlgebraError> {
        let mut lines = text.lines().map(|l| l.split(';').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let bad = |m: &str| AlgebraError::Invalid(m.to_string());
        let head: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("empty file"))?
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| bad("header must be `n top`")))
            .collect::<Result<_, _>>()?;
        let [n, top] = head[..] else {
            return Err(bad("header must be `n top`"));
        };
        if n == 0 || n > MAX_CARRIER {
            return Err(bad("carrier size out of range"));
        }
        let mut table = Vec::with_capacity(n << n);
        for w in 0..n {
            let row: Vec<u32> = lines
                .next()
                .ok_or_else(|| bad(&format!("missing row for element {w}")))?
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| bad("table entries must be integers")))
                .collect::<Result<_, _>>()?;
            if row.len() != 1 << n {
                return Err(bad(&format!("row {w} has {} entries, expected {}", row.len(), 1 << n)));
            }
            table.extend(row);
        }
        if lines.next().is_some() {
            return Err(bad("trailing lines"));
        }
        FiniteAlgebra::new(n, top as u32, table)
    }
}

/// A partial order on `0..n` as a bit matrix: bit `y` of `rows[x]` is `x ⊑ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRelation {
    n: usize,
    rows: Vec<u32>,
}

impl OrderRelation {
    /// Validates reflexivity, antisymmetry, and transitivity.
    pub fn new(n: usize, rows: Vec<u32>) -> Result<Self, AlgebraError> {
        if rows.len() != n {
            return Err(AlgebraError::InvalidOrder(format!("{} rows for {n} elements", rows.len())));
        }
        let r = OrderRelation { n, rows };
        for x in 0..n {
            if !r.le(x as u32, x as u32) {
                return Err(AlgebraError::InvalidOrder(format!("not reflexive at {x}")));
            }
            for y in 0..n {
                if x != y && r.le(x as u32, y as u32) && r.le(y as u32, x as u32) {
                    return Err(AlgebraError::InvalidOrder(format!("{x} and {y} are mutually below each other")));
                }
                for z in 0..n {
                    if r.le(x as u32, y as u32) && r.le(y as u32, z as u32) && !r.le(x as u32, z as u32) {
                        return Err(AlgebraError::InvalidOrder(format!("not transitive at {x}, {y}, {z}")));
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn discrete(n: usize) -> Self {
        OrderRelation { n, rows: (0..n).map(|x| 1 << x).collect() }
    }

    /// `x ⊑ y` iff `x <= y`.
    pub fn chain(n: usize) -> Self {
        OrderRelation { n, rows: (0..n).map(|x| ((1u32 << n) - 1) & !((1u32 << x) - 1)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn le(&self, x: u32, y: u32) -> bool {
        self.rows[x as usize] >> y & 1 == 1
    }

    /// Every reflexive relation on `0..n`, valid orders or not, for testing.
    pub fn reflexive_candidates(n: usize) -> Vec<Vec<u32>> {
        let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
        (0u64..1 << off.len())
            .map(|bits| {
                let mut rows: Vec<u32> = (0..n).map(|x| 1 << x).collect();
                for (k, &(x, y)) in off.iter().enumerate() {
                    if bits >> k & 1 == 1 {
                        rows[x] |= 1 << y;
                    }
                }
                rows
            })
            .collect()
    }

    /// S ⊑ T: every element of S is below some element of T.
    pub fn set_le(&self, s: u32, t: u32) -> bool {
        (0..self.n as u32).filter(|y| s >> y & 1 == 1).all(|y| (0..self.n as u32).any(|z| t >> z & 1 == 1 && self.le(y, z)))
    }

    fn upper_bounds(&self, s: u32) -> u32 {
        (0..self.n as u32)
            .filter(|&u| (0..self.n as u32).filter(|y| s >> y & 1 == 1).all(|y| self.le(y, u)))
            .fold(0, |m, u| m | 1 << u)
    }

    /// Least upper bound of the subset `s`, if any.
    pub fn lub(&self, s: u32) -> Option<u32> {
        let ub = self.upper_bounds(s);
        (0..self.n as u32).find(|&u| ub >> u & 1 == 1 && (0..self.n as u32).filter(|v| ub >> v & 1 == 1).all(|v| self.le(u, v)))
    }
}

/// Π̃ is left anti-monotone and right monotone for `order`.
pub fn check_ordered(alg: &FiniteAlgebra, order: &OrderRelation) -> bool {
    let n = alg.n() as u32;
    let subsets = alg.subsets();
    for x in 0..n {
        for y in 0..n {
            if order.le(x, y) && (0..subsets).any(|s| !order.le(alg.pi(y, s), alg.pi(x, s))) {
                return false;
            }
        }
    }
    for s in 0..subsets {
        for t in 0..subsets {
            if order.set_le(s, t) && (0..n).any(|x| !order.le(alg.pi(x, s), alg.pi(x, t))) {
                return false;
            }
        }
    }
    true
}

/// Every subset, the empty one included, has a least upper bound.
pub fn check_complete(alg: &FiniteAlgebra, order: &OrderRelation) -> bool {
    (0..alg.subsets()).all(|s| order.lub(s).is_some())
}

/// Number of full algebras of carrier size `n`: `n^(n·2^n) · n`.
pub fn count_full_algebras(n: usize) -> Option<u128> {
    let entries = (n as u32).checked_mul(1 << n)?;
    (n as u128).checked_pow(entries)?.checked_mul(n as u128)
}

/// Every full algebra with carrier size `n`, for `n <= 2`.
pub fn enumerate_full_algebras(n: usize) -> Result<impl Iterator<Item = FiniteAlgebra>, AlgebraError> {
    if n > 2 {
        return Err(AlgebraError::SizeTooLargeForExhaustive(n));
    }
    if n == 0 {
        return Err(AlgebraError::Invalid("carrier size 0".into()));
    }
    let total = count_full_algebras(n).unwrap() as u64;
    let entries = n << n;
    Ok((0..total).map(move |k| {
        let top = (k % n as u64) as u32;
        let mut rest = k / n as u64;
        let mut table = Vec::with_capacity(entries);
        for _ in 0..entries {
            table.push((rest % n as u64) as u32);
            rest /= n as u64;
        }
        FiniteAlgebra { n, top, table }
    }))
}

/// `count` algebras drawn uniformly with a seeded generator.
pub fn sample_full_algebras(n: usize, count: usize, seed: u64) -> Result<Vec<FiniteAlgebra>, AlgebraError> {
    if n == 0 || n > MAX_CARRIER {
        return Err(AlgebraError::Invalid(format!("carrier size {n} out of range 1..={MAX_CARRIER}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let top = rng.gen_range(0..n as u32);
            let table = (0..n << n).map(|_| rng.gen_range(0..n as u32)).collect();
            FiniteAlgebra { n, top, table }
        })
        .collect())
}

/// The algebras of the standard sweep: the one-point algebra followed by
/// all 512 two-element algebras.
pub fn sweep_algebras() -> Vec<FiniteAlgebra> {
    let mut v: Vec<FiniteAlgebra> = enumerate_full_algebras(1).unwrap().collect();
    v.extend(enumerate_full_algebras(2).unwrap());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_examples() {
        let one = FiniteAlgebra::trivial();
        assert_eq!(one.arrow(0, 0), 0);
        // table chosen so that arrow reads distinct entries
        let alg = FiniteAlgebra::new(2, 1, vec![0, 1, 0, 1, 1, 0, 1, 0]).unwrap();
        assert_eq!(alg.arrow(0, 0), alg.pi(0, 0b01));
        assert_eq!(alg.arrow(0, 0), 1);
        assert_eq!(alg.arrow(0, 1), 0);
        assert_eq!(alg.arrow(1, 0), 0);
        assert_eq!(alg.arrow(1, 1), 1);
    }

    #[test]
    fn construction_checks() {
        assert!(FiniteAlgebra::new(2, 2, vec![0; 8]).is_err());
        assert!(FiniteAlgebra::new(2, 0, vec![0; 7]).is_err());
        assert!(FiniteAlgebra::new(2, 0, vec![0, 0, 0, 0, 0, 0, 0, 2]).is_err());
        assert!(OrderRelation::new(2, vec![0b11, 0b11]).is_err());
        assert!(OrderRelation::new(2, vec![0b10, 0b10]).is_err());
        assert_eq!(OrderRelation::new(2, vec![0b11, 0b10]).unwrap(), OrderRelation::chain(2));
        assert!(OrderRelation::new(3, vec![0b011, 0b110, 0b100]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_full_algebras(1).unwrap().count(), 1);
        let all: Vec<_> = enumerate_full_algebras(2).unwrap().collect();
        assert_eq!(all.len(), 512);
        let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 512);
        assert!(matches!(enumerate_full_algebras(3), Err(AlgebraError::SizeTooLargeForExhaustive(3))));
        assert_eq!(count_full_algebras(2), Some(512));
        assert_eq!(sweep_algebras().len(), 513);
    }

    #[test]
    fn fullness_by_construction() {
        for alg in enumerate_full_algebras(2).unwrap() {
            for w in 0..2 {
                for m in 0..4 {
                    assert!(alg.pi(w, m) < 2);
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_full_algebras(3, 5, 7).unwrap();
        let b = sample_full_algebras(3, 5, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_full_algebras(3, 5, 8).unwrap());
        assert_eq!(a[0].table().len(), 24);
    }

    #[test]
    fn alg_round_trip() {
        let alg = FiniteAlgebra::new(2, 1, vec![0, 1, 0, 1, 1, 0, 1, 0]).unwrap();
        let text = alg.to_alg_string();
        assert_eq!(text, "2 1\n0 1 0 1\n1 0 1 0\n");
        assert_eq!(FiniteAlgebra::parse_alg(&text).unwrap(), alg);
        assert!(FiniteAlgebra::parse_alg("2 1\n0 1 0\n1 0 1 0\n").is_err());
        assert!(FiniteAlgebra::parse_alg("").is_err());
    }

    #[test]
    fn ordered_examples() {
        let one = FiniteAlgebra::trivial();
        assert!(check_ordered(&one, &OrderRelation::discrete(1)));
        // constant table: monotone for every order
        let konst = FiniteAlgebra::new(2, 0, vec![1; 8]).unwrap();
        assert!(check_ordered(&konst, &OrderRelation::discrete(2)));
        assert!(check_ordered(&konst, &OrderRelation::chain(2)));
        // Π̃(x, ∅) = 1 but Π̃(x, {0}) = 0, with ∅ ⊆ {0}: not right monotone
        let bad = FiniteAlgebra::new(2, 0, vec![1, 0, 1, 1, 1, 0, 1, 1]).unwrap();
        assert!(!check_ordered(&bad, &OrderRelation::discrete(2)));
    }

    #[test]
    fn complete_examples() {
        let one = FiniteAlgebra::trivial();
        assert!(check_complete(&one, &OrderRelation::discrete(1)));
        let two = FiniteAlgebra::new(2, 0, vec![0; 8]).unwrap();
        assert!(check_complete(&two, &OrderRelation::chain(2)));
        assert_eq!(OrderRelation::chain(2).lub(0), Some(0));
        assert_eq!(OrderRelation::chain(2).lub(0b11), Some(1));
        assert!(!check_complete(&two, &OrderRelation::discrete(2)));
    }

    fn naive_ordered(alg: &FiniteAlgebra, le: &dyn Fn(u32, u32) -> bool) -> bool {
        let n = alg.n() as u32;
        let in_set = |s: u32, x: u32| s >> x & 1 == 1;
        let set_le = |s: u32, t: u32| (0..n).all(|y| !in_set(s, y) || (0..n).any(|z| in_set(t, z) && le(y, z)));
        for x in 0..n {
            for y in 0..n {
                for s in 0..alg.subsets() {
                    if le(x, y) && !le(alg.pi(y, s), alg.pi(x, s)) {
                        return false;
                    }
                }
            }
        }
        for x in 0..n {
            for s in 0..alg.subsets() {
                for t in 0..alg.subsets() {
                    if set_le(s, t) && !le(alg.pi(x, s), alg.pi(x, t)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn naive_complete(n: u32, le: &dyn Fn(u32, u32) -> bool) -> bool {
        (0..1u32 << n).all(|s| {
            let ubs: Vec<u32> = (0..n).filter(|&u| (0..n).all(|y| s >> y & 1 == 0 || le(y, u))).collect();
            ubs.iter().any(|&u| ubs.iter().all(|&v| le(u, v)))
        })
    }

    #[test]
    fn checks_agree_with_naive_oracle() {
        let mut valid = 0;
        for rows in OrderRelation::reflexive_candidates(2) {
            let Ok(order) = OrderRelation::new(2, rows.clone()) else {
                continue;
            };
            valid += 1;
            let le = |x: u32, y: u32| rows[x as usize] >> y & 1 == 1;
            for alg in enumerate_full_algebras(2).unwrap() {
                assert_eq!(check_ordered(&alg, &order), naive_ordered(&alg, &le));
                assert_eq!(check_complete(&alg, &order), naive_complete(2, &le));
            }
        }
        assert_eq!(OrderRelation::reflexive_candidates(2).len(), 4);
        assert_eq!(valid, 3);
    }
}
