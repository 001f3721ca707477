//! Boolean relations, their closure under the Schaefer operations, and affine
//! representations over GF(2).
//!
//! A tuple of arity `a` is a `u64` whose bit `p` is coordinate `p`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forbidden::ForbiddenSet;
use crate::tournament::{for_each_permutation, pair_count, triple_count, ENUMERATION_HARD_CAP};

/// Largest arity stored as a dense bitset over `{0,1}^arity`.
pub const DENSE_ARITY_LIMIT: usize = 21;

/// Largest supported arity.
pub const MAX_ARITY: usize = 64;

#[inline]
fn arity_mask(arity: usize) -> u64 {
    if arity == 64 {
        u64::MAX
    } else {
        (1u64 << arity) - 1
    }
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Packs a bool slice into a tuple.
pub fn tuple_from_bools(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |acc, (p, &b)| acc | (b as u64) << p)
}

pub fn tuple_to_bools(arity: usize, t: u64) -> Vec<bool> {
    (0..arity).map(|p| t >> p & 1 == 1).collect()
}

#[derive(Clone, PartialEq, Eq)]
enum Store {
    Dense { words: Vec<u64>, len: usize },
    Sparse(BTreeSet<u64>),
}

/// A subset of `{0,1}^arity`.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolRelation {
    arity: usize,
    store: Store,
}

/// The operations of Schaefer's theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Min,
    Max,
    Majority,
    Minority,
    Const0,
    Const1,
}

impl Op {
    pub const ALL: [Op; 6] = [Op::Min, Op::Max, Op::Majority, Op::Minority, Op::Const0, Op::Const1];
}

impl BoolRelation {
    pub fn empty(arity: usize) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::Domain(format!("arity {arity} above {MAX_ARITY}")));
        }
        let store = if arity <= DENSE_ARITY_LIMIT {
            Store::Dense {
                words: vec![0; (1usize << arity).div_ceil(64)],
                len: 0,
            }
        } else {
            Store::Sparse(BTreeSet::new())
        };
        Ok(BoolRelation { arity, store })
    }

    /// `{0,1}^arity`; only available for dense arities.
    pub fn full(arity: usize) -> Result<Self> {
        if arity > DENSE_ARITY_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "full relation of arity {arity} is too large to materialise"
            )));
        }
        let mut r = Self::empty(arity)?;
        for t in 0..1u64 << arity {
            r.insert(t);
        }
        Ok(r)
    }

    pub fn from_tuples(arity: usize, tuples: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut r = Self::empty(arity)?;
        let mask = arity_mask(arity);
        for t in tuples {
            if t & !mask != 0 {
                return Err(Error::Format(format!("tuple {t:#b} does not fit arity {arity}")));
            }
            r.insert(t);
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The all-ones tuple of this arity.
    pub fn ones(&self) -> u64 {
        arity_mask(self.arity)
    }

    /// Adds `t`; returns false if it was already present.
    pub fn insert(&mut self, t: u64) -> bool {
        debug_assert_eq!(t & !arity_mask(self.arity), 0);
        match &mut self.store {
            Store::Dense { words, len } => {
                let (w, b) = ((t >> 6) as usize, t & 63);
                let fresh = words[w] >> b & 1 == 0;
                words[w] |= 1 << b;
                *len += fresh as usize;
                fresh
            }
            Store::Sparse(set) => set.insert(t),
        }
    }

    #[inline]
    pub fn contains(&self, t: u64) -> bool {
        if t & !arity_mask(self.arity) != 0 {
            return false;
        }
        match &self.store {
            Store::Dense { words, .. } => words[(t >> 6) as usize] >> (t & 63) & 1 == 1,
            Store::Sparse(set) => set.contains(&t),
        }
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Dense { len, .. } => *len,
            Store::Sparse(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        self.arity < 64 && self.len() as u64 == 1u64 << self.arity
    }

    /// Members in increasing numeric order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.store {
            Store::Dense { words, .. } => Box::new(words.iter().enumerate().flat_map(|(w, &word)| {
                let mut rest = word;
                std::iter::from_fn(move || {
                    if rest == 0 {
                        return None;
                    }
                    let b = rest.trailing_zeros() as u64;
                    rest &= rest - 1;
                    Some((w as u64) << 6 | b)
                })
            })),
            Store::Sparse(set) => Box::new(set.iter().copied()),
        }
    }

    fn first(&self) -> Option<u64> {
        self.iter().next()
    }

    /// True iff applying `op` coordinatewise to members always yields a member.
    pub fn preserved_by(&self, op: Op) -> bool {
        if self.is_empty() {
            return true;
        }
        match op {
            Op::Const0 => self.contains(0),
            Op::Const1 => self.contains(self.ones()),
            Op::Min => self.is_full() || self.and_closed(0),
            Op::Max => self.is_full() || self.and_closed(self.ones()),
            Op::Majority => self.is_full() || self.majority_closed(),
            Op::Minority => self.hull().is_affine(),
        }
    }

    /// Closure under AND of the relation `{r ^ flip : r in R}`.
    fn and_closed(&self, flip: u64) -> bool {
        match self.store {
            Store::Dense { .. } => {
                // g[t] = AND of all members (after flip) containing t
                const NONE: u32 = u32::MAX;
                let size = 1usize << self.arity;
                let mut g: Vec<u32> = (0..size as u64)
                    .map(|t| if self.contains(t ^ flip) { t as u32 } else { NONE })
                    .collect();
                for i in 0..self.arity {
                    let bit = 1usize << i;
                    for t in 0..size {
                        if t & bit == 0 {
                            let up = g[t | bit];
                            if up != NONE {
                                g[t] = if g[t] == NONE { up } else { g[t] & up };
                            }
                        }
                    }
                }
                // a meet of members equals its own superset-meet, so it must be present
                (0..size).all(|t| g[t] != t as u32 || self.contains(t as u64 ^ flip))
            }
            Store::Sparse(_) => {
                let members: Vec<u64> = self.iter().map(|r| r ^ flip).collect();
                members
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| members[i + 1..].iter().all(|&b| self.contains((a & b) ^ flip)))
            }
        }
    }

    /// A Boolean relation is majority-closed iff it is the set of tuples whose
    /// every 2-coordinate projection is a projection of a member.
    fn majority_closed(&self) -> bool {
        let a = self.arity;
        // proj[i * a + j] bit (2*vi + vj) set iff some member has (vi, vj) at (i, j)
        let mut proj = vec![0u8; a * a];
        for r in self.iter() {
            for i in 0..a {
                let vi = (r >> i & 1) as usize;
                for j in i..a {
                    let vj = (r >> j & 1) as usize;
                    proj[i * a + j] |= 1 << (2 * vi + vj);
                }
            }
        }
        fn dfs(rel: &BoolRelation, proj: &[u8], k: usize, t: u64) -> bool {
            let a = rel.arity;
            if k == a {
                return rel.contains(t);
            }
            for v in 0..2u64 {
                let ok = (0..=k).all(|i| {
                    let vi = if i == k { v } else { t >> i & 1 };
                    proj[i * a + k] >> (2 * vi + v) & 1 == 1
                });
                if ok && !dfs(rel, proj, k + 1, t | v << k) {
                    return false;
                }
            }
            true
        }
        dfs(self, &proj, 0, 0)
    }

    /// The affine hull of the relation as a base point plus a reduced basis of directions.
    pub fn hull(&self) -> Hull {
        let Some(base) = self.first() else {
            return Hull {
                base: None,
                basis: Vec::new(),
                size: 0,
            };
        };
        let mut basis: Vec<u64> = Vec::new();
        for r in self.iter() {
            insert_reduced(&mut basis, r ^ base);
        }
        Hull {
            base: Some(base),
            basis,
            size: self.len(),
        }
    }

    /// Three members whose coordinatewise minority is not a member, if any.
    pub fn minority_witness(&self) -> Option<(u64, u64, u64)> {
        if self.hull().is_affine() {
            return None;
        }
        // R ^ r0 is a subspace iff it is XOR-closed, so r0 can be fixed as one argument
        let r0 = self.first()?;
        for r1 in self.iter() {
            for r2 in self.iter() {
                if r2 > r1 && !self.contains(r0 ^ r1 ^ r2) {
                    return Some((r1, r0, r2));
                }
            }
        }
        unreachable!("non-affine relation has a violating triple through its first member")
    }

    /// Exhaustive O(|R|^3) minority check, kept as a cross-check of the hull test.
    pub fn minority_closed_exhaustive(&self) -> bool {
        let members: Vec<u64> = self.iter().collect();
        members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| members.iter().all(|&c| self.contains(a ^ b ^ c)))
        })
    }

    /// Linear equations whose solution set is exactly this relation.
    pub fn affine_representation(&self) -> Result<AffineRep> {
        let hull = self.hull();
        let Some(base) = hull.base else {
            return Ok(AffineRep {
                arity: self.arity,
                equations: vec![(0, true)],
            });
        };
        if !hull.is_affine() {
            let (a, b, c) = self.minority_witness().expect("non-affine has a witness");
            return Err(Error::NotAffine { witness: a ^ b ^ c });
        }
        let pivots: Vec<usize> = hull.basis.iter().map(|r| r.trailing_zeros() as usize).collect();
        let mut rows = Vec::new();
        for f in 0..self.arity {
            if pivots.contains(&f) {
                continue;
            }
            let mut c = 1u64 << f;
            for (row, &p) in hull.basis.iter().zip(&pivots) {
                if row >> f & 1 == 1 {
                    c |= 1 << p;
                }
            }
            rows.push(c);
        }
        let equations = reduce_rows(rows).into_iter().map(|c| (c, parity(c & base))).collect();
        Ok(AffineRep {
            arity: self.arity,
            equations,
        })
    }
}

impl fmt::Debug for BoolRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolRelation(arity {}, {} members", self.arity, self.len())?;
        if self.len() <= 16 {
            let shown: Vec<String> = self
                .iter()
                .map(|t| {
                    tuple_to_bools(self.arity, t)
                        .into_iter()
                        .map(|b| if b { '1' } else { '0' })
                        .collect()
                })
                .collect();
            write!(f, ": {}", shown.join(" "))?;
        }
        write!(f, ")")
    }
}

/// Inserts `v` into a fully reduced basis keyed by lowest set bit.
fn insert_reduced(basis: &mut Vec<u64>, mut v: u64) {
    for &b in basis.iter() {
        if v >> b.trailing_zeros() & 1 == 1 {
            v ^= b;
        }
    }
    if v == 0 {
        return;
    }
    let p = v.trailing_zeros();
    for b in basis.iter_mut() {
        if *b >> p & 1 == 1 {
            *b ^= v;
        }
    }
    basis.push(v);
    basis.sort_by_key(|b| b.trailing_zeros());
}

/// Reduced row-echelon form of 64-bit rows, pivot on the lowest index.
fn reduce_rows(rows: Vec<u64>) -> Vec<u64> {
    let mut basis = Vec::new();
    for r in rows {
        insert_reduced(&mut basis, r);
    }
    basis
}

/// Affine hull of a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    /// A member of the relation, absent for the empty relation.
    pub base: Option<u64>,
    /// Reduced basis of `{r ^ base}`.
    pub basis: Vec<u64>,
    size: usize,
}

impl Hull {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The relation equals its hull (the empty relation counts as affine).
    pub fn is_affine(&self) -> bool {
        self.base.is_none() || self.size as u128 == 1u128 << self.basis.len()
    }
}

/// A system of GF(2) equations `mask . x = rhs` over `arity` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRep {
    pub arity: usize,
    pub equations: Vec<(u64, bool)>,
}

impl AffineRep {
    pub fn satisfied_by(&self, t: u64) -> bool {
        self.equations.iter().all(|&(c, rhs)| parity(c & t) == rhs)
    }

    /// Dimension of the solution space, absent when the system is `0 = 1`.
    pub fn dimension(&self) -> Option<usize> {
        if self.equations.iter().any(|&(c, rhs)| c == 0 && rhs) {
            None
        } else {
            Some(self.arity - self.equations.len())
        }
    }
}

/// `P_n`: codes of all `F`-free labeled tournaments on `n` vertices.
pub fn build_pn(forbidden: &ForbiddenSet, n: usize) -> Result<BoolRelation> {
    let hi = forbidden.m_f().unwrap_or(ENUMERATION_HARD_CAP);
    if n < 2 || n > hi {
        return Err(Error::Domain(format!("P_n needs 2 <= n <= {hi}, got {n}")));
    }
    let mut rel = BoolRelation::empty(pair_count(n))?;
    let classes = forbidden.free_classes(n)?;
    if classes.len() == crate::tournament::iso_classes(n).len() && pair_count(n) <= DENSE_ARITY_LIMIT {
        return BoolRelation::full(pair_count(n));
    }
    for t in classes {
        for_each_permutation(n, |p| {
            rel.insert(t.relabel(p).bits());
        });
    }
    Ok(rel)
}

/// `Q_n`: triangle-parity codes of all `F`-free labeled tournaments on `n` vertices.
pub fn build_qn(forbidden: &ForbiddenSet, n: usize) -> Result<BoolRelation> {
    let hi = forbidden.m_f().unwrap_or(ENUMERATION_HARD_CAP);
    if n < 3 || n > hi {
        return Err(Error::Domain(format!("Q_n needs 3 <= n <= {hi}, got {n}")));
    }
    let mut rel = BoolRelation::empty(triple_count(n))?;
    for t in forbidden.free_classes(n)? {
        for_each_permutation(n, |p| {
            rel.insert(t.relabel(p).triple_encode().bits() as u64);
        });
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::Tournament;

    fn rel(arity: usize, tuples: &[&str]) -> BoolRelation {
        BoolRelation::from_tuples(
            arity,
            tuples
                .iter()
                .map(|s| tuple_from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())),
        )
        .unwrap()
    }

    fn t(s: &str) -> u64 {
        tuple_from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn small_level_relations() {
        let t3 = ForbiddenSet::new(vec![Tournament::transitive(3)]).unwrap();
        assert_eq!(build_pn(&t3, 3).unwrap(), rel(3, &["101", "010"]));
        let none = ForbiddenSet::new(vec![]).unwrap();
        assert!(build_pn(&none, 3).unwrap().is_full());
        let both = ForbiddenSet::new(vec![Tournament::transitive(3), Tournament::directed_triangle()]).unwrap();
        assert!(build_pn(&both, 3).unwrap().is_empty());
        assert!(matches!(build_pn(&t3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn q3_relations() {
        // parity is not an isomorphism invariant: (1,0,1) has parity 0, (0,1,0) parity 1
        assert_eq!(Tournament::from_bits(3, 0b010).unwrap().triple_encode().bits(), 1);
        let t3 = ForbiddenSet::new(vec![Tournament::transitive(3)]).unwrap();
        assert_eq!(build_qn(&t3, 3).unwrap(), rel(1, &["0", "1"]));
        let none = ForbiddenSet::new(vec![]).unwrap();
        assert_eq!(build_qn(&none, 3).unwrap(), rel(1, &["0", "1"]));
        let all = ForbiddenSet::new(vec![Tournament::transitive(3), Tournament::directed_triangle()]).unwrap();
        assert!(build_qn(&all, 3).unwrap().is_empty());
    }

    #[test]
    fn directed_triangle_witness() {
        let c3 = ForbiddenSet::new(vec![Tournament::directed_triangle()]).unwrap();
        let p3 = build_pn(&c3, 3).unwrap();
        let (a, b, c) = (t("110"), t("011"), t("111"));
        assert!(p3.contains(a) && p3.contains(b) && p3.contains(c));
        assert_eq!(a ^ b ^ c, t("010"));
        assert!(!p3.contains(t("010")));
        let (x, y, z) = p3.minority_witness().unwrap();
        assert!(p3.contains(x) && p3.contains(y) && p3.contains(z));
        assert!(!p3.contains(x ^ y ^ z));
        assert!(!p3.preserved_by(Op::Minority));
    }

    #[test]
    fn full_and_small_relations() {
        let full = BoolRelation::full(4).unwrap();
        for op in Op::ALL {
            assert!(full.preserved_by(op), "{op:?}");
        }
        let r = rel(3, &["101", "010"]);
        assert!(r.preserved_by(Op::Minority));
        assert!(r.minority_closed_exhaustive());
        assert!(!r.preserved_by(Op::Min));
        assert!(!r.preserved_by(Op::Max));
        assert!(!r.preserved_by(Op::Const0));
        assert!(rel(2, &["00", "01"]).preserved_by(Op::Min));
        assert!(rel(2, &["00", "01"]).preserved_by(Op::Max));
        assert!(!rel(2, &["01", "10"]).preserved_by(Op::Min));
        assert!(rel(2, &["01", "10"]).preserved_by(Op::Majority));
        assert!(!rel(3, &["110", "101", "011"]).preserved_by(Op::Majority));
    }

    #[test]
    fn affine_rep_of_t3_free_triples() {
        let r = rel(3, &["101", "010"]);
        let rep = r.affine_representation().unwrap();
        assert_eq!(rep.dimension(), Some(1));
        for x in 0..8 {
            assert_eq!(rep.satisfied_by(x), r.contains(x));
        }
        // x1+x2 = 1 and x2+x3 = 1 hold on the relation
        for x in r.iter() {
            assert!(parity(x & 0b011) && parity(x & 0b110));
        }
    }

    #[test]
    fn affine_rep_edge_cases() {
        let empty = BoolRelation::empty(3).unwrap();
        let rep = empty.affine_representation().unwrap();
        assert_eq!(rep.equations, vec![(0, true)]);
        assert_eq!(rep.dimension(), None);
        assert!(BoolRelation::full(5)
            .unwrap()
            .affine_representation()
            .unwrap()
            .equations
            .is_empty());
        let bad = rel(3, &["110", "011", "111"]);
        match bad.affine_representation() {
            Err(Error::NotAffine { witness }) => assert!(!bad.contains(witness)),
            other => panic!("expected NotAffine, got {other:?}"),
        }
    }

    #[test]
    fn sparse_store_behaves_like_dense() {
        let tuples = [0u64, 1 << 30, (1 << 30) | 5, 5];
        let sparse = BoolRelation::from_tuples(31, tuples).unwrap();
        assert_eq!(sparse.len(), 4);
        assert!(sparse.preserved_by(Op::Minority));
        assert!(sparse.preserved_by(Op::Min));
        assert!(sparse.preserved_by(Op::Max));
        assert!(sparse.preserved_by(Op::Majority));
        assert!(BoolRelation::from_tuples(3, [8]).is_err());
    }
}
