//! Labeled tournaments and their Boolean codings.
//!
//! Vertices are `0..n` internally; the text formats and the CLI use `1..=n`.
//! A tournament is stored as its pair tuple: position `p` of the tuple belongs
//! to the pair `(i, j)`, `i < j`, in lexicographic order
//! `(0,1), (0,2), .., (0,n-1), (1,2), .., (n-2,n-1)`, and bit `p` is set iff
//! the arc goes `i -> j`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest vertex count a [`Tournament`] can hold.
pub const MAX_VERTICES: usize = 10;

/// Largest `n` for which iso-class enumeration is allowed at all.
pub const ENUMERATION_HARD_CAP: usize = 8;

/// Default enumeration cap; `8` is opt-in.
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

/// Number of unordered pairs on `n` vertices.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Number of 3-element subsets of `n` vertices.
pub const fn triple_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Tuple position of the pair `{i, j}` on `n` vertices.
#[inline]
pub fn pair_position(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Bijection between 2-element subsets of `0..n` and tuple positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIndex {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairIndex {
    pub fn new(n: usize) -> Self {
        let mut pairs = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        PairIndex { n, pairs }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Position of `{i, j}`; the order of the arguments does not matter.
    pub fn position(&self, i: usize, j: usize) -> usize {
        pair_position(self.n, i, j)
    }

    /// The pair `(i, j)` with `i < j` stored at `pos`.
    pub fn pair(&self, pos: usize) -> (usize, usize) {
        self.pairs[pos]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

/// All 3-subsets `i < j < k` of `0..n` in lexicographic order.
pub fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(triple_count(n));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// A labeled tournament on `0..n`, stored as its pair tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: u8,
    bits: u64,
}

/// Triangle-parity coding of a tournament: entry `{i,j,k}` is the XOR of the
/// three pair bits, indexed by 3-subsets in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleCode {
    n: u8,
    bits: u128,
}

impl TripleCode {
    pub fn vertices(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        triple_count(self.n as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len()).map(|p| self.bits >> p & 1 == 1).collect()
    }
}

impl Tournament {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Domain(format!(
                "tournament vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(())
    }

    /// Builds a tournament from its pair tuple packed into an integer (bit `p` = position `p`).
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        Self::check_n(n)?;
        let m = pair_count(n);
        if m < 64 && bits >> m != 0 {
            return Err(Error::Format(format!("bit pattern {bits:#b} longer than {m} pairs")));
        }
        Ok(Tournament { n: n as u8, bits })
    }

    /// Inverse of [`Tournament::encode`].
    pub fn decode(n: usize, tuple: &[bool]) -> Result<Self> {
        Self::check_n(n)?;
        if tuple.len() != pair_count(n) {
            return Err(Error::Format(format!(
                "expected {} bits for n = {n}, got {}",
                pair_count(n),
                tuple.len()
            )));
        }
        let bits = tuple
            .iter()
            .enumerate()
            .fold(0u64, |acc, (p, &b)| acc | (b as u64) << p);
        Ok(Tournament { n: n as u8, bits })
    }

    /// The pair tuple `b_T`.
    pub fn encode(&self) -> Vec<bool> {
        (0..pair_count(self.n())).map(|p| self.bits >> p & 1 == 1).collect()
    }

    /// Builds a tournament from `beats(i, j)` evaluated for every `i < j`.
    pub fn from_fn(n: usize, beats: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::check_n(n)?;
        let mut bits = 0u64;
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                if beats(i, j) {
                    bits |= 1 << p;
                }
                p += 1;
            }
        }
        Ok(Tournament { n: n as u8, bits })
    }

    /// Builds a tournament from a list of arcs that covers every pair exactly once.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        Self::check_n(n)?;
        let m = pair_count(n);
        let mut seen = 0u64;
        let mut bits = 0u64;
        for &(a, b) in arcs {
            if a >= n || b >= n || a == b {
                return Err(Error::Input(format!("bad arc ({a}, {b}) for n = {n}")));
            }
            let p = pair_position(n, a, b);
            if seen >> p & 1 == 1 {
                return Err(Error::Input(format!("pair {{{a}, {b}}} given twice")));
            }
            seen |= 1 << p;
            if a < b {
                bits |= 1 << p;
            }
        }
        if seen.count_ones() as usize != m {
            return Err(Error::Input(format!(
                "{} of {m} pairs oriented; a tournament needs all of them",
                seen.count_ones()
            )));
        }
        Ok(Tournament { n: n as u8, bits })
    }

    /// `T_n`: the order `0 < 1 < .. < n-1`, all pair bits set.
    pub fn transitive(n: usize) -> Self {
        let m = pair_count(n);
        let bits = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Tournament::from_bits(n, bits).expect("valid transitive size")
    }

    /// The directed triangle `0 -> 1 -> 2 -> 0`, tuple `(1, 0, 1)`.
    pub fn directed_triangle() -> Self {
        Tournament { n: 3, bits: 0b101 }
    }

    /// `TC_4`: the switch of `T_4` at an inner vertex.
    pub fn tc4() -> Self {
        Self::from_arcs(4, &[(0, 1), (0, 2), (3, 0), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// `C_3^-`: a source dominating a directed triangle.
    pub fn c3_minus() -> Self {
        Self::from_arcs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 1), (2, 3)]).unwrap()
    }

    /// `C_3^+`: a directed triangle dominating a sink.
    pub fn c3_plus() -> Self {
        Self::from_arcs(4, &[(1, 0), (2, 0), (3, 0), (1, 2), (3, 1), (2, 3)]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The packed pair tuple.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.n())
    }

    /// True iff the arc between `i` and `j` goes `i -> j`.
    #[inline]
    pub fn beats(&self, i: usize, j: usize) -> bool {
        let p = pair_position(self.n(), i, j);
        let bit = self.bits >> p & 1 == 1;
        if i < j {
            bit
        } else {
            !bit
        }
    }

    /// Out-neighbourhood of `v` as a vertex bitmask.
    pub fn out_mask(&self, v: usize) -> u16 {
        let mut mask = 0u16;
        for w in 0..self.n() {
            if w != v && self.beats(v, w) {
                mask |= 1 << w;
            }
        }
        mask
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_mask(v).count_ones() as usize
    }

    /// All arcs `(i, j)` meaning `i -> j`, in pair order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        PairIndex::new(self.n())
            .iter()
            .map(|(i, j)| if self.beats(i, j) { (i, j) } else { (j, i) })
            .collect()
    }

    /// A tournament is transitive iff its out-degrees are pairwise distinct.
    pub fn is_transitive(&self) -> bool {
        let mut seen = 0u16;
        for v in 0..self.n() {
            let d = self.out_degree(v);
            if seen >> d & 1 == 1 {
                return false;
            }
            seen |= 1 << d;
        }
        true
    }

    /// Image under the relabeling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tournament {
        let n = self.n();
        debug_assert_eq!(perm.len(), n);
        let mut bits = 0u64;
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (perm[i], perm[j]);
                let forward = if a < b { self.beats(i, j) } else { self.beats(j, i) };
                if forward {
                    bits |= 1 << pair_position(n, a, b);
                }
                p += 1;
            }
        }
        debug_assert_eq!(p, pair_count(n));
        Tournament { n: self.n, bits }
    }

    /// Sub-tournament induced on the first `k` vertices.
    pub fn restrict(&self, k: usize) -> Result<Tournament> {
        if k == 0 || k > self.n() {
            return Err(Error::Domain(format!(
                "cannot restrict a {}-vertex tournament to {k} vertices",
                self.n()
            )));
        }
        // Pairs inside 0..k are not contiguous in the n-vertex tuple order.
        Tournament::from_fn(k, |i, j| self.beats(i, j))
    }

    /// Sub-tournament induced on `vertices`, relabeled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Tournament> {
        Tournament::from_fn(vertices.len(), |i, j| self.beats(vertices[i], vertices[j]))
    }

    /// Reverses every arc.
    pub fn flip(&self) -> Tournament {
        let m = pair_count(self.n());
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Tournament {
            n: self.n,
            bits: !self.bits & mask,
        }
    }

    /// Reverses every arc incident to `a`.
    pub fn switch(&self, a: usize) -> Result<Tournament> {
        let n = self.n();
        if a >= n {
            return Err(Error::Domain(format!("vertex {a} not in 0..{n}")));
        }
        let mask = (0..n)
            .filter(|&w| w != a)
            .fold(0u64, |acc, w| acc | 1 << pair_position(n, a, w));
        Ok(Tournament {
            n: self.n,
            bits: self.bits ^ mask,
        })
    }

    /// Arc-wise minority vote of three tournaments after restricting all of
    /// them to the smallest vertex count.
    pub fn minority(a: &Tournament, b: &Tournament, c: &Tournament) -> Tournament {
        let k = a.n().min(b.n()).min(c.n());
        let (a, b, c) = (a.restrict(k).unwrap(), b.restrict(k).unwrap(), c.restrict(k).unwrap());
        Tournament {
            n: k as u8,
            bits: a.bits ^ b.bits ^ c.bits,
        }
    }

    /// The triangle-parity code `c_T`; empty for fewer than three vertices.
    pub fn triple_encode(&self) -> TripleCode {
        let n = self.n();
        let mut bits = 0u128;
        for (p, (i, j, k)) in triples(n).into_iter().enumerate() {
            let parity = (self.bits >> pair_position(n, i, j))
                ^ (self.bits >> pair_position(n, i, k))
                ^ (self.bits >> pair_position(n, j, k));
            if parity & 1 == 1 {
                bits |= 1 << p;
            }
        }
        TripleCode { n: self.n, bits }
    }

    /// Tuple read as a number with position 0 most significant, so that
    /// numeric order equals lexicographic order of tuples.
    pub fn lex_key(&self) -> u64 {
        let m = pair_count(self.n());
        (0..m).fold(0u64, |acc, p| acc << 1 | (self.bits >> p & 1))
    }

    /// The relabeling whose tuple is lexicographically smallest.
    pub fn canonical_form(&self) -> Tournament {
        let n = self.n();
        if n <= 2 {
            // one labeled tournament per size up to isomorphism, tuple (0) is smaller than (1)
            return Tournament { n: self.n, bits: 0 };
        }
        let out: Vec<u16> = (0..n).map(|v| self.out_mask(v)).collect();
        let mut search = CanonicalSearch {
            out: &out,
            order: Vec::with_capacity(n),
            best: None,
            source: self,
        };
        search.run(vec![(0..n).collect()]);
        search.best.expect("search visits at least one leaf").1
    }

    pub fn is_isomorphic(&self, other: &Tournament) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// True iff some injective map sends `self` onto an induced sub-tournament of `host`.
    pub fn embeds_in(&self, host: &Tournament) -> bool {
        if self.n() > host.n() {
            return false;
        }
        let mut map = [0usize; MAX_VERTICES];
        embed_from(self, host, 0, &mut map, 0)
    }

    /// `true` iff no member of `family` embeds into `self`.
    pub fn is_free_of<'a>(&self, family: impl IntoIterator<Item = &'a Tournament>) -> bool {
        family.into_iter().all(|f| !f.embeds_in(self))
    }

    /// Compact text form `n:bits` with bits in pair order.
    pub fn to_compact(&self) -> String {
        let bits: String = self.encode().iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("{}:{}", self.n, bits)
    }
}

fn embed_from(
    pattern: &Tournament,
    host: &Tournament,
    depth: usize,
    map: &mut [usize; MAX_VERTICES],
    used: u16,
) -> bool {
    if depth == pattern.n() {
        return true;
    }
    for cand in 0..host.n() {
        if used >> cand & 1 == 1 {
            continue;
        }
        let consistent = (0..depth).all(|p| pattern.beats(p, depth) == host.beats(map[p], cand));
        if consistent {
            map[depth] = cand;
            if embed_from(pattern, host, depth + 1, map, used | 1 << cand) {
                return true;
            }
        }
    }
    false
}

/// Branch-and-bound over vertex orders. Rows of the tuple come in label order,
/// so the vertex receiving the next label must minimise its own row, and the
/// row is minimal exactly when every later cell lists in-neighbours first.
struct CanonicalSearch<'a> {
    out: &'a [u16],
    order: Vec<usize>,
    best: Option<(u64, Tournament)>,
    source: &'a Tournament,
}

impl CanonicalSearch<'_> {
    fn refine(&self, w: usize, cells: &[Vec<usize>]) -> (u64, Vec<Vec<usize>>) {
        let mut row = 0u64;
        let mut next = Vec::with_capacity(cells.len() + 1);
        for (idx, cell) in cells.iter().enumerate() {
            let rest = cell.iter().copied().filter(|&v| !(idx == 0 && v == w));
            let (ins, outs): (Vec<usize>, Vec<usize>) = rest.partition(|&v| self.out[v] >> w & 1 == 1);
            row = row << (ins.len() + outs.len()) | ((1u64 << outs.len()) - 1);
            if !ins.is_empty() {
                next.push(ins);
            }
            if !outs.is_empty() {
                next.push(outs);
            }
        }
        (row, next)
    }

    fn run(&mut self, cells: Vec<Vec<usize>>) {
        if cells.is_empty() {
            let n = self.order.len();
            let mut perm = vec![0usize; n];
            for (label, &v) in self.order.iter().enumerate() {
                perm[v] = label;
            }
            let t = self.source.relabel(&perm);
            let key = t.lex_key();
            if self.best.map_or(true, |(k, _)| key < k) {
                self.best = Some((key, t));
            }
            return;
        }
        let candidates: Vec<(usize, u64, Vec<Vec<usize>>)> = cells[0]
            .iter()
            .map(|&w| {
                let (row, next) = self.refine(w, &cells);
                (w, row, next)
            })
            .collect();
        let min_row = candidates.iter().map(|c| c.1).min().unwrap();
        for (w, row, next) in candidates {
            if row != min_row {
                continue;
            }
            self.order.push(w);
            self.run(next);
            self.order.pop();
        }
    }
}

impl Ord for Tournament {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for Tournament {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({})", self.to_compact())
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

static ISO_CLASSES: [OnceLock<Vec<Tournament>>; ENUMERATION_HARD_CAP + 1] =
    [const { OnceLock::new() }; ENUMERATION_HARD_CAP + 1];

/// Canonical representatives of all tournaments on `n` vertices, sorted. Cached.
pub(crate) fn iso_classes(n: usize) -> &'static [Tournament] {
    assert!((1..=ENUMERATION_HARD_CAP).contains(&n));
    ISO_CLASSES[n].get_or_init(|| {
        if n == 1 {
            return vec![Tournament { n: 1, bits: 0 }];
        }
        let smaller = iso_classes(n - 1);
        extend_classes(smaller, |_| true).into_iter().collect()
    })
}

/// Canonical forms of all one-vertex extensions of `base` accepted by `keep`.
pub(crate) fn extend_classes(base: &[Tournament], keep: impl Fn(&Tournament) -> bool) -> BTreeSet<Tournament> {
    let mut found = BTreeSet::new();
    for t in base {
        let k = t.n();
        for mask in 0u32..1 << k {
            // bit v of mask: new vertex k beats v
            let ext = Tournament::from_fn(k + 1, |i, j| if j == k { mask >> i & 1 == 0 } else { t.beats(i, j) })
                .expect("size checked by caller");
            if keep(&ext) {
                found.insert(ext.canonical_form());
            }
        }
    }
    found
}

/// All tournaments on `n` vertices: every labeled one (in tuple order) or one
/// canonical representative per isomorphism class (sorted).
pub fn enumerate_tournaments(n: usize, up_to_iso: bool, cap: usize) -> Result<Vec<Tournament>> {
    let cap = cap.min(ENUMERATION_HARD_CAP);
    if n == 0 || n > cap {
        return Err(Error::ResourceLimit(format!(
            "tournament enumeration for n = {n} outside 1..={cap}"
        )));
    }
    if up_to_iso {
        return Ok(iso_classes(n).to_vec());
    }
    let m = pair_count(n);
    let mut all: Vec<Tournament> = (0u64..1 << m).map(|bits| Tournament { n: n as u8, bits }).collect();
    all.sort();
    Ok(all)
}
