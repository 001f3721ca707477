//! Linear systems over GF(2) with bit-packed rows.

use std::fmt;

const WORD: usize = 64;

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                row.flip(i);
            }
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of set bits, increasing.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * WORD + b)
            })
        })
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        self.ones().find(|&i| i >= start)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitRow({s})")
    }
}

/// Equations `coeffs . x = rhs` over `num_vars` unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2System {
    num_vars: usize,
    rows: Vec<(BitRow, bool)>,
}

/// Outcome of [`GF2System::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Feasible(Vec<bool>),
    Infeasible,
}

/// Reduced row-echelon form of a system.
#[derive(Debug, Clone)]
pub struct Echelon {
    num_vars: usize,
    /// Nonzero rows; row `r` has its pivot at `pivots[r]`, pivots increase.
    rows: Vec<(BitRow, bool)>,
    pivots: Vec<usize>,
    consistent: bool,
}

impl GF2System {
    pub fn new(num_vars: usize) -> Self {
        GF2System {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[(BitRow, bool)] {
        &self.rows
    }

    /// Adds `XOR of vars = rhs`; a variable listed twice cancels.
    pub fn add_equation(&mut self, vars: &[usize], rhs: bool) {
        let mut row = BitRow::zeros(self.num_vars);
        for &v in vars {
            assert!(v < self.num_vars, "variable {v} out of range");
            row.flip(v);
        }
        self.rows.push((row, rhs));
    }

    pub fn add_row(&mut self, row: BitRow, rhs: bool) {
        assert_eq!(row.len(), self.num_vars, "row length");
        self.rows.push((row, rhs));
    }

    pub fn is_satisfied_by(&self, x: &[bool]) -> bool {
        let x = BitRow::from_bools(x);
        self.rows.iter().all(|(row, rhs)| row.dot(&x) == *rhs)
    }

    /// Gauss-Jordan elimination, pivoting on the lowest available column.
    pub fn eliminate(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        let mut col = 0;
        while top < rows.len() && col < self.num_vars {
            // next pivot column is the lowest set bit among the remaining rows
            let Some((r, c)) = rows[top..]
                .iter()
                .enumerate()
                .filter_map(|(r, (row, _))| row.first_one_from(col).map(|c| (top + r, c)))
                .min_by_key(|&(r, c)| (c, r))
            else {
                break;
            };
            rows.swap(top, r);
            let (pivot_row, pivot_rhs) = rows[top].clone();
            for (i, (row, rhs)) in rows.iter_mut().enumerate() {
                if i != top && row.get(c) {
                    row.xor_assign(&pivot_row);
                    *rhs ^= pivot_rhs;
                }
            }
            pivots.push(c);
            top += 1;
            col = c + 1;
        }
        let consistent = rows[top..].iter().all(|(_, rhs)| !rhs);
        rows.truncate(top);
        Echelon {
            num_vars: self.num_vars,
            rows,
            pivots,
            consistent,
        }
    }

    /// One solution with every free variable set to 0.
    pub fn solve(&self) -> Solution {
        self.eliminate().solve()
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank()
    }

    /// log2 of the number of solutions, absent when there are none.
    pub fn count_exponent(&self) -> Option<usize> {
        self.eliminate().count_exponent()
    }

    /// Up to `limit` solutions, in Gray-code order over the free variables.
    pub fn enumerate_solutions(&self, limit: usize) -> Vec<Vec<bool>> {
        self.eliminate().enumerate(limit)
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn count_exponent(&self) -> Option<usize> {
        self.consistent.then(|| self.num_vars - self.rank())
    }

    pub fn free_vars(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.num_vars];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.num_vars).filter(|&v| !is_pivot[v]).collect()
    }

    pub fn solve(&self) -> Solution {
        if !self.consistent {
            return Solution::Infeasible;
        }
        let mut x = vec![false; self.num_vars];
        for ((_, rhs), &p) in self.rows.iter().zip(&self.pivots) {
            x[p] = *rhs;
        }
        Solution::Feasible(x)
    }

    pub fn enumerate(&self, limit: usize) -> Vec<Vec<bool>> {
        let Solution::Feasible(first) = self.solve() else {
            return Vec::new();
        };
        if limit == 0 {
            return Vec::new();
        }
        // toggling free variable f also toggles every pivot whose row mentions f
        let toggles: Vec<BitRow> = self
            .free_vars()
            .into_iter()
            .map(|f| {
                let mut t = BitRow::zeros(self.num_vars);
                t.flip(f);
                for ((row, _), &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        t.flip(p);
                    }
                }
                t
            })
            .collect();
        let mut current = BitRow::from_bools(&first);
        let mut out = vec![first];
        let total: u128 = 1u128.checked_shl(toggles.len() as u32).unwrap_or(u128::MAX);
        let mut step: u128 = 1;
        while out.len() < limit && step < total {
            current.xor_assign(&toggles[step.trailing_zeros() as usize]);
            out.push(current.to_bools());
            step += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_xor_equation() {
        let mut s = GF2System::new(2);
        s.add_equation(&[0, 1], true);
        assert_eq!(s.solve(), Solution::Feasible(vec![true, false]));
        assert_eq!(s.count_exponent(), Some(1));
    }

    #[test]
    fn contradiction() {
        let mut s = GF2System::new(1);
        s.add_equation(&[0], false);
        s.add_equation(&[0], true);
        assert_eq!(s.solve(), Solution::Infeasible);
        assert_eq!(s.count_exponent(), None);
        assert!(s.enumerate_solutions(10).is_empty());
    }

    #[test]
    fn empty_system_is_free() {
        let s = GF2System::new(3);
        assert_eq!(s.count_exponent(), Some(3));
        assert_eq!(s.enumerate_solutions(100).len(), 8);
        assert_eq!(s.enumerate_solutions(5).len(), 5);
        assert!(s.enumerate_solutions(0).is_empty());
    }

    #[test]
    fn two_cycle_system() {
        let mut s = GF2System::new(3);
        s.add_equation(&[0, 1], true);
        s.add_equation(&[1, 2], true);
        assert_eq!(s.count_exponent(), Some(1));
        let mut sols = s.enumerate_solutions(10);
        sols.sort();
        assert_eq!(sols, vec![vec![false, true, false], vec![true, false, true]]);
    }

    #[test]
    fn duplicate_variables_cancel() {
        let mut s = GF2System::new(2);
        s.add_equation(&[0, 0], true);
        assert_eq!(s.solve(), Solution::Infeasible);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let n = 150;
        let mut s = GF2System::new(n);
        for i in 0..n - 1 {
            s.add_equation(&[i, i + 1], true);
        }
        assert_eq!(s.rank(), n - 1);
        let Solution::Feasible(x) = s.solve() else {
            panic!("feasible chain")
        };
        assert!(s.is_satisfied_by(&x));
        assert_eq!(s.enumerate_solutions(10).len(), 2);
    }
}
