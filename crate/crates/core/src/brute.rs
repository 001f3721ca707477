//! Exact backtracking over the undecided pairs, independent of the
//! relations `P_n`: it only knows the labeled codes of the forbidden
//! tournaments and checks them clique by clique.

use std::collections::HashSet;

use crate::digraph::PartialDigraph;
use crate::error::{Error, Result};
use crate::forbidden::ForbiddenSet;
use crate::tournament::for_each_permutation;

/// Default number of search nodes before giving up.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 30;

const UNSET: u8 = 2;

struct Search {
    n: usize,
    pairs: Vec<(usize, usize)>,
    value: Vec<u8>,
    /// Each clique lists its pair variables in tuple order and the index of its size table.
    cliques: Vec<(Vec<usize>, usize)>,
    var_cliques: Vec<Vec<usize>>,
    /// Labeled codes of forbidden tournaments, per member size.
    tables: Vec<HashSet<u64>>,
    trail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn new(d: &PartialDigraph, forbidden: &ForbiddenSet, budget: u64) -> Self {
        let pairs = d.underlying_edges();
        let n = d.n();
        let mut index = vec![usize::MAX; n * n];
        for (v, &(i, j)) in pairs.iter().enumerate() {
            index[i * n + j] = v;
        }
        let mut sizes: Vec<usize> = forbidden.members().iter().map(|t| t.n()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut tables = vec![HashSet::new(); sizes.len()];
        for t in forbidden.members() {
            let slot = sizes.binary_search(&t.n()).unwrap();
            for_each_permutation(t.n(), |p| {
                tables[slot].insert(t.relabel(p).bits());
            });
        }
        let mut cliques = Vec::new();
        let mut var_cliques = vec![Vec::new(); pairs.len()];
        if let Some(&max) = sizes.last() {
            for clique in d.cliques(max) {
                let Ok(slot) = sizes.binary_search(&clique.len()) else {
                    continue;
                };
                let mut vars = Vec::new();
                for (x, &a) in clique.iter().enumerate() {
                    for &b in &clique[x + 1..] {
                        vars.push(index[a * n + b]);
                    }
                }
                for &v in &vars {
                    var_cliques[v].push(cliques.len());
                }
                cliques.push((vars, slot));
            }
        }
        let mut value = vec![UNSET; pairs.len()];
        for (a, b) in d.fixed_arcs() {
            let v = index[a.min(b) * n + a.max(b)];
            value[v] = (a < b) as u8;
        }
        Search {
            n,
            pairs,
            value,
            cliques,
            var_cliques,
            tables,
            trail: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    /// Code of clique `c` if fully decided.
    fn code(&self, c: usize) -> Option<u64> {
        let (vars, _) = &self.cliques[c];
        let mut code = 0u64;
        for (p, &v) in vars.iter().enumerate() {
            match self.value[v] {
                UNSET => return None,
                b => code |= (b as u64) << p,
            }
        }
        Some(code)
    }

    fn violated(&self, c: usize) -> bool {
        self.code(c)
            .is_some_and(|code| self.tables[self.cliques[c].1].contains(&code))
    }

    fn assign(&mut self, v: usize, b: u8) {
        self.value[v] = b;
        self.trail.push(v);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.value[v] = UNSET;
        }
    }

    /// Checks the cliques around `queue` and forces single undecided pairs.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(v) = queue.pop() {
            for ci in 0..self.var_cliques[v].len() {
                let c = self.var_cliques[v][ci];
                let open: Vec<usize> = self.cliques[c]
                    .0
                    .iter()
                    .copied()
                    .filter(|&u| self.value[u] == UNSET)
                    .collect();
                match open.as_slice() {
                    [] => {
                        if self.violated(c) {
                            return false;
                        }
                    }
                    &[u] => {
                        self.value[u] = 0;
                        let bad0 = self.violated(c);
                        self.value[u] = 1;
                        let bad1 = self.violated(c);
                        self.value[u] = UNSET;
                        match (bad0, bad1) {
                            (true, true) => return false,
                            (true, false) => {
                                self.assign(u, 1);
                                queue.push(u);
                            }
                            (false, true) => {
                                self.assign(u, 0);
                                queue.push(u);
                            }
                            (false, false) => {}
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceLimit(format!(
                "backtracking exceeded {} nodes",
                self.budget
            )));
        }
        Ok(())
    }

    /// Undecided variables split into groups that share no clique, each in
    /// search order (most cliques first, then index).
    fn components(&self, vars: &[usize]) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.pairs.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &start in vars {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                k += 1;
                for &c in &self.var_cliques[v] {
                    for &u in &self.cliques[c].0 {
                        if self.value[u] == UNSET && comp[u] == usize::MAX {
                            comp[u] = id;
                            members.push(u);
                        }
                    }
                }
            }
            members.sort_by_key(|&v| (std::cmp::Reverse(self.var_cliques[v].len()), v));
            out.push(members);
        }
        out
    }

    fn next_open(&self, order: &[usize]) -> Option<usize> {
        order.iter().copied().find(|&v| self.value[v] == UNSET)
    }

    fn find(&mut self, order: &[usize]) -> Result<bool> {
        self.tick()?;
        let Some(v) = self.next_open(order) else {
            return Ok(true);
        };
        for b in 0..2 {
            let mark = self.trail.len();
            self.assign(v, b);
            if self.propagate(vec![v]) && self.find(order)? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn count(&mut self, order: &[usize]) -> Result<u128> {
        self.tick()?;
        let Some(v) = self.next_open(order) else {
            return Ok(1);
        };
        let mut total = 0u128;
        for b in 0..2 {
            let mark = self.trail.len();
            self.assign(v, b);
            if self.propagate(vec![v]) {
                total += self.count(order)?;
            }
            self.undo_to(mark);
        }
        Ok(total)
    }

    fn collect(&mut self, order: &[usize], limit: usize, out: &mut Vec<Vec<u8>>) -> Result<()> {
        self.tick()?;
        if out.len() >= limit {
            return Ok(());
        }
        let Some(v) = self.next_open(order) else {
            out.push(self.value.clone());
            return Ok(());
        };
        for b in 0..2 {
            let mark = self.trail.len();
            self.assign(v, b);
            if self.propagate(vec![v]) {
                self.collect(order, limit, out)?;
            }
            self.undo_to(mark);
        }
        Ok(())
    }

    /// Initial propagation from the fixed arcs; false if already violated.
    fn start(&mut self) -> bool {
        if (0..self.cliques.len()).any(|c| self.violated(c)) {
            return false;
        }
        let decided: Vec<usize> = (0..self.pairs.len()).filter(|&v| self.value[v] != UNSET).collect();
        self.propagate(decided)
    }

    fn open_vars(&self) -> Vec<usize> {
        (0..self.pairs.len()).filter(|&v| self.value[v] == UNSET).collect()
    }

    fn decode(&self, value: &[u8]) -> PartialDigraph {
        let mut d = PartialDigraph::new(self.n);
        for (&(i, j), &b) in self.pairs.iter().zip(value) {
            debug_assert_ne!(b, UNSET);
            let (a, b) = if b == 1 { (i, j) } else { (j, i) };
            d.add_arc(a, b).expect("pair in range");
        }
        d
    }
}

/// The first F-free completion in search order, or `None`.
pub fn brute_force_complete(
    d: &PartialDigraph,
    forbidden: &ForbiddenSet,
    budget: u64,
) -> Result<Option<PartialDigraph>> {
    let mut s = Search::new(d, forbidden, budget);
    if !s.start() {
        return Ok(None);
    }
    for comp in s.components(&s.open_vars()) {
        if !s.find(&comp)? {
            return Ok(None);
        }
    }
    Ok(Some(s.decode(&s.value)))
}

/// Exact number of F-free completions.
pub fn count_bruteforce(d: &PartialDigraph, forbidden: &ForbiddenSet, budget: u64) -> Result<u128> {
    let mut s = Search::new(d, forbidden, budget);
    if !s.start() {
        return Ok(0);
    }
    let mut total = 1u128;
    for comp in s.components(&s.open_vars()) {
        let c = s.count(&comp)?;
        total = total
            .checked_mul(c)
            .ok_or_else(|| Error::ResourceLimit("completion count overflows u128".into()))?;
        if total == 0 {
            break;
        }
    }
    Ok(total)
}

/// Up to `limit` F-free completions in search order.
pub fn enumerate_completions_bruteforce(
    d: &PartialDigraph,
    forbidden: &ForbiddenSet,
    budget: u64,
    limit: usize,
) -> Result<Vec<PartialDigraph>> {
    let mut s = Search::new(d, forbidden, budget);
    if !s.start() || limit == 0 {
        return Ok(Vec::new());
    }
    let mut order = s.open_vars();
    order.sort_by_key(|&v| (std::cmp::Reverse(s.var_cliques[v].len()), v));
    let mut raw = Vec::new();
    s.collect(&order, limit, &mut raw)?;
    Ok(raw.iter().map(|v| s.decode(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::is_digraph_f_free;
    use crate::tournament::{pair_position, Tournament};

    fn set(members: &[Tournament]) -> ForbiddenSet {
        ForbiddenSet::new(members.to_vec()).unwrap()
    }

    #[test]
    fn triangle_counts() {
        let t3 = set(&[Tournament::transitive(3)]);
        let k3 = PartialDigraph::complete(3);
        assert_eq!(count_bruteforce(&k3, &t3, DEFAULT_NODE_BUDGET).unwrap(), 2);
        let all = enumerate_completions_bruteforce(&k3, &t3, DEFAULT_NODE_BUDGET, 10).unwrap();
        assert_eq!(all.len(), 2);
        for d in &all {
            assert!(is_digraph_f_free(d, &t3).unwrap());
        }
        assert_eq!(
            count_bruteforce(&PartialDigraph::complete(4), &t3, DEFAULT_NODE_BUDGET).unwrap(),
            0
        );
    }

    #[test]
    fn edgeless_and_prefixed() {
        let f = set(&[Tournament::transitive(4)]);
        assert_eq!(count_bruteforce(&PartialDigraph::new(5), &f, 10).unwrap(), 1);
        let t4 = PartialDigraph::from_tournament(&Tournament::transitive(4));
        assert_eq!(count_bruteforce(&t4, &f, 10).unwrap(), 0);
        assert!(brute_force_complete(&t4, &f, 10).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let f = set(&[Tournament::transitive(4)]);
        let k6 = PartialDigraph::complete(6);
        assert!(matches!(count_bruteforce(&k6, &f, 5), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn counts_against_exhaustive_orientations() {
        // every orientation of K5 checked directly
        let f = set(&[Tournament::transitive(4)]);
        let d = PartialDigraph::complete(5);
        let pairs = d.underlying_edges();
        let mut expected = 0u128;
        for mask in 0u32..1 << pairs.len() {
            let t = Tournament::from_fn(5, |i, j| mask >> pair_position(5, i, j) & 1 == 1).unwrap();
            if f.admits(&t) {
                expected += 1;
            }
        }
        assert_eq!(count_bruteforce(&d, &f, DEFAULT_NODE_BUDGET).unwrap(), expected);
    }
}
