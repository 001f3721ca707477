//! Partially oriented digraphs: a symmetric edge `{a, b}` is an undecided
//! pair, a one-directional arc is a fixed orientation.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::forbidden::ForbiddenSet;
use crate::tournament::Tournament;

/// A loopless digraph on `0..n` stored as an adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialDigraph {
    n: usize,
    adj: Vec<bool>,
}

impl PartialDigraph {
    pub fn new(n: usize) -> Self {
        PartialDigraph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::new(n);
        for &(a, b) in arcs {
            d.add_arc(a, b)?;
        }
        Ok(d)
    }

    /// A graph: every edge becomes a symmetric pair of arcs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::new(n);
        for &(a, b) in edges {
            d.add_edge(a, b)?;
        }
        Ok(d)
    }

    pub fn complete(n: usize) -> Self {
        let mut d = Self::new(n);
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    d.adj[a * n + b] = true;
                }
            }
        }
        d
    }

    /// The tournament `t` as a fully oriented digraph.
    pub fn from_tournament(t: &Tournament) -> Self {
        Self::from_arcs(t.n(), &t.arcs()).expect("tournament arcs are valid")
    }

    fn check(&self, a: usize, b: usize) -> Result<()> {
        if a >= self.n || b >= self.n {
            return Err(Error::Input(format!(
                "arc ({a}, {b}) has a vertex outside 0..{}",
                self.n
            )));
        }
        if a == b {
            return Err(Error::Input(format!("loop at vertex {a}")));
        }
        Ok(())
    }

    pub fn add_arc(&mut self, a: usize, b: usize) -> Result<()> {
        self.check(a, b)?;
        self.adj[a * self.n + b] = true;
        Ok(())
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.add_arc(a, b)?;
        self.add_arc(b, a)
    }

    pub fn remove_arc(&mut self, a: usize, b: usize) {
        if a < self.n && b < self.n {
            self.adj[a * self.n + b] = false;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.n + b]
    }

    /// `{a, b}` is an edge of the underlying graph.
    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && (self.has_arc(a, b) || self.has_arc(b, a))
    }

    pub fn is_symmetric_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && a != b && self.has_arc(a, b) && self.has_arc(b, a)
    }

    /// Underlying-graph edges `(i, j)`, `i < j`, in lexicographic order.
    pub fn underlying_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Pairs present in both directions, `(i, j)` with `i < j`.
    pub fn sym_edges(&self) -> Vec<(usize, usize)> {
        self.underlying_edges()
            .into_iter()
            .filter(|&(i, j)| self.is_symmetric_edge(i, j))
            .collect()
    }

    /// Arcs present in one direction only.
    pub fn fixed_arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, j) in self.underlying_edges() {
            match (self.has_arc(i, j), self.has_arc(j, i)) {
                (true, false) => out.push((i, j)),
                (false, true) => out.push((j, i)),
                _ => {}
            }
        }
        out
    }

    /// All arcs, `(a, b)` meaning `a -> b`, ordered by `(a, b)`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.has_arc(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// No symmetric edges.
    pub fn is_oriented(&self) -> bool {
        self.sym_edges().is_empty()
    }

    /// `D - (b, a)`: keeps only `a -> b` on the symmetric edge `{a, b}`.
    pub fn fix(&self, a: usize, b: usize) -> Result<PartialDigraph> {
        if !self.is_symmetric_edge(a, b) {
            return Err(Error::Input(format!("{{{a}, {b}}} is not a symmetric edge")));
        }
        let mut d = self.clone();
        d.remove_arc(b, a);
        Ok(d)
    }

    /// Reverses every arc.
    pub fn reversed(&self) -> PartialDigraph {
        let mut d = Self::new(self.n);
        for (a, b) in self.arcs() {
            d.adj[b * self.n + a] = true;
        }
        d
    }

    /// True iff `other` has the same underlying graph and keeps every fixed arc of `self`.
    pub fn is_extended_by(&self, other: &PartialDigraph) -> bool {
        self.n == other.n
            && self.underlying_edges() == other.underlying_edges()
            && self
                .fixed_arcs()
                .into_iter()
                .all(|(a, b)| other.has_arc(a, b) && !other.has_arc(b, a))
    }

    /// `other` added as vertices `self.n()..`; returns the offset.
    pub fn disjoint_union(&self, other: &PartialDigraph) -> (PartialDigraph, usize) {
        let offset = self.n;
        let mut d = Self::new(self.n + other.n);
        for (a, b) in self.arcs() {
            d.adj[a * d.n + b] = true;
        }
        for (a, b) in other.arcs() {
            d.adj[(a + offset) * d.n + b + offset] = true;
        }
        (d, offset)
    }

    /// Cliques of the underlying graph with `2..=max_size` vertices, each
    /// sorted increasingly, listed in lexicographic order.
    pub fn cliques(&self, max_size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        for v in 0..self.n {
            current.push(v);
            let cand: Vec<usize> = (v + 1..self.n).filter(|&w| self.adjacent(v, w)).collect();
            self.extend_cliques(&mut current, &cand, max_size, &mut out);
            current.pop();
        }
        out
    }

    fn extend_cliques(&self, current: &mut Vec<usize>, cand: &[usize], max_size: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() >= max_size {
            return;
        }
        for (i, &w) in cand.iter().enumerate() {
            current.push(w);
            out.push(current.clone());
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&x| self.adjacent(w, x)).collect();
            self.extend_cliques(current, &next, max_size, out);
            current.pop();
        }
    }

    /// True iff the underlying graph contains a clique on `k` vertices.
    pub fn has_clique(&self, k: usize) -> bool {
        match k {
            0 | 1 => k <= self.n,
            _ => self.cliques(k).iter().any(|c| c.len() == k),
        }
    }

    /// Shortest-path length in the underlying graph; `None` when disconnected.
    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::from([a]);
        dist[a] = 0;
        while let Some(v) = queue.pop_front() {
            if v == b {
                return Some(dist[v]);
            }
            for w in 0..self.n {
                if self.adjacent(v, w) && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// The tournament induced on `vertices` (in the given order), if those
    /// vertices are pairwise joined by exactly one arc.
    pub fn induced_tournament(&self, vertices: &[usize]) -> Option<Tournament> {
        for (x, &a) in vertices.iter().enumerate() {
            for &b in &vertices[x + 1..] {
                if self.has_arc(a, b) == self.has_arc(b, a) {
                    return None;
                }
            }
        }
        Tournament::from_fn(vertices.len(), |i, j| self.has_arc(vertices[i], vertices[j])).ok()
    }

    /// Sub-digraph induced on `vertices`, relabeled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> PartialDigraph {
        let k = vertices.len();
        let mut d = Self::new(k);
        for i in 0..k {
            for j in 0..k {
                if i != j && self.has_arc(vertices[i], vertices[j]) {
                    d.adj[i * k + j] = true;
                }
            }
        }
        d
    }
}

/// True iff the oriented digraph `d` has no induced copy of a member of `forbidden`.
pub fn is_digraph_f_free(d: &PartialDigraph, forbidden: &ForbiddenSet) -> Result<bool> {
    if let Some(&(a, b)) = d.sym_edges().first() {
        return Err(Error::Input(format!(
            "symmetric edge {{{}, {}}} in a digraph that should be oriented",
            a + 1,
            b + 1
        )));
    }
    let Some(m) = forbidden.m_f() else {
        return Ok(true);
    };
    let sizes: Vec<usize> = forbidden.members().iter().map(|t| t.n()).collect();
    for clique in d.cliques(m) {
        if sizes.contains(&clique.len()) {
            let t = d.induced_tournament(&clique).expect("oriented clique");
            if forbidden.contains_iso(&t) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
