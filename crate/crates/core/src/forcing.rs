//! Forcing between symmetric edges and the gadget constructions built on it.
//!
//! `(x, y)` forces `(u, v)` when both edges are free and every F-free
//! completion that orients `x -> y` also orients `u -> v`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::compile::Solver;
use crate::digraph::PartialDigraph;
use crate::error::{Error, Result};

/// A partial digraph with named terminal vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedDigraph {
    pub digraph: PartialDigraph,
    pub terminals: BTreeMap<String, usize>,
}

impl MarkedDigraph {
    pub fn new(digraph: PartialDigraph, terminals: &[(&str, usize)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(name, v) in terminals {
            if v >= digraph.n() {
                return Err(Error::Input(format!("terminal {name} = {v} out of range")));
            }
            if map.values().any(|&w| w == v) {
                return Err(Error::Input(format!("terminal {name} reuses vertex {v}")));
            }
            map.insert(name.to_string(), v);
        }
        Ok(MarkedDigraph {
            digraph,
            terminals: map,
        })
    }

    pub fn terminal(&self, name: &str) -> Result<usize> {
        self.terminals
            .get(name)
            .copied()
            .ok_or_else(|| Error::Input(format!("no terminal named {name}")))
    }

    pub fn pair(&self, a: &str, b: &str) -> Result<(usize, usize)> {
        Ok((self.terminal(a)?, self.terminal(b)?))
    }

    /// The terminal pairs `(x, y)` and `(u, v)`.
    pub fn xyuv(&self) -> Result<((usize, usize), (usize, usize))> {
        Ok((self.pair("x", "y")?, self.pair("u", "v")?))
    }
}

fn require_symmetric(d: &PartialDigraph, (a, b): (usize, usize)) -> Result<()> {
    if d.is_symmetric_edge(a, b) {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "{{{}, {}}} is not a symmetric edge",
            a + 1,
            b + 1
        )))
    }
}

/// Both orientations of `{x, y}` extend to an F-free completion.
pub fn is_free_edge(solver: &Solver, d: &PartialDigraph, x: usize, y: usize) -> Result<bool> {
    require_symmetric(d, (x, y))?;
    Ok(solver.completable(&d.fix(x, y)?)? && solver.completable(&d.fix(y, x)?)?)
}

/// Outcome of a forcing query with its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingCertificate {
    /// Fixing both arcs leaves no F-free completion.
    Forces { fixing: [(usize, usize); 2] },
    /// Fixing this arc leaves no F-free completion, so its edge is not free.
    NotFree { arc: (usize, usize) },
    /// A completion containing `x -> y` and `v -> u`.
    Counterexample { arcs: Vec<(usize, usize)> },
}

impl ForcingCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, ForcingCertificate::Forces { .. })
    }
}

pub fn check_forcing(
    solver: &Solver,
    d: &PartialDigraph,
    (x, y): (usize, usize),
    (u, v): (usize, usize),
) -> Result<ForcingCertificate> {
    require_symmetric(d, (x, y))?;
    require_symmetric(d, (u, v))?;
    for (a, b) in [(x, y), (y, x), (u, v), (v, u)] {
        if !solver.completable(&d.fix(a, b)?)? {
            return Ok(ForcingCertificate::NotFree { arc: (a, b) });
        }
    }
    if (u, v) == (x, y) {
        return Ok(ForcingCertificate::Forces {
            fixing: [(x, y), (x, y)],
        });
    }
    let with_xy = d.fix(x, y)?;
    if (u, v) == (y, x) {
        let c = solver.complete(&with_xy)?.expect("free edge has a completion");
        return Ok(ForcingCertificate::Counterexample { arcs: c.arcs() });
    }
    match solver.complete(&with_xy.fix(v, u)?)? {
        None => Ok(ForcingCertificate::Forces {
            fixing: [(x, y), (v, u)],
        }),
        Some(c) => Ok(ForcingCertificate::Counterexample { arcs: c.arcs() }),
    }
}

pub fn forces(solver: &Solver, d: &PartialDigraph, xy: (usize, usize), uv: (usize, usize)) -> Result<bool> {
    Ok(check_forcing(solver, d, xy, uv)?.holds())
}

/// Least underlying-graph distance between a vertex of one pair and a vertex of the other.
pub fn pair_distance(d: &PartialDigraph, (x, y): (usize, usize), (u, v): (usize, usize)) -> Option<usize> {
    [(x, u), (x, v), (y, u), (y, v)]
        .into_iter()
        .filter_map(|(a, b)| d.distance(a, b))
        .min()
}

/// Merges the listed vertex pairs; returns the quotient and the vertex map.
fn quotient(d: &PartialDigraph, merge: &[(usize, usize)]) -> Result<(PartialDigraph, Vec<usize>)> {
    let n = d.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(a, b) in merge {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut map = vec![0; n];
    let mut next = 0;
    for v in 0..n {
        let r = root(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        map[v] = label[r];
    }
    let mut q = PartialDigraph::new(next);
    for (a, b) in d.arcs() {
        if map[a] == map[b] {
            return Err(Error::Contract(format!(
                "identification merges the ends of arc ({}, {})",
                a + 1,
                b + 1
            )));
        }
        q.add_arc(map[a], map[b])?;
    }
    Ok((q, map))
}

fn copies(d: &PartialDigraph, k: usize) -> PartialDigraph {
    let mut out = PartialDigraph::new(0);
    for _ in 0..k {
        out = out.disjoint_union(d).0;
    }
    out
}

fn distinct(vs: &[usize]) -> usize {
    let mut v = vs.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Two copies glued so that the forced pair of the first is the reversed
/// forced pair of the second; `(x1, y1)` then forces `(y2, x2)`.
fn glue_raw(d: &PartialDigraph, (x, y): (usize, usize), (u, v): (usize, usize)) -> Result<MarkedDigraph> {
    let n = d.n();
    let two = copies(d, 2);
    let (q, map) = quotient(&two, &[(u, v + n), (v, u + n)])?;
    MarkedDigraph::new(q, &[("x", map[x]), ("y", map[y]), ("u", map[y + n]), ("v", map[x + n])])
}

/// A chain of `k` copies, doubled into a ring; the terminal pairs force each
/// other and sit `k` copies apart in both directions.
fn amplify_raw(d: &PartialDigraph, (x, y): (usize, usize), (u, v): (usize, usize), k: usize) -> Result<MarkedDigraph> {
    // with one copy per half the ring folds onto itself and the fixed arcs
    // become symmetric, so the shortest chain used is two
    let k = k.max(2);
    let n = d.n();
    let total = 2 * k;
    let all = copies(d, total);
    let at = |copy: usize, w: usize| copy * n + w;
    let mut merge = Vec::new();
    for half in [0, k] {
        for i in 0..k - 1 {
            merge.push((at(half + i, u), at(half + i + 1, x)));
            merge.push((at(half + i, v), at(half + i + 1, y)));
        }
    }
    let (last1, first2, last2) = (k - 1, k, 2 * k - 1);
    merge.push((at(last1, u), at(first2, x)));
    merge.push((at(last2, u), at(0, x)));
    merge.push((at(last1, v), at(first2, y)));
    merge.push((at(last2, v), at(0, y)));
    let (q, map) = quotient(&all, &merge)?;
    MarkedDigraph::new(
        q,
        &[
            ("x", map[at(0, x)]),
            ("y", map[at(0, y)]),
            ("u", map[at(last1, u)]),
            ("v", map[at(last1, v)]),
        ],
    )
}

fn require_forcing(solver: &Solver, d: &PartialDigraph, xy: (usize, usize), uv: (usize, usize)) -> Result<()> {
    if forces(solver, d, xy, uv)? {
        Ok(())
    } else {
        Err(Error::Contract("the input pair does not force the output pair".into()))
    }
}

/// From `(x, y)` forcing `(u, v)` with three distinct vertices, a digraph
/// with four distinct terminals where `(x, y)` forces `(u, v)`.
pub fn glue_separate(
    solver: &Solver,
    d: &PartialDigraph,
    xy: (usize, usize),
    uv: (usize, usize),
) -> Result<MarkedDigraph> {
    if distinct(&[xy.0, xy.1, uv.0, uv.1]) != 3 {
        return Err(Error::Contract(
            "glue_separate needs exactly three distinct terminals".into(),
        ));
    }
    require_forcing(solver, d, xy, uv)?;
    glue_raw(d, xy, uv)
}

/// From `(x, y)` forcing `(u, v)` with four distinct vertices, a digraph whose
/// terminal pairs force each other at distance at least `k`.
pub fn distance_amplify(
    solver: &Solver,
    d: &PartialDigraph,
    xy: (usize, usize),
    uv: (usize, usize),
    k: usize,
) -> Result<MarkedDigraph> {
    if k == 0 {
        return Err(Error::Contract("distance_amplify needs k >= 1".into()));
    }
    if distinct(&[xy.0, xy.1, uv.0, uv.1]) != 4 {
        return Err(Error::Contract("distance_amplify needs four distinct terminals".into()));
    }
    require_forcing(solver, d, xy, uv)?;
    amplify_raw(d, xy, uv, k)
}

/// Three vertices `u, x, y`: symmetric `xy`, `uy`, arc `u -> x`. The forced
/// pair is `(u, y)`, so `v` is `y` and is not a separate terminal.
pub fn gadget_d1() -> MarkedDigraph {
    let (u, x, y) = (0, 1, 2);
    let d = PartialDigraph::from_arcs(3, &[(x, y), (y, x), (u, y), (y, u), (u, x)]).unwrap();
    MarkedDigraph::new(d, &[("x", x), ("y", y), ("u", u)]).unwrap()
}

/// Pairs `(x, y)` and `(u, v)` of the three-vertex gadget.
pub fn gadget_d1_pairs() -> ((usize, usize), (usize, usize)) {
    ((1, 2), (0, 2))
}

/// Four vertices `x, y, u, v`: symmetric `xy`, `uv`, `uy`; arcs `u -> x`, `y -> v`.
pub fn gadget_d2() -> MarkedDigraph {
    let (x, y, u, v) = (0, 1, 2, 3);
    let mut d = PartialDigraph::new(4);
    for (a, b) in [(x, y), (u, v), (u, y)] {
        d.add_edge(a, b).unwrap();
    }
    d.add_arc(u, x).unwrap();
    d.add_arc(y, v).unwrap();
    MarkedDigraph::new(d, &[("x", x), ("y", y), ("u", u), ("v", v)]).unwrap()
}

/// Eight vertices `1, 2, 3, 4, x, y, u, v`; the terminal pairs are two apart.
pub fn gadget_d3() -> MarkedDigraph {
    let (one, two, three, four, x, y, u, v) = (0, 1, 2, 3, 4, 5, 6, 7);
    let mut d = PartialDigraph::new(8);
    for (a, b) in [
        (one, two),
        (one, y),
        (x, four),
        (three, four),
        (three, v),
        (u, two),
        (x, y),
        (u, v),
    ] {
        d.add_edge(a, b).unwrap();
    }
    for (a, b) in [
        (one, x),
        (y, two),
        (u, one),
        (two, v),
        (three, u),
        (x, three),
        (v, four),
        (four, y),
    ] {
        d.add_arc(a, b).unwrap();
    }
    MarkedDigraph::new(d, &[("x", x), ("y", y), ("u", u), ("v", v)]).unwrap()
}

/// Mutually forcing pairs at distance two, built from the three-vertex
/// gadget by gluing and then amplifying with `k = 2`.
pub fn transfer_gadget() -> MarkedDigraph {
    let d1 = gadget_d1();
    let (xy, uv) = gadget_d1_pairs();
    let d2 = glue_raw(&d1.digraph, xy, uv).expect("gluing the three-vertex gadget");
    let (xy, uv) = d2.xyuv().unwrap();
    amplify_raw(&d2.digraph, xy, uv, 2).expect("amplifying the glued gadget")
}
