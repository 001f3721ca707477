//! Compilation of orientation instances to Boolean constraints and GF(2)
//! systems, and the affine solver built on them.
//!
//! There is one variable per pair `{i, j}`, `i < j`, of the underlying graph;
//! `x = 1` decodes to the arc `i -> j`.

use std::collections::HashMap;

use serde::Serialize;

use crate::brute::{self, DEFAULT_NODE_BUDGET};
use crate::digraph::{is_digraph_f_free, PartialDigraph};
use crate::error::{Error, Result};
use crate::forbidden::ForbiddenSet;
use crate::gf2::{GF2System, Solution};
use crate::relation::{build_pn, AffineRep};
use crate::tournament::Tournament;

/// A `P_l` constraint on the pairs of an `l`-clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Clique vertices, increasing.
    pub vertices: Vec<usize>,
    /// Variables of the clique's pairs in tuple order.
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationInstance {
    pub n: usize,
    /// Variable `v` is the pair `pairs[v]`, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    pub constraints: Vec<Constraint>,
    /// `(variable, value)` from the fixed arcs.
    pub fixings: Vec<(usize, bool)>,
    index: HashMap<(usize, usize), usize>,
}

impl OrientationInstance {
    pub fn num_vars(&self) -> usize {
        self.pairs.len()
    }

    /// Variable of the pair `{a, b}`.
    pub fn var(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    /// Orientation described by a full assignment.
    pub fn decode(&self, x: &[bool]) -> PartialDigraph {
        let mut d = PartialDigraph::new(self.n);
        for (&(i, j), &b) in self.pairs.iter().zip(x) {
            let (a, b) = if b { (i, j) } else { (j, i) };
            d.add_arc(a, b).expect("pair inside the vertex range");
        }
        d
    }
}

/// Variables for every underlying pair, a constraint for every clique of
/// `2..=m_F` vertices, and a fixing for every one-directional arc. With
/// `prune`, cliques strictly inside another listed clique are dropped.
pub fn compile(d: &PartialDigraph, forbidden: &ForbiddenSet, prune: bool) -> OrientationInstance {
    let pairs = d.underlying_edges();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(v, &p)| (p, v)).collect();
    let mut constraints = Vec::new();
    if let Some(m) = forbidden.m_f() {
        for clique in d.cliques(m) {
            if prune && clique.len() < m && has_common_neighbour(d, &clique) {
                continue;
            }
            let mut vars = Vec::new();
            for (x, &a) in clique.iter().enumerate() {
                for &b in &clique[x + 1..] {
                    vars.push(index[&(a, b)]);
                }
            }
            constraints.push(Constraint { vertices: clique, vars });
        }
    }
    let fixings = d
        .fixed_arcs()
        .into_iter()
        .map(|(a, b)| (index[&(a.min(b), a.max(b))], a < b))
        .collect();
    OrientationInstance {
        n: d.n(),
        pairs,
        constraints,
        fixings,
        index,
    }
}

fn has_common_neighbour(d: &PartialDigraph, clique: &[usize]) -> bool {
    (0..d.n()).any(|w| clique.iter().all(|&c| d.adjacent(c, w)))
}

/// Affine representations of `P_2 .. P_{m_F}`.
#[derive(Debug, Clone)]
pub struct AffineModel {
    reps: Vec<Option<AffineRep>>,
}

impl AffineModel {
    /// Fails with a contract error when some `P_n` is not minority-closed.
    pub fn new(forbidden: &ForbiddenSet) -> Result<Self> {
        let mut reps = vec![None; forbidden.m_f().map_or(0, |m| m + 1)];
        if let Some(m) = forbidden.m_f() {
            for (n, slot) in reps.iter_mut().enumerate().take(m + 1).skip(2) {
                match build_pn(forbidden, n)?.affine_representation() {
                    Ok(rep) => *slot = Some(rep),
                    Err(Error::NotAffine { .. }) => {
                        return Err(Error::Contract(format!(
                            "P_{n} is not closed under minority; the affine solver does not apply"
                        )))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(AffineModel { reps })
    }

    pub fn rep(&self, n: usize) -> Option<&AffineRep> {
        self.reps.get(n).and_then(|r| r.as_ref())
    }

    /// The linear system of a compiled instance.
    pub fn system(&self, instance: &OrientationInstance) -> GF2System {
        let mut sys = GF2System::new(instance.num_vars());
        for c in &instance.constraints {
            let rep = self.rep(c.vertices.len()).expect("constraint sizes stay within m_F");
            add_rep_rows(&mut sys, rep, &c.vars);
        }
        for &(v, value) in &instance.fixings {
            sys.add_equation(&[v], value);
        }
        sys
    }
}

fn add_rep_rows(sys: &mut GF2System, rep: &AffineRep, vars: &[usize]) {
    for &(mask, rhs) in &rep.equations {
        let eq: Vec<usize> = (0..rep.arity).filter(|p| mask >> p & 1 == 1).map(|p| vars[p]).collect();
        sys.add_equation(&eq, rhs);
    }
}

/// Number of solutions of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolutionCount {
    Zero,
    PowerOfTwo(usize),
    /// Only the clique test ran, which decides feasibility but does not count.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub orientation: Option<PartialDigraph>,
    pub count: SolutionCount,
}

/// Solver for a fixed `F`: the affine path when every `P_n` is
/// minority-closed, the clique test for `CliqueCheck` orientation instances,
/// and backtracking otherwise.
#[derive(Debug)]
pub struct Solver<'f> {
    forbidden: &'f ForbiddenSet,
    model: Option<AffineModel>,
    clique_bound: Option<usize>,
    /// Node budget for the backtracking fallback.
    pub budget: u64,
}

impl<'f> Solver<'f> {
    pub fn new(forbidden: &'f ForbiddenSet) -> Result<Self> {
        let model = match AffineModel::new(forbidden) {
            Ok(m) => Some(m),
            Err(Error::Contract(_)) => None,
            Err(e) => return Err(e),
        };
        let clique_bound = match forbidden.n_f() {
            Some(n) if forbidden.free_classes(n)?.is_empty() => Some(n),
            _ => None,
        };
        Ok(Solver {
            forbidden,
            model,
            clique_bound,
            budget: DEFAULT_NODE_BUDGET,
        })
    }

    pub fn forbidden(&self) -> &ForbiddenSet {
        self.forbidden
    }

    /// True iff the linear-algebra path applies to every instance.
    pub fn is_affine(&self) -> bool {
        self.model.is_some()
    }

    pub fn model(&self) -> Option<&AffineModel> {
        self.model.as_ref()
    }

    /// Solves through the linear system, or through the clique test for an
    /// instance without fixed arcs when `F` admits nothing on `n_F` vertices.
    pub fn solve_affine(&self, d: &PartialDigraph) -> Result<SolveOutcome> {
        if let Some(model) = &self.model {
            let instance = compile(d, self.forbidden, true);
            let sys = model.system(&instance);
            let echelon = sys.eliminate();
            let Solution::Feasible(x) = echelon.solve() else {
                return Ok(SolveOutcome {
                    orientation: None,
                    count: SolutionCount::Zero,
                });
            };
            let oriented = instance.decode(&x);
            self.check_solution(d, &oriented);
            let e = echelon.count_exponent().expect("consistent system");
            return Ok(SolveOutcome {
                orientation: Some(oriented),
                count: SolutionCount::PowerOfTwo(e),
            });
        }
        match self.clique_bound {
            Some(k) if d.fixed_arcs().is_empty() => {
                if d.has_clique(k) {
                    return Ok(SolveOutcome {
                        orientation: None,
                        count: SolutionCount::Zero,
                    });
                }
                // every clique is smaller than n_F, so the acyclic orientation
                // only produces transitive tournaments below the least forbidden one
                let mut oriented = PartialDigraph::new(d.n());
                for (i, j) in d.underlying_edges() {
                    oriented.add_arc(i, j)?;
                }
                self.check_solution(d, &oriented);
                Ok(SolveOutcome {
                    orientation: Some(oriented),
                    count: SolutionCount::Unknown,
                })
            }
            _ => Err(Error::Contract(
                "the affine solver needs every P_n closed under minority, \
                 or an orientation instance with a clique-check verdict"
                    .into(),
            )),
        }
    }

    fn check_solution(&self, d: &PartialDigraph, oriented: &PartialDigraph) {
        assert!(
            d.is_extended_by(oriented) && oriented.is_oriented(),
            "solver output does not extend the input"
        );
        assert!(
            is_digraph_f_free(oriented, self.forbidden).expect("oriented"),
            "solver output contains a forbidden tournament"
        );
    }

    /// Up to `limit` completions from the linear system.
    pub fn enumerate_affine(&self, d: &PartialDigraph, limit: usize) -> Result<Vec<PartialDigraph>> {
        let model = self
            .model
            .as_ref()
            .ok_or_else(|| Error::Contract("enumeration through GF(2) needs every P_n affine".into()))?;
        let instance = compile(d, self.forbidden, true);
        Ok(model
            .system(&instance)
            .enumerate_solutions(limit)
            .iter()
            .map(|x| instance.decode(x))
            .collect())
    }

    /// Some F-free completion, by the fastest applicable method.
    pub fn complete(&self, d: &PartialDigraph) -> Result<Option<PartialDigraph>> {
        match self.solve_affine(d) {
            Ok(out) => Ok(out.orientation),
            Err(Error::Contract(_)) => brute::brute_force_complete(d, self.forbidden, self.budget),
            Err(e) => Err(e),
        }
    }

    pub fn completable(&self, d: &PartialDigraph) -> Result<bool> {
        Ok(self.complete(d)?.is_some())
    }
}

/// One-shot affine solve.
pub fn solve_affine(d: &PartialDigraph, forbidden: &ForbiddenSet) -> Result<SolveOutcome> {
    Solver::new(forbidden)?.solve_affine(d)
}

/// Ordered-pair form of the transitive-triangle-free system: variables
/// `x_ab` and `x_ba` per underlying pair; returns the system and the ordered
/// pair of each variable.
pub fn build_sys3(d: &PartialDigraph) -> (GF2System, Vec<(usize, usize)>) {
    let mut ordered = Vec::new();
    for (i, j) in d.underlying_edges() {
        ordered.push((i, j));
        ordered.push((j, i));
    }
    let index: HashMap<(usize, usize), usize> = ordered.iter().enumerate().map(|(v, &p)| (p, v)).collect();
    let mut sys = GF2System::new(ordered.len());
    for (a, b) in d.fixed_arcs() {
        sys.add_equation(&[index[&(a, b)]], true);
    }
    for (i, j) in d.underlying_edges() {
        sys.add_equation(&[index[&(i, j)], index[&(j, i)]], true);
    }
    for tri in d.cliques(3).into_iter().filter(|c| c.len() == 3) {
        let [a, b, c] = [tri[0], tri[1], tri[2]];
        for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            sys.add_equation(&[index[&(i, j)], index[&(j, k)]], false);
        }
    }
    (sys, ordered)
}

fn sys_from_four_vertex_set(d: &PartialDigraph, members: Vec<Tournament>) -> (GF2System, Vec<(usize, usize)>) {
    let forbidden = ForbiddenSet::new(members).expect("valid 4-vertex members");
    let rep = build_pn(&forbidden, 4)
        .expect("P_4 in range")
        .affine_representation()
        .expect("P_4 is affine for this set");
    let instance = compile(d, &forbidden, false);
    let mut sys = GF2System::new(instance.num_vars());
    for c in instance.constraints.iter().filter(|c| c.vertices.len() == 4) {
        add_rep_rows(&mut sys, &rep, &c.vars);
    }
    for &(v, value) in &instance.fixings {
        sys.add_equation(&[v], value);
    }
    (sys, instance.pairs)
}

/// System whose solutions are the {T4, TC4}-free completions.
pub fn build_sys4(d: &PartialDigraph) -> (GF2System, Vec<(usize, usize)>) {
    sys_from_four_vertex_set(d, vec![Tournament::transitive(4), Tournament::tc4()])
}

/// System whose solutions are the {T4, TC4, C3-}-free completions.
pub fn build_sys_plus(d: &PartialDigraph) -> (GF2System, Vec<(usize, usize)>) {
    sys_from_four_vertex_set(
        d,
        vec![Tournament::transitive(4), Tournament::tc4(), Tournament::c3_minus()],
    )
}
