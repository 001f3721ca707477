#![allow(dead_code)]

use std::collections::BTreeSet;

use orient_core::digraph::PartialDigraph;
use orient_core::nae::{Formula, Literal};
use orient_core::{ForbiddenSet, Tournament};
use rand::Rng;

pub fn set(members: &[Tournament]) -> ForbiddenSet {
    ForbiddenSet::new(members.to_vec()).unwrap()
}

pub fn t3() -> Tournament {
    Tournament::transitive(3)
}

pub fn c3() -> Tournament {
    Tournament::directed_triangle()
}

pub fn t4() -> Tournament {
    Tournament::transitive(4)
}

/// The four 4-vertex tournaments in the order T4, TC4, C3+, C3-.
pub fn four_vertex() -> [Tournament; 4] {
    [t4(), Tournament::tc4(), Tournament::c3_plus(), Tournament::c3_minus()]
}

/// The sets that the GF(2) path is checked on.
pub fn affine_sets() -> Vec<(&'static str, ForbiddenSet)> {
    let [t4, tc4, plus, minus] = four_vertex();
    vec![
        ("{T3}", set(&[t3()])),
        ("{T4,TC4}", set(&[t4, tc4])),
        ("{T4,TC4,C3-}", set(&[t4, tc4, minus])),
        ("{T4,TC4,C3+}", set(&[t4, tc4, plus])),
    ]
}

/// Every labeled simple graph on `n` vertices, as symmetric partial digraphs.
pub fn all_graphs(n: usize) -> impl Iterator<Item = PartialDigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(p, _)| mask >> p & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        PartialDigraph::from_edges(n, &edges).unwrap()
    })
}

/// Each pair is absent, a symmetric edge, or one of the two arcs.
pub fn random_partial(rng: &mut impl Rng, n: usize) -> PartialDigraph {
    let mut d = PartialDigraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            match rng.gen_range(0..10) {
                0..=2 => {}
                3..=7 => d.add_edge(i, j).unwrap(),
                8 => d.add_arc(i, j).unwrap(),
                _ => d.add_arc(j, i).unwrap(),
            }
        }
    }
    d
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect())
        .collect()
}

/// Completion count by listing every orientation of the symmetric edges and
/// testing every vertex subset against every member with a relabeling search.
pub fn naive_count(d: &PartialDigraph, forbidden: &ForbiddenSet) -> u64 {
    let n = d.n();
    let sym = d.sym_edges();
    assert!(sym.len() <= 20, "naive oracle is exponential in the edge count");
    let sizes: BTreeSet<usize> = forbidden.members().iter().map(|t| t.n()).collect();
    let candidate_sets: Vec<Vec<usize>> = sizes.iter().flat_map(|&k| subsets(n, k)).collect();
    let mut count = 0;
    for mask in 0u64..1 << sym.len() {
        let mut o = d.clone();
        for (p, &(a, b)) in sym.iter().enumerate() {
            if mask >> p & 1 == 1 {
                o.remove_arc(b, a);
            } else {
                o.remove_arc(a, b);
            }
        }
        let free = candidate_sets.iter().all(|vs| {
            if !vs.iter().all(|&a| vs.iter().all(|&b| a == b || o.adjacent(a, b))) {
                return true;
            }
            let t = Tournament::from_fn(vs.len(), |i, j| o.has_arc(vs[i], vs[j])).unwrap();
            !forbidden.members().iter().any(|m| same_up_to_relabeling(m, &t))
        });
        if free {
            count += 1;
        }
    }
    count
}

/// Isomorphism by trying every bijection, independent of canonical forms.
pub fn same_up_to_relabeling(a: &Tournament, b: &Tournament) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let n = a.n();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|i| (0..n).all(|j| i == j || a.beats(i, j) == b.beats(perm[i], perm[j]))) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

// Literals packed as `2 * var + negated`.
type Clause = [u8; 3];

fn rotate_min(c: Clause) -> Clause {
    [c, [c[1], c[2], c[0]], [c[2], c[0], c[1]]].into_iter().min().unwrap()
}

/// One formula per class of `k`-clause formulas over `vars` variables, up to
/// renaming variables, negating a variable everywhere, reordering clauses and
/// rotating literals inside a clause. Each of these maps the gadget digraph to
/// an isomorphic one.
pub fn nae_orbit_representatives(vars: usize, k: usize) -> Vec<Formula> {
    let lits = (2 * vars) as u8;
    let clauses: Vec<Clause> = {
        let mut all = BTreeSet::new();
        for a in 0..lits {
            for b in 0..lits {
                for c in 0..lits {
                    all.insert(rotate_min([a, b, c]));
                }
            }
        }
        all.into_iter().collect()
    };
    let mut group: Vec<Vec<u8>> = Vec::new();
    let mut perm: Vec<usize> = (0..vars).collect();
    loop {
        for signs in 0..1u32 << vars {
            group.push(
                (0..lits as usize)
                    .map(|l| (2 * perm[l / 2] + ((l % 2) ^ (signs >> (l / 2) & 1) as usize)) as u8)
                    .collect(),
            );
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut reps = Vec::new();
    let mut idx = vec![0usize; k];
    'outer: loop {
        let f: Vec<Clause> = idx.iter().map(|&i| clauses[i]).collect();
        let minimal = group.iter().all(|g| {
            let mut img: Vec<Clause> = f.iter().map(|c| rotate_min(c.map(|l| g[l as usize]))).collect();
            img.sort();
            img >= f
        });
        if minimal {
            reps.push(to_formula(vars, &f));
        }
        // next non-decreasing index tuple
        let mut p = k;
        while p > 0 {
            p -= 1;
            if idx[p] + 1 < clauses.len() {
                idx[p] += 1;
                for q in p + 1..k {
                    idx[q] = idx[p];
                }
                continue 'outer;
            }
        }
        break;
    }
    reps
}

fn to_formula(vars: usize, clauses: &[Clause]) -> Formula {
    let cl = clauses
        .iter()
        .map(|c| {
            c.map(|l| Literal {
                var: (l / 2) as usize,
                positive: l % 2 == 0,
            })
        })
        .collect();
    Formula::new(vars, cl).unwrap()
}

/// Every sequence of up to `max_clauses` clauses over `vars` variables.
pub fn all_formulas(vars: usize, max_clauses: usize) -> Vec<Formula> {
    let lits: Vec<Literal> = (0..vars).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
    let mut clauses = Vec::new();
    for &a in &lits {
        for &b in &lits {
            for &c in &lits {
                clauses.push([a, b, c]);
            }
        }
    }
    let mut out: Vec<Vec<[Literal; 3]>> = vec![Vec::new()];
    let mut frontier = out.clone();
    for _ in 0..max_clauses {
        let mut next = Vec::new();
        for f in &frontier {
            for c in &clauses {
                let mut g = f.clone();
                g.push(*c);
                next.push(g);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter()
        .skip(1)
        .map(|c| Formula::new(vars, c).unwrap())
        .collect()
}

pub fn random_formula(rng: &mut impl Rng, vars: usize, clauses: usize) -> Formula {
    let cl = (0..clauses)
        .map(|_| {
            [0; 3].map(|_| Literal {
                var: rng.gen_range(0..vars),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    Formula::new(vars, cl).unwrap()
}
