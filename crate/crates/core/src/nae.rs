//! Not-all-equal 3-SAT and its reduction to completing a partial digraph
//! without directed triangles.

use std::collections::BTreeMap;

use crate::digraph::PartialDigraph;
use crate::error::{Error, Result};
use crate::forcing::{transfer_gadget, MarkedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    /// Signed 1-based form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn value(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

/// Largest variable count for the truth-table check.
pub const TRUTH_TABLE_VARS: usize = 30;

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for c in &clauses {
            if let Some(l) = c.iter().find(|l| l.var >= num_vars) {
                return Err(Error::Input(format!(
                    "literal {} outside {num_vars} variables",
                    l.to_dimacs()
                )));
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    /// Parses `c` comment lines, a `p nae 3 <vars> <clauses>` header, then
    /// three signed integers per clause with an optional trailing `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "p" {
                if header.is_some() {
                    return Err(Error::parse(line_no, "second header line"));
                }
                match fields.as_slice() {
                    ["p", "nae", "3", v, c] => {
                        let v = v.parse().map_err(|_| Error::parse(line_no, "bad variable count"))?;
                        let c = c.parse().map_err(|_| Error::parse(line_no, "bad clause count"))?;
                        header = Some((v, c));
                    }
                    _ => return Err(Error::parse(line_no, "expected `p nae 3 <vars> <clauses>`")),
                }
                continue;
            }
            let Some((num_vars, _)) = header else {
                return Err(Error::parse(line_no, "clause before the `p nae 3` header"));
            };
            let mut nums = Vec::new();
            for f in &fields {
                let x: i64 = f
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("`{f}` is not an integer")))?;
                nums.push(x);
            }
            if nums.len() == 4 && nums[3] == 0 {
                nums.pop();
            }
            if nums.len() != 3 || nums.contains(&0) {
                return Err(Error::parse(line_no, "a clause has exactly three nonzero literals"));
            }
            let mut clause = [Literal::pos(0); 3];
            for (slot, &x) in clause.iter_mut().zip(&nums) {
                let var = x.unsigned_abs() as usize;
                if var > num_vars {
                    return Err(Error::parse(line_no, format!("variable {var} above {num_vars}")));
                }
                *slot = Literal {
                    var: var - 1,
                    positive: x > 0,
                };
            }
            clauses.push(clause);
        }
        let Some((num_vars, num_clauses)) = header else {
            return Err(Error::parse(last_line.max(1), "missing `p nae 3` header"));
        };
        if clauses.len() != num_clauses {
            return Err(Error::parse(
                last_line.max(1),
                format!("header announces {num_clauses} clauses, found {}", clauses.len()),
            ));
        }
        Formula::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p nae 3 {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!(
                "{} {} {} 0\n",
                c[0].to_dimacs(),
                c[1].to_dimacs(),
                c[2].to_dimacs()
            ));
        }
        out
    }

    /// Every clause has a true and a false literal.
    pub fn is_nae_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            let vals = c.map(|l| l.value(assignment));
            vals.contains(&true) && vals.contains(&false)
        })
    }

    /// A NAE-satisfying assignment by exhaustive search.
    pub fn nae_solve(&self) -> Result<Option<Vec<bool>>> {
        if self.num_vars > TRUTH_TABLE_VARS {
            return Err(Error::ResourceLimit(format!(
                "truth table over {} variables",
                self.num_vars
            )));
        }
        for mask in 0u64..1 << self.num_vars {
            let a: Vec<bool> = (0..self.num_vars).map(|v| mask >> v & 1 == 1).collect();
            if self.is_nae_satisfied_by(&a) {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    pub fn nae_satisfiable(&self) -> Result<bool> {
        Ok(self.nae_solve()?.is_some())
    }
}

/// The gadget digraph of a formula.
#[derive(Debug, Clone)]
pub struct NaeReduction {
    /// Terminals `p<i>`, `q<i>` per variable and `a<j>`, `b<j>`, `c<j>` per clause (1-based).
    pub marked: MarkedDigraph,
    /// `(p, q)` per variable; the variable is true iff the completion orients `p -> q`.
    pub variable_edges: Vec<(usize, usize)>,
}

impl NaeReduction {
    /// Reads the variable assignment off a completion.
    pub fn assignment(&self, completion: &PartialDigraph) -> Vec<bool> {
        self.variable_edges
            .iter()
            .map(|&(p, q)| completion.has_arc(p, q))
            .collect()
    }
}

struct Builder {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.arcs.push((a, b));
        self.arcs.push((b, a));
    }

    /// Copies `g` in, mapping its terminals `x, y, u, v` to the given host vertices.
    fn embed(&mut self, g: &MarkedDigraph, x: usize, y: usize, u: usize, v: usize) {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        for (name, host) in [("x", x), ("y", y), ("u", u), ("v", v)] {
            map.insert(g.terminals[name], host);
        }
        let local: Vec<usize> = (0..g.digraph.n())
            .map(|w| match map.get(&w) {
                Some(&h) => h,
                None => self.vertex(),
            })
            .collect();
        for (a, b) in g.digraph.arcs() {
            self.arcs.push((local[a], local[b]));
        }
    }
}

/// A partial digraph that has an orientation without directed triangles iff
/// `formula` is NAE-satisfiable.
///
/// Each clause gets a symmetric triangle `a, b, c`; the orientation of `ab`,
/// `bc`, `ca` read forwards gives the three literal values, and the triangle
/// is acyclic exactly when they are not all equal. Each literal pair is tied
/// to its variable edge `(p, q)` (or `(q, p)` when negated) through two
/// copies of the mutually forcing transfer gadget.
pub fn nae3sat_reduce(formula: &Formula) -> Result<NaeReduction> {
    let gadget = transfer_gadget();
    let mut b = Builder { n: 0, arcs: Vec::new() };
    let mut terminals: Vec<(String, usize)> = Vec::new();
    let mut variable_edges = Vec::new();
    for v in 0..formula.num_vars {
        let (p, q) = (b.vertex(), b.vertex());
        b.edge(p, q);
        variable_edges.push((p, q));
        terminals.push((format!("p{}", v + 1), p));
        terminals.push((format!("q{}", v + 1), q));
    }
    for (j, clause) in formula.clauses.iter().enumerate() {
        let tri = [b.vertex(), b.vertex(), b.vertex()];
        for (name, &w) in ["a", "b", "c"].iter().zip(&tri) {
            terminals.push((format!("{name}{}", j + 1), w));
        }
        for (k, lit) in clause.iter().enumerate() {
            let (s, t) = (tri[k], tri[(k + 1) % 3]);
            b.edge(s, t);
            let (l0, l1) = (b.vertex(), b.vertex());
            b.edge(l0, l1);
            b.embed(&gadget, l0, l1, s, t);
            let (p, q) = variable_edges[lit.var];
            if lit.positive {
                b.embed(&gadget, l0, l1, p, q);
            } else {
                b.embed(&gadget, l0, l1, q, p);
            }
        }
    }
    let digraph = PartialDigraph::from_arcs(b.n, &b.arcs)?;
    let named: Vec<(&str, usize)> = terminals.iter().map(|(s, v)| (s.as_str(), *v)).collect();
    Ok(NaeReduction {
        marked: MarkedDigraph::new(digraph, &named)?,
        variable_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_force_complete, DEFAULT_NODE_BUDGET};
    use crate::forbidden::ForbiddenSet;
    use crate::tournament::Tournament;

    fn c3() -> ForbiddenSet {
        ForbiddenSet::new(vec![Tournament::directed_triangle()]).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let text = "c example\np nae 3 3 2\n1 -2 3 0\n-1 2 2\n";
        let f = Formula::parse(text).unwrap();
        assert_eq!(f.num_vars, 3);
        assert_eq!(f.clauses[0], [Literal::pos(0), Literal::neg(1), Literal::pos(2)]);
        assert_eq!(Formula::parse(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(
            Formula::parse("p nae 3 2 1\n1 2 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Formula::parse("1 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            Formula::parse("p nae 3 3 2\n1 2 3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(Formula::parse("p nae 3 3 1\n1 2\n").is_err());
    }

    #[test]
    fn single_clauses() {
        let f = c3();
        let ok = Formula::new(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap();
        let red = nae3sat_reduce(&ok).unwrap();
        let comp = brute_force_complete(&red.marked.digraph, &f, DEFAULT_NODE_BUDGET)
            .unwrap()
            .expect("NAE-satisfiable");
        assert!(ok.is_nae_satisfied_by(&red.assignment(&comp)));
        let bad = Formula::new(1, vec![[Literal::pos(0); 3]]).unwrap();
        assert!(!bad.nae_satisfiable().unwrap());
        let red = nae3sat_reduce(&bad).unwrap();
        assert!(brute_force_complete(&red.marked.digraph, &f, DEFAULT_NODE_BUDGET)
            .unwrap()
            .is_none());
    }
}
