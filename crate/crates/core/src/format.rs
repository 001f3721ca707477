//! Text and JSON formats. Vertices are 1-based everywhere outside the library.
//!
//! Tournament: a `tournament <n>` header followed by arc lines `i j`, or the
//! compact `<n>:<bits>` form with bits in pair order, or a name (`T3`, `T<k>`,
//! `C3`, `TC4`, `C3+`, `C3-`).
//!
//! Forbidden set: blocks separated by blank lines. A block starting with a
//! `tournament` header holds one tournament; any other block lists one
//! compact or named tournament per line.
//!
//! Digraph: `digraph <n>` then arc lines `i j`, or `graph <n>` then edge lines
//! (each edge becomes a symmetric pair). `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::digraph::PartialDigraph;
use crate::error::{Error, Result};
use crate::forbidden::ForbiddenSet;
use crate::tournament::{pair_count, Tournament, MAX_VERTICES};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_vertex(field: &str, n: usize, line: usize) -> Result<usize> {
    let v: usize = field
        .parse()
        .map_err(|_| Error::parse(line, format!("`{field}` is not a vertex number")))?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn parse_header(line: &str, keyword: &str, line_no: usize) -> Result<usize> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        [k, n] if *k == keyword => n
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad vertex count `{n}`"))),
        _ => Err(Error::parse(line_no, format!("expected `{keyword} <n>`"))),
    }
}

/// Arc lines after a header; each entry is `(line number, i, j)`, 0-based vertices.
fn parse_arc_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>, n: usize) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields.as_slice() else {
            return Err(Error::parse(line_no, "expected two vertices `i j`"));
        };
        let (a, b) = (parse_vertex(a, n, line_no)?, parse_vertex(b, n, line_no)?);
        if a == b {
            return Err(Error::parse(line_no, "loops are not allowed"));
        }
        out.push((line_no, a, b));
    }
    Ok(out)
}

/// A single-line tournament: compact `<n>:<bits>` or a name.
pub fn parse_tournament_line(s: &str, line_no: usize) -> Result<Tournament> {
    let s = s.trim();
    let named = match s {
        "C3" => Some(Tournament::directed_triangle()),
        "TC4" => Some(Tournament::tc4()),
        "C3+" => Some(Tournament::c3_plus()),
        "C3-" => Some(Tournament::c3_minus()),
        _ => None,
    };
    if let Some(t) = named {
        return Ok(t);
    }
    if let Some(k) = s.strip_prefix('T').and_then(|k| k.parse::<usize>().ok()) {
        if !(1..=MAX_VERTICES).contains(&k) {
            return Err(Error::parse(
                line_no,
                format!("T{k} outside 1..={MAX_VERTICES} vertices"),
            ));
        }
        return Ok(Tournament::transitive(k));
    }
    let Some((n, bits)) = s.split_once(':') else {
        return Err(Error::parse(line_no, format!("unrecognised tournament `{s}`")));
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad vertex count `{n}`")))?;
    let bits: Vec<bool> = bits
        .trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::parse(line_no, format!("bit `{c}` is not 0 or 1"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != pair_count(n) {
        return Err(Error::parse(
            line_no,
            format!("{n} vertices need {} bits, got {}", pair_count(n), bits.len()),
        ));
    }
    Tournament::decode(n, &bits).map_err(|e| Error::parse(line_no, e.to_string()))
}

fn tournament_from_block(block: &[(usize, &str)]) -> Result<Tournament> {
    let (first_no, first) = block[0];
    let n = parse_header(first, "tournament", first_no)?;
    let arcs = parse_arc_lines(block[1..].iter().copied(), n)?;
    let last = block.last().map_or(first_no, |l| l.0);
    let plain: Vec<(usize, usize)> = arcs.iter().map(|&(_, a, b)| (a, b)).collect();
    Tournament::from_arcs(n, &plain).map_err(|e| Error::parse(last, e.to_string()))
}

/// Non-comment lines grouped by blank lines, with 1-based line numbers.
fn blocks(text: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            continue;
        }
        let line = strip_comment(raw);
        if !line.is_empty() {
            current.push((idx + 1, line));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// One tournament in any accepted form.
pub fn parse_tournament(text: &str) -> Result<Tournament> {
    let all: Vec<(usize, &str)> = blocks(text).into_iter().flatten().collect();
    match all.as_slice() {
        [] => Err(Error::parse(1, "empty tournament")),
        [(no, line)] if !line.starts_with("tournament") => parse_tournament_line(line, *no),
        _ => tournament_from_block(&all),
    }
}

/// Every tournament listed in a forbidden-set file, in file order.
pub fn parse_tournament_list(text: &str) -> Result<Vec<Tournament>> {
    let mut out = Vec::new();
    for block in blocks(text) {
        if block[0].1.starts_with("tournament") {
            out.push(tournament_from_block(&block)?);
        } else {
            for (no, line) in block {
                out.push(parse_tournament_line(line, no)?);
            }
        }
    }
    Ok(out)
}

/// A forbidden set; isomorphic duplicates are dropped and counted by the set.
pub fn parse_forbidden(text: &str) -> Result<ForbiddenSet> {
    ForbiddenSet::new(parse_tournament_list(text)?)
}

pub fn write_tournament(t: &Tournament) -> String {
    let mut out = format!("tournament {}\n", t.n());
    for (a, b) in t.arcs() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

pub fn write_forbidden(f: &ForbiddenSet) -> String {
    f.members()
        .iter()
        .map(|t| t.to_compact())
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

/// JSON mirror of the digraph formats; `edges` are symmetric, `arcs` one-way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub n: usize,
    #[serde(default)]
    pub arcs: Vec<(usize, usize)>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

impl DigraphJson {
    pub fn from_digraph(d: &PartialDigraph) -> Self {
        DigraphJson {
            n: d.n(),
            arcs: d.fixed_arcs().into_iter().map(|(a, b)| (a + 1, b + 1)).collect(),
            edges: d.sym_edges().into_iter().map(|(a, b)| (a + 1, b + 1)).collect(),
        }
    }

    pub fn to_digraph(&self) -> Result<PartialDigraph> {
        let mut d = PartialDigraph::new(self.n);
        let check = |v: usize| {
            if v == 0 || v > self.n {
                Err(Error::Format(format!("vertex {v} outside 1..={}", self.n)))
            } else {
                Ok(v - 1)
            }
        };
        for &(a, b) in &self.arcs {
            d.add_arc(check(a)?, check(b)?)?;
        }
        for &(a, b) in &self.edges {
            d.add_edge(check(a)?, check(b)?)?;
        }
        Ok(d)
    }
}

/// A digraph in text (`digraph`/`graph` header) or JSON form.
pub fn parse_digraph(text: &str) -> Result<PartialDigraph> {
    if text.trim_start().starts_with('{') {
        let json: DigraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        return json.to_digraph();
    }
    let lines: Vec<(usize, &str)> = blocks(text).into_iter().flatten().collect();
    let Some(&(first_no, first)) = lines.first() else {
        return Err(Error::parse(1, "empty digraph"));
    };
    let symmetric = first.starts_with("graph");
    let n = parse_header(first, if symmetric { "graph" } else { "digraph" }, first_no)?;
    let mut d = PartialDigraph::new(n);
    for (_, a, b) in parse_arc_lines(lines[1..].iter().copied(), n)? {
        if symmetric {
            d.add_edge(a, b)?;
        } else {
            d.add_arc(a, b)?;
        }
    }
    Ok(d)
}

/// Text form: `graph` when every arc is symmetric, else `digraph` with every arc listed.
pub fn write_digraph(d: &PartialDigraph) -> String {
    let arcs = d.arcs();
    let all_symmetric = arcs.iter().all(|&(a, b)| d.has_arc(b, a));
    if all_symmetric && !arcs.is_empty() {
        let mut out = format!("graph {}\n", d.n());
        for (a, b) in d.underlying_edges() {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        return out;
    }
    let mut out = format!("digraph {}\n", d.n());
    for (a, b) in arcs {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}
