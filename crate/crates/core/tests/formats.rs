mod common;

use common::*;
use orient_core::brute::{brute_force_complete, DEFAULT_NODE_BUDGET};
use orient_core::digraph::PartialDigraph;
use orient_core::format::{
    parse_digraph, parse_forbidden, parse_tournament, write_digraph, write_forbidden, write_tournament, DigraphJson,
};
use orient_core::nae::{nae3sat_reduce, Formula, Literal};
use orient_core::tournament::pair_count;
use orient_core::{Error, Tournament};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #[test]
    fn tournament_text_round_trips(n in 1usize..=8, raw in any::<u64>()) {
        let bits = raw & ((1u64 << pair_count(n)) - 1);
        let t = Tournament::from_bits(n, bits).unwrap();
        prop_assert_eq!(parse_tournament(&write_tournament(&t)).unwrap(), t);
        prop_assert_eq!(parse_tournament(&t.to_compact()).unwrap(), t);
    }

    #[test]
    fn digraph_text_and_json_round_trip(n in 1usize..=9, seed in any::<u64>()) {
        let d = random_partial(&mut StdRng::seed_from_u64(seed), n);
        prop_assert_eq!(parse_digraph(&write_digraph(&d)).unwrap(), d.clone());
        let json = serde_json::to_string(&DigraphJson::from_digraph(&d)).unwrap();
        prop_assert_eq!(parse_digraph(&json).unwrap(), d);
    }

    #[test]
    fn formula_text_round_trips(seed in any::<u64>(), vars in 1usize..6, clauses in 0usize..6) {
        let f = random_formula(&mut StdRng::seed_from_u64(seed), vars, clauses);
        prop_assert_eq!(Formula::parse(&f.to_dimacs()).unwrap(), f);
    }
}

#[test]
fn forbidden_file_reports_duplicates() {
    let text = "# isomorphic copies of the triangle\nC3\n3:010\n\nT3\n\ntournament 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
    let f = parse_forbidden(text).unwrap();
    assert_eq!(f.len(), 3);
    assert_eq!(f.duplicates_removed(), 1);
    assert_eq!(parse_forbidden(&write_forbidden(&f)).unwrap(), f);
}

#[test]
fn parse_errors_point_at_lines() {
    let cases: [(&str, usize, bool); 4] = [
        ("tournament 3\n1 2\n2 x\n3 1\n", 3, false),
        ("digraph 3\n1 2\n\n4 1\n", 4, true),
        ("graph\n", 1, true),
        ("C3\n3:1111\n", 2, false),
    ];
    for (text, line, digraph) in cases {
        let err = if digraph {
            parse_digraph(text).unwrap_err()
        } else {
            parse_forbidden(text).unwrap_err()
        };
        match err {
            Error::Parse { line: l, .. } => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!(matches!(
        parse_digraph("{\"n\": 2, \"arcs\": [[1, 3]]}"),
        Err(Error::Format(_))
    ));
    assert!(matches!(parse_digraph("{\"n\": 2,"), Err(Error::Parse { .. })));
}

#[test]
fn graph_and_digraph_headers() {
    let g = parse_digraph("graph 3\n1 2\n2 3\n").unwrap();
    let d = parse_digraph("digraph 3\n1 2\n2 1\n2 3\n3 2\n").unwrap();
    assert_eq!(g, d);
    assert!(write_digraph(&g).starts_with("graph 3"));
    let mixed = PartialDigraph::from_arcs(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
    assert!(write_digraph(&mixed).starts_with("digraph 3"));
}

#[test]
fn reduction_examples() {
    let f = set(&[c3()]);
    let abc = Formula::new(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap();
    let aaa = Formula::new(1, vec![[Literal::pos(0); 3]]).unwrap();
    let red = nae3sat_reduce(&abc).unwrap();
    assert!(brute_force_complete(&red.marked.digraph, &f, DEFAULT_NODE_BUDGET)
        .unwrap()
        .is_some());
    let red = nae3sat_reduce(&aaa).unwrap();
    assert!(brute_force_complete(&red.marked.digraph, &f, DEFAULT_NODE_BUDGET)
        .unwrap()
        .is_none());
    // two per variable, three per clause, and per literal a pair plus the
    // four inner vertices of each of its two gadgets
    let red = nae3sat_reduce(&abc).unwrap();
    assert_eq!(red.marked.digraph.n(), 3 * 2 + 3 + 3 * (2 + 2 * 4));
    assert_eq!(red.marked.terminals.len(), 3 * 2 + 3);
}

#[test]
fn formulas_with_two_clauses_over_two_variables() {
    let f = set(&[c3()]);
    for formula in all_formulas(2, 2) {
        let red = nae3sat_reduce(&formula).unwrap();
        let comp = brute_force_complete(&red.marked.digraph, &f, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(
            comp.is_some(),
            formula.nae_satisfiable().unwrap(),
            "{}",
            formula.to_dimacs()
        );
    }
}

#[test]
fn orbit_representatives_cover_small_cases() {
    // single clauses: xxx, xx~x, xxy, x~xy, xyz
    assert_eq!(nae_orbit_representatives(4, 1).len(), 5);
    assert_eq!(nae_orbit_representatives(4, 2).len(), 119);
}
