mod common;

use common::*;
use orient_core::brute::{
    brute_force_complete, count_bruteforce, enumerate_completions_bruteforce, DEFAULT_NODE_BUDGET,
};
use orient_core::compile::{build_sys3, build_sys4, build_sys_plus, compile, AffineModel, SolutionCount, Solver};
use orient_core::digraph::{is_digraph_f_free, PartialDigraph};
use orient_core::gf2::{GF2System, Solution};
use orient_core::relation::build_pn;
use orient_core::{Error, ForbiddenSet, Tournament};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn system() -> impl Strategy<Value = GF2System> {
    (1usize..=10).prop_flat_map(|n| {
        proptest::collection::vec((proptest::collection::vec(0..n, 0..5), any::<bool>()), 0..12).prop_map(move |rows| {
            let mut sys = GF2System::new(n);
            for (vars, rhs) in rows {
                sys.add_equation(&vars, rhs);
            }
            sys
        })
    })
}

fn brute_solutions(sys: &GF2System) -> usize {
    (0u32..1 << sys.num_vars())
        .filter(|m| {
            let x: Vec<bool> = (0..sys.num_vars()).map(|v| m >> v & 1 == 1).collect();
            sys.is_satisfied_by(&x)
        })
        .count()
}

fn partial_digraph(max_n: usize) -> impl Strategy<Value = PartialDigraph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_partial(&mut StdRng::seed_from_u64(seed), n))
}

proptest! {
    #[test]
    fn gf2_count_matches_enumeration(sys in system()) {
        let count = brute_solutions(&sys);
        match sys.solve() {
            Solution::Feasible(x) => {
                prop_assert!(sys.is_satisfied_by(&x));
                prop_assert_eq!(Some(count), sys.count_exponent().map(|e| 1usize << e));
                prop_assert_eq!(sys.rank() + sys.count_exponent().unwrap(), sys.num_vars());
            }
            Solution::Infeasible => {
                prop_assert_eq!(count, 0);
                prop_assert_eq!(sys.count_exponent(), None);
            }
        }
    }

    #[test]
    fn gf2_enumeration_is_complete_and_distinct(sys in system()) {
        let sols = sys.enumerate_solutions(usize::MAX);
        prop_assert_eq!(sols.len(), brute_solutions(&sys));
        let mut dedup = sols.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), sols.len());
        prop_assert!(sols.iter().all(|x| sys.is_satisfied_by(x)));
    }

    #[test]
    fn brute_force_matches_naive_oracle(d in partial_digraph(6), which in 0usize..6) {
        let sets = [
            set(&[t3()]),
            set(&[c3()]),
            set(&[t4(), Tournament::tc4()]),
            set(&[Tournament::c3_plus()]),
            set(&[t3(), Tournament::tc4()]),
            set(&[t4()]),
        ];
        let f = &sets[which];
        prop_assume!(d.sym_edges().len() <= 12);
        let naive = naive_count(&d, f) as u128;
        prop_assert_eq!(count_bruteforce(&d, f, DEFAULT_NODE_BUDGET).unwrap(), naive);
        let found = brute_force_complete(&d, f, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(found.is_some(), naive > 0);
        if let Some(c) = found {
            prop_assert!(d.is_extended_by(&c) && c.is_oriented());
            prop_assert!(is_digraph_f_free(&c, f).unwrap());
        }
    }

    #[test]
    fn pruning_keeps_the_solution_count(d in partial_digraph(7), which in 0usize..4) {
        let (_, f) = &affine_sets()[which];
        let model = AffineModel::new(f).unwrap();
        let count = |prune| model.system(&compile(&d, f, prune)).count_exponent();
        prop_assert_eq!(count(true), count(false));
    }

    #[test]
    fn flipping_everything_preserves_counts(d in partial_digraph(6), which in 0usize..5) {
        let members: Vec<Tournament> = match which {
            0 => vec![t3()],
            1 => vec![c3()],
            2 => vec![Tournament::c3_plus()],
            3 => vec![t4(), Tournament::tc4(), Tournament::c3_minus()],
            _ => vec![Tournament::tc4(), c3()],
        };
        let f = set(&members);
        let flipped = set(&members.iter().map(|t| t.flip()).collect::<Vec<_>>());
        prop_assert_eq!(
            count_bruteforce(&d, &f, DEFAULT_NODE_BUDGET).unwrap(),
            count_bruteforce(&d.reversed(), &flipped, DEFAULT_NODE_BUDGET).unwrap()
        );
    }

    #[test]
    fn every_affine_solution_is_verified(d in partial_digraph(7), which in 0usize..4) {
        let (_, f) = &affine_sets()[which];
        let solver = Solver::new(f).unwrap();
        for c in solver.enumerate_affine(&d, 16).unwrap() {
            prop_assert!(d.is_extended_by(&c));
            prop_assert!(is_digraph_f_free(&c, f).unwrap());
        }
    }
}

#[test]
fn enumerated_completions_are_distinct_and_free() {
    let f = set(&[t3()]);
    let d = PartialDigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let all = enumerate_completions_bruteforce(&d, &f, DEFAULT_NODE_BUDGET, 1000).unwrap();
    assert_eq!(all.len() as u64, naive_count(&d, &f));
    for (i, a) in all.iter().enumerate() {
        assert!(is_digraph_f_free(a, &f).unwrap());
        assert!(all[..i].iter().all(|b| b != a));
    }
}

#[test]
fn clique_check_path() {
    let all4 = set(&four_vertex());
    let solver = Solver::new(&all4).unwrap();
    let k4 = PartialDigraph::complete(4);
    assert_eq!(solver.solve_affine(&k4).unwrap().count, SolutionCount::Zero);
    let c5 = PartialDigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
    assert!(solver.completable(&c5).unwrap());

    // T3 and C3 forbidden: the clique path answers plain graphs
    let both = set(&[t3(), c3()]);
    let solver = Solver::new(&both).unwrap();
    assert!(solver.is_affine());
    assert_eq!(
        solver.solve_affine(&PartialDigraph::complete(3)).unwrap().count,
        SolutionCount::Zero
    );
}

#[test]
fn contract_error_outside_affine_sets() {
    let f = set(&[c3()]);
    let solver = Solver::new(&f).unwrap();
    let g = PartialDigraph::complete(3);
    assert!(matches!(solver.solve_affine(&g), Err(Error::Contract(_))));
    assert!(solver.enumerate_affine(&g, 4).is_err());
    // the general entry point falls back to backtracking
    assert!(solver.completable(&g).unwrap());
    assert!(matches!(AffineModel::new(&f), Err(Error::Contract(_))));
}

#[test]
fn node_budget_is_enforced() {
    let f = set(&[c3()]);
    let d = PartialDigraph::complete(7);
    assert!(matches!(count_bruteforce(&d, &f, 10), Err(Error::ResourceLimit(_))));
}

#[test]
fn k4_with_t4_and_tc4_forbidden_orients_to_a_cyclic_type() {
    let f = set(&[t4(), Tournament::tc4()]);
    let out = Solver::new(&f)
        .unwrap()
        .solve_affine(&PartialDigraph::complete(4))
        .unwrap();
    let o = out.orientation.unwrap();
    let t = o.induced_tournament(&[0, 1, 2, 3]).unwrap();
    assert!(same_up_to_relabeling(&t, &Tournament::c3_plus()) || same_up_to_relabeling(&t, &Tournament::c3_minus()));
    // the two cyclic types, each with 8 labelings
    assert_eq!(out.count, SolutionCount::PowerOfTwo(4));
}

#[test]
fn fixed_arc_on_triangle_gives_the_cycle() {
    let f = set(&[t3()]);
    let mut d = PartialDigraph::complete(3);
    d = d.fix(0, 1).unwrap();
    let out = Solver::new(&f).unwrap().solve_affine(&d).unwrap();
    assert_eq!(out.count, SolutionCount::PowerOfTwo(0));
    let o = out.orientation.unwrap();
    assert!(o.has_arc(0, 1) && o.has_arc(1, 2) && o.has_arc(2, 0));
}

#[test]
fn hand_described_parities() {
    // a Hamiltonian cycle p0 p1 p2 p3 of K4 is "even" when an even number of
    // its four steps follow the tournament's arcs
    let has_even_cycle = |t: &Tournament| {
        let mut p = vec![0, 1, 2, 3];
        loop {
            let forward = (0..4).filter(|&k| t.beats(p[k], p[(k + 1) % 4])).count();
            if forward % 2 == 0 {
                return true;
            }
            if !next_permutation(&mut p) {
                return false;
            }
        }
    };
    let [t4, tc4, plus, minus] = four_vertex();
    assert!(has_even_cycle(&t4) && has_even_cycle(&tc4));
    assert!(!has_even_cycle(&plus) && !has_even_cycle(&minus));
    // which is exactly what P_4 of {T4, TC4} says
    let p4 = build_pn(&set(&[t4, tc4]), 4).unwrap();
    for t in orient_core::tournament::enumerate_tournaments(4, false, 7).unwrap() {
        assert_eq!(p4.contains(t.bits()), !has_even_cycle(&t));
    }
    // C3+ has every out-degree even; the other three have an odd one
    let all_even = |t: &Tournament| (0..4).all(|v| t.out_degree(v) % 2 == 0);
    assert!(all_even(&plus));
    assert!(!all_even(&t4) && !all_even(&tc4) && !all_even(&minus));
    // only C3+ survives {T4, TC4, C3-}: 4! / |Aut(C3+)| = 8 labelings
    assert_eq!(build_pn(&set(&[t4, tc4, minus]), 4).unwrap().len(), 8);
}

#[test]
fn specialised_systems_match_generic_on_graphs() {
    let solvers: Vec<(String, ForbiddenSet)> = affine_sets().into_iter().map(|(n, f)| (n.to_string(), f)).collect();
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let d = random_partial(&mut rng, n);
        let exps: Vec<Option<usize>> = solvers
            .iter()
            .map(|(_, f)| match Solver::new(f).unwrap().solve_affine(&d).unwrap().count {
                SolutionCount::PowerOfTwo(e) => Some(e),
                _ => None,
            })
            .collect();
        assert_eq!(build_sys3(&d).0.count_exponent(), exps[0]);
        assert_eq!(build_sys4(&d).0.count_exponent(), exps[1]);
        assert_eq!(build_sys_plus(&d).0.count_exponent(), exps[2]);
    }
}
