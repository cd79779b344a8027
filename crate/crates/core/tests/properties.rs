use std::collections::BTreeMap;

use hopfloop::algebra::iterated_coproduct;
use hopfloop::evaluation::{evaluate_graph, evaluate_sum, leg_monomial, sigma_lv};
use hopfloop::oracle::{
    brute_force_edge_symmetry_factor, brute_force_symmetry_factor, enumerate_connected, zero_dim_log_z,
};
use hopfloop::{GenOptions, Generator, Label, Model, Monomial, OrderedGraph, Rational};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn legs(n: usize) -> Monomial {
    Monomial::from_names((1..=n).map(|i| format!("x{i}")))
}

/// Connected graph with up to 5 vertices, up to 3 extra edges and up to 3 legs.
fn connected_graph() -> impl Strategy<Value = OrderedGraph> {
    (1usize..=5).prop_flat_map(|v| {
        let tree = (1..v).map(|i| 0..i).collect::<Vec<_>>();
        let extra = prop::collection::vec((0..v, 0..v), 0..=3);
        let ext = prop::collection::vec(0..v, 0..=3);
        (Just(v), tree, extra, ext).prop_map(|(v, parents, extra, ext)| {
            let edges = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).chain(extra);
            let ext = ext.into_iter().enumerate().map(|(i, at)| (Label::external(format!("x{i}")), at));
            OrderedGraph::new(v, edges, ext).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn symmetry_factor_factorizes(g in connected_graph()) {
        prop_assert_eq!(brute_force_symmetry_factor(&g), g.vertex_symmetry_factor() * g.edge_symmetry_factor());
    }

    #[test]
    fn edge_factor_formula_matches_brute_force(g in connected_graph()) {
        prop_assert_eq!(brute_force_edge_symmetry_factor(&g), g.edge_symmetry_factor());
    }

    #[test]
    fn evaluation_ignores_vertex_order(g in connected_graph(), seed in any::<u64>()) {
        let v = g.vertex_count();
        let mut perm: Vec<usize> = (0..v).collect();
        let mut s = seed;
        for i in (1..v).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let model = Model::new(
            vec!["a".into(), "b".into()],
            vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]],
            (0..=9).map(|k| (k, r(k as i64 + 1, 3))).collect(),
            BTreeMap::new(),
        )
        .unwrap();
        let binding: BTreeMap<Label, usize> =
            g.externals().keys().enumerate().map(|(i, l)| (l.clone(), i % 2)).collect();
        let w = r(1, 2);
        prop_assert_eq!(
            evaluate_graph(&model, &g, &w, &binding).unwrap(),
            evaluate_graph(&model, &g.permuted(&perm), &w, &binding).unwrap()
        );
    }
}

#[test]
fn graph_oracle_evaluates_to_the_series() {
    // every (l, v) with e <= 4 and n <= 2, single label, all arities active
    let g = r(5, 3);
    let couplings: Vec<(usize, Rational)> = (1..=10).map(|k| (k, r(k as i64, k as i64 + 4))).collect();
    let model = Model::single_label(g.clone(), couplings.clone()).unwrap();
    let arities: Vec<usize> = couplings.iter().map(|(k, _)| *k).collect();
    let table = zero_dim_log_z(&arities, 5, 2).unwrap();
    for e in 0..=4usize {
        for l in 0..=e {
            let v = e - l + 1;
            for n in 0..=2 {
                let (m, binding) = leg_monomial(&vec![0; n]);
                let from_graphs = evaluate_sum(&model, &enumerate_connected(l, v, &m).unwrap(), &binding).unwrap();
                // λ_k = F_k / g^k; the series term is c · Π λ^v · g^(n+e)
                let mut from_series = Rational::from_integer(0.into());
                for (counts, c) in table.grade(l, v, n).unwrap() {
                    let mut term = c * num_traits::pow(g.clone(), table.g_power(n, &counts).unwrap());
                    for ((k, f), &cnt) in couplings.iter().zip(&counts) {
                        let lambda = f / num_traits::pow(g.clone(), *k);
                        term *= num_traits::pow(lambda, cnt);
                    }
                    from_series += term;
                }
                assert_eq!(from_graphs, from_series, "l={l} v={v} n={n}");
            }
        }
    }
}

#[test]
fn enumeration_counts_grow_with_edges() {
    let totals: Vec<usize> = (0..=4)
        .map(|e| (0..=e).map(|l| enumerate_connected(l, e - l + 1, &Monomial::unit()).unwrap().len()).sum())
        .collect();
    assert_eq!(totals, [1, 2, 4, 11, 30]);
    assert!(totals.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn factorization_over_larger_monomials() {
    let gen = Generator::unpruned();
    let m1 = Monomial::from_names(["a", "b"]);
    let m2 = Monomial::from_names(["c", "d", "e"]);
    for (l, v) in [(0, 3), (1, 2), (2, 2), (1, 3)] {
        let whole = gen.omega(l, v, &m1.mul(&m2)).unwrap();
        let split = gen.omega(l, v, &m1).unwrap().attach(&iterated_coproduct(&m2, v - 1)).unwrap();
        assert_eq!(*whole, split, "l={l} v={v}");
    }
}

#[test]
fn parallel_generation_matches_serial() {
    let serial = Generator::unpruned();
    let parallel = Generator::unpruned().with_jobs(4).unwrap();
    for (l, v) in [(2, 3), (3, 2), (1, 4), (4, 1)] {
        let m = legs(2);
        assert_eq!(serial.omega(l, v, &m).unwrap(), parallel.omega(l, v, &m).unwrap());
    }
    assert_eq!(serial.terms_visited(), parallel.terms_visited());
}

#[test]
fn pruning_is_transparent_to_evaluation() {
    // only arity-3 vertices carry weight, so truncating at k = 2 loses nothing
    let model = Model::single_label(r(7, 5), [(3, r(2, 9))]).unwrap();
    assert_eq!(model.safe_min_valence(), 2);
    for (l, v, n) in [(2, 2, 0), (1, 3, 1), (2, 3, 1), (1, 4, 2), (3, 2, 2)] {
        let legs = vec![0; n];
        let pruned = sigma_lv(&model, l, v, &legs).unwrap();
        let (m, binding) = leg_monomial(&legs);
        let full = evaluate_sum(&model, &Generator::unpruned().omega(l, v, &m).unwrap(), &binding).unwrap();
        assert_eq!(pruned, full, "l={l} v={v} n={n}");
    }
}

#[test]
fn requesting_loops_beyond_the_pruning_horizon_fails() {
    let gen = Generator::new(GenOptions::pruned(2, Some(1)));
    assert!(gen.omega(2, 1, &Monomial::unit()).is_err());
    assert!(gen.omega(1, 2, &Monomial::unit()).is_ok());
}
