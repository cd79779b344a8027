use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::One;

use crate::algebra::{Label, Monomial, Rational};
use crate::error::{Error, Result};
use crate::graphs::OrderedGraph;
use crate::recursion::GraphSum;

/// Largest internal edge count [`enumerate_connected`] accepts by default.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 5;

/// Counts pairs (vertex renumbering, edge-end renumbering) that leave the
/// graph unchanged.
///
/// Edge `k` owns ends `2k` and `2k+1`. A pair `(π, σ)` is a symmetry when it
/// fixes every external attachment, maps each end attached at `x` to an end
/// attached at `π(x)`, and maps partner ends to partner ends.
pub fn brute_force_symmetry_factor(g: &OrderedGraph) -> u64 {
    let n = g.vertex_count();
    (0..n)
        .permutations(n)
        .filter(|perm| g.externals().values().all(|&at| perm[at] == at))
        .map(|perm| count_end_maps(g, &perm))
        .sum()
}

/// Counts edge-end renumberings fixing the graph with vertices held fixed.
pub fn brute_force_edge_symmetry_factor(g: &OrderedGraph) -> u64 {
    let identity: Vec<usize> = (0..g.vertex_count()).collect();
    count_end_maps(g, &identity)
}

fn count_end_maps(g: &OrderedGraph, perm: &[usize]) -> u64 {
    let attach: Vec<usize> = g.edges().iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut image = vec![usize::MAX; attach.len()];
    let mut used = vec![false; attach.len()];
    fn extend(t: usize, attach: &[usize], perm: &[usize], image: &mut [usize], used: &mut [bool]) -> u64 {
        if t == attach.len() {
            return 1;
        }
        let partner = t ^ 1;
        let mut total = 0;
        for s in 0..attach.len() {
            if used[s] || attach[s] != perm[attach[t]] {
                continue;
            }
            if partner < t && image[partner] != s ^ 1 {
                continue;
            }
            used[s] = true;
            image[t] = s;
            total += extend(t + 1, attach, perm, image, used);
            used[s] = false;
        }
        image[t] = usize::MAX;
        total
    }
    extend(0, &attach, perm, &mut image, &mut used)
}

fn connected_vacuum(vertices: usize, edges: usize) -> Vec<OrderedGraph> {
    let pairs: Vec<(usize, usize)> = (0..vertices).flat_map(|a| (a..vertices).map(move |b| (a, b))).collect();
    let mut seen = BTreeSet::new();
    for multiset in pairs.iter().copied().combinations_with_replacement(edges) {
        let g = OrderedGraph::new(vertices, multiset, []).expect("pairs are in range");
        if g.is_connected().expect("at least one vertex") {
            seen.insert(g.canonicalize().into_graph());
        }
    }
    seen.into_iter().collect()
}

/// Canonical representatives of all connected vacuum multigraphs with the
/// given vertex and edge counts.
pub fn connected_multigraphs(vertices: usize, edges: usize) -> Result<Vec<OrderedGraph>> {
    if vertices == 0 {
        return Err(Error::usage("graphs need at least one vertex"));
    }
    Ok(connected_vacuum(vertices, edges))
}

/// Every connected graph with `loops` loops, `vertices` vertices and the
/// legs of `externals`, one canonical representative each, weighted by the
/// inverse of its brute-force symmetry factor.
pub fn enumerate_connected(loops: usize, vertices: usize, externals: &Monomial) -> Result<GraphSum> {
    enumerate_connected_with_limit(loops, vertices, externals, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_connected_with_limit(
    loops: usize,
    vertices: usize,
    externals: &Monomial,
    limit: usize,
) -> Result<GraphSum> {
    if vertices == 0 {
        return Err(Error::usage("graphs need at least one vertex"));
    }
    if !externals.has_distinct_factors() {
        return Err(Error::usage(format!("external labels must be distinct: {externals}")));
    }
    let edges = loops + vertices - 1;
    if edges > limit {
        return Err(Error::usage(format!("enumeration limited to {limit} edges, {edges} requested")));
    }
    let labels: &[Label] = externals.labels();
    let mut classes = BTreeSet::new();
    for base in connected_vacuum(vertices, edges) {
        for placement in (0..labels.len()).map(|_| 0..vertices).multi_cartesian_product() {
            let g = OrderedGraph::new(vertices, base.edges().iter().copied(), labels.iter().cloned().zip(placement))?;
            classes.insert(g.canonicalize().into_graph());
        }
        if labels.is_empty() {
            classes.insert(base.canonicalize().into_graph());
        }
    }
    let mut out = GraphSum::zero(vertices);
    for g in classes {
        let s = brute_force_symmetry_factor(&g);
        out.add(g, Rational::one() / Rational::from_integer(s.into()))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn g(v: usize, edges: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::new(v, edges.iter().copied(), []).unwrap()
    }

    fn weight(s: &GraphSum, graph: OrderedGraph) -> Rational {
        s.coefficient(&graph.canonicalize().into_graph())
    }

    #[test]
    fn brute_force_factors() {
        assert_eq!(brute_force_symmetry_factor(&g(1, &[(0, 0)])), 2);
        assert_eq!(brute_force_symmetry_factor(&g(2, &[(0, 1); 3])), 12);
        let dumbbell = g(2, &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(brute_force_symmetry_factor(&dumbbell), 8);
        assert_eq!(brute_force_edge_symmetry_factor(&dumbbell), 4);
        assert_eq!(brute_force_symmetry_factor(&g(2, &[(0, 1)])), 2);
        let legs = OrderedGraph::new(2, [(0, 1)], [(Label::external("x"), 0), (Label::external("y"), 1)]).unwrap();
        assert_eq!(brute_force_symmetry_factor(&legs), 1);
    }

    #[test]
    fn small_cells() {
        let one = Monomial::unit();
        let s = enumerate_connected(0, 2, &one).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(weight(&s, g(2, &[(0, 1)])), r(1, 2));

        let s = enumerate_connected(1, 1, &one).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(weight(&s, g(1, &[(0, 0)])), r(1, 2));

        let s = enumerate_connected(2, 2, &one).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(weight(&s, g(2, &[(0, 1); 3])), r(1, 12));
        assert_eq!(weight(&s, g(2, &[(0, 0), (0, 1), (1, 1)])), r(1, 8));
        assert_eq!(weight(&s, g(2, &[(0, 0), (0, 1), (0, 1)])), r(1, 4));
        assert_eq!(weight(&s, g(2, &[(0, 0), (0, 0), (0, 1)])), r(1, 8));
    }

    #[test]
    fn legs_break_symmetry() {
        let s = enumerate_connected(0, 2, &Monomial::from_names(["x", "y"])).unwrap();
        // x,y together on one vertex, or split
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|(_, w)| *w == r(1, 1)));
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(enumerate_connected(6, 1, &Monomial::unit()), Err(Error::Usage(_))));
    }
}
