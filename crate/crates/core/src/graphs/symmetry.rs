use itertools::Itertools;

use super::OrderedGraph;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

impl OrderedGraph {
    /// Order of the group of edge-end renumberings with vertices held fixed:
    /// `Π_i 2^{p_i} p_i! · Π_j q_j!` over self-loop counts `p_i` and parallel
    /// edge multiplicities `q_j`.
    pub fn edge_symmetry_factor(&self) -> u64 {
        self.edge_multiplicities()
            .into_iter()
            .map(|((a, b), q)| if a == b { (1u64 << q) * factorial(q) } else { factorial(q) })
            .product()
    }

    /// Number of vertex renumberings mapping the graph onto itself, counted
    /// over all `v!` permutations.
    pub fn vertex_symmetry_factor(&self) -> u64 {
        let n = self.vertex_count;
        (0..n).permutations(n).filter(|perm| &self.permuted(perm) == self).count() as u64
    }

    /// `S = S_vertex · S_edge`.
    pub fn symmetry_factor(&self) -> u64 {
        self.vertex_symmetry_factor() * self.edge_symmetry_factor()
    }
}
