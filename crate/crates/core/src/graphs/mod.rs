//! Vertex-ordered labeled multigraphs.
//!
//! Vertices are numbered `0..v`. Internal edges are an unordered multiset of
//! index pairs, stored sorted with `a <= b` (`a == b` is a self-loop). Each
//! external label is attached to exactly one vertex. Edge ends carry no
//! identity; symmetry counting over edge ends is done combinatorially.

mod io;
mod symmetry;

pub use io::{format_rational, graph_to_dot, parse_rational, GraphRecord};

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::algebra::{Label, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    externals: BTreeMap<Label, usize>,
}

impl OrderedGraph {
    /// Validating constructor. Edge pairs may be given in either order.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        externals: impl IntoIterator<Item = (Label, usize)>,
    ) -> Result<Self> {
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        if let Some(&(a, b)) = edges.iter().find(|&&(_, b)| b >= vertex_count) {
            return Err(Error::usage(format!("edge ({a},{b}) out of range for {vertex_count} vertices")));
        }
        let mut map = BTreeMap::new();
        for (label, at) in externals {
            if at >= vertex_count {
                return Err(Error::usage(format!("external `{label}` attached to missing vertex {at}")));
            }
            if map.insert(label.clone(), at).is_some() {
                return Err(Error::usage(format!("external label `{label}` used twice")));
            }
        }
        let mut g = OrderedGraph { vertex_count, edges, externals: map };
        g.edges.sort_unstable();
        Ok(g)
    }

    /// One vertex carrying every factor of `m` as an external edge.
    pub fn single_vertex(m: &Monomial) -> Result<Self> {
        if !m.has_distinct_factors() {
            return Err(Error::usage(format!("external labels must be distinct: {m}")));
        }
        Ok(OrderedGraph {
            vertex_count: 1,
            edges: Vec::new(),
            externals: m.labels().iter().map(|l| (l.clone(), 0)).collect(),
        })
    }

    pub(crate) fn from_parts(
        vertex_count: usize,
        mut edges: Vec<(usize, usize)>,
        externals: BTreeMap<Label, usize>,
    ) -> Self {
        edges.sort_unstable();
        OrderedGraph { vertex_count, edges, externals }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Internal edges as sorted `(a, b)` pairs with `a <= b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn externals(&self) -> &BTreeMap<Label, usize> {
        &self.externals
    }

    /// The external labels as a monomial.
    pub fn external_monomial(&self) -> Monomial {
        Monomial::new(self.externals.keys().cloned())
    }

    /// Number of edge ends (internal and external) at vertex `i`.
    pub fn valence(&self, i: usize) -> usize {
        let internal: usize = self.edges.iter().map(|&(a, b)| usize::from(a == i) + usize::from(b == i)).sum();
        internal + self.externals.values().filter(|&&at| at == i).count()
    }

    pub fn self_loops(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i && b == i).count()
    }

    /// Multiplicity of every distinct edge pair (self-loops included).
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for &e in &self.edges {
            *counts.entry(e).or_insert(0) += 1;
        }
        counts
    }

    pub fn is_connected(&self) -> Result<bool> {
        if self.vertex_count == 0 {
            return Err(Error::usage("connectivity is undefined for a graph without vertices"));
        }
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertex_count;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        Ok(components == 1)
    }

    /// `e - v + 1` for a connected graph.
    pub fn loop_number(&self) -> Result<usize> {
        if !self.is_connected()? {
            return Err(Error::usage("loop number requires a connected graph"));
        }
        Ok(self.edges.len() + 1 - self.vertex_count)
    }

    /// Renumbers vertices: old vertex `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> OrderedGraph {
        debug_assert_eq!(perm.len(), self.vertex_count);
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        let externals = self.externals.iter().map(|(l, &at)| (l.clone(), perm[at])).collect();
        OrderedGraph::from_parts(self.vertex_count, edges, externals)
    }

    /// Minimal encoding over all vertex renumberings.
    pub fn canonicalize(&self) -> CanonicalGraph {
        let n = self.vertex_count;
        let best = (0..n).permutations(n).map(|perm| self.permuted(&perm)).min().unwrap_or_else(|| self.clone());
        CanonicalGraph(best)
    }

    /// Disjoint union, `other`'s vertices numbered after `self`'s.
    pub fn concat(&self, other: &OrderedGraph) -> Result<OrderedGraph> {
        let shift = self.vertex_count;
        let mut externals = self.externals.clone();
        for (l, &at) in &other.externals {
            if externals.insert(l.clone(), at + shift).is_some() {
                return Err(Error::usage(format!("external label `{l}` present in both factors")));
            }
        }
        let edges =
            self.edges.iter().copied().chain(other.edges.iter().map(|&(a, b)| (a + shift, b + shift))).collect();
        Ok(OrderedGraph::from_parts(shift + other.vertex_count, edges, externals))
    }

    /// Returns the graph with one more internal edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<OrderedGraph> {
        if a.max(b) >= self.vertex_count {
            return Err(Error::usage(format!("edge ({a},{b}) out of range")));
        }
        let mut g = self.clone();
        g.edges.push((a.min(b), a.max(b)));
        g.edges.sort_unstable();
        Ok(g)
    }

    /// Returns the graph with every factor of `m` attached to vertex `at`.
    pub fn with_externals(&self, m: &Monomial, at: usize) -> Result<OrderedGraph> {
        if at >= self.vertex_count {
            return Err(Error::usage(format!("vertex {at} out of range")));
        }
        let mut g = self.clone();
        for l in m.labels() {
            if g.externals.insert(l.clone(), at).is_some() {
                return Err(Error::usage(format!("external label `{l}` attached twice")));
            }
        }
        Ok(g)
    }

    pub(crate) fn externals_mut(&mut self) -> &mut BTreeMap<Label, usize> {
        &mut self.externals
    }
}

impl fmt::Display for OrderedGraph {
    /// Compact 1-based rendering, e.g. `v=2 [1-2,1-1] {x:1}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={} [", self.vertex_count)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}-{}", a + 1, b + 1)?;
        }
        f.write_str("] {")?;
        for (k, (l, at)) in self.externals.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}:{}", at + 1)?;
        }
        f.write_str("}")
    }
}

/// Representative of a graph's class under vertex renumbering.
///
/// Holds the lexicographically minimal [`OrderedGraph`] of the class, so two
/// canonical graphs are equal exactly when their sources are isomorphic by a
/// vertex renumbering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalGraph(OrderedGraph);

impl CanonicalGraph {
    pub fn graph(&self) -> &OrderedGraph {
        &self.0
    }

    pub fn into_graph(self) -> OrderedGraph {
        self.0
    }
}

impl fmt::Display for CanonicalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
