//! Weighted graph sums and the graph-building recursion.
//!
//! [`GraphSum`] is the vertex-ordered representation of an element of
//! `S(V)^{⊗v}`: every term is an [`OrderedGraph`] and identical ordered graphs
//! merge their coefficients. [`GraphSum::to_unordered`] forgets the vertex
//! order by summing weights over renumbering classes.

mod alt;
mod generator;
mod ops;

pub use alt::AltGenerator;
pub use generator::{vertex_bound, GenOptions, Generator, DEFAULT_MAX_EDGES};
pub use ops::{apply_q, apply_t, glue, glue_pair};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{add_coefficient, Monomial, Rational, WeightedTensorSum};
use crate::error::{Error, Result};
use crate::graphs::{GraphRecord, OrderedGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSum {
    vertex_count: usize,
    terms: BTreeMap<OrderedGraph, Rational>,
}

impl GraphSum {
    pub fn zero(vertex_count: usize) -> Self {
        GraphSum { vertex_count, terms: BTreeMap::new() }
    }

    pub fn single(graph: OrderedGraph, coeff: Rational) -> Self {
        let mut s = GraphSum::zero(graph.vertex_count());
        s.insert(graph, coeff);
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graph order.
    pub fn iter(&self) -> impl Iterator<Item = (&OrderedGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, graph: &OrderedGraph) -> Rational {
        self.terms.get(graph).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff · graph`, checking the vertex count and external label set.
    pub fn add(&mut self, graph: OrderedGraph, coeff: Rational) -> Result<()> {
        if graph.vertex_count() != self.vertex_count {
            return Err(Error::usage(format!(
                "graph with {} vertices added to a {}-vertex sum",
                graph.vertex_count(),
                self.vertex_count
            )));
        }
        if let Some((first, _)) = self.terms.iter().next() {
            if !first.externals().keys().eq(graph.externals().keys()) {
                return Err(Error::usage("all graphs of a sum must carry the same external labels"));
            }
        }
        self.insert(graph, coeff);
        Ok(())
    }

    pub(crate) fn insert(&mut self, graph: OrderedGraph, coeff: Rational) {
        debug_assert_eq!(graph.vertex_count(), self.vertex_count);
        add_coefficient(&mut self.terms, graph, coeff);
    }

    pub fn add_sum(&mut self, other: &GraphSum) -> Result<()> {
        if other.vertex_count != self.vertex_count {
            return Err(Error::usage("vertex count mismatch"));
        }
        for (g, c) in &other.terms {
            self.insert(g.clone(), c.clone());
        }
        Ok(())
    }

    pub(crate) fn absorb(&mut self, other: GraphSum) {
        debug_assert_eq!(other.vertex_count, self.vertex_count);
        if self.terms.is_empty() {
            self.terms = other.terms;
            return;
        }
        for (g, c) in other.terms {
            self.insert(g, c);
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    /// Forgets the vertex order: sums weights over each canonical class. The
    /// keys of the result are canonical representatives.
    pub fn to_unordered(&self) -> GraphSum {
        let mut out = GraphSum::zero(self.vertex_count);
        for (g, c) in &self.terms {
            out.insert(g.canonicalize().into_graph(), c.clone());
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&OrderedGraph) -> bool) {
        self.terms.retain(|g, _| keep(g));
    }

    /// Tensor product: every pair of terms concatenated, `other` after `self`.
    pub fn tensor(&self, other: &GraphSum) -> Result<GraphSum> {
        let mut out = GraphSum::zero(self.vertex_count + other.vertex_count);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.insert(a.concat(b)?, ca * cb);
            }
        }
        Ok(out)
    }

    /// Component-wise product with a rank-`v` tensor sum of external
    /// monomials: the factors of slot `j` are attached to vertex `j`.
    pub fn attach(&self, dist: &WeightedTensorSum) -> Result<GraphSum> {
        if dist.rank() != self.vertex_count {
            return Err(Error::usage(format!(
                "rank {} tensor sum attached to {} vertices",
                dist.rank(),
                self.vertex_count
            )));
        }
        let mut out = GraphSum::zero(self.vertex_count);
        for (g, c) in &self.terms {
            for (term, d) in dist.terms() {
                let mut h = g.clone();
                for (j, slot) in term.slots().iter().enumerate() {
                    h = h.with_externals(slot, j)?;
                }
                out.insert(h, c * d);
            }
        }
        Ok(out)
    }

    /// External labels shared by every term, if the sum is non-empty.
    pub fn external_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next().map(OrderedGraph::external_monomial)
    }

    pub fn sum_of_weights(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn records(&self) -> Vec<GraphRecord> {
        self.terms.iter().map(|(g, c)| GraphRecord::new(g, c)).collect()
    }

    /// Rebuilds a sum from records that share one vertex count.
    pub fn from_records(vertex_count: usize, records: &[GraphRecord]) -> Result<GraphSum> {
        let mut out = GraphSum::zero(vertex_count);
        for rec in records {
            let (g, c) = rec.to_graph()?;
            out.add(g, c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for GraphSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (g, c) in &self.terms {
            if c.is_one() {
                writeln!(f, "{g}")?;
            } else {
                writeln!(f, "{c} · {g}")?;
            }
        }
        Ok(())
    }
}
