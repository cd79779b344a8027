use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{split_masks, Label, Monomial, Rational};
use crate::error::{Error, Result};
use crate::graphs::OrderedGraph;

use super::generator::DEFAULT_MAX_EDGES;
use super::ops::{glue, glue_pair};
use super::GraphSum;

/// Memoized evaluator of the two-factor recursion
///
/// ```text
/// Ω^{l,v} = 1/(l+v-1) ( Ω^{l-1,v} ∘ T + Σ_{a=0}^{l} Σ_{b=1}^{v-1} (Ω^{a,b} ⊗ Ω^{l-a,v-b}) ∘ Q )
/// ```
///
/// where `T` multiplies by a fresh contracted pair `u·w` and `Q` attaches `u`
/// and `w` to the two halves of a coproduct split. Both contractions are
/// realized by gluing the bound legs `u`, `w` into one internal edge.
pub struct AltGenerator {
    max_edges: usize,
    cache: HashMap<(usize, usize, Monomial), Arc<GraphSum>>,
}

impl Default for AltGenerator {
    fn default() -> Self {
        Self::new()
    }
}

impl AltGenerator {
    pub fn new() -> Self {
        AltGenerator { max_edges: DEFAULT_MAX_EDGES, cache: HashMap::new() }
    }

    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = max_edges;
        self
    }

    pub fn omega(&mut self, loops: usize, vertices: usize, externals: &Monomial) -> Result<Arc<GraphSum>> {
        if vertices == 0 {
            return Err(Error::usage("the recursion needs at least one vertex"));
        }
        if !externals.has_distinct_factors() {
            return Err(Error::usage(format!("external labels must be distinct: {externals}")));
        }
        if loops + vertices - 1 > self.max_edges {
            return Err(Error::ResourceLimit(format!(
                "{} internal edges requested, limit is {}",
                loops + vertices - 1,
                self.max_edges
            )));
        }
        self.cell(loops, vertices, externals)
    }

    fn cell(&mut self, l: usize, v: usize, m: &Monomial) -> Result<Arc<GraphSum>> {
        let key = (l, v, m.clone());
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let half = Rational::new(1.into(), 2.into());
        let result = if l == 0 && v == 1 {
            GraphSum::single(OrderedGraph::single_vertex(m)?, Rational::from_integer(1.into()))
        } else {
            // fresh labels beyond every bound label already in play
            let next = m.max_bound().map_or(0, |k| k + 1);
            let (u, w) = (Label::Bound(next), Label::Bound(next + 1));
            let mut acc = GraphSum::zero(v);
            if l > 0 {
                let inner = self.cell(l - 1, v, &m.with(u.clone()).with(w.clone()))?;
                acc.absorb(glue(&inner, &u, &w)?);
            }
            let full = (1u64 << m.degree()) - 1;
            for a in 0..=l {
                for b in 1..v {
                    for mask in split_masks(m.degree(), 0) {
                        let left = self.cell(a, b, &m.select(full & !mask).with(u.clone()))?;
                        let right = self.cell(l - a, v - b, &m.select(mask).with(w.clone()))?;
                        acc.absorb(glue_pair(&left, &right, &u, &w)?);
                    }
                }
            }
            acc.scale(&(half / Rational::from_integer(((l + v - 1) as i64).into())));
            acc
        };
        let result = Arc::new(result);
        self.cache.insert(key, result.clone());
        Ok(result)
    }
}
