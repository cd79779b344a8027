use std::collections::BTreeMap;

use crate::algebra::{split_masks, Label, Rational};
use crate::error::{Error, Result};
use crate::graphs::OrderedGraph;

use super::GraphSum;

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn check_vertex(i: usize, s: &GraphSum) -> Result<()> {
    if i >= s.vertex_count() {
        return Err(Error::usage(format!("vertex {i} out of range for {} vertices", s.vertex_count())));
    }
    Ok(())
}

/// `T_i`: attaches a self-loop at vertex `i` and halves every coefficient.
pub fn apply_t(i: usize, s: &GraphSum) -> Result<GraphSum> {
    check_vertex(i, s)?;
    let h = half();
    let mut out = GraphSum::zero(s.vertex_count());
    for (g, c) in s.iter() {
        out.insert(g.with_edge(i, i)?, c * &h);
    }
    Ok(out)
}

/// `Q_i`: splits vertex `i` into `i` and `i + 1` (later vertices shift up),
/// distributes every edge end and external leg at `i` over the two halves in
/// all ways, joins the halves with a new edge and halves the coefficient.
///
/// With `min_block = k > 0` the coproduct is truncated: distributions leaving
/// fewer than `k` ends on either half are dropped.
pub fn apply_q(i: usize, s: &GraphSum, min_block: usize) -> Result<GraphSum> {
    check_vertex(i, s)?;
    let h = half();
    let mut out = GraphSum::zero(s.vertex_count() + 1);
    for (g, c) in s.iter() {
        let coeff = c * &h;
        for split in split_vertex(g, i, min_block) {
            out.insert(split, coeff.clone());
        }
    }
    Ok(out)
}

/// Every way of splitting vertex `i` of `g`, each already reconnected.
fn split_vertex(g: &OrderedGraph, i: usize, min_block: usize) -> Vec<OrderedGraph> {
    let shift = |j: usize| if j < i { j } else { j + 1 };

    let mut fixed_edges = Vec::with_capacity(g.edge_count() + 1);
    let mut bridge_ends = Vec::new();
    let mut loops = 0usize;
    for &(a, b) in g.edges() {
        match (a == i, b == i) {
            (true, true) => loops += 1,
            (true, false) => bridge_ends.push(shift(b)),
            (false, true) => bridge_ends.push(shift(a)),
            (false, false) => fixed_edges.push((shift(a), shift(b))),
        }
    }
    fixed_edges.push((i, i + 1));

    let mut fixed_ext = BTreeMap::new();
    let mut legs: Vec<&Label> = Vec::new();
    for (l, &at) in g.externals() {
        if at == i {
            legs.push(l);
        } else {
            fixed_ext.insert(l.clone(), shift(at));
        }
    }

    // item order: legs, bridge ends, then both ends of each self-loop
    let n_legs = legs.len();
    let n_bridges = bridge_ends.len();
    let n = n_legs + n_bridges + 2 * loops;
    let side = |mask: u64, k: usize| i + (mask >> k & 1) as usize;

    split_masks(n, min_block)
        .map(|mask| {
            let mut edges = fixed_edges.clone();
            for (k, &other) in bridge_ends.iter().enumerate() {
                let here = side(mask, n_legs + k);
                edges.push((here.min(other), here.max(other)));
            }
            for p in 0..loops {
                let base = n_legs + n_bridges + 2 * p;
                let (x, y) = (side(mask, base), side(mask, base + 1));
                edges.push((x.min(y), x.max(y)));
            }
            let mut externals = fixed_ext.clone();
            for (k, l) in legs.iter().enumerate() {
                externals.insert((*l).clone(), side(mask, k));
            }
            OrderedGraph::from_parts(g.vertex_count() + 1, edges, externals)
        })
        .collect()
}

fn join(g: &OrderedGraph, u: &Label, w: &Label) -> Result<OrderedGraph> {
    if u == w {
        return Err(Error::usage("glue needs two distinct labels"));
    }
    for l in [u, w] {
        if !l.is_bound() {
            return Err(Error::usage(format!("glue label `{l}` is not a bound label")));
        }
    }
    let mut h = g.clone();
    let ext = h.externals_mut();
    let (Some(hu), Some(hw)) = (ext.remove(u), ext.remove(w)) else {
        return Err(Error::usage(format!("glue labels `{u}`, `{w}` must both be attached in {g}")));
    };
    h.with_edge(hu, hw)
}

/// Replaces the bound external legs `u` and `w` of every term by one internal
/// edge between their host vertices. Coefficients are unchanged.
pub fn glue(s: &GraphSum, u: &Label, w: &Label) -> Result<GraphSum> {
    let mut out = GraphSum::zero(s.vertex_count());
    for (g, c) in s.iter() {
        out.insert(join(g, u, w)?, c.clone());
    }
    Ok(out)
}

/// Glues `u` in `left` to `w` in `right` after concatenating the two sums.
pub fn glue_pair(left: &GraphSum, right: &GraphSum, u: &Label, w: &Label) -> Result<GraphSum> {
    let mut out = GraphSum::zero(left.vertex_count() + right.vertex_count());
    for (a, ca) in left.iter() {
        if !a.externals().contains_key(u) || a.externals().contains_key(w) {
            return Err(Error::usage(format!("left factor must carry `{u}` and not `{w}`")));
        }
        for (b, cb) in right.iter() {
            out.insert(join(&a.concat(b)?, u, w)?, ca * cb);
        }
    }
    Ok(out)
}
