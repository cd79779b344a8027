use std::collections::{BTreeMap, HashMap};

use super::{Model, Scalar};
use crate::algebra::{split_masks, Label, Monomial, Rational};
use crate::error::{Error, Result};
use crate::graphs::OrderedGraph;
use crate::recursion::{GenOptions, Generator, GraphSum};

/// Value of one weighted graph: the weight times the sum over model labels
/// on all internal edge ends of `Π_vertices ν · Π_edges G⁻¹`.
///
/// `binding` assigns a model label index to every external leg.
pub fn evaluate_graph<S: Scalar>(
    model: &Model<S>,
    graph: &OrderedGraph,
    weight: &Rational,
    binding: &BTreeMap<Label, usize>,
) -> Result<S> {
    let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); graph.vertex_count()];
    for (label, &vertex) in graph.externals() {
        let idx =
            *binding.get(label).ok_or_else(|| Error::usage(format!("external leg `{label}` has no model label")))?;
        at_vertex[vertex].push(idx);
    }
    let n = model.labels().len();
    let pairs: Vec<(usize, usize, S)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter_map(|(x, y)| {
            let g = model.inverse_propagator(x, y);
            (!g.is_zero()).then(|| (x, y, g.clone()))
        })
        .collect();

    fn go<S: Scalar>(
        model: &Model<S>,
        edges: &[(usize, usize)],
        pairs: &[(usize, usize, S)],
        at_vertex: &mut Vec<Vec<usize>>,
    ) -> Result<S> {
        let Some((&(a, b), rest)) = edges.split_first() else {
            return at_vertex.iter().try_fold(S::one(), |acc, m| Ok(acc * model.nu(m)?));
        };
        let mut total = S::zero();
        for (x, y, g) in pairs {
            at_vertex[a].push(*x);
            at_vertex[b].push(*y);
            let inner = go(model, rest, pairs, at_vertex);
            at_vertex[b].pop();
            at_vertex[a].pop();
            total = total + g.clone() * inner?;
        }
        Ok(total)
    }

    let value = go(model, graph.edges(), &pairs, &mut at_vertex)?;
    Ok(S::from_rational(weight) * value)
}

/// Weight-linear value of a graph sum.
pub fn evaluate_sum<S: Scalar>(model: &Model<S>, sum: &GraphSum, binding: &BTreeMap<Label, usize>) -> Result<S> {
    sum.iter().try_fold(S::zero(), |acc, (g, w)| Ok(acc + evaluate_graph(model, g, w, binding)?))
}

/// External labels `x1, …, xn` for legs carrying the given model labels.
pub fn leg_monomial(legs: &[usize]) -> (Monomial, BTreeMap<Label, usize>) {
    let names: Vec<String> = (1..=legs.len()).map(|i| format!("x{i}")).collect();
    let binding = names.iter().zip(legs).map(|(name, &idx)| (Label::External(name.clone()), idx)).collect();
    (Monomial::from_names(names), binding)
}

/// `σ^{l,0}`: the propagator on two legs at tree level, zero otherwise.
fn zero_vertex_sector<S: Scalar>(model: &Model<S>, loops: usize, legs: &[usize]) -> S {
    match legs {
        [x, y] if loops == 0 => model.propagator(*x, *y).clone(),
        _ => S::zero(),
    }
}

/// `σ^{l,v}` through the graph sum, with graphs generated by `generator`.
pub fn sigma_lv_with<S: Scalar>(
    generator: &Generator,
    model: &Model<S>,
    loops: usize,
    vertices: usize,
    legs: &[usize],
) -> Result<S> {
    check_legs(model, legs)?;
    if vertices == 0 {
        return Ok(zero_vertex_sector(model, loops, legs));
    }
    let (externals, binding) = leg_monomial(legs);
    let sum = generator.omega(loops, vertices, &externals)?;
    if model.labels().len() == 1 {
        return evaluate_sum(model, &sum, &binding);
    }
    // label sums grow like |labels|^(2e); evaluate each isomorphism class once
    evaluate_sum(model, &sum.to_unordered(), &binding)
}

/// `σ^{l,v}` through the graph sum. Vertices whose valence is too small to
/// carry a non-zero vertex function are pruned during generation.
pub fn sigma_lv<S: Scalar>(model: &Model<S>, loops: usize, vertices: usize, legs: &[usize]) -> Result<S> {
    let generator = Generator::new(GenOptions::pruned(model.safe_min_valence(), Some(loops)));
    sigma_lv_with(&generator, model, loops, vertices, legs)
}

fn check_legs<S: Scalar>(model: &Model<S>, legs: &[usize]) -> Result<()> {
    match legs.iter().find(|&&i| i >= model.labels().len()) {
        Some(i) => Err(Error::usage(format!("leg label index {i} is outside the model"))),
        None => Ok(()),
    }
}

/// Memoized σ-level recursion on label multisets:
///
/// ```text
/// σ^{0,1} = ν
/// σ^{l,v}(m) = 1/(l+v-1) · ( σ^{l-1,v}(T m) + Σ_{a,b} (σ^{a,b} ⊗ σ^{l-a,v-b})(Q m) )
/// T m = ½ Σ_{x,y} G⁻¹(x,y) · x·y·m
/// Q m = ½ Σ_{x,y} G⁻¹(x,y) · (x ⊗ y) · Δ(m)
/// ```
pub struct SigmaRecursion<'a, S: Scalar> {
    model: &'a Model<S>,
    pairs: Vec<(usize, usize, S)>,
    cache: HashMap<(usize, usize, Vec<usize>), S>,
}

impl<'a, S: Scalar> SigmaRecursion<'a, S> {
    pub fn new(model: &'a Model<S>) -> Self {
        let n = model.labels().len();
        let pairs = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter_map(|(x, y)| {
                let g = model.inverse_propagator(x, y);
                (!g.is_zero()).then(|| (x, y, g.clone()))
            })
            .collect();
        SigmaRecursion { model, pairs, cache: HashMap::new() }
    }

    pub fn sigma(&mut self, loops: usize, vertices: usize, legs: &[usize]) -> Result<S> {
        check_legs(self.model, legs)?;
        if vertices == 0 {
            return Ok(zero_vertex_sector(self.model, loops, legs));
        }
        let mut key = legs.to_vec();
        key.sort_unstable();
        self.cell(loops, vertices, key)
    }

    fn cell(&mut self, l: usize, v: usize, m: Vec<usize>) -> Result<S> {
        let key = (l, v, m);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let (_, _, m) = &key;
        let value = if l == 0 && v == 1 {
            self.model.nu(m)?
        } else {
            let pairs = self.pairs.clone();
            let mut acc = S::zero();
            if l > 0 {
                for (x, y, g) in &pairs {
                    let mut inner = m.clone();
                    inner.extend([*x, *y]);
                    inner.sort_unstable();
                    acc = acc + g.clone() * self.cell(l - 1, v, inner)?;
                }
            }
            let full = (1u64 << m.len()) - 1;
            for a in 0..=l {
                for b in 1..v {
                    for mask in split_masks(m.len(), 0) {
                        let pick = |bits: u64| -> Vec<usize> {
                            (0..m.len()).filter(|i| bits >> i & 1 == 1).map(|i| m[i]).collect()
                        };
                        let (left, right) = (pick(full & !mask), pick(mask));
                        for (x, y, g) in &pairs {
                            let mut lm = left.clone();
                            lm.push(*x);
                            lm.sort_unstable();
                            let lv = self.cell(a, b, lm)?;
                            if lv.is_zero() {
                                continue;
                            }
                            let mut rm = right.clone();
                            rm.push(*y);
                            rm.sort_unstable();
                            acc = acc + g.clone() * lv * self.cell(l - a, v - b, rm)?;
                        }
                    }
                }
            }
            let denom = Rational::from_integer((2 * (l + v - 1) as i64).into());
            acc / S::from_rational(&denom)
        };
        self.cache.insert(key.clone(), value.clone());
        Ok(value)
    }
}

/// `σ^{l,v}` through the σ-level recursion, without generating graphs.
pub fn sigma_recursive<S: Scalar>(model: &Model<S>, loops: usize, vertices: usize, legs: &[usize]) -> Result<S> {
    SigmaRecursion::new(model).sigma(loops, vertices, legs)
}
