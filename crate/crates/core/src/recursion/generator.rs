use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use log::debug;
use rayon::prelude::*;

use crate::algebra::{Monomial, Rational};
use crate::error::{Error, Result};
use crate::graphs::OrderedGraph;

use super::ops::{apply_q, apply_t};
use super::GraphSum;

/// Largest internal edge count a [`Generator`] accepts by default.
pub const DEFAULT_MAX_EDGES: usize = 7;

/// Pruning controls for the generator.
///
/// `min_valence = k > 0` replaces the coproduct inside `Q_i` by the truncated
/// coproduct `Δ_{≥k}`, so split vertices keep at least `k + 1` ends. This is
/// only sound where no `T_i` is applied afterwards, so truncation is used
/// solely for cells at the maximal loop number (`max_loops`, or the requested
/// loop number when unset).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenOptions {
    pub min_valence: usize,
    pub max_loops: Option<usize>,
}

impl GenOptions {
    pub fn unpruned() -> Self {
        Self::default()
    }

    pub fn pruned(min_valence: usize, max_loops: Option<usize>) -> Self {
        GenOptions { min_valence, max_loops }
    }
}

/// `floor((n + 2m - 2) / (a - 2))`: no connected graph with `n` legs, at most
/// `m` loops and all valences `>= a` has more vertices. Never below 1.
pub fn vertex_bound(n: usize, m: usize, a: usize) -> Result<usize> {
    if a < 3 {
        return Err(Error::usage(format!("vertex bound needs minimal valence >= 3, got {a}")));
    }
    Ok(((n + 2 * m).saturating_sub(2) / (a - 2)).max(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct CellKey {
    loops: usize,
    vertices: usize,
    externals: Monomial,
    /// `k` of the truncated coproduct used for this cell; 0 for none.
    min_block: usize,
}

impl CellKey {
    fn edges(&self) -> usize {
        self.loops + self.vertices - 1
    }

    fn dependencies(&self) -> Vec<CellKey> {
        let mut deps = Vec::with_capacity(2);
        if self.vertices > 1 {
            deps.push(CellKey { vertices: self.vertices - 1, ..self.clone() });
        }
        if self.loops > 0 {
            deps.push(CellKey { loops: self.loops - 1, min_block: 0, ..self.clone() });
        }
        deps
    }
}

/// Memoized evaluator of the recursion
/// `Ω^{l,v} = 1/(l+v-1) (Σ_i Q_i ∘ Ω^{l,v-1} + Σ_i T_i ∘ Ω^{l-1,v})`.
///
/// Cells are computed bottom-up by edge number; cells of equal edge number
/// are independent and run in parallel when `jobs > 1`. Published cells are
/// immutable.
pub struct Generator {
    options: GenOptions,
    max_edges: usize,
    pool: Option<rayon::ThreadPool>,
    cache: RwLock<HashMap<CellKey, Arc<GraphSum>>>,
    visited: AtomicU64,
}

impl Generator {
    pub fn new(options: GenOptions) -> Self {
        Generator {
            options,
            max_edges: DEFAULT_MAX_EDGES,
            pool: None,
            cache: RwLock::new(HashMap::new()),
            visited: AtomicU64::new(0),
        }
    }

    pub fn unpruned() -> Self {
        Self::new(GenOptions::unpruned())
    }

    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = max_edges;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Result<Self> {
        if jobs == 0 {
            return Err(Error::usage("at least one job is needed"));
        }
        self.pool = if jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::usage(format!("cannot start {jobs} worker threads: {e}")))?;
            Some(pool)
        } else {
            None
        };
        Ok(self)
    }

    pub fn options(&self) -> &GenOptions {
        &self.options
    }

    /// Total number of terms emitted by all `Q_i`/`T_i` applications so far.
    pub fn terms_visited(&self) -> u64 {
        self.visited.load(Ordering::Relaxed)
    }

    fn check(&self, loops: usize, vertices: usize, externals: &Monomial) -> Result<()> {
        if vertices == 0 {
            return Err(Error::usage("the recursion needs at least one vertex"));
        }
        if !externals.has_distinct_factors() {
            return Err(Error::usage(format!("external labels must be distinct: {externals}")));
        }
        if let Some(max) = self.options.max_loops {
            if loops > max {
                return Err(Error::usage(format!("{loops} loops requested but max_loops is {max}")));
            }
        }
        let edges = loops + vertices - 1;
        if edges > self.max_edges {
            return Err(Error::ResourceLimit(format!("{edges} internal edges requested, limit is {}", self.max_edges)));
        }
        Ok(())
    }

    /// `Ω^{l,v}(externals)` in vertex-ordered form.
    pub fn omega(&self, loops: usize, vertices: usize, externals: &Monomial) -> Result<Arc<GraphSum>> {
        self.check(loops, vertices, externals)?;
        let at_max = self.options.max_loops.is_none_or(|m| m == loops);
        let min_block = if at_max { self.options.min_valence } else { 0 };
        let key = CellKey { loops, vertices, externals: externals.clone(), min_block };
        self.fill(&key)?;
        Ok(self.cached(&key).expect("cell computed above"))
    }

    /// `Ω^{l,v}(externals)` with vertex order forgotten.
    pub fn omega_unordered(&self, loops: usize, vertices: usize, externals: &Monomial) -> Result<GraphSum> {
        Ok(self.omega(loops, vertices, externals)?.to_unordered())
    }

    fn cached(&self, key: &CellKey) -> Option<Arc<GraphSum>> {
        self.cache.read().expect("cache lock poisoned").get(key).cloned()
    }

    /// Computes every missing cell `key` depends on, lowest edge number first.
    fn fill(&self, key: &CellKey) -> Result<()> {
        let mut levels: BTreeMap<usize, Vec<CellKey>> = BTreeMap::new();
        let mut stack = vec![key.clone()];
        let mut seen = std::collections::HashSet::new();
        while let Some(k) = stack.pop() {
            if !seen.insert(k.clone()) || self.cached(&k).is_some() {
                continue;
            }
            stack.extend(k.dependencies());
            levels.entry(k.edges()).or_default().push(k);
        }
        for (edges, mut cells) in levels {
            cells.sort_by_key(|a| (a.loops, a.vertices, a.min_block));
            let computed: Vec<(CellKey, GraphSum)> = match &self.pool {
                Some(pool) => pool.install(|| {
                    cells.into_par_iter().map(|k| self.compute(&k).map(|s| (k, s))).collect::<Result<_>>()
                })?,
                None => cells.into_iter().map(|k| self.compute(&k).map(|s| (k, s))).collect::<Result<_>>()?,
            };
            let mut cache = self.cache.write().expect("cache lock poisoned");
            for (k, s) in computed {
                debug!("cell l={} v={} k={} e={edges}: {} terms", k.loops, k.vertices, k.min_block, s.len());
                cache.entry(k).or_insert_with(|| Arc::new(s));
            }
        }
        Ok(())
    }

    fn compute(&self, key: &CellKey) -> Result<GraphSum> {
        let (l, v) = (key.loops, key.vertices);
        if l == 0 && v == 1 {
            return Ok(GraphSum::single(
                OrderedGraph::single_vertex(&key.externals)?,
                Rational::from_integer(1.into()),
            ));
        }
        let mut acc = GraphSum::zero(v);
        let mut visited = 0u64;
        if v > 1 {
            let prev = self.dependency(&CellKey { vertices: v - 1, ..key.clone() })?;
            for i in 0..v - 1 {
                let part = apply_q(i, &prev, key.min_block)?;
                visited += part.len() as u64;
                acc.absorb(part);
            }
        }
        if l > 0 {
            let prev = self.dependency(&CellKey { loops: l - 1, min_block: 0, ..key.clone() })?;
            for i in 0..v {
                let part = apply_t(i, &prev)?;
                visited += part.len() as u64;
                acc.absorb(part);
            }
        }
        self.visited.fetch_add(visited, Ordering::Relaxed);
        acc.scale(&Rational::new(1.into(), ((l + v - 1) as i64).into()));
        Ok(acc)
    }

    fn dependency(&self, key: &CellKey) -> Result<Arc<GraphSum>> {
        self.cached(key)
            .ok_or_else(|| Error::usage(format!("dependency l={} v={} not computed", key.loops, key.vertices)))
    }

    /// Replaces a cached cell. Only meant for negative-control tests that
    /// check verification catches corrupted intermediate results.
    #[doc(hidden)]
    pub fn inject_cell(&self, loops: usize, vertices: usize, externals: &Monomial, min_block: usize, sum: GraphSum) {
        let key = CellKey { loops, vertices, externals: externals.clone(), min_block };
        self.cache.write().expect("cache lock poisoned").insert(key, Arc::new(sum));
    }

    /// Every cached cell, for invariant checks.
    pub fn cells(&self) -> Vec<(usize, usize, Arc<GraphSum>)> {
        let cache = self.cache.read().expect("cache lock poisoned");
        let mut out: Vec<_> = cache.iter().map(|(k, s)| (k.loops, k.vertices, s.clone())).collect();
        out.sort_by_key(|(l, v, _)| (*l, *v));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn g(v: usize, edges: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::new(v, edges.iter().copied(), []).unwrap()
    }

    #[test]
    fn base_and_first_cells() {
        let gen = Generator::unpruned();
        let xy = Monomial::from_names(["x", "y"]);
        let base = gen.omega(0, 1, &xy).unwrap();
        assert_eq!(*base, GraphSum::single(OrderedGraph::single_vertex(&xy).unwrap(), r(1, 1)));

        let one = Monomial::unit();
        assert_eq!(*gen.omega(1, 1, &one).unwrap(), GraphSum::single(g(1, &[(0, 0)]), r(1, 2)));

        let s = gen.omega_unordered(1, 2, &one).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coefficient(&g(2, &[(0, 0), (0, 1)]).canonicalize().into_graph()), r(1, 2));
        assert_eq!(s.coefficient(&g(2, &[(0, 1), (0, 1)])), r(1, 4));

        assert_eq!(*gen.omega(0, 2, &one).unwrap(), GraphSum::single(g(2, &[(0, 1)]), r(1, 2)));
    }

    #[test]
    fn two_loop_two_vertex_vacuum() {
        let gen = Generator::unpruned();
        let s = gen.omega_unordered(2, 2, &Monomial::unit()).unwrap();
        let expect = [
            (g(2, &[(0, 1); 3]), r(1, 12)),
            (g(2, &[(0, 0), (0, 1), (1, 1)]), r(1, 8)),
            (g(2, &[(0, 0), (0, 1), (0, 1)]), r(1, 4)),
            (g(2, &[(0, 0), (0, 0), (0, 1)]), r(1, 8)),
        ];
        assert_eq!(s.len(), expect.len());
        for (graph, w) in expect {
            assert_eq!(s.coefficient(&graph.canonicalize().into_graph()), w, "{graph}");
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let gen = Generator::unpruned();
        assert!(matches!(gen.omega(0, 0, &Monomial::unit()), Err(Error::Usage(_))));
        assert!(matches!(gen.omega(9, 1, &Monomial::unit()), Err(Error::ResourceLimit(_))));
        let capped = Generator::new(GenOptions::pruned(2, Some(1)));
        assert!(matches!(capped.omega(2, 1, &Monomial::unit()), Err(Error::Usage(_))));
    }

    #[test]
    fn vertex_bounds() {
        assert_eq!(vertex_bound(2, 1, 3).unwrap(), 2);
        assert_eq!(vertex_bound(4, 1, 4).unwrap(), 2);
        assert_eq!(vertex_bound(3, 0, 3).unwrap(), 1);
        assert!(vertex_bound(3, 0, 2).is_err());
    }

    #[test]
    fn parallel_matches_serial_and_weights_stay_positive() {
        let m = Monomial::from_names(["a", "b"]);
        let serial = Generator::unpruned();
        let parallel = Generator::unpruned().with_jobs(4).unwrap();
        for (l, v) in [(2, 2), (1, 3), (0, 4)] {
            assert_eq!(serial.omega(l, v, &m).unwrap(), parallel.omega(l, v, &m).unwrap());
        }
        for (_, _, cell) in serial.cells() {
            assert!(cell.iter().all(|(_, c)| c.is_positive()));
        }
    }
}
