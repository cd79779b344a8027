use std::fmt;

use num_traits::Zero;

use crate::algebra::Rational;
use crate::evaluation::Scalar;
use crate::graphs::OrderedGraph;
use crate::recursion::GraphSum;

/// Weight disagreement on one canonical graph. A missing side reads as 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDiff {
    pub graph: OrderedGraph,
    pub engine: Rational,
    pub oracle: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompareReport {
    pub engine_terms: usize,
    pub oracle_terms: usize,
    pub diffs: Vec<GraphDiff>,
}

impl CompareReport {
    pub fn is_match(&self) -> bool {
        self.diffs.is_empty()
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_match() {
            return write!(f, "match ({} graphs)", self.engine_terms);
        }
        writeln!(
            f,
            "{} mismatches (engine {} graphs, oracle {} graphs)",
            self.diffs.len(),
            self.engine_terms,
            self.oracle_terms
        )?;
        for d in &self.diffs {
            writeln!(f, "  {}: engine {} oracle {}", d.graph, d.engine, d.oracle)?;
        }
        Ok(())
    }
}

/// Compares two sums after forgetting vertex order on both sides.
pub fn compare_sums(engine: &GraphSum, oracle: &GraphSum) -> CompareReport {
    let engine = engine.to_unordered();
    let oracle = oracle.to_unordered();
    let mut diffs = Vec::new();
    for (g, c) in engine.iter() {
        let o = oracle.coefficient(g);
        if &o != c {
            diffs.push(GraphDiff { graph: g.clone(), engine: c.clone(), oracle: o });
        }
    }
    for (g, c) in oracle.iter() {
        if engine.coefficient(g).is_zero() {
            diffs.push(GraphDiff { graph: g.clone(), engine: Rational::zero(), oracle: c.clone() });
        }
    }
    diffs.sort_by(|a, b| a.graph.cmp(&b.graph));
    CompareReport { engine_terms: engine.len(), oracle_terms: oracle.len(), diffs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarComparison {
    pub engine: String,
    pub oracle: String,
    pub matched: bool,
}

impl fmt::Display for ScalarComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.matched { "match" } else { "MISMATCH" };
        write!(f, "{verdict}: engine {} oracle {}", self.engine, self.oracle)
    }
}

/// Exact equality for rationals, tolerance comparison for floats.
pub fn compare_scalars<S: Scalar>(engine: &S, oracle: &S) -> ScalarComparison {
    ScalarComparison { engine: engine.render(), oracle: oracle.render(), matched: engine.close_to(oracle) }
}
