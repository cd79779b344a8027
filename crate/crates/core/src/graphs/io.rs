use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::OrderedGraph;
use crate::algebra::{Label, Rational};
use crate::error::{Error, Result};

/// JSON form of one weighted graph. Vertex indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub v: usize,
    pub edges: Vec<[usize; 2]>,
    pub externals: BTreeMap<String, usize>,
    pub weight: String,
}

impl GraphRecord {
    pub fn new(graph: &OrderedGraph, weight: &Rational) -> Self {
        GraphRecord {
            v: graph.vertex_count(),
            edges: graph.edges().iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            externals: graph.externals().iter().map(|(l, &at)| (l.to_string(), at + 1)).collect(),
            weight: format_rational(weight),
        }
    }

    pub fn to_graph(&self) -> Result<(OrderedGraph, Rational)> {
        let to_index =
            |i: usize| i.checked_sub(1).ok_or_else(|| Error::Parse("vertex indices are 1-based".to_string()));
        let edges = self.edges.iter().map(|&[a, b]| Ok((to_index(a)?, to_index(b)?))).collect::<Result<Vec<_>>>()?;
        let externals = self
            .externals
            .iter()
            .map(|(l, &at)| Ok((l.parse::<Label>()?, to_index(at)?)))
            .collect::<Result<Vec<_>>>()?;
        let graph = OrderedGraph::new(self.v, edges, externals).map_err(|e| Error::Parse(e.to_string()))?;
        Ok((graph, parse_rational(&self.weight)?))
    }
}

/// Always `num/den`, including integers (`1/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders one graph as an undirected DOT graph. Vertices are circles,
/// external legs are edges to diamond-shaped label nodes.
pub fn graph_to_dot(name: &str, graph: &OrderedGraph, weight: &Rational) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", dot_quote(name));
    let _ = writeln!(out, "  // weight {}", format_rational(weight));
    let _ = writeln!(out, "  node [shape=circle, label=\"\"];");
    for i in 1..=graph.vertex_count() {
        let _ = writeln!(out, "  v{i};");
    }
    for &(a, b) in graph.edges() {
        let _ = writeln!(out, "  v{} -- v{};", a + 1, b + 1);
    }
    for (label, &at) in graph.externals() {
        let node = dot_quote(&format!("ext:{label}"));
        let _ = writeln!(out, "  {node} [shape=diamond, label={}];", dot_quote(&label.to_string()));
        let _ = writeln!(out, "  {node} -- v{};", at + 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let g = OrderedGraph::new(2, [(0, 1), (1, 1)], [(Label::external("x"), 1), (Label::Bound(3), 0)]).unwrap();
        let w = Rational::new(1.into(), 4.into());
        let rec = GraphRecord::new(&g, &w);
        assert_eq!(rec.edges, vec![[1, 2], [2, 2]]);
        assert_eq!(rec.weight, "1/4");
        let json = serde_json::to_string(&rec).unwrap();
        let back: GraphRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_graph().unwrap(), (g, w));
    }

    #[test]
    fn rationals() {
        assert_eq!(format_rational(&Rational::from_integer(1.into())), "1/1");
        assert_eq!(parse_rational("6/8").unwrap(), Rational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-2").unwrap(), Rational::from_integer((-2).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn zero_index_rejected() {
        let rec = GraphRecord { v: 1, edges: vec![[0, 1]], externals: BTreeMap::new(), weight: "1".into() };
        assert!(rec.to_graph().is_err());
    }

    #[test]
    fn dot_has_loops_and_legs() {
        let g = OrderedGraph::new(1, [(0, 0)], [(Label::external("x"), 0)]).unwrap();
        let dot = graph_to_dot("g0", &g, &Rational::new(1.into(), 2.into()));
        assert!(dot.contains("v1 -- v1;"));
        assert!(dot.contains("shape=diamond"));
        assert!(dot.contains("// weight 1/2"));
    }
}
