use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::Scalar;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::graphs::parse_rational;

/// Finite field-theory model over a label set.
///
/// Holds the propagator `G_F`, its inverse over the label set, and vertex
/// functions `F`. Vertex functions are looked up by label multiset first and
/// by arity second. A model without multiset entries is degree-symmetric and
/// treats missing arities as 0; a model with multiset entries rejects
/// lookups that match neither table (except arity 0, which defaults to 0).
#[derive(Clone, Debug)]
pub struct Model<S: Scalar> {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    propagator: Vec<Vec<S>>,
    inverse: Vec<Vec<S>>,
    by_arity: BTreeMap<usize, S>,
    by_multiset: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> Model<S> {
    /// Builds a model and computes the inverse propagator by elimination.
    pub fn new(
        labels: Vec<String>,
        propagator: Vec<Vec<S>>,
        by_arity: BTreeMap<usize, S>,
        by_multiset: BTreeMap<Vec<usize>, S>,
    ) -> Result<Self> {
        let inverse = invert(&propagator)?;
        Self::with_inverse(labels, propagator, inverse, by_arity, by_multiset)
    }

    /// Builds a model from an explicit inverse propagator, which must satisfy
    /// `Σ_y G(x,y) G⁻¹(y,z) = δ(x,z)`.
    pub fn with_inverse(
        labels: Vec<String>,
        propagator: Vec<Vec<S>>,
        inverse: Vec<Vec<S>>,
        by_arity: BTreeMap<usize, S>,
        mut by_multiset: BTreeMap<Vec<usize>, S>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::model("a model needs at least one label"));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::model(format!("duplicate label `{l}`")));
            }
        }
        for (name, m) in [("propagator", &propagator), ("inverse propagator", &inverse)] {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::model(format!("{name} must be a {n}x{n} table")));
            }
            for x in 0..n {
                for y in 0..x {
                    if !m[x][y].close_to(&m[y][x]) {
                        return Err(Error::model(format!("{name} is not symmetric at ({}, {})", labels[x], labels[y])));
                    }
                }
            }
        }
        for x in 0..n {
            for z in 0..n {
                let sum = (0..n).fold(S::zero(), |acc, y| acc + propagator[x][y].clone() * inverse[y][z].clone());
                let delta = if x == z { S::one() } else { S::zero() };
                if !sum.close_to(&delta) {
                    return Err(Error::model(format!(
                        "Σ_y G(x,y) G⁻¹(y,z) = δ(x,z) fails at x={}, z={}: got {}",
                        labels[x],
                        labels[z],
                        sum.render()
                    )));
                }
            }
        }
        by_multiset = by_multiset
            .into_iter()
            .map(|(mut k, v)| {
                k.sort_unstable();
                (k, v)
            })
            .collect();
        if let Some(bad) = by_multiset.keys().flatten().find(|&&i| i >= n) {
            return Err(Error::model(format!("vertex function refers to label index {bad}")));
        }
        Ok(Model { labels, index, propagator, inverse, by_arity, by_multiset })
    }

    /// Single-label model with `G = g` and `F_k = couplings[k]`.
    pub fn single_label(g: S, couplings: impl IntoIterator<Item = (usize, S)>) -> Result<Self> {
        Self::new(vec!["o".to_string()], vec![vec![g]], couplings.into_iter().collect(), BTreeMap::new())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn propagator(&self, x: usize, y: usize) -> &S {
        &self.propagator[x][y]
    }

    pub fn inverse_propagator(&self, x: usize, y: usize) -> &S {
        &self.inverse[x][y]
    }

    /// `ν` on a multiset of label indices.
    pub fn nu(&self, labels: &[usize]) -> Result<S> {
        let mut key = labels.to_vec();
        key.sort_unstable();
        if let Some(v) = self.by_multiset.get(&key) {
            return Ok(v.clone());
        }
        if let Some(v) = self.by_arity.get(&key.len()) {
            return Ok(v.clone());
        }
        if self.by_multiset.is_empty() || key.is_empty() {
            return Ok(S::zero());
        }
        let names: Vec<&str> = key.iter().map(|&i| self.labels[i].as_str()).collect();
        Err(Error::model(format!("no vertex function for ({})", names.join(","))))
    }

    /// `ν` on label names.
    pub fn nu_named(&self, names: &[&str]) -> Result<S> {
        let idx = names
            .iter()
            .map(|n| self.label_index(n).ok_or_else(|| Error::model(format!("unknown label `{n}`"))))
            .collect::<Result<Vec<_>>>()?;
        self.nu(&idx)
    }

    /// Smallest arity with a non-zero vertex function, if any.
    pub fn min_active_arity(&self) -> Option<usize> {
        let arity = self.by_arity.iter().filter(|(_, v)| !v.is_zero()).map(|(k, _)| *k);
        let multiset = self.by_multiset.iter().filter(|(_, v)| !v.is_zero()).map(|(k, _)| k.len());
        arity.chain(multiset).min()
    }

    /// Truncation threshold `k` that cannot change any evaluated value: every
    /// vertex of valence `<= k` has a vanishing vertex function.
    pub fn safe_min_valence(&self) -> usize {
        if !self.by_multiset.is_empty() {
            // lookups of unlisted multisets are errors, not zeros
            return 0;
        }
        self.min_active_arity().map_or(0, |a| a.saturating_sub(1))
    }

    /// Maps leg names to label indices. Names that are not model labels bind
    /// to the only label of a single-label model.
    pub fn resolve_legs<T: AsRef<str>>(&self, names: &[T]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                match self.label_index(n) {
                    Some(i) => Ok(i),
                    None if self.labels.len() == 1 => Ok(0),
                    None => Err(Error::usage(format!("leg `{n}` is not a model label"))),
                }
            })
            .collect()
    }
}

fn invert<S: Scalar>(m: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::model("propagator must be square"));
    }
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude()))
            .ok_or_else(|| Error::model("propagator is singular"))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Ok(inv)
}

/// A model loaded from JSON, in the scalar kind it declares.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Exact(Model<Rational>),
    Float(Model<f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    labels: Vec<String>,
    propagator: BTreeMap<String, Value>,
    #[serde(default)]
    inverse_propagator: Option<BTreeMap<String, Value>>,
    #[serde(default)]
    vertex: BTreeMap<String, Value>,
    #[serde(default)]
    scalar: Option<String>,
}

fn parse_value<S: Scalar>(v: &Value, float: bool) -> Result<S> {
    let err = || Error::model(format!("bad scalar value {v}"));
    match v {
        Value::String(s) => {
            if float && !s.contains('/') {
                let x: f64 = s.trim().parse().map_err(|_| err())?;
                return Ok(S::from_rational(&Rational::from_float(x).ok_or_else(err)?));
            }
            parse_rational(s).map(|r| S::from_rational(&r)).map_err(|_| err())
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(S::from_rational(&Rational::from_integer(i.into())));
            }
            if !float {
                return Err(Error::model(format!(
                    "non-integer number {n} in an exact model; use \"num/den\" or \"scalar\": \"float\""
                )));
            }
            let x = n.as_f64().ok_or_else(err)?;
            Ok(S::from_rational(&Rational::from_float(x).ok_or_else(err)?))
        }
        _ => Err(err()),
    }
}

fn parse_table<S: Scalar>(
    entries: &BTreeMap<String, Value>,
    index: &HashMap<&str, usize>,
    float: bool,
) -> Result<Vec<Vec<S>>> {
    let n = index.len();
    let mut m = vec![vec![S::zero(); n]; n];
    for (key, value) in entries {
        let (x, y) =
            key.split_once(',').ok_or_else(|| Error::model(format!("propagator key `{key}` must be `x,y`")))?;
        let lookup = |s: &str| {
            index.get(s.trim()).copied().ok_or_else(|| Error::model(format!("unknown label `{}` in `{key}`", s.trim())))
        };
        let (i, j) = (lookup(x)?, lookup(y)?);
        let v: S = parse_value(value, float)?;
        if i != j && !m[j][i].is_zero() && !m[j][i].close_to(&v) {
            return Err(Error::model(format!("asymmetric entries for `{key}`")));
        }
        m[i][j] = v.clone();
        m[j][i] = v;
    }
    Ok(m)
}

fn build<S: Scalar>(file: &ModelFile, float: bool) -> Result<Model<S>> {
    let index: HashMap<&str, usize> = file.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let propagator = parse_table(&file.propagator, &index, float)?;
    let mut by_arity = BTreeMap::new();
    let mut by_multiset = BTreeMap::new();
    for (key, value) in &file.vertex {
        let v: S = parse_value(value, float)?;
        if let Ok(k) = key.trim().parse::<usize>() {
            by_arity.insert(k, v);
            continue;
        }
        let mut labels = key
            .split(',')
            .map(|s| {
                index
                    .get(s.trim())
                    .copied()
                    .ok_or_else(|| Error::model(format!("unknown label `{}` in vertex key `{key}`", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        labels.sort_unstable();
        if by_multiset.insert(labels, v).is_some() {
            return Err(Error::model(format!("vertex key `{key}` repeats a multiset")));
        }
    }
    let labels = file.labels.clone();
    match &file.inverse_propagator {
        Some(inv) => {
            let inverse = parse_table(inv, &index, float)?;
            Model::with_inverse(labels, propagator, inverse, by_arity, by_multiset)
        }
        None => Model::new(labels, propagator, by_arity, by_multiset),
    }
}

impl AnyModel {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::model(e.to_string()))?;
        match file.scalar.as_deref() {
            None | Some("rational") => build(&file, false).map(AnyModel::Exact),
            Some("float") => build(&file, true).map(AnyModel::Float),
            Some(other) => Err(Error::model(format!("unknown scalar kind `{other}`"))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}
