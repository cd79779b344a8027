//! Symmetric-algebra layer.
//!
//! A [`Monomial`] is a time-ordered product of field operators, stored as a
//! sorted multiset of [`Label`]s. Tensor products of monomials form
//! [`TensorTerm`]s, and finite rational combinations of those form
//! [`WeightedTensorSum`]s. The coproduct splits a monomial into all ordered
//! partitions of its factors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for all weights.
pub type Rational = num_rational::BigRational;

/// Prefix reserved for internal-bound labels in textual form.
pub const BOUND_PREFIX: char = '#';

/// Label of a field operator.
///
/// `External` labels name the free ends of external edges. `Bound` labels
/// live in a reserved namespace and are only created by glue operations; they
/// sort after every external label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    External(String),
    Bound(u32),
}

impl Label {
    pub fn external(name: impl Into<String>) -> Self {
        Label::External(name.into())
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, Label::Bound(_))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::External(name) => f.write_str(name),
            Label::Bound(k) => write!(f, "{BOUND_PREFIX}{k}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    /// Parses `#k` as a bound label and anything else non-empty as external.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix(BOUND_PREFIX) {
            return rest.parse().map(Label::Bound).map_err(|_| Error::Parse(format!("bad bound label `{s}`")));
        }
        if s.is_empty() || s.contains(|c: char| c.is_whitespace() || c == ',') {
            return Err(Error::Parse(format!("bad label `{s}`")));
        }
        Ok(Label::External(s.to_string()))
    }
}

/// Product of field operators; order-insensitive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<Label>,
}

impl Monomial {
    /// The unit monomial **1**.
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn new(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut factors: Vec<Label> = labels.into_iter().collect();
        factors.sort();
        Monomial { factors }
    }

    /// Builds a monomial of external labels from names.
    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Self {
        Self::new(names.into_iter().map(|n| Label::external(n.as_ref())))
    }

    /// Parses a comma-separated list of labels; the empty string is **1**.
    ///
    /// User input may not contain bound labels or repeated labels.
    pub fn parse_user_list(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::unit());
        }
        let mut labels = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.starts_with(BOUND_PREFIX) {
                return Err(Error::usage(format!("label `{part}` uses the reserved `{BOUND_PREFIX}` prefix")));
            }
            labels.push(part.parse::<Label>().map_err(|e| Error::usage(e.to_string()))?);
        }
        let m = Self::new(labels);
        if !m.has_distinct_factors() {
            return Err(Error::usage(format!("external labels must be distinct: `{s}`")));
        }
        Ok(m)
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.factors
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.factors.binary_search(label).is_ok()
    }

    pub fn has_distinct_factors(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] != w[1])
    }

    /// Product in `S(V)`: multiset union.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn with(&self, label: Label) -> Monomial {
        Monomial::new(self.factors.iter().cloned().chain(std::iter::once(label)))
    }

    /// Sub-monomial of the factors whose bit is set in `mask`.
    pub fn select(&self, mask: u64) -> Monomial {
        Monomial {
            factors: self
                .factors
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect(),
        }
    }

    /// Largest bound-label index present, if any.
    pub fn max_bound(&self) -> Option<u32> {
        self.factors
            .iter()
            .filter_map(|l| match l {
                Label::Bound(k) => Some(*k),
                Label::External(_) => None,
            })
            .max()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Element `m_1 ⊗ … ⊗ m_v` of `S(V)^{⊗v}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorTerm {
    slots: Vec<Monomial>,
}

impl TensorTerm {
    pub fn new(slots: Vec<Monomial>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::usage("tensor terms need at least one slot"));
        }
        Ok(TensorTerm { slots })
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Monomial] {
        &self.slots
    }
}

impl fmt::Display for TensorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Rational linear combination of tensor terms of a common rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTensorSum {
    rank: usize,
    terms: BTreeMap<TensorTerm, Rational>,
}

impl WeightedTensorSum {
    pub fn zero(rank: usize) -> Self {
        WeightedTensorSum { rank, terms: BTreeMap::new() }
    }

    /// The sum consisting of `m` itself (rank 1).
    pub fn from_monomial(m: Monomial) -> Self {
        let mut s = Self::zero(1);
        s.terms.insert(TensorTerm { slots: vec![m] }, Rational::one());
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorTerm, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, term: &TensorTerm) -> Rational {
        self.terms.get(term).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, term: TensorTerm, coeff: Rational) -> Result<()> {
        if term.rank() != self.rank {
            return Err(Error::usage(format!("term of rank {} added to a sum of rank {}", term.rank(), self.rank)));
        }
        add_coefficient(&mut self.terms, term, coeff);
        Ok(())
    }

    /// Applies the coproduct to tensor slot `slot`, raising the rank by one.
    pub fn coproduct_at(&self, slot: usize) -> Result<Self> {
        if slot >= self.rank {
            return Err(Error::usage(format!("slot {slot} out of range for rank {}", self.rank)));
        }
        let mut out = Self::zero(self.rank + 1);
        for (term, c) in &self.terms {
            for (left, right) in two_block_splits(&term.slots[slot], 0) {
                let mut slots = Vec::with_capacity(self.rank + 1);
                slots.extend_from_slice(&term.slots[..slot]);
                slots.push(left);
                slots.push(right);
                slots.extend_from_slice(&term.slots[slot + 1..]);
                add_coefficient(&mut out.terms, TensorTerm { slots }, c.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for WeightedTensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·({t})")?;
        }
        Ok(())
    }
}

pub(crate) fn add_coefficient<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, coeff: Rational) {
    use std::collections::btree_map::Entry;
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += coeff;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Bitmasks over `n` items describing two-block splits where both blocks
/// have at least `min_block` items. Bit set means the item goes right.
pub fn split_masks(n: usize, min_block: usize) -> impl Iterator<Item = u64> {
    assert!(n < 64, "too many factors for a bitmask split");
    (0..1u64 << n).filter(move |mask| {
        let right = mask.count_ones() as usize;
        right >= min_block && n - right >= min_block
    })
}

fn two_block_splits(m: &Monomial, min_block: usize) -> impl Iterator<Item = (Monomial, Monomial)> + '_ {
    let full = (1u64 << m.degree()) - 1;
    split_masks(m.degree(), min_block).map(move |mask| (m.select(full & !mask), m.select(mask)))
}

/// Full coproduct: the sum over all ordered two-block partitions of the factors.
pub fn coproduct(m: &Monomial) -> WeightedTensorSum {
    truncated_coproduct(m, 0)
}

/// Coproduct with every term dropped whose left or right block has fewer
/// than `k` factors.
pub fn truncated_coproduct(m: &Monomial, k: usize) -> WeightedTensorSum {
    let mut out = WeightedTensorSum::zero(2);
    for (left, right) in two_block_splits(m, k) {
        add_coefficient(&mut out.terms, TensorTerm { slots: vec![left, right] }, Rational::one());
    }
    out
}

/// `k`-fold iterated coproduct: all ordered `(k+1)`-block partitions.
pub fn iterated_coproduct(m: &Monomial, k: usize) -> WeightedTensorSum {
    let slots = k + 1;
    let mut out = WeightedTensorSum::zero(slots);
    let n = m.degree();
    let mut placement = vec![0usize; n];
    loop {
        let mut parts = vec![Vec::new(); slots];
        for (label, &s) in m.labels().iter().zip(&placement) {
            parts[s].push(label.clone());
        }
        let term = TensorTerm { slots: parts.into_iter().map(Monomial::new).collect() };
        add_coefficient(&mut out.terms, term, Rational::one());
        // odometer over slots^n placements
        let mut i = 0;
        while i < n {
            placement[i] += 1;
            if placement[i] < slots {
                break;
            }
            placement[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Slot-wise product in `S(V)^{⊗v}`, extended bilinearly.
pub fn tensor_multiply(a: &WeightedTensorSum, b: &WeightedTensorSum) -> Result<WeightedTensorSum> {
    if a.rank != b.rank {
        return Err(Error::usage(format!("rank mismatch: {} vs {}", a.rank, b.rank)));
    }
    let mut out = WeightedTensorSum::zero(a.rank);
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            let slots = ta.slots.iter().zip(&tb.slots).map(|(x, y)| x.mul(y)).collect();
            add_coefficient(&mut out.terms, TensorTerm { slots }, ca * cb);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(names: &[&str]) -> Monomial {
        Monomial::from_names(names.iter().copied())
    }

    fn term(slots: &[&[&str]]) -> TensorTerm {
        TensorTerm::new(slots.iter().map(|s| m(s)).collect()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn coproduct_small_cases() {
        let d = coproduct(&Monomial::unit());
        assert_eq!(d.len(), 1);
        assert_eq!(d.coefficient(&term(&[&[], &[]])), r(1, 1));

        let d = coproduct(&m(&["x"]));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(&term(&[&["x"], &[]])), r(1, 1));
        assert_eq!(d.coefficient(&term(&[&[], &["x"]])), r(1, 1));

        let d = coproduct(&m(&["x", "y"]));
        assert_eq!(d.len(), 4);
        for t in
            [term(&[&["x", "y"], &[]]), term(&[&["x"], &["y"]]), term(&[&["y"], &["x"]]), term(&[&[], &["x", "y"]])]
        {
            assert_eq!(d.coefficient(&t), r(1, 1), "{t}");
        }
    }

    #[test]
    fn iterated_coproduct_small_cases() {
        let d0 = iterated_coproduct(&m(&["x", "y"]), 0);
        assert_eq!(d0, WeightedTensorSum::from_monomial(m(&["x", "y"])));

        let d2 = iterated_coproduct(&m(&["x"]), 2);
        assert_eq!(d2.len(), 3);
        for t in [term(&[&["x"], &[], &[]]), term(&[&[], &["x"], &[]]), term(&[&[], &[], &["x"]])] {
            assert_eq!(d2.coefficient(&t), r(1, 1));
        }

        // brute force: every label independently picks one of three slots
        let d2 = iterated_coproduct(&m(&["x", "y"]), 2);
        assert_eq!(d2.len(), 9);
        for sx in 0..3 {
            for sy in 0..3 {
                let mut slots: Vec<Vec<&str>> = vec![vec![]; 3];
                slots[sx].push("x");
                slots[sy].push("y");
                let t = TensorTerm::new(slots.iter().map(|s| m(s)).collect()).unwrap();
                assert_eq!(d2.coefficient(&t), r(1, 1));
            }
        }
    }

    #[test]
    fn truncated_coproduct_cases() {
        let d = truncated_coproduct(&m(&["x", "y"]), 1);
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(&term(&[&["x"], &["y"]])), r(1, 1));
        assert_eq!(d.coefficient(&term(&[&["y"], &["x"]])), r(1, 1));
        assert!(truncated_coproduct(&m(&["x", "y"]), 2).is_empty());
        assert!(truncated_coproduct(&Monomial::unit(), 1).is_empty());
    }

    #[test]
    fn tensor_multiply_cases() {
        let mut a = WeightedTensorSum::zero(2);
        a.add_term(term(&[&["x"], &[]]), r(1, 1)).unwrap();
        let mut b = WeightedTensorSum::zero(2);
        b.add_term(term(&[&[], &["y"]]), r(1, 1)).unwrap();
        let p = tensor_multiply(&a, &b).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&term(&[&["x"], &["y"]])), r(1, 1));

        let mut a = WeightedTensorSum::zero(2);
        a.add_term(term(&[&["x"], &["y"]]), r(1, 1)).unwrap();
        let mut b = WeightedTensorSum::zero(2);
        b.add_term(term(&[&["x'"], &[]]), r(1, 1)).unwrap();
        let p = tensor_multiply(&a, &b).unwrap();
        assert_eq!(p.coefficient(&term(&[&["x", "x'"], &["y"]])), r(1, 1));

        let mut a = WeightedTensorSum::zero(2);
        a.add_term(term(&[&["x"], &[]]), r(1, 2)).unwrap();
        let mut b = WeightedTensorSum::zero(2);
        b.add_term(term(&[&["y"], &[]]), r(1, 3)).unwrap();
        let p = tensor_multiply(&a, &b).unwrap();
        assert_eq!(p.coefficient(&term(&[&["x", "y"], &[]])), r(1, 6));

        assert!(matches!(tensor_multiply(&a, &WeightedTensorSum::zero(3)), Err(Error::Usage(_))));
    }

    #[test]
    fn user_list_parsing() {
        assert!(Monomial::parse_user_list("").unwrap().is_unit());
        assert_eq!(Monomial::parse_user_list("y, x").unwrap(), m(&["x", "y"]));
        assert!(Monomial::parse_user_list("x,x").is_err());
        assert!(Monomial::parse_user_list("#0").is_err());
        assert!(Monomial::parse_user_list("x,,y").is_err());
    }

    #[test]
    fn bound_labels_sort_last_and_round_trip() {
        let mm = Monomial::new([Label::Bound(0), Label::external("z")]);
        assert_eq!(mm.labels()[0], Label::external("z"));
        assert_eq!("#7".parse::<Label>().unwrap(), Label::Bound(7));
        assert_eq!(Label::Bound(7).to_string(), "#7");
        assert_eq!(mm.max_bound(), Some(0));
    }

    fn arb_monomial(max: usize) -> impl Strategy<Value = Monomial> {
        proptest::sample::subsequence(vec!["a", "b", "c", "d", "e", "f", "g", "h"], 0..=max)
            .prop_map(Monomial::from_names)
    }

    fn arb_disjoint_pair() -> impl Strategy<Value = (Monomial, Monomial)> {
        proptest::collection::vec(0u8..3, 8).prop_map(|sides| {
            let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
            let pick = |s: u8| Monomial::from_names(names.iter().zip(&sides).filter(|(_, &x)| x == s).map(|(n, _)| *n));
            (pick(0), pick(1))
        })
    }

    proptest! {
        #[test]
        fn term_counts(mono in arb_monomial(6), k in 0usize..4) {
            let n = mono.degree() as u32;
            prop_assert_eq!(coproduct(&mono).len(), 2usize.pow(n));
            prop_assert_eq!(iterated_coproduct(&mono, k).len(), (k + 1).pow(n));
        }

        #[test]
        fn coassociativity(mono in arb_monomial(6)) {
            let d = coproduct(&mono);
            let left = d.coproduct_at(0).unwrap();
            let right = d.coproduct_at(1).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(&left, &iterated_coproduct(&mono, 2));
        }

        #[test]
        fn multiplicativity((m1, m2) in arb_disjoint_pair()) {
            let lhs = coproduct(&m1.mul(&m2));
            let rhs = tensor_multiply(&coproduct(&m1), &coproduct(&m2)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncation_is_sub_sum(mono in arb_monomial(6), k in 1usize..4) {
            let full = coproduct(&mono);
            let cut = truncated_coproduct(&mono, k);
            for (t, c) in cut.terms() {
                prop_assert_eq!(&full.coefficient(t), c);
                prop_assert!(t.slots().iter().all(|s| s.degree() >= k));
            }
            let expected = full.terms().filter(|(t, _)| t.slots().iter().all(|s| s.degree() >= k)).count();
            prop_assert_eq!(cut.len(), expected);
        }
    }
}
