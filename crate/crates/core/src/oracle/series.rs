use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

/// Exponents `(j, λ_{k_1}, …, λ_{k_r})` of one series term.
type Exponents = (usize, Vec<usize>);

/// `(2k-1)!!`, with `(-1)!! = 1`.
pub fn double_factorial(k: usize) -> BigInt {
    (1..=k).map(|i| BigInt::from(2 * i - 1)).product()
}

/// `⟨φ^{2k}⟩ / g^k` for a centered Gaussian with variance `g`.
pub fn gaussian_moment(k: usize) -> BigInt {
    double_factorial(k)
}

/// Number of perfect matchings of `points` labeled points, by enumeration.
pub fn count_perfect_matchings(points: usize) -> u64 {
    fn go(remaining: &mut Vec<usize>) -> u64 {
        if remaining.is_empty() {
            return 1;
        }
        let first = remaining.remove(0);
        let mut total = 0;
        for k in 0..remaining.len() {
            let partner = remaining.remove(k);
            total += go(remaining);
            remaining.insert(k, partner);
        }
        remaining.insert(0, first);
        total
    }
    if points % 2 == 1 {
        return 0;
    }
    go(&mut (0..points).collect())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Connected n-point coefficients of a zero-dimensional theory.
///
/// With `Z(j) = ⟨exp(Σ_k λ_k φ^k / k!) exp(jφ)⟩` over a Gaussian of variance
/// `g`, the table stores for each leg count `n` and vertex-count vector `v`
/// the rational `c` in
///
/// ```text
/// log Z(j) ∋ c · (j^n / n!) · Π_k λ_k^{v_k} · g^{(n + Σ_k k v_k)/2}
/// ```
///
/// The `g` exponent equals `n + e` with `e = (Σ_k k v_k - n)/2` internal
/// edges, and the loop grade is `e - Σ_k v_k + 1`.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    arities: Vec<usize>,
    max_vertices: usize,
    max_legs: usize,
    coeffs: BTreeMap<Exponents, Rational>,
}

/// Multivariate truncated product of two series without constant terms.
fn truncated_mul(
    a: &BTreeMap<Exponents, Rational>,
    b: &BTreeMap<Exponents, Rational>,
    max_vertices: usize,
    max_legs: usize,
) -> BTreeMap<Exponents, Rational> {
    let mut out: BTreeMap<Exponents, Rational> = BTreeMap::new();
    for ((na, va), ca) in a {
        for ((nb, vb), cb) in b {
            let n = na + nb;
            let v: Vec<usize> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
            if n > max_legs || v.iter().sum::<usize>() > max_vertices {
                continue;
            }
            *out.entry((n, v)).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expands `log Z(j)` up to `max_vertices` vertices in total and `max_legs`
/// source powers, for couplings `λ_k φ^k / k!` of the given arities.
pub fn zero_dim_log_z(arities: &[usize], max_vertices: usize, max_legs: usize) -> Result<SeriesTable> {
    if arities.contains(&0) {
        return Err(Error::usage("coupling arities must be at least 1"));
    }
    let r = arities.len();

    // Z - 1, coefficients of j^n Π λ^v with g implicit
    let mut x: BTreeMap<Exponents, Rational> = BTreeMap::new();
    let mut counts = vec![0usize; r];
    loop {
        let total: usize = counts.iter().sum();
        if total <= max_vertices {
            for n in 0..=max_legs {
                let half_edges = n + arities.iter().zip(&counts).map(|(k, v)| k * v).sum::<usize>();
                if (n == 0 && total == 0) || half_edges % 2 == 1 {
                    continue;
                }
                let mut denom = factorial(n);
                for (&k, &v) in arities.iter().zip(&counts) {
                    denom *= factorial(k).pow(v as u32) * factorial(v);
                }
                let c = Rational::new(gaussian_moment(half_edges / 2), denom);
                x.insert((n, counts.clone()), c);
            }
        }
        // odometer over vertex-count vectors
        let mut i = 0;
        while i < r {
            counts[i] += 1;
            if counts[i] <= max_vertices {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }

    // log(1 + X) = Σ_{p≥1} (-1)^{p+1} X^p / p; every term of X has degree ≥ 1
    let mut log: BTreeMap<Exponents, Rational> = BTreeMap::new();
    let mut power = x.clone();
    for p in 1..=(max_vertices + max_legs).max(1) {
        let sign = if p % 2 == 1 { Rational::one() } else { -Rational::one() };
        let scale = sign / Rational::from_integer(BigInt::from(p));
        for (key, c) in &power {
            *log.entry(key.clone()).or_insert_with(Rational::zero) += c * &scale;
        }
        if power.is_empty() {
            break;
        }
        power = truncated_mul(&power, &x, max_vertices, max_legs);
    }

    let coeffs = log
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((n, v), c)| {
            let c = c * Rational::from_integer(factorial(n));
            ((n, v), c)
        })
        .collect();
    Ok(SeriesTable { arities: arities.to_vec(), max_vertices, max_legs, coeffs })
}

impl SeriesTable {
    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    fn check(&self, legs: usize, vertex_counts: &[usize]) -> Result<()> {
        if vertex_counts.len() != self.arities.len() {
            return Err(Error::usage(format!(
                "expected {} vertex counts, got {}",
                self.arities.len(),
                vertex_counts.len()
            )));
        }
        if legs > self.max_legs || vertex_counts.iter().sum::<usize>() > self.max_vertices {
            return Err(Error::usage("query beyond the truncation order of the series"));
        }
        Ok(())
    }

    /// Coefficient of `(j^n/n!) Π λ_k^{v_k}` in `log Z`, with the power of
    /// `g` factored out (see [`SeriesTable::g_power`]).
    pub fn connected(&self, legs: usize, vertex_counts: &[usize]) -> Result<Rational> {
        self.check(legs, vertex_counts)?;
        Ok(self.coeffs.get(&(legs, vertex_counts.to_vec())).cloned().unwrap_or_else(Rational::zero))
    }

    /// Internal edge count `(Σ k v_k - n)/2`, or `None` on odd parity or
    /// when there are fewer half-edges than legs.
    pub fn internal_edges(&self, legs: usize, vertex_counts: &[usize]) -> Option<usize> {
        let half: usize = self.arities.iter().zip(vertex_counts).map(|(k, v)| k * v).sum();
        if half < legs || (half - legs) % 2 == 1 {
            return None;
        }
        Some((half - legs) / 2)
    }

    /// Exponent of `g` multiplying [`SeriesTable::connected`]: legs plus
    /// internal edges, which is 1 for the bare propagator.
    pub fn g_power(&self, legs: usize, vertex_counts: &[usize]) -> Option<usize> {
        let half: usize = self.arities.iter().zip(vertex_counts).map(|(k, v)| k * v).sum();
        (half + legs).is_multiple_of(2).then_some((half + legs) / 2)
    }

    /// Loop grade `e - v + 1` of a term, if it has one.
    pub fn loop_grade(&self, legs: usize, vertex_counts: &[usize]) -> Option<usize> {
        let v: usize = vertex_counts.iter().sum();
        let e = self.internal_edges(legs, vertex_counts)?;
        (e + 1).checked_sub(v)
    }

    /// All vertex-count vectors with `Σ v_k = vertices` and loop grade
    /// `loops`, with their coefficients (zeros omitted).
    pub fn grade(&self, loops: usize, vertices: usize, legs: usize) -> Result<Vec<(Vec<usize>, Rational)>> {
        if legs > self.max_legs || vertices > self.max_vertices {
            return Err(Error::usage("query beyond the truncation order of the series"));
        }
        Ok(self
            .coeffs
            .iter()
            .filter(|((n, v), _)| {
                *n == legs && v.iter().sum::<usize>() == vertices && self.loop_grade(legs, v) == Some(loops)
            })
            .map(|((_, v), c)| (v.clone(), c.clone()))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn gaussian_moments_match_matching_counts() {
        for k in 0..=8 {
            assert_eq!(gaussian_moment(k), BigInt::from(count_perfect_matchings(2 * k)), "k={k}");
        }
        assert_eq!(count_perfect_matchings(3), 0);
    }

    #[test]
    fn free_two_point() {
        let t = zero_dim_log_z(&[], 0, 4).unwrap();
        assert_eq!(t.connected(2, &[]).unwrap(), r(1, 1));
        assert_eq!(t.g_power(2, &[]), Some(1));
        // Gaussian: no connected function beyond two legs
        assert_eq!(t.connected(4, &[]).unwrap(), r(0, 1));
    }

    #[test]
    fn cubic_two_vertex_vacuum() {
        let t = zero_dim_log_z(&[3], 2, 0).unwrap();
        assert_eq!(t.connected(0, &[2]).unwrap(), r(5, 24));
        assert_eq!(t.g_power(0, &[2]), Some(3));
        assert_eq!(t.loop_grade(0, &[2]), Some(2));
    }

    #[test]
    fn quartic_one_loop_two_point() {
        let t = zero_dim_log_z(&[4], 1, 2).unwrap();
        assert_eq!(t.connected(2, &[1]).unwrap(), r(1, 2));
        assert_eq!(t.g_power(2, &[1]), Some(3));
        assert_eq!(t.grade(1, 1, 2).unwrap(), vec![(vec![1], r(1, 2))]);
    }

    #[test]
    fn queries_beyond_truncation_fail() {
        let t = zero_dim_log_z(&[4], 1, 2).unwrap();
        assert!(t.connected(4, &[1]).is_err());
        assert!(t.connected(2, &[2]).is_err());
        assert!(t.connected(2, &[1, 0]).is_err());
    }
}
