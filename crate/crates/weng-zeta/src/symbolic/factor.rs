//! Factored affine-linear arithmetic over ℚ.
//!
//! Polynomials appearing in the zeta sums are products of affine forms
//! `k·s + c`, so they are kept as factor multisets: gcds are multiset
//! intersections, reflections `s ↦ -c₀-s` are factor maps, and degrees are
//! multiset sizes. Expansion to coefficient vectors happens only inside
//! equality tests.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A primitive affine factor `k·s + c` with `k ≥ 1` and `gcd(k, c) = 1`;
/// scalar content lives in the owning container.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinearFactor {
    pub k: i64,
    pub c: i64,
}

impl LinearFactor {
    /// Canonicalize `k·s + c`: extracts the rational content and sign so the
    /// stored factor is primitive with positive leading coefficient.
    /// Constant forms (`k = 0`) are returned entirely as content.
    pub fn canonical(k: i64, c: i64) -> (BigRational, Option<LinearFactor>) {
        if k == 0 {
            assert!(c != 0, "zero factor");
            return (BigRational::from_integer(c.into()), None);
        }
        let sign = if k < 0 { -1 } else { 1 };
        let (k, c) = (k * sign, c * sign);
        let g = gcd(k, c.abs()).max(1);
        let content = BigRational::from_integer((sign * g).into());
        (content, Some(LinearFactor { k: k / g, c: c / g }))
    }

    /// Image under `s ↦ -c0 - s`, which sends `k·s + c` to
    /// `-(k·s + (k·c0 - c))`; the sign is returned as `-1` content.
    pub fn reflect(&self, c0: i64) -> (i64, LinearFactor) {
        (-1, LinearFactor { k: self.k, c: self.k * c0 - self.c })
    }

    pub fn eval(&self, s: num::complex::Complex64) -> num::complex::Complex64 {
        s * self.k as f64 + self.c as f64
    }
}

impl std::fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.k, self.c) {
            (1, 0) => write!(f, "s"),
            (1, c) if c > 0 => write!(f, "s+{c}"),
            (1, c) => write!(f, "s{c}"),
            (k, 0) => write!(f, "{k}s"),
            (k, c) if c > 0 => write!(f, "{k}s+{c}"),
            (k, c) => write!(f, "{k}s{c}"),
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Multiset of primitive linear factors.
pub type FactorMultiset = BTreeMap<LinearFactor, u32>;

pub fn multiset_insert(ms: &mut FactorMultiset, f: LinearFactor, count: u32) {
    if count > 0 {
        *ms.entry(f).or_insert(0) += count;
    }
}

/// Multiset union (product of the polynomials).
pub fn multiset_union(a: &FactorMultiset, b: &FactorMultiset) -> FactorMultiset {
    let mut out = a.clone();
    for (&f, &e) in b {
        *out.entry(f).or_insert(0) += e;
    }
    out
}

/// Multiset intersection (gcd of the polynomials, both in factored form).
pub fn multiset_intersect(a: &FactorMultiset, b: &FactorMultiset) -> FactorMultiset {
    a.iter()
        .filter_map(|(&f, &e)| b.get(&f).map(|&e2| (f, e.min(e2))))
        .filter(|&(_, e)| e > 0)
        .collect()
}

/// Multiset difference `a - b`; `None` if `b` does not divide `a`.
pub fn multiset_subtract(a: &FactorMultiset, b: &FactorMultiset) -> Option<FactorMultiset> {
    let mut out = a.clone();
    for (&f, &e) in b {
        match out.get_mut(&f) {
            Some(cur) if *cur >= e => {
                *cur -= e;
                if *cur == 0 {
                    out.remove(&f);
                }
            }
            _ => return None,
        }
    }
    Some(out)
}

pub fn multiset_degree(ms: &FactorMultiset) -> i64 {
    ms.values().map(|&e| e as i64).sum()
}

/// A polynomial in factored form: `scalar · ∏ factor^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPoly {
    pub scalar: BigRational,
    pub factors: FactorMultiset,
}

impl FactoredPoly {
    pub fn one() -> Self {
        FactoredPoly { scalar: BigRational::one(), factors: BTreeMap::new() }
    }

    pub fn degree(&self) -> i64 {
        multiset_degree(&self.factors)
    }

    pub fn push(&mut self, k: i64, c: i64) {
        let (content, factor) = LinearFactor::canonical(k, c);
        self.scalar *= content;
        if let Some(f) = factor {
            multiset_insert(&mut self.factors, f, 1);
        }
    }

    pub fn mul_assign(&mut self, other: &FactoredPoly) {
        self.scalar *= &other.scalar;
        for (&f, &e) in &other.factors {
            multiset_insert(&mut self.factors, f, e);
        }
    }

    /// Exact division; `None` when `other`'s factors are not contained.
    pub fn divide(&self, other: &FactoredPoly) -> Option<FactoredPoly> {
        let factors = multiset_subtract(&self.factors, &other.factors)?;
        Some(FactoredPoly { scalar: &self.scalar / &other.scalar, factors })
    }
}

/// Dense polynomial coefficients (index = power of `s`), used only for
/// equality and remainder tests.
pub type DensePoly = Vec<BigRational>;

/// Expand a factor multiset into dense coefficients.
pub fn expand(ms: &FactorMultiset) -> DensePoly {
    let mut poly: DensePoly = vec![BigRational::one()];
    for (&LinearFactor { k, c }, &e) in ms {
        let k = BigRational::from_integer(k.into());
        let c = BigRational::from_integer(c.into());
        for _ in 0..e {
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (j, coeff) in poly.iter().enumerate() {
                next[j] += coeff * &c;
                next[j + 1] += coeff * &k;
            }
            poly = next;
        }
    }
    poly
}

pub fn dense_scale(poly: &mut DensePoly, by: &BigRational) {
    for c in poly.iter_mut() {
        *c *= by;
    }
}

pub fn dense_add_assign(a: &mut DensePoly, b: &DensePoly) {
    if a.len() < b.len() {
        a.resize(b.len(), BigRational::zero());
    }
    for (i, c) in b.iter().enumerate() {
        a[i] += c;
    }
}

pub fn dense_is_zero(a: &DensePoly) -> bool {
    a.iter().all(|c| c.is_zero())
}

pub fn dense_degree(a: &DensePoly) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

/// Polynomial remainder of `a` by the expansion of `divisor` (monic-ized on
/// the fly); used to confirm exact divisibility in the SL(n) coefficient
/// checks.
pub fn dense_rem(a: &DensePoly, divisor: &DensePoly) -> DensePoly {
    let dd = dense_degree(divisor).expect("division by zero polynomial");
    let lead = divisor[dd].clone();
    let mut rem = a.clone();
    while let Some(dr) = dense_degree(&rem) {
        if dr < dd {
            break;
        }
        let q = &rem[dr] / &lead;
        let shift = dr - dd;
        for (i, c) in divisor.iter().enumerate() {
            let delta = c * &q;
            rem[i + shift] -= delta;
        }
        rem[dr] = BigRational::zero();
    }
    rem
}

/// Rational content heuristic for display: either integer or `a/b`.
pub fn rational_display(q: &BigRational) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_extracts_sign_and_content() {
        let (content, f) = LinearFactor::canonical(-2, -4);
        assert_eq!(content, BigRational::from_integer((-2).into()));
        assert_eq!(f, Some(LinearFactor { k: 1, c: 2 }));

        let (content, f) = LinearFactor::canonical(0, -3);
        assert_eq!(content, BigRational::from_integer((-3).into()));
        assert_eq!(f, None);
    }

    #[test]
    fn reflect_is_involutive_up_to_sign() {
        let f = LinearFactor { k: 2, c: 3 };
        let (s1, g) = f.reflect(5);
        let (s2, h) = g.reflect(5);
        assert_eq!(h, f);
        assert_eq!(s1 * s2, 1);
    }

    #[test]
    fn gcd_by_intersection() {
        let mut a = BTreeMap::new();
        multiset_insert(&mut a, LinearFactor { k: 1, c: 0 }, 2);
        multiset_insert(&mut a, LinearFactor { k: 1, c: 2 }, 1);
        let mut b = BTreeMap::new();
        multiset_insert(&mut b, LinearFactor { k: 1, c: 0 }, 1);
        multiset_insert(&mut b, LinearFactor { k: 1, c: 3 }, 4);
        let g = multiset_intersect(&a, &b);
        assert_eq!(g.len(), 1);
        assert_eq!(g[&LinearFactor { k: 1, c: 0 }], 1);
    }

    #[test]
    fn expansion_of_s_plus_one_squared() {
        let mut ms = BTreeMap::new();
        multiset_insert(&mut ms, LinearFactor { k: 1, c: 1 }, 2);
        let poly = expand(&ms);
        let expect: Vec<BigRational> = [1, 2, 1]
            .iter()
            .map(|&n| BigRational::from_integer(n.into()))
            .collect();
        assert_eq!(poly, expect);
    }

    #[test]
    fn remainder_detects_divisibility() {
        // (s+1)(s+2) divided by (s+1) leaves zero remainder.
        let mut num = BTreeMap::new();
        multiset_insert(&mut num, LinearFactor { k: 1, c: 1 }, 1);
        multiset_insert(&mut num, LinearFactor { k: 1, c: 2 }, 1);
        let mut div = BTreeMap::new();
        multiset_insert(&mut div, LinearFactor { k: 1, c: 1 }, 1);
        let rem = dense_rem(&expand(&num), &expand(&div));
        assert!(dense_is_zero(&rem));

        let mut div2 = BTreeMap::new();
        multiset_insert(&mut div2, LinearFactor { k: 1, c: 5 }, 1);
        let rem2 = dense_rem(&expand(&num), &expand(&div2));
        assert!(!dense_is_zero(&rem2));
    }
}
