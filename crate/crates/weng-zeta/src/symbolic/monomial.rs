//! Formal `ẑ` monomials and constant combinations.
//!
//! Only `ẑ` symbols exist internally; `ξ(a) = a(a-1)ẑ(a)` is expanded on
//! sight so one reflection rule `ẑ(x) = ẑ(1-x)` covers all the
//! functional-equation bookkeeping. Arguments are canonicalized at
//! insertion: `k ≥ 1`, or `k = 0` with `c ≥ 1` for pure constants. No
//! numeric relations among the `ẑ(n)` are assumed anywhere -- equality of
//! constant combinations is formal.

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factor::rational_display;

/// Canonical argument of a `ẑ` factor: `ẑ(k·s + c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZhatArg {
    pub k: i64,
    pub c: i64,
}

impl ZhatArg {
    /// Apply `ẑ(x) = ẑ(1-x)` until the argument is canonical.
    pub fn canonical(k: i64, c: i64) -> ZhatArg {
        if k > 0 || (k == 0 && c >= 1) {
            ZhatArg { k, c }
        } else {
            ZhatArg { k: -k, c: 1 - c }
        }
    }

    /// Image under `s ↦ -c0 - s`, re-canonicalized.
    pub fn reflect(&self, c0: i64) -> ZhatArg {
        ZhatArg::canonical(-self.k, self.c - self.k * c0)
    }
}

impl std::fmt::Display for ZhatArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.k, self.c) {
            (0, c) => write!(f, "{c}"),
            (1, 0) => write!(f, "s"),
            (1, c) if c > 0 => write!(f, "s+{c}"),
            (1, c) => write!(f, "s{c}"),
            (k, 0) => write!(f, "{k}s"),
            (k, c) if c > 0 => write!(f, "{k}s+{c}"),
            (k, c) => write!(f, "{k}s{c}"),
        }
    }
}

/// `∏ ẑ(k_i s + c_i)^{e_i}` with `k_i ≥ 1` (the s-dependent part only).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ZhatMonomial(pub BTreeMap<ZhatArg, i32>);

impl ZhatMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, arg: ZhatArg, exp: i32) {
        debug_assert!(arg.k >= 1);
        let e = self.0.entry(arg).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.0.remove(&arg);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&a, &e) in &other.0 {
            out.insert(a, e);
        }
        out
    }

    pub fn reflect(&self, c0: i64) -> Self {
        let mut out = ZhatMonomial::one();
        for (&a, &e) in &self.0 {
            let r = a.reflect(c0);
            debug_assert!(r.k >= 1);
            out.insert(r, e);
        }
        out
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.0.values().any(|&e| e < 0)
    }
}

/// Pure constant monomial `∏ ẑ(n)^{e_n}` (all arguments `k = 0`, `n ≥ 1`).
pub type ConstMonomial = BTreeMap<i64, i32>;

/// Formal ℚ-linear combination of constant monomials such as
/// `ẑ(2) - 1/2` or `ẑ(2)²ẑ(3)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ConstantCombo(pub BTreeMap<ConstMonomial, BigRational>);

impl ConstantCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(BigRational::one())
    }

    pub fn scalar(q: BigRational) -> Self {
        let mut map = BTreeMap::new();
        if !q.is_zero() {
            map.insert(ConstMonomial::new(), q);
        }
        ConstantCombo(map)
    }

    /// A single weighted monomial.
    pub fn monomial(q: BigRational, mono: ConstMonomial) -> Self {
        let mut map = BTreeMap::new();
        if !q.is_zero() {
            let mono: ConstMonomial = mono.into_iter().filter(|&(_, e)| e != 0).collect();
            map.insert(mono, q);
        }
        ConstantCombo(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (mono, q) in &other.0 {
            let entry = self.0.entry(mono.clone()).or_insert_with(BigRational::zero);
            *entry += q;
            if entry.is_zero() {
                self.0.remove(mono);
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ConstantCombo(self.0.iter().map(|(m, w)| (m.clone(), w * q)).collect())
    }

    pub fn neg(&self) -> Self {
        ConstantCombo(self.0.iter().map(|(m, w)| (m.clone(), -w)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ConstantCombo::zero();
        for (m1, q1) in &self.0 {
            for (m2, q2) in &other.0 {
                let mut mono = m1.clone();
                for (&n, &e) in m2 {
                    let entry = mono.entry(n).or_insert(0);
                    *entry += e;
                    if *entry == 0 {
                        mono.remove(&n);
                    }
                }
                let q = q1 * q2;
                let entry = out.0.entry(mono).or_insert_with(BigRational::zero);
                *entry += q;
            }
        }
        out.0.retain(|_, q| !q.is_zero());
        out
    }

    /// Largest exponent deficit of `ẑ(n)` across the monomials: how many
    /// copies of `ẑ(n)` a clearing product must supply.
    pub fn deficiency(&self, n: i64) -> i32 {
        self.0
            .keys()
            .map(|m| m.get(&n).map_or(0, |&e| (-e).max(0)))
            .max()
            .unwrap_or(0)
    }

    /// All `n` appearing with negative exponent in some monomial.
    pub fn denominator_constants(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .0
            .keys()
            .flat_map(|m| m.iter().filter(|&(_, &e)| e < 0).map(|(&n, _)| n))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.0.keys().any(|m| m.values().any(|&e| e < 0))
    }

    /// Evaluate with a supplied `ẑ(n)` evaluator.
    pub fn eval(&self, zhat_at: &dyn Fn(i64) -> f64) -> f64 {
        self.0
            .iter()
            .map(|(mono, q)| {
                let mut v = rational_to_f64(q);
                for (&n, &e) in mono {
                    v *= zhat_at(n).powi(e);
                }
                v
            })
            .sum()
    }

    pub fn render_text(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (mono, q)) in self.0.iter().enumerate() {
            let mag = q.abs();
            let sign = q.is_negative();
            if i == 0 {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            let mono_str = render_const_monomial(mono);
            if mono_str.is_empty() {
                out.push_str(&rational_display(&mag));
            } else if mag.is_one() {
                out.push_str(&mono_str);
            } else {
                out.push_str(&format!("{}*{}", rational_display(&mag), mono_str));
            }
        }
        out
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn render_const_monomial(mono: &ConstMonomial) -> String {
    mono.iter()
        .map(|(&n, &e)| match e {
            1 => format!("zhat({n})"),
            e => format!("zhat({n})^{e}"),
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Fall back through a quotient of big integers scaled into range.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
