//! Evaluation context and the completed-zeta / expression evaluators.

use std::collections::HashMap;

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::gamma::gamma_complex;
use crate::numerics::scaled::ScaledComplex;
use crate::numerics::zeta::zeta_complex;
use crate::symbolic::monomial::rational_to_f64;
use crate::symbolic::ZetaExpression;

/// Evaluation parameters. The engine computes in IEEE doubles; `precision`
/// is validated (≥ 53) and recorded so callers can request headroom checks,
/// and the Euler–Maclaurin policy follows it implicitly.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub precision: u32,
    pub tol_online: f64,
    pub tol_zero: f64,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { precision: 53, tol_online: 1e-8, tol_zero: 1e-10 }
    }
}

impl EvalContext {
    pub fn new(precision: u32, tol_online: f64, tol_zero: f64) -> Result<Self> {
        if precision < 53 {
            return Err(Error::Usage("precision must be at least 53 bits".into()));
        }
        if tol_online <= 0.0 || tol_zero <= 0.0 {
            return Err(Error::Usage("tolerances must be positive".into()));
        }
        Ok(EvalContext { precision, tol_online, tol_zero })
    }
}

/// `(ẑ(s), ξ(s))`: the completed zeta `π^{-s/2}Γ(s/2)ζ(s)` and its entire
/// multiple `s(s-1)ẑ(s)`. `ẑ` has poles at 0 and 1; `ξ(0) = ξ(1) = 1`.
pub fn zhat_xi(s: Complex64) -> Result<(Complex64, Complex64)> {
    if s.im == 0.0 && (s.re == 0.0 || s.re == 1.0) {
        return Err(Error::PoleAtZeroOrOne);
    }
    let z = zhat_unchecked(s)?;
    Ok((z, s * (s - 1.0) * z))
}

/// ξ(s) alone, defined everywhere (the poles of ẑ cancel).
pub fn xi_entire(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && (s.re == 0.0 || s.re == 1.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(s * (s - 1.0) * zhat_unchecked(s)?)
}

fn zhat_unchecked(s: Complex64) -> Result<Complex64> {
    // Reflect into Re ≥ 1/2 where the Euler–Maclaurin region is comfortable:
    // ẑ(s) = ẑ(1-s) exactly.
    let s = if s.re < 0.5 { 1.0 - s } else { s };
    let pi = std::f64::consts::PI;
    let pi_pow = Complex64::new(pi, 0.0).powc(-s / 2.0);
    let gamma = gamma_complex(s / 2.0)?;
    let zeta = zeta_complex(s)?;
    Ok(pi_pow * gamma * zeta)
}

/// ẑ(n) for integer n ≥ 2 (the formal constants).
pub fn zhat_const(n: i64) -> f64 {
    debug_assert!(n >= 2);
    zhat_unchecked(Complex64::new(n as f64, 0.0))
        .expect("zhat is finite for n >= 2")
        .re
}

/// Prepared evaluator for one expression: constants are resolved once, and
/// evaluation runs in scaled arithmetic so the huge polynomial blocks
/// cannot overflow.
pub struct Evaluator {
    terms: Vec<EvalTerm>,
}

struct EvalTerm {
    /// Numeric value of the coefficient combo.
    coeff: f64,
    /// (k, c, exponent) numerator/denominator linear factors, merged.
    factors: Vec<(f64, f64, i32)>,
    /// (k, c, exponent) ξ-free `ẑ` powers.
    zhats: Vec<(f64, f64, i32)>,
}

impl Evaluator {
    pub fn new(expr: &ZetaExpression) -> Self {
        let mut const_cache: HashMap<i64, f64> = HashMap::new();
        let mut cached = |n: i64| -> f64 {
            *const_cache.entry(n).or_insert_with(|| zhat_const(n))
        };
        let terms = expr
            .terms
            .iter()
            .map(|(key, combo)| {
                let coeff: f64 = combo
                    .0
                    .iter()
                    .map(|(mono, q)| {
                        let mut v = rational_to_f64(q);
                        for (&n, &e) in mono.iter() {
                            v *= cached(n).powi(e);
                        }
                        v
                    })
                    .sum();
                let mut factors: Vec<(f64, f64, i32)> = Vec::new();
                for (f, &e) in &key.numer {
                    factors.push((f.k as f64, f.c as f64, e as i32));
                }
                for (f, &e) in &key.denom {
                    factors.push((f.k as f64, f.c as f64, -(e as i32)));
                }
                let zhats = key
                    .mono
                    .0
                    .iter()
                    .map(|(a, &e)| (a.k as f64, a.c as f64, e))
                    .collect();
                EvalTerm { coeff, factors, zhats }
            })
            .collect();
        Evaluator { terms }
    }

    /// Scaled evaluation; errors if `s` sits within `1e-9` of a pole of a
    /// denominator factor or of a positive `ẑ` power.
    pub fn eval_scaled(&self, s: Complex64) -> Result<ScaledComplex> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut acc = ScaledComplex::from_complex(Complex64::new(term.coeff, 0.0));
            if acc.is_zero() {
                continue;
            }
            for &(k, c, e) in &term.factors {
                let v = s * k + c;
                if e < 0 && v.norm() < 1e-9 {
                    return Err(Error::NearPole {
                        at: format!("{k}s+{c}"),
                        dist: v.norm(),
                    });
                }
                acc = acc.mul(&ScaledComplex::from_complex(v).powi(e));
            }
            for &(k, c, e) in &term.zhats {
                let arg = s * k + c;
                if e > 0 {
                    let d0 = arg.norm();
                    let d1 = (arg - 1.0).norm();
                    if d0 < 1e-9 || d1 < 1e-9 {
                        return Err(Error::NearPole {
                            at: format!("zhat({k}s+{c})"),
                            dist: d0.min(d1),
                        });
                    }
                }
                let (z, _) = zhat_xi(arg)?;
                acc = acc.mul(&ScaledComplex::from_complex(z).powi(e));
            }
            parts.push(acc);
        }
        Ok(ScaledComplex::sum(&parts))
    }

    /// Plain complex evaluation (may overflow for expressions whose
    /// polynomial parts exceed f64 range at `s`).
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.eval_scaled(s)?.to_complex())
    }
}

/// One-shot expression evaluation.
pub fn eval_expression(expr: &ZetaExpression, s: Complex64) -> Result<Complex64> {
    Evaluator::new(expr).eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{TermBuilder, ZetaExpression};

    #[test]
    fn zhat_two_is_pi_over_six() {
        let (z, _) = zhat_xi(Complex64::new(2.0, 0.0)).unwrap();
        assert!((z.re - std::f64::consts::PI / 6.0).abs() < 1e-14);
        assert!((zhat_const(2) - 0.5235987755982988).abs() < 1e-14);
    }

    #[test]
    fn xi_functional_equation_on_random_grid() {
        // ξ(s) = ξ(1-s) to 1e-12 relative; deterministic pseudo-grid.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let s = Complex64::new(next() * 8.0 - 4.0, next() * 100.0 - 50.0);
            let a = xi_entire(s).unwrap();
            let b = xi_entire(1.0 - s).unwrap();
            assert!(
                (a - b).norm() <= 1e-12 * a.norm().max(1e-300),
                "s = {s}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn xi_at_zero_and_one() {
        assert_eq!(xi_entire(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(xi_entire(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        // ξ(2) = ξ(-1).
        let a = xi_entire(Complex64::new(2.0, 0.0)).unwrap();
        let b = xi_entire(Complex64::new(-1.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn xi_on_critical_line_is_real() {
        for &t in &[0.3, 7.7, 21.0] {
            let v = xi_entire(Complex64::new(0.5, t)).unwrap();
            assert!(v.im.abs() < 1e-12 * v.norm().max(1e-300), "t = {t}");
        }
    }

    #[test]
    fn zhat_pole_is_rejected() {
        assert!(zhat_xi(Complex64::new(0.0, 0.0)).is_err());
        assert!(zhat_xi(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn a1_formula_evaluates_termwise() {
        // zhat(s+2)/s - zhat(s+1)/(s+2) at s = 1 equals zhat(3) - zhat(2)/3.
        let mut e = ZetaExpression::zero();
        let mut t = TermBuilder::new();
        t.push_zhat(1, 2, 1);
        t.push_linear(1, 0, false);
        e.push(t);
        let mut t = TermBuilder::new();
        t.push_zhat(1, 1, 1);
        t.push_linear(1, 2, false);
        t.scalar = -num::BigRational::from_integer(1.into());
        e.push(t);
        let v = eval_expression(&e, Complex64::new(1.0, 0.0)).unwrap();
        let expect = zhat_const(3) - zhat_const(2) / 3.0;
        assert!((v.re - expect).abs() < 1e-14);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn near_pole_is_reported() {
        let mut e = ZetaExpression::zero();
        let mut t = TermBuilder::new();
        t.push_linear(1, 0, false);
        e.push(t);
        match eval_expression(&e, Complex64::new(1e-12, 0.0)) {
            Err(Error::NearPole { .. }) => {}
            other => panic!("expected NearPole, got {other:?}"),
        }
    }

    #[test]
    fn empty_expression_evaluates_to_zero() {
        let v = eval_expression(&ZetaExpression::zero(), Complex64::new(2.0, 3.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }
}
