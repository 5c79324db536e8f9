//! Complex values with a separated binary exponent.
//!
//! The polynomial blocks `Q̃_{p,w}` multiply out hundreds of linear factors,
//! far past f64 range, while only ratios and signs matter for zero
//! detection. `ScaledComplex` keeps a normalized mantissa and an `i64`
//! power of two so products and sums of wildly scaled terms stay exact in
//! shape.

use num::complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct ScaledComplex {
    /// Mantissa with norm in [1, 2) unless the value is exactly zero.
    pub mantissa: Complex64,
    pub exp2: i64,
}

impl ScaledComplex {
    pub fn zero() -> Self {
        ScaledComplex { mantissa: Complex64::new(0.0, 0.0), exp2: 0 }
    }

    pub fn one() -> Self {
        ScaledComplex { mantissa: Complex64::new(1.0, 0.0), exp2: 0 }
    }

    pub fn from_complex(v: Complex64) -> Self {
        let mut out = ScaledComplex { mantissa: v, exp2: 0 };
        out.normalize();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.norm_sqr() == 0.0
    }

    fn normalize(&mut self) {
        let norm = self.mantissa.norm();
        if norm == 0.0 || !norm.is_finite() {
            self.exp2 = 0;
            return;
        }
        let shift = norm.log2().floor() as i64;
        if shift != 0 {
            self.mantissa *= (2.0f64).powi(-shift as i32);
            self.exp2 += shift;
        }
    }

    pub fn mul(&self, other: &ScaledComplex) -> ScaledComplex {
        let mut out = ScaledComplex {
            mantissa: self.mantissa * other.mantissa,
            exp2: self.exp2 + other.exp2,
        };
        out.normalize();
        out
    }

    pub fn mul_complex(&self, v: Complex64) -> ScaledComplex {
        self.mul(&ScaledComplex::from_complex(v))
    }

    pub fn div(&self, other: &ScaledComplex) -> ScaledComplex {
        let mut out = ScaledComplex {
            mantissa: self.mantissa / other.mantissa,
            exp2: self.exp2 - other.exp2,
        };
        out.normalize();
        out
    }

    pub fn powi(&self, e: i32) -> ScaledComplex {
        let mut out = ScaledComplex::one();
        let base = if e < 0 { ScaledComplex::one().div(self) } else { *self };
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Sum of scaled values, stable against exponent spread: terms more
    /// than ~60 binary orders below the largest cannot affect the result.
    pub fn sum(values: &[ScaledComplex]) -> ScaledComplex {
        let max_exp = values
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.exp2)
            .max()
            .unwrap_or(0);
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            if v.is_zero() {
                continue;
            }
            let shift = v.exp2 - max_exp;
            if shift > -1060 {
                acc += v.mantissa * (2.0f64).powi(shift as i32);
            }
        }
        let mut out = ScaledComplex { mantissa: acc, exp2: max_exp };
        out.normalize();
        out
    }

    /// Collapse to f64 complex; may overflow to infinity for |exp2| large.
    pub fn to_complex(&self) -> Complex64 {
        if self.exp2.abs() > 1020 {
            let scale = if self.exp2 > 0 { f64::INFINITY } else { 0.0 };
            return self.mantissa * scale;
        }
        self.mantissa * (2.0f64).powi(self.exp2 as i32)
    }

    /// |self| / |other| as f64 (exponent-safe).
    pub fn abs_ratio(&self, other: &ScaledComplex) -> f64 {
        if other.is_zero() {
            return f64::INFINITY;
        }
        if self.is_zero() {
            return 0.0;
        }
        let d = self.exp2 - other.exp2;
        if d > 1020 {
            return f64::INFINITY;
        }
        if d < -1020 {
            return 0.0;
        }
        self.mantissa.norm() / other.mantissa.norm() * (2.0f64).powi(d as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_many_large_factors_keeps_shape() {
        let mut acc = ScaledComplex::one();
        for i in 1..400 {
            acc = acc.mul_complex(Complex64::new(i as f64, 1.0));
        }
        // The norm exceeds f64 range, the mantissa stays normalized.
        assert!(acc.mantissa.norm() >= 1.0 && acc.mantissa.norm() < 2.0);
        assert!(acc.exp2 > 2000);
        // Dividing by the same factors returns to one.
        for i in 1..400 {
            acc = acc.div(&ScaledComplex::from_complex(Complex64::new(i as f64, 1.0)));
        }
        assert!((acc.to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn sum_is_dominated_by_the_largest_term() {
        let big = ScaledComplex { mantissa: Complex64::new(1.5, 0.0), exp2: 100 };
        let small = ScaledComplex { mantissa: Complex64::new(1.5, 0.0), exp2: -100 };
        let s = ScaledComplex::sum(&[big, small]);
        assert_eq!(s.exp2, 100);
        assert!((s.mantissa.re - 1.5).abs() < 1e-12);
    }

    #[test]
    fn abs_ratio_spans_exponents() {
        let a = ScaledComplex { mantissa: Complex64::new(1.0, 0.0), exp2: 50 };
        let b = ScaledComplex { mantissa: Complex64::new(1.0, 0.0), exp2: 40 };
        assert!((a.abs_ratio(&b) - 1024.0).abs() < 1e-9);
    }
}
