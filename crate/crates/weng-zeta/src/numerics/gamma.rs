//! Complex gamma function via the Lanczos approximation (g = 7) with
//! reflection for `Re(z) < 0.5`.

use num::complex::Complex64;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex `z`; errors at the poles `z ∈ {0, -1, -2, …}`.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::PoleAtNonpositiveInteger(z.re));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z) Γ(1-z) = π / sin(πz).
        let pi = std::f64::consts::PI;
        return pi / ((pi * z).sin() * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(COEFFS[0], 0.0);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powc(z + 0.5) * (-t).exp() * acc
}

/// ln Γ(z) on `Re(z) ≥ 0.5` (principal branch of the Lanczos form); used
/// where Γ itself would overflow.
pub fn ln_gamma_right(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.5);
    let z = z - 1.0;
    let mut acc = Complex64::new(COEFFS[0], 0.0);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}
