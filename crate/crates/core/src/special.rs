//! Complex gamma function and the archimedean factors `Γ_R`, `Γ_C`.
//!
//! `ln Γ` uses the recurrence to move to `Re z >= 15`, then the Stirling
//! series with ten Bernoulli terms (truncation error below 1e-23 there).
//! The left half-plane goes through the reflection formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_6;

// B_{2k} / (2k (2k - 1))
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TO: f64 = 15.0;

/// Is `z` one of the poles `0, -1, -2, ...`?
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

// ln Γ for Re z >= 1/2; continuous along horizontal lines.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < SHIFT_TO {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

/// `sin(πz)` with the real part reduced first, so integers give exact zeros.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let x = z.re - 2.0 * (z.re / 2.0).round();
    let (s, c) = (PI * x).sin_cos();
    let (sh, ch) = ((PI * z.im).sinh(), (PI * z.im).cosh());
    let (s, c) = if x.fract() == 0.0 { (0.0, if x == 0.0 { 1.0 } else { -1.0 }) } else { (s, c) };
    Complex64::new(s * ch, c * sh)
}

/// A logarithm of `Γ(z)` (not necessarily the principal branch).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    // Γ(z) Γ(1-z) = π / sin(πz)
    Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_right(1.0 - z))
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Err(Error::GammaPole(z));
    }
    if z.im == 0.0 && z.re > 0.0 && z.re <= 20.0 && z.re.fract() == 0.0 {
        let n = z.re as u64;
        return Ok(Complex64::new((1..n).map(|k| k as f64).product(), 0.0));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z).exp());
    }
    Ok(PI / (sin_pi(z) * ln_gamma_right(1.0 - z).exp()))
}

/// `ln Γ_R(s) = -(s/2) ln π + ln Γ(s/2)`.
pub fn ln_gamma_r(s: Complex64) -> Result<Complex64> {
    Ok(-s * 0.5 * PI.ln() + ln_gamma(s * 0.5)?)
}

/// `Γ_R(s) = π^{-s/2} Γ(s/2)`.
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    let g = gamma(s * 0.5)?;
    Ok(g * (-s * 0.5 * PI.ln()).exp())
}

/// `Γ_C(s) = 2 (2π)^{-s} Γ(s)`.
pub fn gamma_c(s: Complex64) -> Result<Complex64> {
    let g = gamma(s)?;
    Ok(2.0 * g * (-s * (2.0 * PI).ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_real;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn integer_and_half_integer_values() {
        assert_eq!(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0));
        let half = gamma(c(0.5, 0.0)).unwrap();
        assert!(rel(half, c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(7.5, 0.0)).unwrap(), c(1871.254_305_797_788_7, 0.0)) < 1e-13);
    }

    #[test]
    fn poles_are_reported() {
        for n in 0..5 {
            assert!(matches!(gamma(c(-(n as f64), 0.0)), Err(Error::GammaPole(_))));
        }
        assert!(gamma(c(-1.0, 1e-9)).is_ok());
    }

    // Oracle: Γ(x) = ∫_0^∞ t^{x-1} e^{-t} dt by quadrature.
    #[test]
    fn matches_euler_integral() {
        for &x in &[1.3, 2.0, 3.7, 6.25] {
            let (v, _) = integrate_real(|t| t.powf(x - 1.0) * (-t).exp(), 0.0, 80.0, 1e-15, 1e-15);
            assert!(rel(gamma(c(x, 0.0)).unwrap(), c(v, 0.0)) < 1e-12, "x={x}");
        }
    }

    // Oracles: |Γ(1/2 + it)|² = π / cosh(πt), |Γ(it)|² = π / (t sinh πt),
    // |Γ(1 + it)|² = πt / sinh(πt).
    #[test]
    fn modulus_identities_on_vertical_lines() {
        for k in 1..=80 {
            let t = k as f64 * 0.5;
            let a = gamma(c(0.5, t)).unwrap().norm_sqr();
            assert!((a / (PI / (PI * t).cosh()) - 1.0).abs() < 1e-12, "t={t}");
            let b = gamma(c(0.0, t)).unwrap().norm_sqr();
            assert!((b / (PI / (t * (PI * t).sinh())) - 1.0).abs() < 1e-12, "t={t}");
            let d = gamma(c(1.0, t)).unwrap().norm_sqr();
            assert!((d / (PI * t / (PI * t).sinh()) - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn recurrence_and_reflection() {
        for &z in &[c(0.3, 2.0), c(-2.7, 0.4), c(4.1, -11.0), c(-0.5, 30.0), c(0.1, 0.0)] {
            let g = gamma(z).unwrap();
            let g1 = gamma(z + 1.0).unwrap();
            assert!(rel(g1, z * g) < 1e-12, "{z}");
            let refl = g * gamma(1.0 - z).unwrap() * sin_pi(z);
            assert!(rel(refl, c(PI, 0.0)) < 1e-12, "{z}");
        }
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        for &z in &[c(0.7, 0.0), c(2.5, 3.0), c(-3.3, 1.0), c(10.0, 40.0)] {
            let a = ln_gamma(z).unwrap().exp();
            assert!(rel(a, gamma(z).unwrap()) < 1e-12, "{z}");
        }
    }

    #[test]
    fn archimedean_factors() {
        assert!(rel(gamma_r(c(2.0, 0.0)).unwrap(), c(1.0 / PI, 0.0)) < 1e-15);
        assert!(rel(gamma_c(c(1.0, 0.0)).unwrap(), c(1.0 / PI, 0.0)) < 1e-15);
        assert!(rel(ln_gamma_r(c(0.5, 10.0)).unwrap().exp(), gamma_r(c(0.5, 10.0)).unwrap()) < 1e-12);
    }
}
