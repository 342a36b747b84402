//! Mellin transforms `Mf(s) = ∫_0^∞ f(x) x^s d^×x` of test functions on the
//! positive ray, their growth on vertical lines, and the growth of completed
//! L-functions in `|Im s|`.
//!
//! Only the positive ray is integrated: for an even function on `R^×` the
//! archimedean zeta integral is twice this.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arch::least_squares_slope;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::global::standard_l;
use crate::quad::integrate;
use crate::special::gamma_r;

/// What the caller promises about `f` on `(0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DecayClass {
    /// Supported in `[a, b]` with `0 < a < b`: `Mf` is entire.
    CompactSupport { a: f64, b: f64 },
    /// Rapid decay at infinity and `f(x) = O(x^k)` at 0: `Mf` converges for `Re s > -k`.
    Schwartz { order_at_zero: u32 },
}

impl DecayClass {
    /// Abscissa of convergence.
    pub fn abscissa(&self) -> f64 {
        match *self {
            DecayClass::CompactSupport { .. } => f64::NEG_INFINITY,
            DecayClass::Schwartz { order_at_zero } => -(order_at_zero as f64),
        }
    }

    /// Class of `ι(f)(x) = x^{-1} f(1/x)`, when it stays in a class.
    pub fn iota(&self) -> Option<DecayClass> {
        match *self {
            DecayClass::CompactSupport { a, b } => Some(DecayClass::CompactSupport { a: 1.0 / b, b: 1.0 / a }),
            DecayClass::Schwartz { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let DecayClass::CompactSupport { a, b } = *self {
            if !(a > 0.0 && b > a && b.is_finite()) {
                return Err(Error::Invalid(format!("support [{a}, {b}] must satisfy 0 < a < b < ∞")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MellinValue {
    pub value: Complex64,
    pub error: f64,
}

const TAIL: f64 = 1e-20;

// Where |f(e^u)| e^{uσ} has dropped below TAIL for good, searched outward from u0.
fn log_axis_edge<F: Fn(f64) -> Complex64>(f: &F, sigma: f64, u0: f64, step: f64, limit: f64) -> f64 {
    let mut u = u0;
    let mut quiet = 0;
    while quiet < 8 && (u - u0).abs() < limit {
        u += step;
        let v = f(u.exp()).norm() * (u * sigma).exp();
        quiet = if v < TAIL { quiet + 1 } else { 0 };
    }
    u
}

/// `Mf(s)` by adaptive quadrature on `u = ln x`.
pub fn mellin_numeric<F>(f: F, class: DecayClass, s: Complex64) -> Result<MellinValue>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    class.validate()?;
    if s.re <= class.abscissa() {
        return Err(Error::Divergent { abscissa: class.abscissa() });
    }
    let (lo, hi) = match class {
        DecayClass::CompactSupport { a, b } => (a.ln(), b.ln()),
        DecayClass::Schwartz { .. } => {
            let hi = log_axis_edge(&f, s.re, 0.0, 0.05, 20.0);
            let lo = log_axis_edge(&f, s.re, 0.0, -0.25, 2000.0);
            (lo, hi)
        }
    };
    let r = integrate(|u| f(u.exp()) * (s * u).exp(), lo, hi, 1e-17, 1e-13, 20_000);
    Ok(MellinValue { value: r.value, error: r.error })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Seminorm {
    pub order: u32,
    /// `max (1 + |t|^n) |Mf(σ+it)|` over the whole grid.
    pub value: f64,
    /// The same maximum over `|t| <= t_max / 2`.
    pub half_range: f64,
}

impl Seminorm {
    pub fn relative_change(&self) -> f64 {
        (self.value - self.half_range).abs() / self.value.max(f64::MIN_POSITIVE)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerticalStripProfile {
    pub sigma: f64,
    pub t_max: f64,
    pub samples: Vec<(f64, Complex64)>,
    pub seminorms: Vec<Seminorm>,
}

/// Samples `F(σ + it)` on `t = -t_max, -t_max + step, ..., t_max` and records
/// `max (1 + |t|^n) |F|` for each order: a grid lower bound for the sup, with
/// the half-range value as a stabilization diagnostic.
pub fn seminorm_profile<F>(fhat: F, sigma: f64, t_max: f64, step: f64, orders: &[u32]) -> Result<VerticalStripProfile>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(step > 0.0) || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::Invalid(format!("empty t-grid (t_max = {t_max}, step = {step})")));
    }
    let count = (2.0 * t_max / step + 1e-9).floor() as usize + 1;
    let samples = (0..count)
        .into_par_iter()
        .map(|k| {
            let t = -t_max + k as f64 * step;
            Ok((t, fhat(Complex64::new(sigma, t))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let seminorms = orders
        .iter()
        .map(|&n| {
            let weighted = |&(t, v): &(f64, Complex64)| (1.0 + t.abs().powi(n as i32)) * v.norm();
            let value = samples.iter().map(weighted).fold(0.0, f64::max);
            let half_range =
                samples.iter().filter(|(t, _)| t.abs() <= t_max / 2.0).map(weighted).fold(0.0, f64::max);
            Seminorm { order: n, value, half_range }
        })
        .collect();
    Ok(VerticalStripProfile { sigma, t_max, samples, seminorms })
}

/// [`seminorm_profile`] of the numerical Mellin transform of `f`.
pub fn mellin_profile<F>(
    f: F,
    class: DecayClass,
    sigma: f64,
    t_max: f64,
    step: f64,
    orders: &[u32],
) -> Result<VerticalStripProfile>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    seminorm_profile(|s| Ok(mellin_numeric(&f, class, s)?.value), sigma, t_max, step, orders)
}

/// The bump `exp(-4 / (1 - y²))`, `y = 2x - 3`, supported on `[1, 2]`.
pub fn bump(x: f64) -> Complex64 {
    let y = 2.0 * x - 3.0;
    if y.abs() >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new((-4.0 / (1.0 - y * y)).exp(), 0.0)
}

pub const BUMP_CLASS: DecayClass = DecayClass::CompactSupport { a: 1.0, b: 2.0 };

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthRow {
    pub t: f64,
    pub lambda: Complex64,
    pub log_abs_lambda: f64,
    pub log_abs_gamma: f64,
    /// Absolute error bound on `Λ`.
    pub err_bound: f64,
}

/// Decay of `|Λ(σ+it, χ)|` in `t` against the gamma factor.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub sigma: f64,
    pub parity: u8,
    /// Least-squares slope of `ln|Λ| - ((σ+ε-1)/2) ln t` in `t`.
    pub fitted_rate: f64,
    pub expected_rate: f64,
    /// `max_t |ln(|Λ| / |Γ_R(s+ε)|)| / ln t`.
    pub band_ratio: f64,
    pub rows: Vec<GrowthRow>,
}

/// Samples `Λ(σ+it, χ)` for `t ∈ [t_lo, t_hi]`. Uses the Euler product with
/// `cutoff` when `σ > 1`, the continued integral otherwise.
pub fn growth_report(
    chi: &DirichletCharacter,
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
    step: f64,
    cutoff: u64,
) -> Result<GrowthReport> {
    if !(step > 0.0) || !(t_hi > t_lo) || t_lo <= 1.0 {
        return Err(Error::Invalid(format!("bad t-range [{t_lo}, {t_hi}] with step {step}")));
    }
    let l = standard_l(chi)?;
    let eps = l.parity();
    let count = ((t_hi - t_lo) / step + 1e-9).floor() as usize + 1;
    let rows = (0..count)
        .into_par_iter()
        .map(|k| {
            let t = t_lo + k as f64 * step;
            let s = Complex64::new(sigma, t);
            let lam = if sigma > 1.0 { l.lambda_euler(s, cutoff)? } else { l.lambda(s)? };
            let g = gamma_r(s + eps as f64)?;
            Ok(GrowthRow {
                t,
                lambda: lam.value,
                log_abs_lambda: lam.value.norm().ln(),
                log_abs_gamma: g.norm().ln(),
                err_bound: lam.err_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let shift = (sigma + eps as f64 - 1.0) / 2.0;
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_abs_lambda - shift * r.t.ln()).collect();
    let fitted_rate = least_squares_slope(&ts, &ys);
    let band_ratio = rows
        .iter()
        .map(|r| (r.log_abs_lambda - r.log_abs_gamma).abs() / r.t.ln())
        .fold(0.0, f64::max);
    Ok(GrowthReport { sigma, parity: eps, fitted_rate, expected_rate: -PI / 4.0, band_ratio, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gaussian(x: f64) -> Complex64 {
        c((-PI * x * x).exp(), 0.0)
    }

    // Oracle: ∫_0^∞ e^{-πx²} x^s d^×x = Γ_R(s) / 2.
    #[test]
    fn gaussian_transform() {
        for s in [c(0.5, 0.0), c(2.0, 3.0), c(0.1, -12.0), c(5.0, 1.0)] {
            let m = mellin_numeric(gaussian, DecayClass::Schwartz { order_at_zero: 0 }, s).unwrap();
            let expected = gamma_r(s).unwrap() / 2.0;
            assert!((m.value - expected).norm() < 1e-12 * expected.norm().max(1e-3), "{s}");
        }
    }

    // Oracle: ∫_0^∞ x e^{-x} x^s d^×x = Γ(s + 1), valid for Re s > -1.
    #[test]
    fn order_at_zero_extends_the_half_plane() {
        let f = |x: f64| c(x * (-x).exp(), 0.0);
        let class = DecayClass::Schwartz { order_at_zero: 1 };
        let m = mellin_numeric(f, class, c(-0.5, 2.0)).unwrap();
        let expected = gamma(c(0.5, 2.0)).unwrap();
        assert!((m.value - expected).norm() < 1e-10 * expected.norm());
        assert!(matches!(mellin_numeric(f, class, c(-1.0, 0.0)), Err(Error::Divergent { .. })));
        assert!(mellin_numeric(gaussian, DecayClass::Schwartz { order_at_zero: 0 }, c(0.0, 1.0)).is_err());
    }

    #[test]
    fn compact_support_is_entire_and_checked() {
        let m = mellin_numeric(bump, BUMP_CLASS, c(-30.0, 5.0)).unwrap();
        assert!(m.value.norm().is_finite());
        assert!(mellin_numeric(bump, DecayClass::CompactSupport { a: 0.0, b: 2.0 }, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn iota_reflects_the_transform() {
        let iota_bump = |x: f64| bump(1.0 / x) / x;
        let class = BUMP_CLASS.iota().unwrap();
        for s in [c(0.3, 1.0), c(-2.0, 7.0)] {
            let lhs = mellin_numeric(iota_bump, class, s).unwrap().value;
            let rhs = mellin_numeric(bump, BUMP_CLASS, c(1.0, 0.0) - s).unwrap().value;
            assert!((lhs - rhs).norm() < 1e-13 * rhs.norm().max(1e-10));
        }
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(mellin_profile(bump, BUMP_CLASS, 0.5, -1.0, 1.0, &[0]).is_err());
        assert!(seminorm_profile(|_| Ok(Complex64::new(1.0, 0.0)), 0.5, 10.0, 0.0, &[0]).is_err());
    }

    #[test]
    fn bump_seminorms_are_finite_and_ordered() {
        let prof = mellin_profile(bump, BUMP_CLASS, 0.5, 20.0, 0.5, &[0, 2, 4]).unwrap();
        assert_eq!(prof.samples.len(), 81);
        let v: Vec<f64> = prof.seminorms.iter().map(|s| s.value).collect();
        assert!(v[0] <= v[1] && v[1] <= v[2]);
    }

    #[test]
    fn constant_is_not_rapidly_decreasing() {
        let one = |_| Ok(Complex64::new(1.0, 0.0));
        let a = seminorm_profile(one, 0.0, 10.0, 0.25, &[1]).unwrap().seminorms[0].value;
        let b = seminorm_profile(one, 0.0, 20.0, 0.25, &[1]).unwrap().seminorms[0].value;
        assert_eq!((a, b), (11.0, 21.0));
    }

    // Oracle: ∫_1^e x^s d^×x = (e^s - 1)/s.
    #[test]
    fn interval_indicator() {
        let class = DecayClass::CompactSupport { a: 1.0, b: std::f64::consts::E };
        let m = mellin_numeric(|_| c(1.0, 0.0), class, c(1.0, 0.0)).unwrap();
        assert!((m.value - c(std::f64::consts::E - 1.0, 0.0)).norm() < 1e-13);
        let z = mellin_numeric(|_| c(0.0, 0.0), DecayClass::Schwartz { order_at_zero: 0 }, c(2.0, 0.0)).unwrap();
        assert_eq!(z.value, c(0.0, 0.0));
    }
}
