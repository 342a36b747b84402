//! Bruhat–Schwartz functions on `Q_p` in a finite-quotient model, their local
//! zeta integrals, Fourier transform and the non-archimedean generator map.
//!
//! A function with support in `p^{-M} Z_p` that is invariant under
//! `p^N Z_p` is stored as `p^{M+N}` values indexed by `p^M x mod p^{M+N}`.
//! Measures: additive `vol(Z_p) = 1`, multiplicative `vol(Z_p^×) = 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mod_floor, valuation};
use crate::characters::{DirichletCharacter, HeckeCharacterPoint};
use crate::error::{Error, Result};
use crate::euler::EulerFactor;

/// Largest grid `p^{M+N}` a test function may occupy.
pub const MAX_GRID: u64 = 1 << 22;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// Relative size below which values are treated as zero when canonicalizing.
const SNAP: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TestFunctionRepr", into = "TestFunctionRepr")]
pub struct PAdicTestFunction {
    p: u64,
    m: u32,
    n: u32,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TestFunctionRepr {
    p: u64,
    #[serde(rename = "M")]
    m: u32,
    #[serde(rename = "N")]
    n: u32,
    values: Vec<Complex64>,
}

impl TryFrom<TestFunctionRepr> for PAdicTestFunction {
    type Error = Error;
    fn try_from(r: TestFunctionRepr) -> Result<Self> {
        PAdicTestFunction::new(r.p, r.m, r.n, r.values)
    }
}

impl From<PAdicTestFunction> for TestFunctionRepr {
    fn from(f: PAdicTestFunction) -> Self {
        TestFunctionRepr { p: f.p, m: f.m, n: f.n, values: f.values }
    }
}

fn grid_size(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&g| g <= MAX_GRID)
        .ok_or_else(|| Error::Unsupported(format!("grid {p}^{e} exceeds {MAX_GRID} entries")))
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

impl PAdicTestFunction {
    pub fn new(p: u64, m: u32, n: u32, values: Vec<Complex64>) -> Result<Self> {
        check_prime(p)?;
        let len = grid_size(p, m + n)?;
        if values.len() as u64 != len {
            return Err(Error::Invalid(format!("expected {len} values for p={p}, M={m}, N={n}, got {}", values.len())));
        }
        let mut f = Self { p, m, n, values };
        f.canonicalize();
        Ok(f)
    }

    /// Builds the function whose value at `x` is `f(p^M x mod p^{M+N})`.
    pub fn from_residues(p: u64, m: u32, n: u32, f: impl Fn(u64) -> Complex64) -> Result<Self> {
        check_prime(p)?;
        let len = grid_size(p, m + n)?;
        Self::new(p, m, n, (0..len).map(f).collect())
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::new(p, 0, 0, vec![ZERO])
    }

    /// `1_{Z_p}`.
    pub fn standard(p: u64) -> Result<Self> {
        Self::new(p, 0, 0, vec![ONE])
    }

    /// `1_{p^e Z_p}`.
    pub fn ball(p: u64, e: i32) -> Result<Self> {
        if e <= 0 {
            return Self::from_residues(p, (-e) as u32, 0, |_| ONE);
        }
        Self::from_residues(p, 0, e as u32, |r| if r == 0 { ONE } else { ZERO })
    }

    /// `1_{p^j Z_p^×}`.
    pub fn shell(p: u64, j: i32) -> Result<Self> {
        let m = (-j).max(0) as u32;
        let n = (j + 1).max(0) as u32;
        let target = (j + m as i32) as u32;
        Self::from_residues(p, m, n, |r| if r != 0 && valuation(r, p) == target { ONE } else { ZERO })
    }

    /// `1_{Z_p^×}`.
    pub fn units(p: u64) -> Result<Self> {
        Self::shell(p, 0)
    }

    /// `x ↦ χ(x)·1_{Z_p^×}(x)` for a character mod a power of `p` (or mod 1).
    pub fn character_on_units(p: u64, chi: &DirichletCharacter) -> Result<Self> {
        let q = chi.modulus();
        let k = if q == 1 { 0 } else { valuation(q, p) };
        if q != 1 && p.pow(k) != q {
            return Err(Error::Incompatible(format!("character mod {q} is not a {p}-power character")));
        }
        Self::from_residues(p, 0, k.max(1), |r| if r % p == 0 { ZERO } else { chi.evaluate(r as i64) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Outer exponent `M`: support in `p^{-M} Z_p`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Smoothness exponent `N`: invariance under `p^N Z_p`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn at_zero(&self) -> Complex64 {
        self.values[0]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == ZERO)
    }

    pub fn is_standard(&self) -> bool {
        self.m == 0 && self.n == 0 && self.values[0] == ONE
    }

    /// Value at `x = p^e · r`.
    pub fn value_at(&self, r: i64, e: i32) -> Complex64 {
        if r == 0 {
            return self.values[0];
        }
        let v = valuation(r.unsigned_abs(), self.p) as i32;
        let scale = self.m as i32 + e + v;
        if scale < 0 {
            return ZERO;
        }
        let md = self.modulus();
        if scale as u32 >= self.m + self.n {
            return self.values[0];
        }
        let unit = r / (self.p as i64).pow(v as u32);
        let idx = (self.p.pow(scale as u32) as u128 * mod_floor(unit, md) as u128 % md as u128) as usize;
        self.values[idx]
    }

    // Values on the (m2, n2) grid, m2 >= M, n2 >= N.
    fn expanded(&self, m2: u32, n2: u32) -> Result<Vec<Complex64>> {
        let len = grid_size(self.p, m2 + n2)?;
        let step = self.p.pow(m2 - self.m);
        let md = self.modulus();
        Ok((0..len)
            .map(|r| if r % step == 0 { self.values[((r / step) % md) as usize] } else { ZERO })
            .collect())
    }

    fn combine(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Incompatible(format!("test functions at {} and {}", self.p, other.p)));
        }
        let (m, n) = (self.m.max(other.m), self.n.max(other.n));
        let a = self.expanded(m, n)?;
        let b = other.expanded(m, n)?;
        Self::new(self.p, m, n, a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self { p: self.p, m: self.m, n: self.n, values: self.values.iter().map(|v| v * c).collect() };
        out.canonicalize();
        out
    }

    /// `x ↦ Φ(u x)` for an integer `u` prime to `p`.
    pub fn dilate_unit(&self, u: i64) -> Result<Self> {
        let md = self.modulus();
        if gcd(mod_floor(u, self.p), self.p) != 1 {
            return Err(Error::Invalid(format!("{u} is not a {}-adic unit", self.p)));
        }
        let um = mod_floor(u, md);
        let values = (0..md).map(|r| self.values[((r as u128 * um as u128) % md as u128) as usize]).collect();
        Self::new(self.p, self.m, self.n, values)
    }

    /// `x ↦ Φ(-x)`.
    pub fn reflect(&self) -> Self {
        self.dilate_unit(-1).expect("-1 is a unit")
    }

    /// `x ↦ Φ(p^k x)`.
    pub fn dilate_p(&self, k: i32) -> Result<Self> {
        let m2 = (self.m as i32 + k).max(0) as u32;
        let n2 = (self.n as i32 - k).max(0) as u32;
        // x = p^{-m2} r, so p^k x = p^{k - m2} r
        Self::from_residues(self.p, m2, n2, |r| self.value_at(r as i64, k - m2 as i32))
    }

    /// Coefficientwise comparison after expansion to a common grid.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.p != other.p {
            return false;
        }
        let (m, n) = (self.m.max(other.m), self.n.max(other.n));
        match (self.expanded(m, n), other.expanded(m, n)) {
            (Ok(a), Ok(b)) => a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol),
            _ => false,
        }
    }

    /// Reduces `(M, N)` to minimal values; values below `1e-13` of the largest are set to 0.
    pub fn canonicalize(&mut self) {
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let snap = SNAP * scale;
        for v in self.values.iter_mut() {
            if v.re.abs() <= snap {
                v.re = 0.0;
            }
            if v.im.abs() <= snap {
                v.im = 0.0;
            }
        }
        let tol = 2.0 * snap;
        let p = self.p;
        loop {
            let mut changed = false;
            if self.m > 0 && self.values.iter().enumerate().all(|(r, v)| (r as u64).is_multiple_of(p) || v.norm() <= tol) {
                let len = self.values.len() / p as usize;
                self.values = (0..len).map(|r| self.values[r * p as usize]).collect();
                self.m -= 1;
                changed = true;
            }
            if self.n > 0 {
                let len = self.values.len() / p as usize;
                if self.values.iter().enumerate().all(|(r, v)| (v - self.values[r % len]).norm() <= tol) {
                    self.values.truncate(len);
                    self.n -= 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// The `p`-component `ω_p` of the idelic character attached to a Dirichlet
/// character: `ω_p = conj(χ_p)` on `Z_p^×`, and `ω_p(p)` is the value at `p`
/// of the prime-to-`p` part of `χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCharacter {
    p: u64,
    conductor_exponent: u32,
    unit: DirichletCharacter,
    at_p: Complex64,
}

impl LocalCharacter {
    pub fn trivial(p: u64) -> Self {
        Self::unramified(p, ONE)
    }

    /// Unramified character with `ω_p(p) = c`.
    pub fn unramified(p: u64, c: Complex64) -> Self {
        Self { p, conductor_exponent: 0, unit: DirichletCharacter::trivial(1).expect("modulus 1"), at_p: c }
    }

    /// Character on `Z_p^×` given by `unit` (a character mod `p^f`), with `ω_p(p) = at_p`.
    pub fn new(p: u64, unit: DirichletCharacter, at_p: Complex64) -> Result<Self> {
        check_prime(p)?;
        let unit = unit.primitive();
        let q = unit.modulus();
        let f = if q == 1 { 0 } else { valuation(q, p) };
        if q != 1 && p.pow(f) != q {
            return Err(Error::Incompatible(format!("character mod {q} is not a {p}-power character")));
        }
        Ok(Self { p, conductor_exponent: f, unit, at_p })
    }

    /// `ω_p` for the Hecke character `χ·|·|^s` attached to the primitive character `chi`.
    pub fn from_character(chi: &DirichletCharacter, p: u64) -> Result<Self> {
        let chi = chi.primitive();
        let at_p = chi.prime_to_part(p).evaluate(p as i64);
        Self::new(p, chi.prime_component(p).conj(), at_p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn conductor_exponent(&self) -> u32 {
        self.conductor_exponent
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor_exponent == 0
    }

    pub fn at_p(&self) -> Complex64 {
        self.at_p
    }

    /// `ω_p(u)` for `u` a `p`-adic unit represented by an integer.
    pub fn unit_value(&self, u: i64) -> Complex64 {
        self.unit.evaluate(u)
    }

    pub fn inverse(&self) -> Self {
        Self { p: self.p, conductor_exponent: self.conductor_exponent, unit: self.unit.conj(), at_p: self.at_p.inv() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Incompatible(format!("local characters at {} and {}", self.p, other.p)));
        }
        Self::new(self.p, self.unit.mul(&other.unit)?, self.at_p * other.at_p)
    }
}

/// `∫_{Z_p^×} Φ(p^j u) ω_p(u) du` with `vol(Z_p^×) = 1`, computed exactly
/// over the units of a finite quotient.
pub fn shell_average(phi: &PAdicTestFunction, j: i32, omega: &LocalCharacter) -> Complex64 {
    let p = phi.p;
    let depth = (phi.n as i32 - j).max(omega.conductor_exponent as i32).max(1) as u32;
    let pl = p.pow(depth);
    let mut sum = ZERO;
    let mut count = 0u64;
    for u in (1..pl).filter(|u| u % p != 0) {
        let v = phi.value_at(u as i64, j);
        if v != ZERO {
            sum += v * omega.unit_value(u as i64);
        }
        count += 1;
    }
    sum / count as f64
}

fn shell_coefficients(phi: &PAdicTestFunction, omega: &LocalCharacter) -> Vec<Complex64> {
    (-(phi.m as i32)..phi.n as i32)
        .map(|j| shell_average(phi, j, omega) * omega.at_p.powi(j))
        .collect()
}

fn check_same_prime(phi: &PAdicTestFunction, omega: &LocalCharacter) -> Result<()> {
    if phi.p != omega.p {
        return Err(Error::Incompatible(format!("test function at {} with character at {}", phi.p, omega.p)));
    }
    Ok(())
}

/// `∫_{Q_p^×} Φ(x) ω_p(x) |x|^s d^×x`, shell by shell, with the constant tail
/// on `p^N Z_p` summed as a geometric series.
pub fn local_zeta_with(phi: &PAdicTestFunction, omega: &LocalCharacter, s: Complex64) -> Result<Complex64> {
    check_same_prime(phi, omega)?;
    let x = (-s * (phi.p as f64).ln()).exp();
    let m = phi.m as i32;
    let mut total = ZERO;
    for (i, a) in shell_coefficients(phi, omega).into_iter().enumerate() {
        total += a * x.powi(i as i32 - m);
    }
    let v0 = phi.values[0];
    if v0 != ZERO && omega.is_unramified() {
        let ratio = omega.at_p * x;
        if ratio.norm() >= 1.0 {
            return Err(Error::Divergent { abscissa: 0.0 });
        }
        total += v0 * ratio.powi(phi.n as i32) / (ONE - ratio);
    }
    Ok(total)
}

/// Local zeta integral at the prime of `phi` against the component of `chi`.
pub fn local_zeta(phi: &PAdicTestFunction, chi: &HeckeCharacterPoint) -> Result<Complex64> {
    let omega = LocalCharacter::from_character(chi.finite(), phi.p)?;
    local_zeta_with(phi, &omega, chi.s)
}

/// The local zeta integral as a rational function of `X = p^{-s}`.
pub fn local_zeta_symbolic(phi: &PAdicTestFunction, omega: &LocalCharacter) -> Result<EulerFactor> {
    check_same_prime(phi, omega)?;
    let poly = shell_coefficients(phi, omega);
    let shift = -(phi.m as i32);
    let v0 = phi.values[0];
    if v0 == ZERO || !omega.is_unramified() {
        return EulerFactor::with_shift(phi.p, poly, vec![ONE], shift);
    }
    // poly·(1 - cX) + v0 c^N X^{N+M}, over 1 - cX
    let c = omega.at_p;
    let mut num = vec![ZERO; poly.len() + 1];
    for (i, a) in poly.iter().enumerate() {
        num[i] += a;
        num[i + 1] -= a * c;
    }
    num[poly.len()] += v0 * c.powi(phi.n as i32);
    EulerFactor::with_shift(phi.p, num, vec![ONE, -c], shift)
}

/// Fourier transform with `ψ(x) = exp(2πi {x}_p)` and self-dual measure
/// `vol(Z_p) = 1`: an exact DFT on the finite quotient, with `(M, N)` swapped.
pub fn local_fourier(phi: &PAdicTestFunction) -> PAdicTestFunction {
    let md = phi.modulus();
    let roots: Vec<Complex64> = (0..md)
        .map(|k| {
            if (4 * k) % md == 0 {
                quarter_turn(4 * k / md)
            } else {
                Complex64::from_polar(1.0, TAU * k as f64 / md as f64)
            }
        })
        .collect();
    let scale = (phi.p as f64).powi(-(phi.n as i32));
    let support: Vec<(u64, Complex64)> = phi
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != ZERO)
        .map(|(r, v)| (r as u64, *v))
        .collect();
    let values: Vec<Complex64> = (0..md)
        .into_par_iter()
        .map(|rp| {
            let s: Complex64 = support
                .iter()
                .map(|&(r, v)| v * roots[((r as u128 * rp as u128) % md as u128) as usize])
                .sum();
            s * scale
        })
        .collect();
    PAdicTestFunction::new(phi.p, phi.n, phi.m, values).expect("same grid size")
}

fn quarter_turn(k: u64) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Multiplicative convolution with the distribution that is `δ_1` on
/// `|g| = 1`, `1` on `|g| < 1` and `0` on `|g| > 1`. On the shell of valuation
/// `v` the result is `Φ + Σ_{k<v} A_k`, `A_k` the unit average of `Φ` on shell `k`.
pub fn generator_convolve(phi: &PAdicTestFunction) -> Result<PAdicTestFunction> {
    if phi.values[0] != ZERO {
        return Err(Error::TouchesZero(phi.values[0]));
    }
    let trivial = LocalCharacter::trivial(phi.p);
    let m = phi.m as i32;
    let averages: Vec<Complex64> = (-m..phi.n as i32).map(|k| shell_average(phi, k, &trivial)).collect();
    // prefix[i] = Σ_{k < i - M} A_k
    let mut prefix = vec![ZERO; averages.len() + 1];
    for (i, a) in averages.iter().enumerate() {
        prefix[i + 1] = prefix[i] + a;
    }
    let total = prefix[averages.len()];
    let values = phi
        .values
        .iter()
        .enumerate()
        .map(|(r, v)| if r == 0 { total } else { v + prefix[valuation(r as u64, phi.p) as usize] })
        .collect();
    PAdicTestFunction::new(phi.p, phi.m, phi.n, values)
}

/// `(1_{Z_p^×} - 1_{p Z_p^×}, 1_{Z_p})`: the first factor realizes the inverse
/// Euler factor `1 - ω_p(p) X` and the second the standard factor.
pub fn distinguished_decomposition(p: u64) -> Result<(PAdicTestFunction, PAdicTestFunction)> {
    let first = PAdicTestFunction::units(p)?.sub(&PAdicTestFunction::shell(p, 1)?)?;
    Ok((first, PAdicTestFunction::standard(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn canonical_forms() {
        let one = PAdicTestFunction::standard(3).unwrap();
        assert_eq!((one.m(), one.n(), one.values().len()), (0, 0, 1));
        // 1_{Z_3} written on a larger grid collapses back
        let padded = PAdicTestFunction::from_residues(3, 2, 1, |r| if r % 9 == 0 { ONE } else { ZERO }).unwrap();
        assert_eq!(padded, one);
        let zero = PAdicTestFunction::from_residues(5, 1, 2, |_| ZERO).unwrap();
        assert_eq!(zero, PAdicTestFunction::zero(5).unwrap());
        let units = PAdicTestFunction::units(2).unwrap();
        assert_eq!((units.m(), units.n()), (0, 1));
        assert_eq!(units.values(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn shells_and_balls_evaluate_correctly() {
        let p = 3;
        for j in -2..3 {
            let sh = PAdicTestFunction::shell(p, j).unwrap();
            let ball = PAdicTestFunction::ball(p, j).unwrap();
            for e in -4..5 {
                for r in [1i64, 2, 4, 5, -7] {
                    assert_eq!(sh.value_at(r, e), if e == j { ONE } else { ZERO });
                    assert_eq!(ball.value_at(r, e), if e >= j { ONE } else { ZERO });
                }
            }
            assert_eq!(ball.value_at(0, 0), ONE);
        }
    }

    #[test]
    fn units_is_ball_difference() {
        for p in [2, 3, 5] {
            let diff = PAdicTestFunction::standard(p).unwrap().sub(&PAdicTestFunction::ball(p, 1).unwrap()).unwrap();
            assert_eq!(diff, PAdicTestFunction::units(p).unwrap());
        }
    }

    #[test]
    fn local_zeta_examples() {
        let triv = LocalCharacter::trivial(2);
        let z = local_zeta_with(&PAdicTestFunction::standard(2).unwrap(), &triv, c(2.0)).unwrap();
        assert!(close(z, c(4.0 / 3.0), 1e-15));
        let z = local_zeta_with(&PAdicTestFunction::ball(2, 1).unwrap(), &triv, c(2.0)).unwrap();
        assert!(close(z, c(1.0 / 3.0), 1e-15));
        for cval in [c(1.0), c(-1.0), Complex64::new(0.0, 1.0)] {
            let w = LocalCharacter::unramified(7, cval);
            let z = local_zeta_with(&PAdicTestFunction::units(7).unwrap(), &w, Complex64::new(0.3, 5.0)).unwrap();
            assert!(close(z, ONE, 1e-15));
        }
    }

    #[test]
    fn divergence_is_reported() {
        let triv = LocalCharacter::trivial(3);
        let err = local_zeta_with(&PAdicTestFunction::standard(3).unwrap(), &triv, c(-0.5)).unwrap_err();
        assert!(matches!(err, Error::Divergent { abscissa } if abscissa == 0.0));
        // vanishing at 0 converges everywhere
        assert!(local_zeta_with(&PAdicTestFunction::shell(3, -1).unwrap(), &triv, c(-3.0)).is_ok());
    }

    #[test]
    fn symbolic_factors() {
        let p = 5;
        let cval = Complex64::new(0.0, 1.0);
        let w = LocalCharacter::unramified(p, cval);
        let std = local_zeta_symbolic(&PAdicTestFunction::standard(p).unwrap(), &w).unwrap();
        assert!(std.equals(&EulerFactor::standard(p, cval), 0.0));
        let units = local_zeta_symbolic(&PAdicTestFunction::units(p).unwrap(), &w).unwrap();
        assert!(units.is_one());
        let (first, second) = distinguished_decomposition(p).unwrap();
        assert_eq!(second, PAdicTestFunction::standard(p).unwrap());
        let prod = local_zeta_symbolic(&first, &w).unwrap().mul(&local_zeta_symbolic(&second, &w).unwrap()).unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn fourier_examples() {
        for p in [2u64, 3, 5] {
            let one = PAdicTestFunction::standard(p).unwrap();
            assert_eq!(local_fourier(&one), one);
            let pz = PAdicTestFunction::ball(p, 1).unwrap();
            let expected = PAdicTestFunction::ball(p, -1).unwrap().scale(c(1.0 / p as f64));
            assert!(local_fourier(&pz).approx_eq(&expected, 1e-15));
        }
        let f = local_fourier(&PAdicTestFunction::units(2).unwrap());
        let expected = PAdicTestFunction::standard(2)
            .unwrap()
            .sub(&PAdicTestFunction::ball(2, -1).unwrap().scale(c(0.5)))
            .unwrap();
        assert!(f.approx_eq(&expected, 1e-15));
    }

    // Brute-force DFT oracle on Z/p^2 for 1_{pZ_p}.
    #[test]
    fn fourier_matches_brute_force_sum() {
        let p = 3u64;
        let phi = PAdicTestFunction::from_residues(p, 1, 1, |r| Complex64::new(r as f64, (r * r % 5) as f64)).unwrap();
        let f = local_fourier(&phi);
        // F(y) = Σ over cosets x = r/p + pZ_p of Φ(x) e(xy) · p^{-1}
        for yr in 0..9i64 {
            let y_num = yr; // y = yr / p
            let mut s = ZERO;
            for r in 0..9i64 {
                let phase = TAU * ((r * y_num) as f64) / 9.0;
                s += phi.value_at(r, -1) * Complex64::from_polar(1.0, phase);
            }
            s /= p as f64;
            assert!(close(f.value_at(y_num, -1), s, 1e-13), "y={yr}");
        }
    }

    #[test]
    fn generator_examples() {
        for p in [2u64, 3, 5] {
            let out = generator_convolve(&PAdicTestFunction::units(p).unwrap()).unwrap();
            assert_eq!(out, PAdicTestFunction::standard(p).unwrap());
            let out = generator_convolve(&PAdicTestFunction::shell(p, 1).unwrap()).unwrap();
            assert_eq!(out, PAdicTestFunction::ball(p, 1).unwrap());
            let zero = PAdicTestFunction::zero(p).unwrap();
            assert_eq!(generator_convolve(&zero).unwrap(), zero);
        }
        let err = generator_convolve(&PAdicTestFunction::standard(3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::TouchesZero(_)));
    }

    #[test]
    fn ramified_component_integrates_to_zero_against_units() {
        for chi in enumerate_characters(9).unwrap().into_iter().filter(|c| !c.is_trivial()) {
            let w = LocalCharacter::new(3, chi, ONE).unwrap();
            let z = local_zeta_with(&PAdicTestFunction::units(3).unwrap(), &w, c(2.0)).unwrap();
            assert!(z.norm() < 1e-15);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = PAdicTestFunction::units(3).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["M"], 0);
        assert_eq!(v["N"], 1);
        assert_eq!(v["values"][1], serde_json::json!([1.0, 0.0]));
        let back: PAdicTestFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
        let bad = serde_json::json!({"p": 3, "M": 0, "N": 1, "values": [[1.0, 0.0]]});
        assert!(serde_json::from_value::<PAdicTestFunction>(bad).is_err());
    }
}
