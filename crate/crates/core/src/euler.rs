//! Local factors as rational functions of `X = p^{-s}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `X^shift · num(X) / den(X)` with `X = p^{-s}`. The Laurent shift is needed
/// for test functions supported outside `Z_p`; it is omitted from JSON when 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FactorRepr", into = "FactorRepr")]
pub struct EulerFactor {
    p: u64,
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    shift: i32,
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    p: u64,
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    shift: i32,
}

fn is_zero(v: &i32) -> bool {
    *v == 0
}

impl TryFrom<FactorRepr> for EulerFactor {
    type Error = Error;
    fn try_from(r: FactorRepr) -> Result<Self> {
        EulerFactor::with_shift(r.p, r.num, r.den, r.shift)
    }
}

impl From<EulerFactor> for FactorRepr {
    fn from(f: EulerFactor) -> Self {
        FactorRepr { p: f.p, num: f.num, den: f.den, shift: f.shift }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut v: Vec<Complex64>) -> Vec<Complex64> {
    while v.len() > 1 && v.last().is_some_and(|z| *z == Complex64::new(0.0, 0.0)) {
        v.pop();
    }
    if v.is_empty() {
        v.push(Complex64::new(0.0, 0.0));
    }
    v
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

impl EulerFactor {
    pub fn new(p: u64, num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        Self::with_shift(p, num, den, 0)
    }

    pub fn with_shift(p: u64, num: Vec<Complex64>, den: Vec<Complex64>, shift: i32) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if den.first().is_none_or(|d| *d == Complex64::new(0.0, 0.0)) {
            return Err(Error::Invalid("Euler factor denominator needs a nonzero constant term".into()));
        }
        let mut f = Self { p, num: trim(num), den: trim(den), shift };
        f.normalize();
        Ok(f)
    }

    pub fn one(p: u64) -> Self {
        Self { p, num: vec![c(1.0)], den: vec![c(1.0)], shift: 0 }
    }

    /// `1 / (1 - a X)`.
    pub fn standard(p: u64, a: Complex64) -> Self {
        Self::new(p, vec![c(1.0)], vec![c(1.0), -a]).expect("valid factor")
    }

    /// `1 - a X`.
    pub fn inverse_standard(p: u64, a: Complex64) -> Self {
        Self::new(p, vec![c(1.0), -a], vec![c(1.0)]).expect("valid factor")
    }

    // Moves leading zeros of the numerator into the shift and scales den[0] to 1.
    fn normalize(&mut self) {
        if self.num.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            self.num = vec![c(0.0)];
            self.den = vec![c(1.0)];
            self.shift = 0;
            return;
        }
        let lead = self.num.iter().position(|z| *z != Complex64::new(0.0, 0.0)).unwrap_or(0);
        if lead > 0 {
            self.num.drain(..lead);
            self.shift += lead as i32;
        }
        let d0 = self.den[0];
        if d0 != c(1.0) {
            self.num.iter_mut().for_each(|z| *z /= d0);
            self.den.iter_mut().for_each(|z| *z /= d0);
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn evaluate_x(&self, x: Complex64) -> Result<Complex64> {
        let d = horner(&self.den, x);
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { location: x, polar: None });
        }
        Ok(x.powi(self.shift) * horner(&self.num, x) / d)
    }

    /// Value at `X = p^{-s}`.
    pub fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        let x = (-s * (self.p as f64).ln()).exp();
        self.evaluate_x(x)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Incompatible(format!("Euler factors at {} and {}", self.p, other.p)));
        }
        Self::with_shift(
            self.p,
            poly_mul(&self.num, &other.num),
            poly_mul(&self.den, &other.den),
            self.shift + other.shift,
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.num == vec![c(0.0)] {
            return Err(Error::Invalid("zero Euler factor has no inverse".into()));
        }
        Self::with_shift(self.p, self.den.clone(), self.num.clone(), -self.shift)
    }

    /// Cross-multiplied comparison `num₁·den₂ = num₂·den₁` (with shifts), coefficientwise within `tol`.
    pub fn equals(&self, other: &Self, tol: f64) -> bool {
        if self.p != other.p {
            return false;
        }
        let lhs = poly_mul(&self.num, &other.den);
        let rhs = poly_mul(&other.num, &self.den);
        let base = self.shift.min(other.shift);
        let (ls, rs) = ((self.shift - base) as usize, (other.shift - base) as usize);
        let len = (lhs.len() + ls).max(rhs.len() + rs);
        (0..len).all(|i| {
            let a = i.checked_sub(ls).and_then(|k| lhs.get(k)).copied().unwrap_or_default();
            let b = i.checked_sub(rs).and_then(|k| rhs.get(k)).copied().unwrap_or_default();
            (a - b).norm() <= tol
        })
    }

    /// Exact identity with the constant `1`.
    pub fn is_one(&self) -> bool {
        self.equals(&Self::one(self.p), 0.0)
    }

    /// Laurent coefficients of `X^{shift}, ..., X^{shift+n-1}` of the power-series expansion.
    pub fn series(&self, n: usize) -> Vec<Complex64> {
        // num / den with den[0] = 1
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut v = self.num.get(k).copied().unwrap_or_default();
            for j in 1..self.den.len().min(k + 1) {
                v -= self.den[j] * out[k - j];
            }
            out[k] = v;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_factor_and_inverse_cancel() {
        for a in [c(1.0), c(-1.0), Complex64::new(0.0, 1.0)] {
            let f = EulerFactor::standard(5, a);
            let g = EulerFactor::inverse_standard(5, a);
            assert!(f.mul(&g).unwrap().is_one());
            assert!(f.inverse().unwrap().equals(&g, 0.0));
        }
    }

    #[test]
    fn evaluation() {
        let f = EulerFactor::standard(2, c(1.0));
        let v = f.evaluate(c(2.0)).unwrap();
        assert!((v - c(4.0 / 3.0)).norm() < 1e-15);
        let shifted = EulerFactor::with_shift(2, vec![c(1.0)], vec![c(1.0)], -1).unwrap();
        assert!((shifted.evaluate(c(1.0)).unwrap() - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn leading_zeros_move_into_shift() {
        let f = EulerFactor::new(3, vec![c(0.0), c(0.0), c(2.0)], vec![c(2.0), c(1.0)]).unwrap();
        assert_eq!(f.shift(), 2);
        assert_eq!(f.numerator(), &[c(1.0)]);
        assert_eq!(f.denominator(), &[c(1.0), c(0.5)]);
    }

    #[test]
    fn series_of_geometric_factor() {
        let f = EulerFactor::new(3, vec![c(1.0)], vec![c(1.0), c(0.0), c(-1.0)]).unwrap();
        let s = f.series(6);
        let expected = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        for (a, b) in s.iter().zip(expected) {
            assert_eq!(*a, c(b));
        }
    }

    #[test]
    fn rejects_bad_denominators_and_primes() {
        assert!(EulerFactor::new(4, vec![c(1.0)], vec![c(1.0)]).is_err());
        assert!(EulerFactor::new(5, vec![c(1.0)], vec![c(0.0), c(1.0)]).is_err());
    }

    #[test]
    fn json_shape() {
        let f = EulerFactor::standard(3, c(1.0));
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v, serde_json::json!({"p": 3, "num": [[1.0, 0.0]], "den": [[1.0, 0.0], [-1.0, 0.0]]}));
        let back: EulerFactor = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }
}
