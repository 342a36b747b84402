//! Exact arithmetic in the cyclotomic ring `Z[ζ_n]`, used to check Euler-factor
//! identities whose coefficients are character values.

use std::ops::{Add, Mul, Neg, Sub};

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

// Division of integer polynomials by a monic divisor; the remainder must vanish.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    if rem.len() <= dd {
        return vec![0];
    }
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Element of `Z[ζ_n]`, stored as coefficients of `ζ^0, ..., ζ^{n-1}`.
///
/// The representation is not unique; comparisons reduce modulo `Φ_n`.
#[derive(Clone, Debug)]
pub struct Cyclo {
    order: u64,
    coeffs: Vec<i64>,
}

impl Cyclo {
    pub fn zero(order: u64) -> Self {
        Self { order, coeffs: vec![0; order as usize] }
    }

    pub fn from_int(order: u64, value: i64) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = value;
        out
    }

    /// The root of unity `ζ_n^k`.
    pub fn root(order: u64, k: u64) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[(k % order) as usize] = 1;
        out
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coefficients: the remainder modulo `Φ_n`, length `φ(n)`.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for i in (deg..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                for (j, &pj) in phi.iter().enumerate() {
                    rem[i - deg + j] -= c * pj;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                num_complex::Complex64::from_polar(c as f64, std::f64::consts::TAU * k as f64 / n)
            })
            .sum()
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.order, other.order, "mixed cyclotomic orders");
        (self.clone() - other.clone()).is_zero()
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(mut self, rhs: Cyclo) -> Cyclo {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        self + (-rhs)
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(mut self) -> Cyclo {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        let n = self.order as usize;
        let mut out = Cyclo::zero(self.order);
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                out.coeffs[(i + j) % n] += a * b;
            }
        }
        out
    }
}

/// Polynomial in `X` with coefficients in `Z[ζ_n]`, constant term first.
#[derive(Clone, Debug)]
pub struct CycloPoly {
    pub coeffs: Vec<Cyclo>,
}

impl CycloPoly {
    pub fn one(order: u64) -> Self {
        Self { coeffs: vec![Cyclo::from_int(order, 1)] }
    }

    /// `1 - ζ^k X`, or `1` when `k` is `None` (a vanishing character value).
    pub fn linear_factor(order: u64, k: Option<u64>) -> Self {
        match k {
            Some(k) => Self { coeffs: vec![Cyclo::from_int(order, 1), -Cyclo::root(order, k)] },
            None => Self::one(order),
        }
    }

    /// `(1 - X^f)^m` with integer coefficients.
    pub fn binomial_power(order: u64, f: usize, m: usize) -> Self {
        let base = {
            let mut c = vec![Cyclo::zero(order); f + 1];
            c[0] = Cyclo::from_int(order, 1);
            c[f] = Cyclo::from_int(order, -1);
            Self { coeffs: c }
        };
        (0..m).fold(Self::one(order), |acc, _| acc.mul(&base))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.coeffs[0].order();
        let mut out = vec![Cyclo::zero(order); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn exactly_equals(&self, rhs: &Self) -> bool {
        let order = self.coeffs[0].order();
        let len = self.coeffs.len().max(rhs.coeffs.len());
        (0..len).all(|i| {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| Cyclo::zero(order));
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(|| Cyclo::zero(order));
            a == b
        })
    }
}
