//! Quadratic and abelian extensions of `Q`: splitting of primes, factorization
//! of Dedekind Euler factors into Dirichlet ones, and twisted convolution of
//! local test functions on `Q_p^×`.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{factorize, first_primes, is_prime, lcm, primes_up_to};
use crate::characters::{kronecker_character, DirichletCharacter};
use crate::cyclotomic::CycloPoly;
use crate::error::{Error, Result};
use crate::euler::EulerFactor;
use crate::global::{prime_tail_bound, standard_l, Evaluation, Method};
use crate::padic::{LocalCharacter, PAdicTestFunction};
use crate::special::{gamma_c, gamma_r};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest unit group used by [`twisted_convolution`].
pub const MAX_UNITS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl SplittingType {
    /// Residue degrees of the primes above `p`.
    pub fn residue_degrees(self) -> &'static [u32] {
        match self {
            SplittingType::Split => &[1, 1],
            SplittingType::Inert => &[2],
            SplittingType::Ramified => &[1],
        }
    }
}

/// `Q(√d)` for a fundamental discriminant `d`, with its quadratic character.
#[derive(Clone, Debug)]
pub struct QuadraticExtensionData {
    d: i64,
    eta: DirichletCharacter,
    ramified: Vec<u64>,
}

/// Exact comparison of `ζ_{K,p}` with `ζ_p · L_p(η)` as integer polynomials.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecompositionCheck {
    pub p: u64,
    pub splitting: SplittingType,
    /// `η(p)`.
    pub eta: i64,
    /// Denominator of `ζ_{K,p}` in `X`, constant term first.
    pub dedekind_denominator: [i64; 3],
    pub residual: i64,
}

/// Norms of ideals above `p`: `masses[v]` counts integral ideals of norm `p^v`.
#[derive(Clone, Debug, Serialize)]
pub struct PushforwardCheck {
    pub p: u64,
    pub masses: Vec<u64>,
    pub series: Vec<i64>,
    /// Index of the norms of local units in `Z_p^×`: 2 when `p` ramifies, else 1.
    pub unit_index: u32,
    pub exact: bool,
}

impl QuadraticExtensionData {
    pub fn new(d: i64) -> Result<Self> {
        let eta = kronecker_character(d)?;
        let ramified = factorize(d.unsigned_abs()).into_iter().map(|(p, _)| p).collect();
        Ok(Self { d, eta, ramified })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.eta
    }

    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(match self.eta_at(p) {
            0 => SplittingType::Ramified,
            1 => SplittingType::Split,
            _ => SplittingType::Inert,
        })
    }

    fn eta_at(&self, p: u64) -> i64 {
        let v = self.eta.evaluate(p as i64);
        v.re.round() as i64
    }

    // Denominator of ζ_{K,p} in X = p^{-s}, integer coefficients.
    fn dedekind_denominator(&self, p: u64) -> Result<Vec<i64>> {
        Ok(match self.splitting_type(p)? {
            SplittingType::Split => vec![1, -2, 1],
            SplittingType::Inert => vec![1, 0, -1],
            SplittingType::Ramified => vec![1, -1],
        })
    }

    pub fn dedekind_euler_factor(&self, p: u64) -> Result<EulerFactor> {
        let den = self.dedekind_denominator(p)?.into_iter().map(|c| Complex64::new(c as f64, 0.0)).collect();
        EulerFactor::new(p, vec![ONE], den)
    }

    /// `ζ_{K,p} = ζ_p · L_p(η)`, checked on integer denominators.
    pub fn decomposition_identity(&self, p: u64) -> Result<DecompositionCheck> {
        let lhs = self.dedekind_denominator(p)?;
        let rhs = int_poly_mul(&[1, -1], &[1, -self.eta_at(p)]);
        let len = lhs.len().max(rhs.len());
        let residual = (0..len)
            .map(|i| (lhs.get(i).copied().unwrap_or(0) - rhs.get(i).copied().unwrap_or(0)).abs())
            .max()
            .unwrap_or(0);
        let mut dedekind_denominator = [0; 3];
        dedekind_denominator[..lhs.len()].copy_from_slice(&lhs);
        Ok(DecompositionCheck { p, splitting: self.splitting_type(p)?, eta: self.eta_at(p), dedekind_denominator, residual })
    }

    /// Counts ideals by norm from the residue degrees and compares with the
    /// power series of `ζ_{K,p}`.
    pub fn norm_pushforward(&self, p: u64, terms: usize) -> Result<PushforwardCheck> {
        let splitting = self.splitting_type(p)?;
        let mut masses = vec![0u64; terms];
        masses[0] = 1;
        // number of tuples (k_i) with Σ f_i k_i = v: a product of geometric series
        for &f in splitting.residue_degrees() {
            let f = f as usize;
            for v in f..terms {
                masses[v] += masses[v - f];
            }
        }
        let series = int_series_inverse(&self.dedekind_denominator(p)?, terms);
        let exact = masses.iter().zip(&series).all(|(&m, &s)| m as i64 == s);
        let unit_index = if splitting == SplittingType::Ramified { 2 } else { 1 };
        Ok(PushforwardCheck { p, masses, series, unit_index, exact })
    }

    /// Archimedean factor of `ζ_K`: `Γ_C(s)` when imaginary, `Γ_R(s)²` when real.
    pub fn gamma_factor(&self, s: Complex64) -> Result<Complex64> {
        if self.is_imaginary() {
            gamma_c(s)
        } else {
            Ok(gamma_r(s)?.powi(2))
        }
    }

    /// `|Γ_R(s) Γ_R(s + ε_η) - Γ_K(s)| / |Γ_K(s)|`.
    pub fn gamma_consistency(&self, s: Complex64) -> Result<f64> {
        let lhs = gamma_r(s)? * gamma_r(s + self.eta.parity() as f64)?;
        let rhs = self.gamma_factor(s)?;
        Ok((lhs - rhs).norm() / rhs.norm())
    }

    /// `Π_{p ≤ P} ζ_{K,p}(s)` for `Re s > 1`, with the tail bounded by twice the
    /// prime tail (at most two primes of norm `>= p` lie above `p`).
    pub fn dedekind_partial_product(&self, s: Complex64, cutoff: u64) -> Result<Evaluation> {
        if s.re <= 1.0 {
            return Err(Error::Divergent { abscissa: 1.0 });
        }
        let primes = primes_up_to(cutoff);
        let mut value = ONE;
        for &p in primes.iter().take_while(|&&p| p as u64 <= cutoff) {
            value *= self.dedekind_euler_factor(p as u64)?.evaluate(s)?;
        }
        let delta = 2.0 * prime_tail_bound(cutoff, s.re);
        Ok(Evaluation { s, value, err_bound: value.norm() * delta.exp_m1(), method: Method::Euler })
    }

    /// `ζ_K(s) = ζ(s) L(s, η)` through the continued engine.
    pub fn dedekind_zeta(&self, s: Complex64) -> Result<Evaluation> {
        let zeta = standard_l(&DirichletCharacter::trivial(1)?)?.l_value(s)?;
        let l = standard_l(&self.eta)?.l_value(s)?;
        Ok(Evaluation {
            s,
            value: zeta.value * l.value,
            err_bound: zeta.err_bound * l.value.norm() + l.err_bound * zeta.value.norm(),
            method: Method::Continued,
        })
    }
}

fn int_poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// Power series of 1/den for den[0] = 1.
fn int_series_inverse(den: &[i64], terms: usize) -> Vec<i64> {
    let mut out = vec![0i64; terms];
    for k in 0..terms {
        let mut v = if k == 0 { 1 } else { 0 };
        for j in 1..den.len().min(k + 1) {
            v -= den[j] * out[k - j];
        }
        out[k] = v;
    }
    out
}

/// `Π_i (1 - η_i(p) X)` against `(1 - X^f)^{u/f}` for a group of characters.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AbelianCheck {
    pub p: u64,
    /// Residue degree: the order of the group of nonzero values `η_i(p)`.
    pub f: u64,
    /// Number of characters unramified at `p`.
    pub unramified: usize,
    pub exact: bool,
}

/// Checks `Π_i L_p(η_i)` equals the Dedekind factor of the abelian field cut
/// out by `chars`. The list must start with the trivial character and be
/// closed under multiplication (as primitive characters).
pub fn abelian_decomposition_identity(p: u64, chars: &[DirichletCharacter]) -> Result<AbelianCheck> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let prims: Vec<DirichletCharacter> = chars.iter().map(|c| c.primitive()).collect();
    match prims.first() {
        Some(c) if c.modulus() == 1 => {}
        _ => return Err(Error::InconsistentCharacters("the first character must be trivial".into())),
    }
    for a in &prims {
        for b in &prims {
            let prod = a.mul(b)?.primitive();
            if !prims.contains(&prod) {
                return Err(Error::InconsistentCharacters(format!(
                    "product of characters mod {} and {} is missing",
                    a.modulus(),
                    b.modulus()
                )));
            }
        }
    }
    let values: Vec<_> = prims.iter().map(|c| c.value_exponent(p as i64)).collect();
    let f = values.iter().flatten().fold(1, |acc, r| lcm(acc, r.order));
    let order = f;
    let unramified = values.iter().flatten().count();
    let lhs = values.iter().fold(CycloPoly::one(order), |acc, v| {
        acc.mul(&CycloPoly::linear_factor(order, v.map(|r| r.k * (order / r.order))))
    });
    let exact = (unramified as u64).is_multiple_of(f)
        && lhs.exactly_equals(&CycloPoly::binomial_power(order, f as usize, unramified / f as usize));
    Ok(AbelianCheck { p, f, unramified, exact })
}

/// First `count` primes not dividing any conductor in `chars`.
pub fn unramified_primes(chars: &[DirichletCharacter], count: usize) -> Vec<u64> {
    let bad: Vec<u64> = chars.iter().map(|c| c.conductor()).collect();
    let mut out = Vec::with_capacity(count);
    let mut n = count * 2 + 16;
    while out.len() < count {
        out = first_primes(n).into_iter().filter(|p| bad.iter().all(|q| q % p != 0)).take(count).collect();
        n *= 2;
    }
    out
}

/// `(f₁ ∗ η f₂)(x) = ∫_{Q_p^×} f₁(y) η(x/y) f₂(x/y) d^×y`, for test functions
/// vanishing near 0. Satisfies `Z(f₁ ∗ η f₂, ω) = Z(f₁, ω) Z(f₂, ωη)`.
pub fn twisted_convolution(
    f1: &PAdicTestFunction,
    f2: &PAdicTestFunction,
    eta: &LocalCharacter,
) -> Result<PAdicTestFunction> {
    let p = f1.p();
    if f2.p() != p || eta.p() != p {
        return Err(Error::Incompatible(format!("inputs at primes {}, {}, {}", p, f2.p(), eta.p())));
    }
    for f in [f1, f2] {
        if f.at_zero() != ZERO {
            return Err(Error::TouchesZero(f.at_zero()));
        }
    }
    let depth = (f1.m() + f1.n()).max(f2.m() + f2.n()).max(eta.conductor_exponent()).max(1);
    let pl = p.pow(depth);
    if pl - pl / p > MAX_UNITS {
        return Err(Error::Unsupported(format!("unit group mod {p}^{depth} is too large")));
    }
    let units: Vec<u64> = (1..pl).filter(|u| u % p != 0).collect();
    let index: std::collections::HashMap<u64, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let inverse: Vec<usize> = units
        .iter()
        .map(|&u| index[&crate::arith::inv_mod(u, pl).expect("unit")])
        .collect();
    let shells = |f: &PAdicTestFunction| -> Vec<i32> { (-(f.m() as i32)..f.n() as i32).collect() };
    let (s1, s2) = (shells(f1), shells(f2));
    let table = |f: &PAdicTestFunction, j: i32, twist: bool| -> Vec<Complex64> {
        units
            .iter()
            .map(|&u| {
                let v = f.value_at(u as i64, j);
                if twist && v != ZERO {
                    v * eta.unit_value(u as i64) * eta.at_p().powi(j)
                } else {
                    v
                }
            })
            .collect()
    };
    let t1: Vec<Vec<Complex64>> = s1.iter().map(|&j| table(f1, j, false)).collect();
    let t2: Vec<Vec<Complex64>> = s2.iter().map(|&j| table(f2, j, true)).collect();
    let kmin = s1.first().copied().unwrap_or(0) + s2.first().copied().unwrap_or(0);
    let kmax = s1.last().copied().unwrap_or(-1) + s2.last().copied().unwrap_or(-1);
    let count = units.len() as f64;
    // out[k][u]: value on p^k u
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for k in kmin..=kmax {
        let mut row = vec![ZERO; units.len()];
        for (a, &j) in s1.iter().enumerate() {
            let Some(b) = s2.iter().position(|&i| i == k - j) else { continue };
            let (x, y) = (&t1[a], &t2[b]);
            for (iu, &u) in units.iter().enumerate() {
                let mut acc = ZERO;
                for (iv, xv) in x.iter().enumerate() {
                    if *xv == ZERO {
                        continue;
                    }
                    let w = (u as u128 * units[inverse[iv]] as u128 % pl as u128) as u64;
                    acc += xv * y[index[&w]];
                }
                row[iu] += acc / count;
            }
        }
        out.push(row);
    }
    if kmin > kmax {
        return PAdicTestFunction::zero(p);
    }
    let m_out = (-kmin).max(0) as u32;
    let n_out = (kmax + 1).max(0) as u32 + depth;
    PAdicTestFunction::from_residues(p, m_out, n_out, |r| {
        if r == 0 {
            return ZERO;
        }
        let v = crate::arith::valuation(r, p);
        let k = v as i32 - m_out as i32;
        if k < kmin || k > kmax {
            return ZERO;
        }
        let u = (r / p.pow(v)) % pl;
        out[(k - kmin) as usize][index[&u]]
    })
}

/// `(Z(f₁ ∗ η f₂, ω), Z(f₁, ω) Z(f₂, ωη))` at `s`.
pub fn convolution_zeta_pair(
    f1: &PAdicTestFunction,
    f2: &PAdicTestFunction,
    eta: &LocalCharacter,
    omega: &LocalCharacter,
    s: Complex64,
) -> Result<(Complex64, Complex64)> {
    use crate::padic::local_zeta_with;
    let h = twisted_convolution(f1, f2, eta)?;
    let lhs = local_zeta_with(&h, omega, s)?;
    let rhs = local_zeta_with(f1, omega, s)? * local_zeta_with(f2, &omega.mul(eta)?, s)?;
    Ok((lhs, rhs))
}
