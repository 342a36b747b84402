//! Global test functions on the adeles of `Q`, theta lifts, the zeta integral
//! as an Euler product and its continuation by splitting the idele-class
//! integral at height 1 and applying Poisson summation below it.
//!
//! `A^× / Q^×` is identified with `R_{>0} × Ẑ^×`, so for a Hecke character
//! `ω·|·|^s`
//!
//! ```text
//! Z(Φ, ω, s) = ∫_0^∞ Θ_{Φ,ω}(t) t^s d^×t,   Θ_{Φ,ω}(t) = Σ_{q ∈ Q^×} W(q) Φ_∞(qt),
//! W(q) = Π_p ∫_{Z_p^×} Φ_p(qu) ω_p(u) du,
//! ```
//!
//! and the continued value is `I(Φ, ω, s) + I(FΦ, ω^{-1}, 1-s)` plus
//! `FΦ(0)/(s-1) - Φ(0)/s` on the trivial component, with `I` the integral over `t >= 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arch::{arch_fourier, arch_zeta, ArchTestFunction};
use crate::arith::{factorize, inv_mod, mod_floor, primes_up_to, valuation};
use crate::characters::{gauss_sum, DirichletCharacter, HeckeCharacterPoint};
use crate::error::{Error, Result};
use crate::padic::{local_fourier, local_zeta_with, LocalCharacter, PAdicTestFunction};
use crate::quad::integrate;
use crate::special::{gamma_r, is_gamma_pole};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `Φ_∞ ⊗ ⊗_p Φ_p`, with `Φ_p = 1_{Z_p}` at every prime not listed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GlobalRepr", into = "GlobalRepr")]
pub struct GlobalTestFunction {
    arch: ArchTestFunction,
    finite: BTreeMap<u64, PAdicTestFunction>,
}

#[derive(Serialize, Deserialize)]
struct GlobalRepr {
    arch: ArchTestFunction,
    #[serde(default)]
    finite: Vec<PAdicTestFunction>,
}

impl TryFrom<GlobalRepr> for GlobalTestFunction {
    type Error = Error;
    fn try_from(r: GlobalRepr) -> Result<Self> {
        GlobalTestFunction::new(r.arch, r.finite)
    }
}

impl From<GlobalTestFunction> for GlobalRepr {
    fn from(g: GlobalTestFunction) -> Self {
        GlobalRepr { arch: g.arch, finite: g.finite.into_values().collect() }
    }
}

impl GlobalTestFunction {
    pub fn new(arch: ArchTestFunction, finite: impl IntoIterator<Item = PAdicTestFunction>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for phi in finite {
            let p = phi.p();
            if map.insert(p, phi).is_some() {
                return Err(Error::Invalid(format!("two local components at p = {p}")));
            }
        }
        map.retain(|_, phi| !phi.is_standard());
        Ok(Self { arch, finite: map })
    }

    /// `exp(-πx²) ⊗ 1_Ẑ`.
    pub fn standard() -> Self {
        Self { arch: ArchTestFunction::gaussian(), finite: BTreeMap::new() }
    }

    /// `x^ε exp(-πx²) ⊗ ⊗_{p | q} χ_p·1_{Z_p^×}` for a primitive `χ` mod `q`.
    pub fn twisted_standard(chi: &DirichletCharacter) -> Result<Self> {
        if !chi.is_primitive() {
            return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
        }
        let arch = ArchTestFunction::monomial(chi.parity() as usize)?;
        let finite = factorize(chi.modulus())
            .into_iter()
            .map(|(p, _)| PAdicTestFunction::character_on_units(p, &chi.prime_component(p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arch, finite)
    }

    /// Replaces the component at the prime of `phi`.
    pub fn with_local(mut self, phi: PAdicTestFunction) -> Self {
        if phi.is_standard() {
            self.finite.remove(&phi.p());
        } else {
            self.finite.insert(phi.p(), phi);
        }
        self
    }

    pub fn with_arch(mut self, arch: ArchTestFunction) -> Self {
        self.arch = arch;
        self
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { arch: self.arch.scale(c), finite: self.finite.clone() }
    }

    pub fn arch(&self) -> &ArchTestFunction {
        &self.arch
    }

    /// The component at `p` (the standard vector when `p` is not exceptional).
    pub fn local(&self, p: u64) -> Result<PAdicTestFunction> {
        match self.finite.get(&p) {
            Some(phi) => Ok(phi.clone()),
            None => PAdicTestFunction::standard(p),
        }
    }

    pub fn exceptional_primes(&self) -> Vec<u64> {
        self.finite.keys().copied().collect()
    }

    pub fn locals(&self) -> impl Iterator<Item = &PAdicTestFunction> {
        self.finite.values()
    }

    /// Is the finite part supported in `Ẑ` (no component needs `M > 0`)?
    pub fn is_integral(&self) -> bool {
        self.finite.values().all(|phi| phi.m() == 0)
    }

    pub fn fourier(&self) -> Self {
        Self {
            arch: arch_fourier(&self.arch),
            finite: self
                .finite
                .values()
                .map(local_fourier)
                .filter(|f| !f.is_standard())
                .map(|f| (f.p(), f))
                .collect(),
        }
    }

    pub fn at_zero(&self) -> Complex64 {
        self.finite.values().fold(self.arch.at_zero(), |acc, phi| acc * phi.at_zero())
    }

    /// `Φ(q·(t, 1, 1, ...))` for the rational `q = num/den`.
    pub fn value_at_rational(&self, num: i64, den: u64, t: f64) -> Complex64 {
        if den == 0 {
            return ZERO;
        }
        let g = crate::arith::gcd(num.unsigned_abs(), den);
        let (num, den) = (num / g as i64, den / g);
        // primes of the denominator outside the exceptional set see 1_{Z_p}(q) = 0
        for (p, _) in factorize(den) {
            if !self.finite.contains_key(&p) {
                return ZERO;
            }
        }
        let fin = self
            .finite
            .values()
            .fold(ONE, |acc, phi| acc * padic_value_of_rational(phi, num, den));
        fin * self.arch.value(num as f64 / den as f64 * t)
    }
}

fn padic_value_of_rational(phi: &PAdicTestFunction, num: i64, den: u64) -> Complex64 {
    if num == 0 {
        return phi.at_zero();
    }
    let p = phi.p();
    let b = valuation(den, p);
    let den_unit = den / p.pow(b);
    let modulus = p.pow(phi.m() + phi.n()).max(p);
    let inv = inv_mod(den_unit % modulus, modulus).expect("unit");
    let a = valuation(num.unsigned_abs(), p);
    let num_unit = num / (p as i64).pow(a);
    let r = (mod_floor(num_unit, modulus) as u128 * inv as u128 % modulus as u128) as i64;
    phi.value_at(r, a as i32 - b as i32)
}

/// Height `Π_v max(|g_v|_v, 1)` of an idele with finitely many nontrivial
/// finite components, `|g_p|_p = p^{-e_p}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Idele {
    pub arch: f64,
    pub exponents: BTreeMap<u64, i32>,
}

impl Idele {
    pub fn new(arch: f64, exponents: impl IntoIterator<Item = (u64, i32)>) -> Self {
        let exponents = exponents.into_iter().filter(|&(_, e)| e != 0).collect();
        Self { arch, exponents }
    }

    pub fn trivial() -> Self {
        Self::new(1.0, [])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exponents = self.exponents.clone();
        for (&p, &e) in &other.exponents {
            *exponents.entry(p).or_insert(0) += e;
        }
        Self::new(self.arch * other.arch, exponents)
    }

    pub fn height(&self) -> f64 {
        height(&self.exponents, self.arch)
    }
}

pub fn height(exponents: &BTreeMap<u64, i32>, arch: f64) -> f64 {
    exponents
        .iter()
        .fold(arch.abs().max(1.0), |acc, (&p, &e)| acc * (p as f64).powi(-e).max(1.0))
}

/// `ι(f)(g) = g^{-1} f(g^{-1})` on functions of a positive real scale.
pub fn iota<F>(f: F) -> impl Fn(f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    move |g| f(1.0 / g) / g
}

/// `ι` on samples `(g, f(g))`: each becomes `(1/g, g·f(g))`; output sorted by scale.
pub fn iota_samples(samples: &[(f64, Complex64)]) -> Vec<(f64, Complex64)> {
    let mut out: Vec<(f64, Complex64)> = samples.iter().map(|&(g, v)| (1.0 / g, v * g)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarData {
    pub residue_at_1: Complex64,
    pub residue_at_0: Complex64,
    /// `Φ(0)`.
    pub phi_at_zero: Complex64,
    /// `(FΦ)(0)`.
    pub fourier_at_zero: Complex64,
}

/// Residues of `Z(Φ, |·|^s)` on the trivial component: `(FΦ)(0)` at 1, `-Φ(0)` at 0.
pub fn residues(phi: &GlobalTestFunction) -> PolarData {
    let phi0 = phi.at_zero();
    let fphi0 = phi.fourier().at_zero();
    PolarData { residue_at_1: fphi0, residue_at_0: -phi0, phi_at_zero: phi0, fourier_at_zero: fphi0 }
}

/// Tolerances of the continuation engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// Theta sums and the `t`-range are cut where the neglected part is below this.
    pub theta_tail: f64,
    pub max_intervals: usize,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self { quad_abs_tol: 1e-14, quad_rel_tol: 1e-13, theta_tail: 1e-18, max_intervals: 4000 }
    }
}

/// Smallest `X` past the peak of `Σ|c_m| x^m e^{-πx²}` where that majorant is below `eps`.
fn arch_cutoff(arch: &ArchTestFunction, eps: f64) -> f64 {
    let peak = (arch.degree() as f64 / (2.0 * PI)).sqrt();
    let majorant = |x: f64| {
        arch.coeffs().iter().enumerate().map(|(m, c)| c.norm() * x.powi(m as i32)).sum::<f64>() * (-PI * x * x).exp()
    };
    let mut x = peak.max(0.5);
    while majorant(x) >= eps {
        x += 0.05;
    }
    x
}

/// `Θ(t) = Σ_{n ≠ 0} W(n) Φ_∞(n t / D)` with `W` periodic mod `period`.
#[derive(Clone, Debug)]
pub struct ThetaKernel {
    arch: ArchTestFunction,
    denom: f64,
    weights: Vec<Complex64>,
    weight_bound: f64,
}

/// A theta value together with the number of lattice points summed on each side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub terms: u64,
}

impl ThetaKernel {
    /// Weights `W(n) = Φ_fin(n/D)`: the plain sum `Σ_{q ∈ Q^×} Φ(q·(t, 1))`.
    pub fn plain(phi: &GlobalTestFunction) -> Result<Self> {
        let (denom, period) = grid_of(phi.locals().map(|f| (f.p(), f.m(), f.n())))?;
        let weights = (0..period)
            .map(|n| {
                phi.locals().fold(ONE, |acc, f| acc * padic_value_of_rational(f, n as i64, denom))
            })
            .collect();
        Ok(Self::from_weights(phi.arch().clone(), denom, weights))
    }

    /// Weights averaged against `ω` over `Ẑ^×`: `W(q) = Π_p ∫ Φ_p(qu) ω_p(u) du`.
    pub fn twisted(phi: &GlobalTestFunction, chi: &DirichletCharacter) -> Result<Self> {
        let chi = chi.primitive();
        let mut primes: BTreeSet<u64> = phi.exceptional_primes().into_iter().collect();
        primes.extend(factorize(chi.modulus()).into_iter().map(|(p, _)| p));
        let locals = primes.iter().map(|&p| phi.local(p)).collect::<Result<Vec<_>>>()?;
        let (denom, period) = grid_of(locals.iter().map(|f| (f.p(), f.m(), f.n())))?;
        let mut weights = vec![ONE; period as usize];
        for f in &locals {
            let p = f.p();
            let omega = LocalCharacter::from_character(&chi, p)?;
            let pm = p.pow(f.m());
            let modulus = p.pow(f.m() + f.n());
            let depth = (f.m() + f.n()).max(omega.conductor_exponent()).max(1);
            let units: Vec<u64> = (1..p.pow(depth)).filter(|u| u % p != 0).collect();
            let omega_vals: Vec<Complex64> = units.iter().map(|&u| omega.unit_value(u as i64)).collect();
            let local: Vec<Complex64> = (0..modulus)
                .map(|n| {
                    let s: Complex64 = units
                        .iter()
                        .zip(&omega_vals)
                        .map(|(&u, &w)| padic_value_of_rational(f, (n * u) as i64, pm) * w)
                        .sum();
                    s / units.len() as f64
                })
                .collect();
            // q = n/D and n/p^M differ by the p-adic unit D/p^M
            let other = (denom / pm) % modulus;
            let scale = inv_mod(other, modulus).expect("coprime");
            for (n, w) in weights.iter_mut().enumerate() {
                let r = (n as u128 % modulus as u128 * scale as u128 % modulus as u128) as usize;
                *w *= local[r];
            }
        }
        Ok(Self::from_weights(phi.arch().clone(), denom, weights))
    }

    fn from_weights(arch: ArchTestFunction, denom: u64, weights: Vec<Complex64>) -> Self {
        let weight_bound = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Self { arch, denom: denom as f64, weights, weight_bound }
    }

    fn weight(&self, n: i64) -> Complex64 {
        self.weights[mod_floor(n, self.weights.len() as u64) as usize]
    }

    pub fn denominator(&self) -> f64 {
        self.denom
    }

    /// `Θ(t)` summed over `0 < |n| <= T`; by default `T` is chosen so that the
    /// neglected terms are below `tail`.
    pub fn eval(&self, t: f64, tail: f64, truncation: Option<u64>) -> ThetaValue {
        if self.weight_bound == 0.0 {
            return ThetaValue { value: ZERO, terms: 0 };
        }
        let terms = truncation.unwrap_or_else(|| {
            let x = arch_cutoff(&self.arch, tail / self.weight_bound);
            (x * self.denom / t).ceil() as u64 + 1
        });
        let mut value = ZERO;
        for n in (1..=terms as i64).rev() {
            let x = n as f64 * t / self.denom;
            let (wp, wm) = (self.weight(n), self.weight(-n));
            if wp != ZERO {
                value += wp * self.arch.value(x);
            }
            if wm != ZERO {
                value += wm * self.arch.value(-x);
            }
        }
        ThetaValue { value, terms }
    }

    /// `∫_1^∞ Θ(t) t^s d^×t`, with an error estimate.
    pub fn upper_integral(&self, s: Complex64, params: &EngineParams) -> (Complex64, f64) {
        if self.weight_bound == 0.0 {
            return (ZERO, 0.0);
        }
        // |Θ(t)| t^σ below the tail tolerance past t_max
        let sigma = s.re.max(0.0);
        let eps = params.theta_tail;
        let mut t_max = 1.0f64;
        loop {
            let x = t_max / self.denom;
            let bound = 2.0
                * self.weight_bound
                * self.arch.coeffs().iter().enumerate().map(|(m, c)| c.norm() * x.powi(m as i32)).sum::<f64>()
                * (-PI * x * x).exp()
                * t_max.powf(sigma + 1.0);
            if bound < eps && x > 0.5 {
                break;
            }
            t_max *= 1.05;
        }
        let u_max = t_max.ln();
        let r = integrate(
            |u| {
                let t = u.exp();
                self.eval(t, eps, None).value * (s * u).exp()
            },
            0.0,
            u_max,
            params.quad_abs_tol,
            params.quad_rel_tol,
            params.max_intervals,
        );
        (r.value, r.error + eps * u_max)
    }
}

// (D, period) = (Π p^M, Π p^{M+N}).
fn grid_of(items: impl Iterator<Item = (u64, u32, u32)>) -> Result<(u64, u64)> {
    let mut denom = 1u64;
    let mut period = 1u64;
    for (p, m, n) in items {
        denom = denom
            .checked_mul(p.pow(m))
            .ok_or_else(|| Error::Unsupported("theta denominator overflows".into()))?;
        period = period
            .checked_mul(p.pow(m + n))
            .filter(|&q| q <= 1 << 24)
            .ok_or_else(|| Error::Unsupported("theta weight table exceeds 2^24 entries".into()))?;
    }
    Ok((denom, period))
}

/// `Σ_{q ∈ Q^×} Φ(q·g)` at the idele `g = (t, 1, 1, ...)`.
pub fn theta_lift(phi: &GlobalTestFunction, t: f64, truncation: Option<u64>) -> Result<ThetaValue> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("scale must be positive, got {t}")));
    }
    let kernel = ThetaKernel::plain(phi)?;
    Ok(kernel.eval(t, EngineParams::default().theta_tail, truncation))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Euler,
    Continued,
}

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub s: Complex64,
    pub value: Complex64,
    pub err_bound: f64,
    pub method: Method,
}

/// Rosser–Schoenfeld majorant for `Σ_{p > P} p^{-σ}/(1 - p^{-σ})`.
pub fn prime_tail_bound(cutoff: u64, sigma: f64) -> f64 {
    let pf = cutoff as f64;
    let sum = 1.255_06 * sigma * pf.powf(1.0 - sigma) / ((sigma - 1.0) * pf.ln());
    sum / (1.0 - pf.powf(-sigma))
}

/// `Z(Φ, χ, s)` as `Z_∞ · Π_{p ≤ P} Z_p` for `Re s > 1`, with the tail of the
/// unramified product bounded by [`prime_tail_bound`].
pub fn zeta_euler(phi: &GlobalTestFunction, chi: &HeckeCharacterPoint, cutoff: u64) -> Result<Evaluation> {
    let s = chi.s;
    if s.re <= 1.0 {
        return Err(Error::Divergent { abscissa: 1.0 });
    }
    if cutoff < 2 {
        return Err(Error::Invalid("prime cutoff must be at least 2".into()));
    }
    let finite = chi.finite();
    let mut special: BTreeSet<u64> = phi.exceptional_primes().into_iter().collect();
    special.extend(factorize(finite.modulus()).into_iter().map(|(p, _)| p));
    let mut value = arch_zeta(phi.arch(), finite.parity(), s)?;
    for &p in &special {
        let omega = LocalCharacter::from_character(finite, p)?;
        value *= local_zeta_with(&phi.local(p)?, &omega, s)?;
    }
    let primes = primes_up_to(cutoff);
    let end = primes.partition_point(|&p| p as u64 <= cutoff);
    let chunks: Vec<Complex64> = primes[..end]
        .par_chunks(1 << 15)
        .map(|chunk| {
            chunk
                .iter()
                .filter(|&&p| !special.contains(&(p as u64)))
                .fold(ONE, |acc, &p| {
                    let x = (-s * (p as f64).ln()).exp();
                    acc * (ONE - finite.evaluate(p as i64) * x)
                })
        })
        .collect();
    let inverse = chunks.into_iter().fold(ONE, |acc, c| acc * c);
    let value = value / inverse;
    let delta = prime_tail_bound(cutoff, s.re);
    let err_bound = value.norm() * delta.exp_m1() + 1e-15 * value.norm() * (end as f64).sqrt();
    Ok(Evaluation { s, value, err_bound, method: Method::Euler })
}

fn near_pole(s: Complex64) -> Option<Complex64> {
    [ZERO, ONE].into_iter().find(|&p| (s - p).norm() < 1e-12)
}

/// Continued zeta integral; see the module documentation.
pub fn zeta_continued(phi: &GlobalTestFunction, chi: &HeckeCharacterPoint) -> Result<Evaluation> {
    zeta_continued_with(phi, chi, &EngineParams::default())
}

pub fn zeta_continued_with(
    phi: &GlobalTestFunction,
    chi: &HeckeCharacterPoint,
    params: &EngineParams,
) -> Result<Evaluation> {
    let s = chi.s;
    let finite = chi.finite();
    let trivial = finite.modulus() == 1;
    if trivial {
        if let Some(location) = near_pole(s) {
            let polar = residues(phi);
            let residue = if location == ONE { polar.residue_at_1 } else { polar.residue_at_0 };
            if residue != ZERO {
                return Err(Error::Pole { location, polar: Some(polar) });
            }
        }
    }
    let fphi = phi.fourier();
    let direct = ThetaKernel::twisted(phi, finite)?;
    let dual = ThetaKernel::twisted(&fphi, &finite.conj())?;
    let (a, ea) = direct.upper_integral(s, params);
    let (b, eb) = dual.upper_integral(ONE - s, params);
    let mut value = a + b;
    if trivial {
        let (f0, p0) = (fphi.at_zero(), phi.at_zero());
        if f0 != ZERO {
            value += f0 / (s - 1.0);
        }
        if p0 != ZERO {
            value -= p0 / s;
        }
    }
    Ok(Evaluation { s, value, err_bound: ea + eb, method: Method::Continued })
}

/// Residue of `Z(Φ, χ, ·)` at `center` by the trapezoid rule on a circle.
pub fn numerical_residue(
    phi: &GlobalTestFunction,
    chi: &DirichletCharacter,
    center: Complex64,
    radius: f64,
    points: usize,
) -> Result<Complex64> {
    let samples = (0..points)
        .into_par_iter()
        .map(|k| {
            let dz = Complex64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.5) / points as f64);
            let point = HeckeCharacterPoint::new(chi.primitive(), center + dz)?;
            Ok(zeta_continued(phi, &point)?.value * dz)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(samples.into_iter().sum::<Complex64>() / points as f64)
}

/// `|Z(Φ, χ, s) - Z(FΦ, χ^{-1}, 1-s)|`.
pub fn functional_equation_check(phi: &GlobalTestFunction, chi: &HeckeCharacterPoint) -> Result<f64> {
    let s = chi.s;
    if chi.finite().modulus() == 1 {
        for pole in [ZERO, ONE] {
            if (s - pole).norm() < 1e-6 || (ONE - s - pole).norm() < 1e-6 {
                return Err(Error::Pole { location: pole, polar: Some(residues(phi)) });
            }
        }
    }
    let lhs = zeta_continued(phi, chi)?.value;
    let rhs = zeta_continued(&phi.fourier(), &chi.dual())?.value;
    Ok((lhs - rhs).norm())
}

/// `Λ(s, χ) = q^{(s+ε)/2} Γ_R(s+ε) L(s, χ)` for a primitive character mod `q`,
/// computed as `q^{(s+ε)/2}` times the zeta integral of the twisted standard
/// test function (whose local integrals are 1 at `p | q` and `Γ_R(s+ε)` at ∞).
#[derive(Clone, Debug)]
pub struct CompletedLFunction {
    chi: DirichletCharacter,
    phi: GlobalTestFunction,
    params: EngineParams,
    polar: Option<PolarData>,
}

pub fn standard_l(chi: &DirichletCharacter) -> Result<CompletedLFunction> {
    CompletedLFunction::new(chi, EngineParams::default())
}

/// Minimum moduli found on a sampled vertical segment.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZeroFreeReport {
    pub sigma: f64,
    pub t_max: f64,
    pub min_abs_l: f64,
    pub min_abs_lambda: f64,
    pub argmin_t: f64,
}

impl CompletedLFunction {
    pub fn new(chi: &DirichletCharacter, params: EngineParams) -> Result<Self> {
        let phi = GlobalTestFunction::twisted_standard(chi)?;
        let polar = (chi.modulus() == 1).then(|| residues(&phi));
        Ok(Self { chi: chi.clone(), phi, params, polar })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn parity(&self) -> u8 {
        self.chi.parity()
    }

    pub fn conductor(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn test_function(&self) -> &GlobalTestFunction {
        &self.phi
    }

    pub fn params(&self) -> &EngineParams {
        &self.params
    }

    /// Residues of `Λ` at 1 and 0 (trivial character only).
    pub fn polar_data(&self) -> Option<PolarData> {
        self.polar
    }

    fn conductor_factor(&self, s: Complex64) -> Complex64 {
        let q = self.conductor() as f64;
        ((s + self.parity() as f64) * 0.5 * q.ln()).exp()
    }

    fn point(&self, s: Complex64) -> HeckeCharacterPoint {
        HeckeCharacterPoint::new(self.chi.clone(), s).expect("primitive by construction")
    }

    pub fn lambda(&self, s: Complex64) -> Result<Evaluation> {
        let z = zeta_continued_with(&self.phi, &self.point(s), &self.params)?;
        let k = self.conductor_factor(s);
        Ok(Evaluation { value: z.value * k, err_bound: z.err_bound * k.norm(), ..z })
    }

    /// `Λ` through the Euler product (needs `Re s > 1`).
    pub fn lambda_euler(&self, s: Complex64, cutoff: u64) -> Result<Evaluation> {
        let z = zeta_euler(&self.phi, &self.point(s), cutoff)?;
        let k = self.conductor_factor(s);
        Ok(Evaluation { value: z.value * k, err_bound: z.err_bound * k.norm(), ..z })
    }

    fn gamma_part(&self, s: Complex64) -> Result<Complex64> {
        let shifted = s + self.parity() as f64;
        if is_gamma_pole(shifted * 0.5) {
            return Err(Error::GammaPole(shifted * 0.5));
        }
        Ok(self.conductor_factor(s) * gamma_r(shifted)?)
    }

    /// `L(s, χ) = Λ(s, χ) / (q^{(s+ε)/2} Γ_R(s+ε))`.
    pub fn l_value(&self, s: Complex64) -> Result<Evaluation> {
        let g = self.gamma_part(s)?;
        let lam = self.lambda(s)?;
        Ok(Evaluation { value: lam.value / g, err_bound: lam.err_bound / g.norm(), ..lam })
    }

    pub fn l_value_euler(&self, s: Complex64, cutoff: u64) -> Result<Evaluation> {
        let g = self.gamma_part(s)?;
        let lam = self.lambda_euler(s, cutoff)?;
        Ok(Evaluation { value: lam.value / g, err_bound: lam.err_bound / g.norm(), ..lam })
    }

    /// `W(χ) = τ(χ) / (i^ε √q)`, so that `Λ(s, χ) = W(χ) Λ(1-s, χ̄)`.
    pub fn root_number(&self) -> Result<Complex64> {
        let tau = gauss_sum(&self.chi)?;
        let i_eps = if self.parity() == 1 { Complex64::new(0.0, 1.0) } else { ONE };
        Ok(tau / (i_eps * (self.conductor() as f64).sqrt()))
    }

    pub fn dual(&self) -> Self {
        Self::new(&self.chi.conj(), self.params).expect("conjugate of a primitive character")
    }

    /// `|Λ(s) - W Λ(1-s, χ̄)|`.
    pub fn functional_equation_residual(&self, s: Complex64) -> Result<f64> {
        let lhs = self.lambda(s)?.value;
        let rhs = self.root_number()? * self.dual().lambda(ONE - s)?.value;
        Ok((lhs - rhs).norm())
    }

    /// Samples `|L|` and `|Λ|` on `σ + it`, `|t| <= t_max`.
    pub fn zero_free_check(&self, sigma: f64, t_max: f64, step: f64) -> Result<ZeroFreeReport> {
        if !(step > 0.0) || !(t_max >= 0.0) {
            return Err(Error::Invalid("zero-free check needs step > 0 and t_max >= 0".into()));
        }
        let count = (2.0 * t_max / step).floor() as usize + 1;
        let samples = (0..count)
            .into_par_iter()
            .map(|k| {
                let t = -t_max + k as f64 * step;
                let s = Complex64::new(sigma, t);
                let lam = self.lambda(s)?.value;
                let l = lam / self.gamma_part(s)?;
                Ok((t, l.norm(), lam.norm()))
            })
            .collect::<Result<Vec<_>>>()?;
        let (argmin_t, min_abs_l, _) = samples
            .iter()
            .copied()
            .fold((0.0, f64::INFINITY, 0.0), |best, cur| if cur.1 < best.1 { cur } else { best });
        let min_abs_lambda = samples.iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
        Ok(ZeroFreeReport { sigma, t_max, min_abs_l, min_abs_lambda, argmin_t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::kronecker_character;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn standard_theta_value() {
        // oracle: direct sum of exp(-π n²)
        let direct: f64 = (1..10).map(|n: i32| 2.0 * (-PI * (n * n) as f64).exp()).sum();
        let th = theta_lift(&GlobalTestFunction::standard(), 1.0, Some(20)).unwrap();
        assert!((th.value - c(direct, 0.0)).norm() < 1e-17);
        // θ(1) = π^{1/4} / Γ(3/4)
        assert!((direct - 0.086_434_811_213_308).abs() < 1e-15);
        let far = theta_lift(&GlobalTestFunction::standard(), 8.0, None).unwrap();
        assert!(far.value.norm() < 1e-80);
    }

    #[test]
    fn poisson_identity_for_standard() {
        let phi = GlobalTestFunction::standard();
        let f = phi.fourier();
        assert_eq!(f, phi);
        for &g in &[0.25, 0.7, 1.0, 2.0, 3.9] {
            let lhs = theta_lift(&phi, g, None).unwrap().value - theta_lift(&f, 1.0 / g, None).unwrap().value / g;
            let rhs = f.at_zero() / g - phi.at_zero();
            assert!((lhs - rhs).norm() < 1e-12, "g={g}");
        }
    }

    #[test]
    fn heights() {
        assert_eq!(Idele::trivial().height(), 1.0);
        assert_eq!(Idele::new(3.0, [(2, -1)]).height(), 6.0);
        assert_eq!(Idele::new(0.5, [(3, 2)]).height(), 1.0);
        let a = Idele::new(2.0, [(2, 1), (5, -1)]);
        let b = Idele::new(0.1, [(2, -3)]);
        assert!(a.mul(&b).height() <= a.height() * b.height());
    }

    #[test]
    fn iota_is_an_involution() {
        let f = |g: f64| c(g.sin(), g * g);
        let once = iota(f);
        assert!((once(2.0) - f(0.5) / 2.0).norm() < 1e-16);
        let twice = iota(iota(f));
        for &g in &[0.3, 1.0, 7.5] {
            assert!((twice(g) - f(g)).norm() < 1e-15);
        }
        let samples = vec![(0.5, c(1.0, 0.0)), (2.0, c(3.0, 1.0))];
        assert_eq!(iota_samples(&iota_samples(&samples)), samples);
        assert_eq!(iota(|_| ONE)(2.0), c(0.5, 0.0));
    }

    #[test]
    fn residues_of_standard_and_variants() {
        let r = residues(&GlobalTestFunction::standard());
        assert_eq!((r.residue_at_1, r.residue_at_0), (ONE, -ONE));
        let r3 = residues(&GlobalTestFunction::standard().scale(c(3.0, 0.0)));
        assert_eq!((r3.residue_at_1, r3.residue_at_0), (c(3.0, 0.0), c(-3.0, 0.0)));
        let x2 = GlobalTestFunction::standard().with_arch(ArchTestFunction::monomial(2).unwrap());
        let r = residues(&x2);
        assert_eq!(r.residue_at_0, ZERO);
        // F[x² e^{-πx²}](0) = (i/2π)² H_2(0) = (-1/4π²)(-2π)
        assert!((r.residue_at_1 - c(1.0 / (2.0 * PI), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn euler_and_continued_agree_for_riemann_zeta() {
        let l = standard_l(&DirichletCharacter::trivial(1).unwrap()).unwrap();
        let cont = l.lambda(c(2.0, 0.0)).unwrap();
        assert!((cont.value - c(PI / 6.0, 0.0)).norm() < 1e-12, "{}", cont.value);
        let eu = l.lambda_euler(c(2.0, 0.0), 1_000_000).unwrap();
        assert!((eu.value - cont.value).norm() <= eu.err_bound);
        assert!(eu.err_bound < 1e-6);
    }

    #[test]
    fn riemann_zeta_at_minus_one() {
        let l = standard_l(&DirichletCharacter::trivial(1).unwrap()).unwrap();
        let v = l.l_value(c(-1.0, 0.0)).unwrap();
        assert!((v.value - c(-1.0 / 12.0, 0.0)).norm() < 1e-10, "{}", v.value);
        assert!(matches!(l.l_value(c(-2.0, 0.0)), Err(Error::GammaPole(_))));
    }

    #[test]
    fn pole_reports_carry_polar_data() {
        let l = standard_l(&DirichletCharacter::trivial(1).unwrap()).unwrap();
        match l.lambda(ONE) {
            Err(Error::Pole { location, polar: Some(pd) }) => {
                assert_eq!(location, ONE);
                assert_eq!(pd.residue_at_1, ONE);
            }
            other => panic!("expected a pole, got {other:?}"),
        }
    }

    #[test]
    fn leibniz_value() {
        let chi = kronecker_character(-4).unwrap();
        let l = standard_l(&chi).unwrap();
        let v = l.l_value(ONE).unwrap();
        assert!((v.value - c(PI / 4.0, 0.0)).norm() < 1e-11, "{}", v.value);
        assert!((l.root_number().unwrap() - ONE).norm() < 1e-14);
    }

    #[test]
    fn twisted_standard_shape() {
        let chi = kronecker_character(-4).unwrap();
        let phi = GlobalTestFunction::twisted_standard(&chi).unwrap();
        assert_eq!(phi.exceptional_primes(), vec![2]);
        assert_eq!(phi.arch().degree(), 1);
        assert!(GlobalTestFunction::twisted_standard(&DirichletCharacter::trivial(4).unwrap()).is_err());
    }

    #[test]
    fn stripping_an_euler_factor() {
        let phi = GlobalTestFunction::standard();
        let stripped = phi.clone().with_local(PAdicTestFunction::units(2).unwrap());
        let s = c(2.0, 1.0);
        let pt = HeckeCharacterPoint::trivial(s);
        let a = zeta_continued(&phi, &pt).unwrap().value;
        let b = zeta_continued(&stripped, &pt).unwrap().value;
        let factor = ONE - (-s * 2f64.ln()).exp();
        assert!((b - a * factor).norm() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let phi = GlobalTestFunction::standard().with_local(PAdicTestFunction::units(3).unwrap());
        let v = serde_json::to_value(&phi).unwrap();
        assert_eq!(v["finite"][0]["p"], 3);
        let back: GlobalTestFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, phi);
        let e = Evaluation { s: c(2.0, 0.0), value: c(1.0, 0.5), err_bound: 1e-12, method: Method::Continued };
        let v = serde_json::to_value(e).unwrap();
        assert_eq!(v, serde_json::json!({"s": [2.0, 0.0], "value": [1.0, 0.5], "err_bound": 1e-12, "method": "continued"}));
    }
}
