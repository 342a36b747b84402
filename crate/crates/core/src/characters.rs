//! Dirichlet characters with exact root-of-unity values, and the points
//! `χ·|·|^s` of the space of Hecke characters over the rationals.
//!
//! A character mod `q` is stored as one exponent per generator of `(Z/q)^×`.
//! Generators are fixed per prime: the smallest primitive root modulo `p²`
//! for odd `p` (a primitive root modulo every `p^k`), and `-1`, `5` at `2`.
//! Because the choice depends only on the prime, the p-part of a character
//! mod `q` and the same character reduced to its conductor share exponents
//! up to a power of `p`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, gcd, mod_floor, mul_mod, primitive_root_prime_power};
use crate::error::{Error, Result};

/// Largest modulus accepted by [`UnitGroup::new`]; discrete-log tables are
/// kept in memory, one entry per residue.
pub const MAX_MODULUS: u64 = 1_000_000;

/// An exact root of unity `exp(2πi k / order)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub order: u64,
    pub k: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, k: u64) -> Self {
        let k = k % order;
        let g = gcd(k, order).max(1);
        if k == 0 {
            return Self { order: 1, k: 0 };
        }
        Self { order: order / g, k: k / g }
    }

    pub fn one() -> Self {
        Self { order: 1, k: 0 }
    }

    pub fn inverse(self) -> Self {
        Self::new(self.order, self.order - self.k)
    }

    pub fn mul(self, other: Self) -> Self {
        let l = arith::lcm(self.order, other.order);
        Self::new(l, self.k * (l / self.order) + other.k * (l / other.order))
    }

    pub fn pow(self, e: u64) -> Self {
        Self::new(self.order, mul_mod(self.k, e, self.order))
    }

    /// Complex value; quarter turns are returned exactly.
    pub fn to_complex(self) -> Complex64 {
        match (self.order, self.k) {
            (1, _) => Complex64::new(1.0, 0.0),
            (2, 1) => Complex64::new(-1.0, 0.0),
            (4, 1) => Complex64::new(0.0, 1.0),
            (4, 3) => Complex64::new(0.0, -1.0),
            (n, k) => Complex64::from_polar(1.0, TAU * k as f64 / n as f64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ComponentKind {
    /// Cyclic group `(Z/p^k)^×` for odd `p`, generated by a primitive root.
    Cyclic,
    /// The `{±1}` factor of `(Z/2^k)^×`, `k >= 2`.
    Sign,
    /// The cyclic factor generated by `5` in `(Z/2^k)^×`, `k >= 3`.
    Five,
}

#[derive(Debug)]
struct UnitComponent {
    prime: u64,
    /// `p^k` exactly dividing the modulus.
    exponent: u32,
    prime_power: u64,
    kind: ComponentKind,
    /// Generator lifted to the full modulus (≡ 1 at the other primes).
    generator: u64,
    order: u64,
    /// Discrete logarithm table indexed by residue mod `p^k` (`u32::MAX` off the subgroup).
    dlog: Vec<u32>,
}

impl UnitComponent {
    fn log(&self, n: u64) -> u64 {
        let r = n % self.prime_power;
        match self.kind {
            ComponentKind::Cyclic => self.dlog[r as usize] as u64,
            ComponentKind::Sign => u64::from(r % 4 == 3),
            ComponentKind::Five => {
                let m = if r % 4 == 1 { r } else { self.prime_power - r };
                self.dlog[m as usize] as u64
            }
        }
    }
}

/// Structure of `(Z/q)^×` as a product of cyclic groups with fixed generators.
#[derive(Debug)]
pub struct UnitGroup {
    modulus: u64,
    components: Vec<UnitComponent>,
    exponent: u64,
}

fn group_cache() -> &'static Mutex<HashMap<u64, Arc<UnitGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnitGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl UnitGroup {
    /// Builds (or fetches from a process-wide cache) the unit group mod `q`.
    pub fn new(q: u64) -> Result<Arc<UnitGroup>> {
        if q == 0 {
            return Err(Error::ZeroModulus);
        }
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge { modulus: q, max: MAX_MODULUS });
        }
        if let Some(g) = group_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&q) {
            return Ok(Arc::clone(g));
        }
        let group = Arc::new(Self::build(q));
        let mut cache = group_cache().lock().unwrap_or_else(|e| e.into_inner());
        Ok(Arc::clone(cache.entry(q).or_insert(group)))
    }

    fn build(q: u64) -> UnitGroup {
        let mut components = Vec::new();
        for (p, k) in factorize(q) {
            let pk = p.pow(k);
            let lift = |local: u64| crt_lift(local, pk, q);
            if p == 2 {
                if k >= 2 {
                    components.push(UnitComponent {
                        prime: 2,
                        exponent: k,
                        prime_power: pk,
                        kind: ComponentKind::Sign,
                        generator: lift(pk - 1),
                        order: 2,
                        dlog: Vec::new(),
                    });
                }
                if k >= 3 {
                    let order = pk / 4;
                    components.push(UnitComponent {
                        prime: 2,
                        exponent: k,
                        prime_power: pk,
                        kind: ComponentKind::Five,
                        generator: lift(5),
                        order,
                        dlog: power_table(5, order, pk),
                    });
                }
            } else {
                let g = primitive_root_prime_power(p) % pk;
                let order = pk / p * (p - 1);
                components.push(UnitComponent {
                    prime: p,
                    exponent: k,
                    prime_power: pk,
                    kind: ComponentKind::Cyclic,
                    generator: lift(g),
                    order,
                    dlog: power_table(g, order, pk),
                });
            }
        }
        let exponent = components.iter().fold(1, |acc, c| arith::lcm(acc, c.order));
        UnitGroup { modulus: q, components, exponent }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exponent of the group (lcm of generator orders).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.order).product()
    }

    /// `(generator, order)` pairs, generators as residues mod `q`.
    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.components.iter().map(|c| (c.generator, c.order)).collect()
    }
}

fn power_table(g: u64, order: u64, m: u64) -> Vec<u32> {
    let mut table = vec![u32::MAX; m as usize];
    let mut x = 1u64;
    for i in 0..order {
        table[x as usize] = i as u32;
        x = mul_mod(x, g, m);
    }
    table
}

/// The residue mod `q` that is `local` mod `pk` and `1` mod `q / pk`.
fn crt_lift(local: u64, pk: u64, q: u64) -> u64 {
    let rest = q / pk;
    if rest == 1 {
        return local % q;
    }
    // x = 1 + rest * t with rest * t ≡ local - 1 (mod pk)
    let inv = arith::inv_mod(rest % pk, pk).expect("coprime factors");
    let t = mul_mod((local + pk - 1) % pk, inv, pk);
    (1 + rest * t) % q
}

/// A Dirichlet character modulo `q`, stored as exponents on the fixed generators.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    conductor: u64,
    parity: u8,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus())
            .field("exponents", &self.exponents)
            .field("conductor", &self.conductor)
            .field("parity", &self.parity)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn trivial(q: u64) -> Result<Self> {
        let group = UnitGroup::new(q)?;
        let n = group.components.len();
        Ok(Self::from_parts(group, vec![0; n]))
    }

    /// Character sending the `i`-th generator to `exp(2πi·exponents[i]/order_i)`.
    pub fn from_exponents(q: u64, exponents: Vec<u64>) -> Result<Self> {
        let group = UnitGroup::new(q)?;
        if exponents.len() != group.components.len() {
            return Err(Error::Invalid(format!(
                "modulus {q} has {} generators, got {} exponents",
                group.components.len(),
                exponents.len()
            )));
        }
        if let Some((e, c)) = exponents
            .iter()
            .zip(&group.components)
            .find(|(e, c)| **e >= c.order)
        {
            return Err(Error::Invalid(format!("exponent {e} out of range for generator of order {}", c.order)));
        }
        Ok(Self::from_parts(group, exponents))
    }

    fn from_parts(group: Arc<UnitGroup>, exponents: Vec<u64>) -> Self {
        let conductor = group
            .components
            .iter()
            .zip(&exponents)
            .fold(1u64, |acc, (c, &a)| acc * component_conductor(c, a, &group.components, &exponents));
        let mut chi = Self { group, exponents, conductor, parity: 0 };
        let q = chi.modulus();
        chi.parity = if q <= 2 {
            0
        } else {
            match chi.value_exponent(-1) {
                Some(r) if r.order == 2 => 1,
                _ => 0,
            }
        };
        chi
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `0` for even characters (`χ(-1) = 1`), `1` for odd.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(1, |acc, (c, &a)| arith::lcm(acc, c.order / gcd(a, c.order)))
    }

    /// `χ(n)` as an exact root of unity, `None` when `gcd(n, q) > 1`.
    pub fn value_exponent(&self, n: i64) -> Option<RootOfUnity> {
        let q = self.modulus();
        let r = mod_floor(n, q);
        if gcd(r, q) != 1 {
            return None;
        }
        let l = self.group.exponent;
        let k = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .filter(|(_, &a)| a != 0)
            .fold(0u64, |acc, (c, &a)| {
                let term = mul_mod(mul_mod(a, c.log(r), c.order), l / c.order, l);
                (acc + term) % l
            });
        Some(RootOfUnity::new(l, k))
    }

    pub fn evaluate(&self, n: i64) -> Complex64 {
        self.value_exponent(n).map_or(Complex64::new(0.0, 0.0), RootOfUnity::to_complex)
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &a)| (c.order - a) % c.order)
            .collect();
        Self::from_parts(Arc::clone(&self.group), exps)
    }

    /// Product of two characters, induced to the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = arith::lcm(self.modulus(), other.modulus());
        let a = self.induce(m)?;
        let b = other.induce(m)?;
        let exps = a
            .group
            .components
            .iter()
            .zip(a.exponents.iter().zip(&b.exponents))
            .map(|(c, (&x, &y))| (x + y) % c.order)
            .collect();
        Ok(Self::from_parts(a.group, exps))
    }

    pub fn pow(&self, e: u64) -> Self {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &a)| mul_mod(a, e, c.order))
            .collect();
        Self::from_parts(Arc::clone(&self.group), exps)
    }

    /// The primitive character inducing `self`.
    pub fn primitive(&self) -> Self {
        if self.is_primitive() {
            return self.clone();
        }
        let target = UnitGroup::new(self.conductor).expect("conductor divides a valid modulus");
        let exps = target
            .components
            .iter()
            .map(|tc| {
                let (c, a) = self
                    .group
                    .components
                    .iter()
                    .zip(&self.exponents)
                    .find(|(c, _)| c.prime == tc.prime && c.kind == tc.kind)
                    .expect("conductor components appear in the modulus");
                match c.kind {
                    ComponentKind::Sign => *a,
                    _ => a / (c.prime_power / tc.prime_power),
                }
            })
            .collect();
        Self::from_parts(target, exps)
    }

    /// The character mod `modulus` induced from the primitive part of `self`.
    /// `modulus` must be a multiple of the conductor.
    pub fn induce(&self, modulus: u64) -> Result<Self> {
        if !modulus.is_multiple_of(self.conductor) {
            return Err(Error::Incompatible(format!(
                "cannot induce a character of conductor {} to modulus {modulus}",
                self.conductor
            )));
        }
        if modulus == self.modulus() {
            return Ok(self.clone());
        }
        let prim = self.primitive();
        let target = UnitGroup::new(modulus)?;
        let exps = target
            .components
            .iter()
            .map(|tc| {
                prim.group
                    .components
                    .iter()
                    .zip(&prim.exponents)
                    .find(|(c, _)| c.prime == tc.prime && c.kind == tc.kind)
                    .map_or(0, |(c, &a)| match c.kind {
                        ComponentKind::Sign => a,
                        _ => a * (tc.prime_power / c.prime_power),
                    })
            })
            .collect();
        Ok(Self::from_parts(target, exps))
    }

    /// The `p`-primary factor of `χ` as a character mod `p^k`, `p^k ∥ q`.
    /// Returns the trivial character mod 1 when `p ∤ q`.
    pub fn prime_component(&self, p: u64) -> Self {
        self.select_primes(|l| l == p)
    }

    /// The product of the components at primes other than `p`, a character
    /// mod `q / p^k`.
    pub fn prime_to_part(&self, p: u64) -> Self {
        self.select_primes(|l| l != p)
    }

    fn select_primes(&self, keep: impl Fn(u64) -> bool) -> Self {
        let mut modulus = 1u64;
        let mut last = 0;
        for c in self.group.components.iter().filter(|c| keep(c.prime)) {
            if c.prime != last {
                modulus *= c.prime_power;
                last = c.prime;
            }
        }
        let target = UnitGroup::new(modulus).expect("divisor of a valid modulus");
        let exps = target
            .components
            .iter()
            .map(|tc| {
                self.group
                    .components
                    .iter()
                    .zip(&self.exponents)
                    .find(|(c, _)| c.prime == tc.prime && c.kind == tc.kind)
                    .map_or(0, |(_, &a)| a)
            })
            .collect();
        Self::from_parts(target, exps)
    }

    /// Values on `0..q` as complex numbers.
    pub fn table(&self) -> Vec<Complex64> {
        (0..self.modulus() as i64).map(|n| self.evaluate(n)).collect()
    }
}

/// Conductor exponent contribution `p^f` of one generator component.
fn component_conductor(c: &UnitComponent, a: u64, all: &[UnitComponent], exps: &[u64]) -> u64 {
    match c.kind {
        ComponentKind::Cyclic => {
            if a == 0 {
                return 1;
            }
            let v = arith::valuation(a, c.prime).min(c.exponent - 1);
            c.prime.pow(c.exponent - v)
        }
        // The 2-part conductor is computed once, on the sign component (or on
        // the Five component when there is no sign factor, which cannot happen
        // since Five requires k >= 3).
        ComponentKind::Sign => {
            let five = all
                .iter()
                .zip(exps)
                .find(|(d, _)| d.prime == 2 && d.kind == ComponentKind::Five)
                .map(|(_, &b)| b)
                .unwrap_or(0);
            if a == 0 && five == 0 {
                1
            } else if five == 0 {
                4
            } else {
                let v = arith::valuation(five, 2);
                2u64.pow((c.exponent - v).max(2))
            }
        }
        ComponentKind::Five => 1,
    }
}

/// All `φ(q)` characters mod `q`, trivial character first, then in
/// mixed-radix order of the exponent vector (first generator fastest).
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = UnitGroup::new(q)?;
    let orders: Vec<u64> = group.components.iter().map(|c| c.order).collect();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u64; orders.len()];
    for _ in 0..total {
        out.push(DirichletCharacter::from_parts(Arc::clone(&group), exps.clone()));
        for (e, &o) in exps.iter_mut().zip(&orders) {
            *e += 1;
            if *e < o {
                break;
            }
            *e = 0;
        }
    }
    Ok(out)
}

/// The quadratic character `n ↦ (d/n)` of `Q(√d)`, as a primitive character mod `|d|`.
pub fn kronecker_character(d: i64) -> Result<DirichletCharacter> {
    if !arith::is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let q = d.unsigned_abs();
    let group = UnitGroup::new(q)?;
    let exps = group
        .components
        .iter()
        .map(|c| match arith::kronecker_symbol(d, c.generator) {
            1 => 0,
            -1 => c.order / 2,
            _ => unreachable!("generators are units"),
        })
        .collect();
    Ok(DirichletCharacter::from_parts(group, exps))
}

/// `τ(χ) = Σ_{a mod q} χ(a) e^{2πi a/q}` for a primitive character.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    let q = chi.modulus();
    Ok((0..q)
        .filter_map(|a| chi.value_exponent(a as i64).map(|v| (a, v)))
        .map(|(a, v)| {
            // combine both phases before converting, to keep one rounding
            let additive = RootOfUnity::new(q, a);
            v.mul(additive).to_complex()
        })
        .sum())
}

/// A point `χ·|·|^s` on the component of `Chars(Q)` indexed by a primitive
/// Dirichlet character. The archimedean sign `ε` is the parity of `χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeCharacterPoint {
    finite: DirichletCharacter,
    pub s: Complex64,
}

impl HeckeCharacterPoint {
    pub fn new(finite: DirichletCharacter, s: Complex64) -> Result<Self> {
        if !finite.is_primitive() {
            return Err(Error::NotPrimitive { modulus: finite.modulus(), conductor: finite.conductor() });
        }
        Ok(Self { finite, s })
    }

    pub fn trivial(s: Complex64) -> Self {
        Self { finite: DirichletCharacter::trivial(1).expect("modulus 1"), s }
    }

    pub fn finite(&self) -> &DirichletCharacter {
        &self.finite
    }

    pub fn parity(&self) -> u8 {
        self.finite.parity()
    }

    pub fn with_s(&self, s: Complex64) -> Self {
        Self { finite: self.finite.clone(), s }
    }

    /// Points on the same connected component share the primitive finite part.
    pub fn same_component(&self, other: &Self) -> bool {
        self.finite == other.finite
    }

    /// The dual point `χ^{-1}·|·|^{1-s}`.
    pub fn dual(&self) -> Self {
        Self { finite: self.finite.conj(), s: Complex64::new(1.0, 0.0) - self.s }
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterRepr {
    modulus: u64,
    exponents: Vec<u64>,
    conductor: u64,
    parity: u8,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterRepr {
            modulus: self.modulus(),
            exponents: self.exponents.clone(),
            conductor: self.conductor,
            parity: self.parity,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CharacterRepr::deserialize(deserializer)?;
        character_from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn character_from_repr(repr: CharacterRepr) -> Result<DirichletCharacter> {
    let chi = DirichletCharacter::from_exponents(repr.modulus, repr.exponents)?;
    if chi.conductor != repr.conductor || chi.parity != repr.parity {
        return Err(Error::Invalid(format!(
            "stored conductor/parity ({}, {}) disagree with exponents ({}, {})",
            repr.conductor, repr.parity, chi.conductor, chi.parity
        )));
    }
    Ok(chi)
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    #[serde(flatten)]
    character: CharacterRepr,
    s: [f64; 2],
}

impl Serialize for HeckeCharacterPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr {
            character: CharacterRepr {
                modulus: self.finite.modulus(),
                exponents: self.finite.exponents.clone(),
                conductor: self.finite.conductor,
                parity: self.finite.parity,
            },
            s: [self.s.re, self.s.im],
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HeckeCharacterPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PointRepr::deserialize(deserializer)?;
        let chi = character_from_repr(repr.character).map_err(serde::de::Error::custom)?;
        HeckeCharacterPoint::new(chi, Complex64::new(repr.s[0], repr.s[1])).map_err(serde::de::Error::custom)
    }
}
