//! Self-checks of the identities the engine is built on. Each suite returns
//! one line per check with the observed residual and its tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arch::{gamma_duplication_check, ArchTestFunction};
use crate::arith::primes_list;
use crate::characters::{enumerate_characters, kronecker_character, DirichletCharacter, HeckeCharacterPoint};
use crate::error::{Error, Result};
use crate::euler::EulerFactor;
use crate::field_ext::{abelian_decomposition_identity, unramified_primes, QuadraticExtensionData};
use crate::global::{
    functional_equation_check, numerical_residue, residues, standard_l, theta_lift, GlobalTestFunction,
};
use crate::mellin::growth_report;
use crate::padic::{distinguished_decomposition, generator_convolve, local_zeta_symbolic, LocalCharacter, PAdicTestFunction};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fe,
    Poisson,
    Residues,
    Decompose,
    Generators,
    Growth,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Fe, Suite::Poisson, Suite::Residues, Suite::Decompose, Suite::Generators, Suite::Growth];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fe => "fe",
            Suite::Poisson => "poisson",
            Suite::Residues => "residues",
            Suite::Decompose => "decompose",
            Suite::Generators => "generators",
            Suite::Growth => "growth",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown check suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Fundamental discriminants for the quadratic checks.
    pub discriminants: Vec<i64>,
    /// Largest prime in the exact Euler-factor checks.
    pub pmax: u64,
    /// Primes for the generator checks.
    pub primes: Vec<u64>,
    /// Number of sample points for the functional equation and Poisson checks.
    pub points: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { discriminants: vec![-4, 5, -3, 8], pmax: 229, primes: vec![2, 3, 5], points: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, passed: residual <= tolerance }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn worst(&self) -> Option<&CheckLine> {
        self.lines.iter().max_by(|a, b| (a.residual / a.tolerance).total_cmp(&(b.residual / b.tolerance)))
    }
}

pub fn run(suite: Suite, opts: &CheckOptions) -> Result<CheckReport> {
    let lines = match suite {
        Suite::Fe => fe(opts)?,
        Suite::Poisson => poisson(opts)?,
        Suite::Residues => residue_checks()?,
        Suite::Decompose => decompose(opts)?,
        Suite::Generators => generators(opts)?,
        Suite::Growth => growth(opts)?,
    };
    Ok(CheckReport { suite, lines })
}

/// Deterministic points in `0.1 <= Re s <= 0.9`, `|Im s| <= 20` (a Weyl sequence).
pub fn strip_points(count: usize) -> Vec<Complex64> {
    let (a, b) = ((5f64.sqrt() - 1.0) / 2.0, 2f64.sqrt() - 1.0);
    (1..=count)
        .map(|k| {
            let k = k as f64;
            Complex64::new(0.1 + 0.8 * (k * a).fract(), -20.0 + 40.0 * (k * b).fract())
        })
        .collect()
}

/// A primitive character mod 5 of order 4.
pub fn quartic_character_mod_5() -> DirichletCharacter {
    DirichletCharacter::from_exponents(5, vec![1]).expect("character mod 5")
}

/// Test functions with exceptional places, paired with a description.
pub fn sample_test_functions() -> Result<Vec<(String, GlobalTestFunction)>> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let chi4 = kronecker_character(-4)?;
    let chi5 = quartic_character_mod_5();
    let x2 = ArchTestFunction::monomial(2)?;
    let one_plus_ix = ArchTestFunction::new(vec![ONE, c(0.0, 1.0)])?;
    let mixed5 = PAdicTestFunction::character_on_units(5, &chi5)?.add(&PAdicTestFunction::shell(5, 1)?)?;
    Ok(vec![
        ("standard".into(), GlobalTestFunction::standard()),
        (
            "x^2 gaussian, units at 2".into(),
            GlobalTestFunction::new(x2, [PAdicTestFunction::units(2)?])?,
        ),
        (
            "(1+ix) gaussian, 3^-1 Z_3".into(),
            GlobalTestFunction::new(one_plus_ix, [PAdicTestFunction::ball(3, -1)?])?,
        ),
        ("twisted standard, d=-4".into(), GlobalTestFunction::twisted_standard(&chi4)?),
        (
            "x gaussian, chi_5 + 5Z_5^x, units at 2".into(),
            GlobalTestFunction::new(
                ArchTestFunction::monomial(1)?,
                [mixed5, PAdicTestFunction::units(2)?.scale(c(2.0, -1.0))],
            )?,
        ),
    ])
}

fn fe(opts: &CheckOptions) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let zeta = standard_l(&DirichletCharacter::trivial(1)?)?;
    for s in strip_points(opts.points) {
        lines.push(CheckLine::new(format!("zeta s={s:.4}"), zeta.functional_equation_residual(s)?, 1e-9));
    }
    let mut chars: Vec<(String, DirichletCharacter)> = Vec::new();
    for &d in &opts.discriminants {
        chars.push((format!("d={d}"), kronecker_character(d)?));
    }
    chars.push(("q=5 quartic".into(), quartic_character_mod_5()));
    for (label, chi) in chars {
        let l = standard_l(&chi)?;
        for s in strip_points(5) {
            lines.push(CheckLine::new(format!("{label} s={s:.4}"), l.functional_equation_residual(s)?, 1e-9));
        }
    }
    // general test functions: Z(Φ, χ, s) = Z(FΦ, χ^{-1}, 1-s)
    let chi5 = quartic_character_mod_5();
    for (label, phi) in sample_test_functions()?.into_iter().skip(1) {
        for (k, s) in strip_points(3).into_iter().enumerate() {
            let chi = if k == 2 { chi5.clone() } else { DirichletCharacter::trivial(1)? };
            let point = HeckeCharacterPoint::new(chi, s)?;
            lines.push(CheckLine::new(
                format!("{label} s={s:.4} mod {}", point.finite().modulus()),
                functional_equation_check(&phi, &point)?,
                1e-9,
            ));
        }
    }
    Ok(lines)
}

/// `θ_Φ(g) - g^{-1} θ_{FΦ}(g^{-1}) - (FΦ(0)/g - Φ(0))`.
pub fn poisson_residual(phi: &GlobalTestFunction, g: f64) -> Result<f64> {
    let f = phi.fourier();
    let lhs = theta_lift(phi, g, None)?.value - theta_lift(&f, 1.0 / g, None)?.value / g;
    let rhs = f.at_zero() / g - phi.at_zero();
    Ok((lhs - rhs).norm())
}

/// Scales spread geometrically over `[1/4, 4]`.
pub fn poisson_scales(count: usize) -> Vec<f64> {
    let n = count.max(2) - 1;
    (0..count).map(|k| 0.25 * 16f64.powf(k as f64 / n as f64)).collect()
}

fn poisson(opts: &CheckOptions) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    for (label, phi) in sample_test_functions()? {
        let worst = poisson_scales(opts.points)
            .into_iter()
            .map(|g| poisson_residual(&phi, g))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        lines.push(CheckLine::new(label, worst, 1e-10));
    }
    Ok(lines)
}

fn residue_checks() -> Result<Vec<CheckLine>> {
    let trivial = DirichletCharacter::trivial(1)?;
    let chi4 = kronecker_character(-4)?;
    let mut lines = Vec::new();
    let mut functions = vec![("standard".to_string(), GlobalTestFunction::standard())];
    functions.extend(sample_test_functions()?.into_iter().skip(1).take(2));
    for (label, phi) in functions {
        let predicted = residues(&phi);
        for (at, expected) in [(ONE, predicted.residue_at_1), (Complex64::new(0.0, 0.0), predicted.residue_at_0)] {
            let r = numerical_residue(&phi, &trivial, at, 0.25, 32)?;
            lines.push(CheckLine::new(format!("{label} at s={}", at.re), (r - expected).norm(), 1e-7));
        }
    }
    let phi4 = GlobalTestFunction::twisted_standard(&chi4)?;
    for at in [ONE, Complex64::new(0.0, 0.0)] {
        let r = numerical_residue(&phi4, &chi4, at, 0.25, 32)?;
        lines.push(CheckLine::new(format!("d=-4 at s={} (entire)", at.re), r.norm(), 1e-7));
    }
    Ok(lines)
}

fn decompose(opts: &CheckOptions) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let primes = primes_list(opts.pmax);
    for &d in &opts.discriminants {
        let k = QuadraticExtensionData::new(d)?;
        let mut worst = 0i64;
        let mut pushforward_misses = 0usize;
        for &p in &primes {
            worst = worst.max(k.decomposition_identity(p)?.residual);
            if !k.norm_pushforward(p, 16)?.exact {
                pushforward_misses += 1;
            }
        }
        lines.push(CheckLine::new(format!("d={d} euler factors, {} primes", primes.len()), worst as f64, 0.0));
        lines.push(CheckLine::new(format!("d={d} ideal counts"), pushforward_misses as f64, 0.0));
        let s = Complex64::new(2.0, 0.0);
        let partial = k.dedekind_partial_product(s, 10_000)?;
        let full = k.dedekind_zeta(s)?;
        let diff = (partial.value - full.value).norm();
        lines.push(CheckLine::new(format!("d={d} partial product P=1e4"), diff, partial.err_bound + full.err_bound));
        let worst_gamma = strip_points(10)
            .into_iter()
            .map(|s| k.gamma_consistency(s + 0.5))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        lines.push(CheckLine::new(format!("d={d} gamma factor"), worst_gamma, 1e-10));
    }
    let worst_dup = strip_points(10)
        .into_iter()
        .map(gamma_duplication_check)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    lines.push(CheckLine::new("gamma duplication", worst_dup, 1e-10));
    let cubic: Vec<_> = enumerate_characters(7)?.into_iter().filter(|c| c.order() == 3).collect();
    let mut group = vec![DirichletCharacter::trivial(1)?];
    group.extend(cubic);
    let misses = unramified_primes(&group, 25)
        .into_iter()
        .map(|p| abelian_decomposition_identity(p, &group))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|c| !c.exact)
        .count();
    lines.push(CheckLine::new("cubic conductor 7, 25 primes", misses as f64, 0.0));
    Ok(lines)
}

fn generators(opts: &CheckOptions) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let exact = |ok: bool| if ok { 0.0 } else { 1.0 };
    let values = [ONE, -ONE, Complex64::new(0.0, 1.0)];
    for &p in &opts.primes {
        let units = PAdicTestFunction::units(p)?;
        let ok = generator_convolve(&units)? == PAdicTestFunction::standard(p)?;
        lines.push(CheckLine::new(format!("p={p} units generate 1_Zp"), exact(ok), 0.0));
        let (first, second) = distinguished_decomposition(p)?;
        for c in values {
            let omega = LocalCharacter::unramified(p, c);
            let product = local_zeta_symbolic(&first, &omega)?.mul(&local_zeta_symbolic(&second, &omega)?)?;
            lines.push(CheckLine::new(format!("p={p} c={c} distinguished pair"), exact(product.is_one()), 0.0));
            let cancel = EulerFactor::inverse_standard(p, c).mul(&EulerFactor::standard(p, c))?;
            lines.push(CheckLine::new(format!("p={p} c={c} (1-cX)(1-cX)^-1"), exact(cancel.is_one()), 0.0));
        }
    }
    Ok(lines)
}

fn growth(opts: &CheckOptions) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let mut chars = vec![("zeta".to_string(), DirichletCharacter::trivial(1)?)];
    if let Some(&d) = opts.discriminants.first() {
        chars.push((format!("d={d}"), kronecker_character(d)?));
    }
    for (label, chi) in chars {
        let r = growth_report(&chi, 2.0, 10.0, 60.0, 0.5, 1_000_000)?;
        lines.push(CheckLine::new(format!("{label} decay rate"), (r.fitted_rate + PI / 4.0).abs(), 0.02));
        lines.push(CheckLine::new(format!("{label} gamma band"), r.band_ratio, 5.0));
    }
    Ok(lines)
}
