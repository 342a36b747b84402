use std::f64::consts::PI;

use adele_zeta::characters::{kronecker_character, DirichletCharacter};
use adele_zeta::global::standard_l;
use adele_zeta::mellin::{bump, mellin_numeric, mellin_profile, DecayClass, BUMP_CLASS};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ∫ e^{-πx²} x^s d^×x by the trapezoid rule on u = ln x (geometric convergence).
fn gaussian_mellin_trapezoid(s: Complex64) -> Complex64 {
    let (lo, hi, n) = (-40.0, 3.0, 8000);
    let h = (hi - lo) / n as f64;
    (0..=n)
        .map(|k| {
            let u = lo + k as f64 * h;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            (-PI * (2.0 * u).exp()).exp() * (s * u).exp() * w
        })
        .sum::<Complex64>()
        * h
}

// h(x) = ∫ e^{-π(x/y)²} bump(y) dy/y, trapezoid on the bump's support.
fn convolved(x: f64) -> Complex64 {
    let n = 400;
    let h = 1.0 / n as f64;
    (1..n)
        .map(|k| {
            let y = 1.0 + k as f64 * h;
            (-PI * (x / y).powi(2)).exp() * bump(y) / y
        })
        .sum::<Complex64>()
        * h
}

#[test]
fn mellin_turns_convolution_into_product() {
    let gauss = |x: f64| c((-PI * x * x).exp(), 0.0);
    for s in [c(0.7, 0.0), c(1.5, 4.0), c(2.0, -9.0)] {
        let mg = mellin_numeric(gauss, DecayClass::Schwartz { order_at_zero: 0 }, s).unwrap().value;
        assert!((mg - gaussian_mellin_trapezoid(s)).norm() < 1e-11);
        let mb = mellin_numeric(bump, BUMP_CLASS, s).unwrap().value;
        let mh = mellin_numeric(convolved, DecayClass::Schwartz { order_at_zero: 0 }, s).unwrap().value;
        assert!((mh - mg * mb).norm() < 1e-8 * (mg * mb).norm().max(1e-3), "s={s}: {mh} vs {}", mg * mb);
    }
}

#[test]
fn mellin_rejects_points_left_of_abscissa() {
    let f = |x: f64| c(x * (-x).exp(), 0.0);
    assert!(mellin_numeric(f, DecayClass::Schwartz { order_at_zero: 1 }, c(-1.0, 0.0)).is_err());
    assert!(mellin_numeric(f, DecayClass::Schwartz { order_at_zero: 1 }, c(-0.5, 0.0)).is_ok());
}

#[test]
fn bump_seminorms_stabilize() {
    let short = mellin_profile(bump, BUMP_CLASS, 0.5, 100.0, 0.5, &[5]).unwrap();
    let long = mellin_profile(bump, BUMP_CLASS, 0.5, 200.0, 0.5, &[5]).unwrap();
    let (a, b) = (short.seminorms[0].value, long.seminorms[0].value);
    assert!((a - b).abs() <= 0.01 * b, "order-5 seminorm {a} vs {b}");
}

#[test]
fn no_zeros_on_the_edge_of_the_strip() {
    // the trivial character is left out: its pole sits on this line
    for chi in [kronecker_character(-4).unwrap(), DirichletCharacter::from_exponents(5, vec![1]).unwrap()] {
        let report = standard_l(&chi).unwrap().zero_free_check(1.0, 30.0, 0.5).unwrap();
        assert!(report.min_abs_l > 0.05, "{chi:?}: min |L| = {}", report.min_abs_l);
    }
}

#[test]
fn continued_value_matches_dirichlet_series_far_right() {
    // at σ = 8, L(s) is 1 + O(2^-8) for the trivial character
    let l = standard_l(&DirichletCharacter::trivial(1).unwrap()).unwrap();
    for t in [0.0, 5.0, 25.0] {
        let e = l.l_value(c(8.0, t)).unwrap();
        let series: Complex64 = (1..200u32).map(|n| (-c(8.0, t) * (n as f64).ln()).exp()).sum();
        // the stripped value inherits the absolute quadrature error divided by |Γ_R|
        assert!((e.value - series).norm() <= e.err_bound + 1e-14, "t={t}: {} vs {series} (bound {})", e.value, e.err_bound);
    }
}
