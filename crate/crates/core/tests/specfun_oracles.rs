//! Bessel functions against oracles that share no code with the library:
//! direct power series, periodic-trapezoid integral representations and the
//! integral representation of K.

use std::f64::consts::PI;

use diracwire::specfun::{bessel_i, bessel_i_scaled, bessel_j, bessel_k, bessel_k_scaled, deriv, CylFnKind};
use num_complex::Complex64;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Σ (−1)^k (z/2)^{2k+n} / (k!(k+n)!), with the sum of term moduli.
fn j_series(n: usize, z: Complex64) -> (Complex64, f64) {
    let half = z / 2.0;
    let mut term = half.powu(n as u32) / factorial(n);
    let (mut sum, mut mass) = (term, term.norm());
    for k in 1..200 {
        term *= -half * half / (k as f64 * (k + n) as f64);
        sum += term;
        mass += term.norm();
        if term.norm() < 1e-18 * mass {
            break;
        }
    }
    (sum, mass)
}

fn i_series(n: usize, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(n as i32) / factorial(n);
    let mut sum = term;
    for k in 1..400 {
        term *= half * half / (k as f64 * (k + n) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// `(1/2π)∫_{−π}^{π} e^{i(z sin τ − nτ)} dτ` by the trapezoid rule, which is
/// spectrally accurate for periodic integrands. Returns the value and the
/// integral of the integrand's modulus.
fn j_integral(n: i32, z: Complex64) -> (Complex64, f64) {
    const N: usize = 4096;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for k in 0..N {
        let tau = -PI + 2.0 * PI * k as f64 / N as f64;
        let v = (Complex64::i() * (z * tau.sin() - n as f64 * tau)).exp();
        sum += v;
        mass += v.norm();
    }
    (sum / N as f64, mass / N as f64)
}

/// `∫₀^∞ e^{−x cosh t} cosh(nt) dt`; the integrand decays double
/// exponentially, so a plain trapezoid rule converges fast.
fn k_integral(n: i32, x: f64) -> f64 {
    let h = 0.005;
    let f = |t: f64| (-x * t.cosh() + n as f64 * t).exp() * 0.5 * (1.0 + (-2.0 * n as f64 * t).exp());
    let mut sum = 0.5 * f(0.0);
    let mut t = h;
    loop {
        let v = f(t);
        sum += v;
        if v < 1e-20 * sum && t > 1.0 {
            break;
        }
        t += h;
    }
    sum * h
}

#[test]
fn j_matches_series_for_small_arguments() {
    for n in 0..=12 {
        for r in [0.01, 0.3, 1.0, 1.9, 2.5, 4.0] {
            for theta in [0.0, 0.4, PI / 2.0, 2.0, PI] {
                let z = Complex64::from_polar(r, theta);
                let (oracle, mass) = j_series(n, z);
                let got = bessel_j(n as i32, z).unwrap();
                assert!(
                    (got - oracle).norm() <= 1e-12 * mass,
                    "J_{n}({z}) = {got}, series {oracle}"
                );
            }
        }
    }
}

#[test]
fn j_matches_integral_representation_up_to_100() {
    for n in [0, 1, 2, 5, 10, 30, 64] {
        for r in [3.0, 7.5, 20.0, 45.0, 80.0, 100.0] {
            for theta in [0.0, 0.1, 0.7, PI / 2.0, 2.5] {
                let z = Complex64::from_polar(r, theta);
                if z.im.abs() > 40.0 {
                    continue;
                }
                let (oracle, mass) = j_integral(n, z);
                let got = bessel_j(n, z).unwrap();
                assert!(
                    (got - oracle).norm() <= 1e-12 * mass,
                    "J_{n}({z}) = {got}, integral {oracle}, scale {mass}"
                );
            }
        }
    }
}

#[test]
fn i_matches_series() {
    for n in 0..=20 {
        for x in [0.0, 0.05, 0.5, 1.0, 3.9, 4.1, 10.0, 25.0, 50.0] {
            let oracle = i_series(n, x);
            let got = bessel_i(n as i32, x).unwrap();
            if oracle == 0.0 {
                assert_eq!(got, 0.0);
            } else {
                assert!((got / oracle - 1.0).abs() < 1e-12, "I_{n}({x}) = {got}, series {oracle}");
            }
        }
    }
}

#[test]
fn k_matches_integral_representation() {
    for n in 0..=12 {
        for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 50.0] {
            let oracle = k_integral(n, x);
            let got = bessel_k(n, x).unwrap();
            assert!((got / oracle - 1.0).abs() < 1e-12, "K_{n}({x}) = {got}, integral {oracle}");
        }
    }
}

#[test]
fn scaled_forms_match_oracles() {
    for n in [0, 1, 4, 9] {
        for x in [0.5, 20.0, 60.0] {
            let k = bessel_k_scaled(n, x).unwrap();
            assert!((k / (k_integral(n, x) * x.exp()) - 1.0).abs() < 1e-12);
            let i = bessel_i_scaled(n, x).unwrap();
            assert!((i / (i_series(n as usize, x) * (-x).exp()) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn first_zero_of_j0_by_series_bisection() {
    let f = |x: f64| j_series(0, Complex64::new(x, 0.0)).0.re;
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    assert!((root - 2.404826).abs() < 1e-6);
    assert!(bessel_j(0, Complex64::new(root, 0.0)).unwrap().norm() < 1e-14);
}

#[test]
fn identities_on_the_reference_grid() {
    let xs: Vec<f64> = (0..=200).map(|i| 0.1 + 49.9 * i as f64 / 200.0).collect();
    for &x in &xs {
        let z = Complex64::new(x, 0.0);
        for n in 1..=10 {
            let j = |k| bessel_j(k, z).unwrap().re;
            let scale = j(n - 1).abs().max(j(n + 1).abs()).max((2.0 * n as f64 / x * j(n)).abs());
            assert!((j(n - 1) + j(n + 1) - 2.0 * n as f64 / x * j(n)).abs() <= 1e-10 * scale);
            let i = |k| bessel_i(k, x).unwrap();
            assert!(((i(n - 1) - i(n + 1)) / (2.0 * n as f64 / x * i(n)) - 1.0).abs() < 1e-10);
        }
        for n in 0..=10 {
            let (i, k) = (bessel_i(n, x).unwrap(), bessel_k(n, x).unwrap());
            let di = deriv(CylFnKind::RegularGrowing, n, z).unwrap().re;
            let dk = deriv(CylFnKind::DecayingExterior, n, z).unwrap().re;
            assert!((x * (i * dk - di * k) + 1.0).abs() < 1e-10, "Wronskian at n={n}, x={x}");
            let jz = bessel_j(n, Complex64::new(0.0, x)).unwrap();
            let expect = Complex64::i().powi(n) * i;
            assert!((jz - expect).norm() <= 1e-10 * expect.norm());
        }
    }
}

#[test]
fn derivatives_match_central_differences() {
    // Five-point stencil: truncation error O(h⁴).
    let h = 1e-3;
    for kind in [CylFnKind::RegularOscillatory, CylFnKind::RegularGrowing, CylFnKind::DecayingExterior] {
        for n in 0..=5 {
            for x in [1.0, 2.5, 5.0, 12.0] {
                let z = Complex64::new(x, 0.0);
                let f = |dx: f64| kind.value(n, z + dx).unwrap();
                let fd = (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
                let d = deriv(kind, n, z).unwrap();
                let scale = kind.value(n, z).unwrap().norm().max(d.norm()).max(1.0);
                assert!((fd - d).norm() < 1e-8 * scale, "{kind:?} n={n} x={x}: {d} vs {fd}");
            }
        }
    }
    assert_eq!(deriv(CylFnKind::RegularOscillatory, 0, Complex64::new(0.0, 0.0)).unwrap().norm(), 0.0);
}
