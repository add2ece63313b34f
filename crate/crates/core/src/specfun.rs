//! Cylinder functions of integer order.
//!
//! `J_n(z)` is evaluated for complex argument, `I_n(x)` and `K_n(x)` for real
//! argument. Small arguments use the power series; otherwise `J` and `I` come
//! from Miller's downward recurrence normalized by a generating-function sum,
//! and `K_0`, `K_1` from Temme's series (x ≤ 2) or Steed's continued fraction
//! (x > 2) followed by the stable upward recurrence.
//!
//! Negative orders follow `J_{-n} = (-1)^n J_n`, `I_{-n} = I_n`, `K_{-n} = K_n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order the solver ever requests.
pub const MAX_ORDER: i32 = 64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-17;
const SERIES_RADIUS_J: f64 = 2.0;
const SERIES_RADIUS_I: f64 = 4.0;
const RESCALE_ABOVE: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;

/// Which cylinder function a region's radial dependence uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CylFnKind {
    /// `J_n`, finite at the origin, oscillatory for real argument.
    RegularOscillatory,
    /// `I_n`, finite at the origin, growing.
    RegularGrowing,
    /// `K_n`, singular at the origin, decaying.
    DecayingExterior,
}

impl CylFnKind {
    pub fn value(self, n: i32, z: Complex64) -> Result<Complex64> {
        match self {
            CylFnKind::RegularOscillatory => bessel_j(n, z),
            CylFnKind::RegularGrowing => Ok(Complex64::new(bessel_i(n, real_arg(z)?)?, 0.0)),
            CylFnKind::DecayingExterior => Ok(Complex64::new(bessel_k(n, real_arg(z)?)?, 0.0)),
        }
    }
}

fn real_arg(z: Complex64) -> Result<f64> {
    if z.im != 0.0 {
        return Err(Error::Domain(format!(
            "I and K are evaluated for real argument only, got {z}"
        )));
    }
    Ok(z.re)
}

fn check_order(n: i32, limit: i32) -> Result<()> {
    if n.abs() > limit {
        return Err(Error::Domain(format!("order {n} exceeds |n| ≤ {limit}")));
    }
    Ok(())
}

fn check_finite(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

/// Bessel function of the first kind `J_n(z)`.
pub fn bessel_j(n: i32, z: Complex64) -> Result<Complex64> {
    check_order(n, MAX_ORDER + 1)?;
    check_finite(z)?;
    let m = n.unsigned_abs() as usize;
    let v = j_orders_unchecked(m, z)[m];
    Ok(if n < 0 && m % 2 == 1 { -v } else { v })
}

/// `J_0(z), …, J_nmax(z)` in one recurrence pass.
pub fn bessel_j_orders(nmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_order(nmax as i32, MAX_ORDER + 1)?;
    check_finite(z)?;
    Ok(j_orders_unchecked(nmax, z))
}

/// Modified Bessel function of the first kind `I_n(x)`, `x ≥ 0`.
pub fn bessel_i(n: i32, x: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(n, x)?;
    Ok(scaled * x.exp())
}

/// `e^{-x} I_n(x)`, `x ≥ 0`. Finite for every representable `x`.
pub fn bessel_i_scaled(n: i32, x: f64) -> Result<f64> {
    check_order(n, MAX_ORDER + 1)?;
    let m = n.unsigned_abs() as usize;
    Ok(bessel_i_scaled_orders(m, x)?[m])
}

/// `e^{-x} I_0(x), …, e^{-x} I_nmax(x)`.
pub fn bessel_i_scaled_orders(nmax: usize, x: f64) -> Result<Vec<f64>> {
    check_order(nmax as i32, MAX_ORDER + 1)?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("bessel_i needs finite x ≥ 0, got {x}")));
    }
    Ok(i_scaled_orders_unchecked(nmax, x))
}

/// Modified Bessel function of the second kind `K_n(x)`, `x > 0`.
pub fn bessel_k(n: i32, x: f64) -> Result<f64> {
    let scaled = bessel_k_scaled(n, x)?;
    Ok(scaled * (-x).exp())
}

/// `e^{x} K_n(x)`, `x > 0`.
pub fn bessel_k_scaled(n: i32, x: f64) -> Result<f64> {
    check_order(n, MAX_ORDER + 1)?;
    let m = n.unsigned_abs() as usize;
    Ok(bessel_k_scaled_orders(m, x)?[m])
}

/// `e^{x} K_0(x), …, e^{x} K_nmax(x)`.
pub fn bessel_k_scaled_orders(nmax: usize, x: f64) -> Result<Vec<f64>> {
    check_order(nmax as i32, MAX_ORDER + 1)?;
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("bessel_k needs finite x > 0, got {x}")));
    }
    let (k0, k1) = k01_scaled(x);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(k0);
    if nmax >= 1 {
        out.push(k1);
    }
    for k in 1..nmax {
        let next = out[k - 1] + (2.0 * k as f64 / x) * out[k];
        out.push(next);
    }
    Ok(out)
}

/// Derivative with respect to the argument, from the order recurrences.
pub fn deriv(kind: CylFnKind, n: i32, z: Complex64) -> Result<Complex64> {
    check_order(n, MAX_ORDER)?;
    let below = kind.value(n - 1, z)?;
    let above = kind.value(n + 1, z)?;
    Ok(match kind {
        CylFnKind::RegularOscillatory => 0.5 * (below - above),
        CylFnKind::RegularGrowing => 0.5 * (below + above),
        CylFnKind::DecayingExterior => -0.5 * (below + above),
    })
}

fn miller_start(nmax: usize, size: f64) -> usize {
    let top = (nmax as f64).max(size);
    let start = (top + 30.0 + (40.0 * top).sqrt()).ceil() as usize;
    start + (start & 1)
}

fn j_orders_unchecked(nmax: usize, z: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
    if z.norm() < SERIES_RADIUS_J {
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = j_series(n, z);
        }
        return out;
    }

    // e^{iz} = J_0 + 2 Σ i^k J_k (and the conjugate-unit version) avoids the
    // cancellation the plain Σ J_{2k} = 1 normalization suffers for complex z.
    let unit = if z.im <= 0.0 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(0.0, -1.0)
    };
    let target = (unit * z).exp();
    let unit_pow = [
        Complex64::new(1.0, 0.0),
        unit,
        unit * unit,
        unit * unit * unit,
    ];

    let nstart = miller_start(nmax, z.norm());
    let two_over_z = 2.0 / z;
    let mut above = Complex64::new(0.0, 0.0);
    let mut current = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (1..=nstart).rev() {
        if k <= nmax {
            out[k] = current;
        }
        sum += 2.0 * unit_pow[k % 4] * current;
        let below = (k as f64) * two_over_z * current - above;
        above = current;
        current = below;
        if current.norm() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            for v in out.iter_mut().skip(k.min(nmax + 1)) {
                *v *= RESCALE_BY;
            }
        }
    }
    out[0] = current;
    sum += current;
    let scale = target / sum;
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

fn j_series(n: usize, z: Complex64) -> Complex64 {
    let half = 0.5 * z;
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        term *= half / k as f64;
    }
    let step = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= step / ((k * (n + k)) as f64);
        sum += term;
        if term.norm() <= EPS * sum.norm() {
            break;
        }
    }
    sum
}

fn i_scaled_orders_unchecked(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < SERIES_RADIUS_I {
        let damp = (-x).exp();
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = i_series(n, x) * damp;
        }
        return out;
    }

    // e^{x} = I_0 + 2 Σ I_k: every term positive, so the sum is stable.
    let nstart = miller_start(nmax, x);
    let two_over_x = 2.0 / x;
    let mut above = 0.0;
    let mut current = 1.0;
    let mut sum = 0.0;
    for k in (1..=nstart).rev() {
        if k <= nmax {
            out[k] = current;
        }
        sum += 2.0 * current;
        let below = (k as f64) * two_over_x * current + above;
        above = current;
        current = below;
        if current > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            for v in out.iter_mut().skip(k.min(nmax + 1)) {
                *v *= RESCALE_BY;
            }
        }
    }
    out[0] = current;
    sum += current;
    for v in out.iter_mut() {
        *v /= sum;
    }
    out
}

fn i_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let step = half * half;
    let mut sum = term;
    for k in 1..300 {
        term *= step / ((k * (n + k)) as f64);
        sum += term;
        if term <= EPS * sum {
            break;
        }
    }
    sum
}

/// `(e^x K_0(x), e^x K_1(x))`.
fn k01_scaled(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        let (k0, k1) = k01_temme(x);
        let grow = x.exp();
        (k0 * grow, k1 * grow)
    } else {
        k01_steed(x)
    }
}

fn k01_temme(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let mut ff = -EULER_GAMMA - half.ln();
    let mut p = 0.5;
    let mut q = 0.5;
    let mut c = 1.0;
    let mut sum = ff;
    let mut sum1 = p;
    for i in 1..500 {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi);
        c *= quarter_sq / fi;
        p /= fi;
        q /= fi;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

fn k01_steed(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn j_at_origin() {
        assert_eq!(bessel_j(0, c(0.0)).unwrap(), c(1.0));
        assert_eq!(bessel_j(1, c(0.0)).unwrap(), c(0.0));
        assert_eq!(bessel_j(7, c(0.0)).unwrap(), c(0.0));
    }

    #[test]
    fn first_zero_of_j0() {
        // 2.404826 is the bisection root of the direct J0 series (see tests/specfun.rs).
        let v = bessel_j(0, c(2.404826)).unwrap();
        assert!(v.norm() < 1e-6, "{v}");
    }

    #[test]
    fn i_at_origin() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn wronskian_at_one() {
        let v = bessel_k(0, 1.0).unwrap() * bessel_i(1, 1.0).unwrap()
            + bessel_k(1, 1.0).unwrap() * bessel_i(0, 1.0).unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn derivative_identities() {
        let j = CylFnKind::RegularOscillatory;
        assert_eq!(deriv(j, 0, c(0.0)).unwrap().norm(), 0.0);
        for x in [0.5, 1.0, 5.0] {
            let s = deriv(j, 0, c(x)).unwrap() + bessel_j(1, c(x)).unwrap();
            assert!(s.norm() < 1e-15, "x={x}: {s}");
        }
        let k = deriv(CylFnKind::DecayingExterior, 0, c(1.0)).unwrap();
        assert_relative_eq!(k.re, -bessel_k(1, 1.0).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_k(0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(
            bessel_j(0, Complex64::new(f64::NAN, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            bessel_j(0, Complex64::new(f64::INFINITY, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(bessel_j(200, c(1.0)), Err(Error::Domain(_))));
        assert!(matches!(
            CylFnKind::DecayingExterior.value(0, Complex64::new(1.0, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn negative_orders() {
        let z = Complex64::new(3.3, -0.7);
        assert_eq!(bessel_j(-3, z).unwrap(), -bessel_j(3, z).unwrap());
        assert_eq!(bessel_j(-2, z).unwrap(), bessel_j(2, z).unwrap());
        assert_eq!(bessel_i(-3, 2.5).unwrap(), bessel_i(3, 2.5).unwrap());
        assert_eq!(bessel_k(-4, 2.5).unwrap(), bessel_k(4, 2.5).unwrap());
    }

    #[test]
    fn scaled_forms_survive_large_arguments() {
        let i = bessel_i_scaled(1, 900.0).unwrap();
        let k = bessel_k_scaled(1, 900.0).unwrap();
        // Leading asymptotics 1/sqrt(2πx) and sqrt(π/(2x)).
        assert_relative_eq!(i, 1.0 / (2.0 * PI * 900.0).sqrt(), max_relative = 1e-3);
        assert_relative_eq!(k, (PI / 1800.0).sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn series_and_recurrence_branches_agree() {
        for n in 0..6 {
            let below = bessel_j(n, c(SERIES_RADIUS_J * (1.0 - 1e-13))).unwrap();
            let above = bessel_j(n, c(SERIES_RADIUS_J * (1.0 + 1e-13))).unwrap();
            assert!((below - above).norm() < 1e-11, "J order {n}");
            let below = bessel_i(n, SERIES_RADIUS_I * (1.0 - 1e-13)).unwrap();
            let above = bessel_i(n, SERIES_RADIUS_I * (1.0 + 1e-13)).unwrap();
            assert_relative_eq!(below, above, max_relative = 1e-11);
            let below = bessel_k(n, 2.0 * (1.0 - 1e-13)).unwrap();
            let above = bessel_k(n, 2.0 * (1.0 + 1e-13)).unwrap();
            assert_relative_eq!(below, above, max_relative = 1e-11);
        }
    }
}
