//! Adaptive Gauss–Kronrod (7/15) integration of vector-valued integrands and
//! composite Gauss–Legendre panels.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`]. Convergence is judged on component 0, which
/// callers arrange to be a positive reference quantity (a probability).
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub relative: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            relative: 1e-13,
            max_intervals: 20_000,
        }
    }
}

struct Piece<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: f64,
}

fn kronrod<const N: usize, F>(f: &mut F, lo: f64, hi: f64) -> Result<Piece<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut samples = [[0.0; N]; 15];
    samples[7] = f(centre)?;
    for j in 0..7 {
        let dx = half * XGK[j];
        samples[j] = f(centre - dx)?;
        samples[14 - j] = f(centre + dx)?;
    }
    let weight = |j: usize| WGK[if j <= 7 { j } else { 14 - j }];
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for (j, v) in samples.iter().enumerate() {
        let i = if j <= 7 { j } else { 14 - j };
        for c in 0..N {
            k[c] += weight(j) * v[c];
            if i == 7 {
                g[c] += WG[3] * v[c];
            } else if i % 2 == 1 {
                g[c] += WG[i / 2] * v[c];
            }
        }
    }
    // Error estimate rescaled against the deviation from the panel mean.
    let mut error = 0.0f64;
    for c in 0..N {
        let mean = 0.5 * k[c];
        let asc: f64 = samples
            .iter()
            .enumerate()
            .map(|(j, v)| weight(j) * (v[c] - mean).abs())
            .sum::<f64>()
            * half;
        k[c] *= half;
        g[c] *= half;
        let diff = (k[c] - g[c]).abs();
        let e = if asc > 0.0 && diff > 0.0 {
            asc * (200.0 * diff / asc).powf(1.5).min(1.0)
        } else {
            diff
        };
        error = error.max(e);
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "integrand not finite on [{lo}, {hi}]"
        )));
    }
    Ok(Piece {
        lo,
        hi,
        value: k,
        error,
    })
}

/// Integrate `f` over `[lo, hi]`, starting from `initial_panels` equal panels
/// and bisecting the worst panel until the summed error estimate drops below
/// `relative · |∫ f₀|`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    lo: f64,
    hi: f64,
    initial_panels: usize,
    tol: Tolerance,
) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("bad interval [{lo}, {hi}]")));
    }
    if hi <= lo {
        return Ok([0.0; N]);
    }
    let n0 = initial_panels.max(1);
    let width = (hi - lo) / n0 as f64;
    let mut pieces = Vec::with_capacity(n0 * 4);
    for i in 0..n0 {
        let a = lo + width * i as f64;
        let b = if i + 1 == n0 { hi } else { a + width };
        pieces.push(kronrod(&mut f, a, b)?);
    }
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in pieces.iter().enumerate() {
            for c in 0..N {
                total[c] += p.value[c];
            }
            err += p.error;
            if p.error > pieces[worst].error {
                worst = i;
            }
        }
        let scale = total[0].abs().max(f64::MIN_POSITIVE);
        if err <= tol.relative * scale || pieces.len() >= tol.max_intervals {
            return Ok(total);
        }
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            return Ok(total);
        }
        pieces.push(kronrod(&mut f, p.lo, mid)?);
        pieces.push(kronrod(&mut f, mid, p.hi)?);
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of a composite Gauss–Legendre rule over `[lo, hi]`.
pub fn composite_rule(lo: f64, hi: f64, panels: usize, nodes_per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(nodes_per_panel);
    let panels = panels.max(1);
    let width = (hi - lo) / panels as f64;
    let mut pts = Vec::with_capacity(panels * nodes_per_panel);
    let mut wts = Vec::with_capacity(panels * nodes_per_panel);
    for p in 0..panels {
        let a = lo + width * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            pts.push(a + 0.5 * width * (xi + 1.0));
            wts.push(0.5 * width * wi);
        }
    }
    (pts, wts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gk_integrates_smooth_functions() {
        let v = integrate(|x: f64| Ok([x.exp(), x.sin()]), 0.0, 2.0, 1, Tolerance::default()).unwrap();
        assert_relative_eq!(v[0], 2f64.exp() - 1.0, max_relative = 1e-14);
        assert_relative_eq!(v[1], 1.0 - 2f64.cos(), max_relative = 1e-13);
    }

    #[test]
    fn gk_handles_sharp_features() {
        let v = integrate(|x: f64| Ok([(-200.0 * (x - 0.3) * (x - 0.3)).exp()]), -1.0, 1.6, 2, Tolerance::default())
            .unwrap();
        assert_relative_eq!(v[0], (std::f64::consts::PI / 200.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let sum: f64 = w.iter().sum();
        assert_relative_eq!(sum, 2.0, max_relative = 1e-14);
        let p: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert_relative_eq!(p, 2.0 / 31.0, max_relative = 1e-13);
    }

    #[test]
    fn composite_rule_area() {
        let (r, w) = composite_rule(1.0, 3.0, 5, 8);
        let area: f64 = r.iter().zip(&w).map(|(r, w)| 2.0 * std::f64::consts::PI * r * w).sum();
        assert_relative_eq!(area, std::f64::consts::PI * 8.0, max_relative = 1e-14);
    }
}
