//! Densities, expectation values, group velocity and bandgap.
//!
//! Spin is `Σ/2` with `Σ = diag(σ, σ)`, in units of ħ. Densities take a
//! [`SpinorSample`]; integrated quantities take a normalized [`Mode`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{find_modes, integration_extent, interior_panels, SolverOptions};
use crate::model::{MaterialLaw, ProblemClass, QuantumNumbers, UnitSystem, WireSpec};
use crate::quadrature::{composite_rule, integrate, Tolerance};
use crate::spinor::{eval_mode, Mode, SpinorSample};

pub fn probability_density(sample: &SpinorSample) -> f64 {
    sample.psi.iter().map(|c| c.norm_sqr()).sum()
}

/// `(|ψ₁|² − |ψ₂|² + |ψ₃|² − |ψ₄|²)/2`.
pub fn spin_z_density(sample: &SpinorSample) -> f64 {
    let p = sample.psi.map(|c| c.norm_sqr());
    0.5 * (p[0] - p[1] + p[2] - p[3])
}

/// `Re ψ†(−i∂_φ)ψ` from the fixed angular orders of a single-μ sample.
pub fn oam_z_density(sample: &SpinorSample) -> f64 {
    let p = sample.psi.map(|c| c.norm_sqr());
    let n1 = ((sample.two_mu - 1) / 2) as f64;
    let n2 = n1 + 1.0;
    n1 * (p[0] + p[2]) + n2 * (p[1] + p[3])
}

/// `(S_x, S_y)` in Cartesian components.
pub fn transverse_spin_cartesian(sample: &SpinorSample) -> (f64, f64) {
    let [a, b, c, d] = sample.psi;
    let w = a.conj() * b + c.conj() * d;
    (w.re, w.im)
}

/// `(S_ρ, S_φ)`: the Cartesian transverse spin rotated by −φ.
pub fn transverse_spin_density(sample: &SpinorSample) -> (f64, f64) {
    let (sx, sy) = transverse_spin_cartesian(sample);
    let w = Complex64::new(sx, sy) * Complex64::from_polar(1.0, -sample.phi);
    (w.re, w.im)
}

/// `ψ†α_zψ = 2 Re(ψ₁*ψ₃ − ψ₂*ψ₄)`, in units of v_F.
pub fn current_z_density(sample: &SpinorSample) -> f64 {
    let [a, b, c, d] = sample.psi;
    2.0 * (a.conj() * c - b.conj() * d).re
}

/// `ψ†βψ`.
pub fn beta_density(sample: &SpinorSample) -> f64 {
    let p = sample.psi.map(|c| c.norm_sqr());
    p[0] + p[1] - p[2] - p[3]
}

/// Cross-section integrals of the densities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Expectations {
    pub probability: f64,
    pub spin_z: f64,
    pub oam_z: f64,
    pub spin_rho: f64,
    pub spin_phi: f64,
    pub current_z: f64,
    pub beta: f64,
}

const FIELDS: usize = 7;

fn field_vector(sample: &SpinorSample) -> [f64; FIELDS] {
    let (s_rho, s_phi) = transverse_spin_density(sample);
    [
        probability_density(sample),
        spin_z_density(sample),
        oam_z_density(sample),
        s_rho,
        s_phi,
        current_z_density(sample),
        beta_density(sample),
    ]
}

impl Expectations {
    fn from_array(v: [f64; FIELDS]) -> Self {
        Self {
            probability: v[0],
            spin_z: v[1],
            oam_z: v[2],
            spin_rho: v[3],
            spin_phi: v[4],
            current_z: v[5],
            beta: v[6],
        }
    }
}

/// All integrated densities of a mode by adaptive quadrature in ρ; the φ
/// integral is 2π because every density is φ-independent.
pub fn expectations(mode: &Mode) -> Result<Expectations> {
    let (a, outer) = integration_extent(mode);
    let f = |rho: f64| -> Result<[f64; FIELDS]> {
        let s = eval_mode(mode, rho, 0.0)?;
        Ok(field_vector(&s).map(|v| v * rho))
    };
    let tol = Tolerance::default();
    let mut total = integrate(f, 0.0, a, interior_panels(mode), tol)?;
    if outer > a {
        let tail = integrate(f, a, outer, 16, tol)?;
        for (t, x) in total.iter_mut().zip(tail) {
            *t += x;
        }
    }
    Ok(Expectations::from_array(
        total.map(|v| 2.0 * std::f64::consts::PI * v),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularMomentumReport {
    pub spin_z: f64,
    pub orbital_z: f64,
    pub total_z: f64,
    /// `|S_z + L_z − μ|`.
    pub residual: f64,
}

impl AngularMomentumReport {
    fn new(spin_z: f64, orbital_z: f64, mu: f64) -> Self {
        let total_z = spin_z + orbital_z;
        Self {
            spin_z,
            orbital_z,
            total_z,
            residual: (total_z - mu).abs(),
        }
    }
}

/// Polar sample points with area weights: composite Gauss–Legendre in ρ and
/// the periodic trapezoid rule in φ.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    pub rho: Vec<f64>,
    pub phi: Vec<f64>,
    /// `weights[i * phi.len() + j]` is the area element of `(rho[i], phi[j])`.
    pub weights: Vec<f64>,
}

/// Gauss nodes per radial panel.
const PANEL_NODES: usize = 16;

impl PolarGrid {
    /// Radial breakpoints with at least one panel each; `panel_width` caps
    /// the panel size.
    pub fn new(breaks: &[f64], panel_width: f64, n_phi: usize) -> Result<Self> {
        if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks[0] < 0.0 {
            return Err(Error::InvalidParameter(
                "radial breakpoints must start at ≥ 0 and increase".into(),
            ));
        }
        if !(panel_width > 0.0) || n_phi == 0 {
            return Err(Error::InvalidParameter(
                "panel width and φ count must be positive".into(),
            ));
        }
        let mut rho = Vec::new();
        let mut w_rho = Vec::new();
        for w in breaks.windows(2) {
            let panels = ((w[1] - w[0]) / panel_width).ceil().max(1.0) as usize;
            let (r, wt) = composite_rule(w[0], w[1], panels, PANEL_NODES);
            rho.extend(r);
            w_rho.extend(wt);
        }
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let phi: Vec<f64> = (0..n_phi).map(|j| j as f64 * dphi).collect();
        let mut weights = Vec::with_capacity(rho.len() * n_phi);
        for (r, w) in rho.iter().zip(&w_rho) {
            for _ in 0..n_phi {
                weights.push(r * w * dphi);
            }
        }
        Ok(Self { rho, phi, weights })
    }

    /// Grid adapted to a mode: panels no wider than `min(a/8, 1.5/k_max)`
    /// inside, and the exterior tail for constant-mass wires.
    pub fn for_mode(mode: &Mode, n_phi: usize) -> Result<Self> {
        let (a, outer) = integration_extent(mode);
        let kmax = mode
            .interior_k_perp_sq()
            .iter()
            .map(|k| k.sqrt().norm())
            .fold(0.0f64, f64::max);
        let mut width = a / 8.0;
        if kmax > 0.0 {
            width = width.min(1.5 / kmax);
        }
        let mut breaks = vec![0.0, a];
        if outer > a {
            let kappa = mode.exterior_decay().unwrap_or(1.0 / a);
            width = width.min(2.0 / kappa);
            breaks.push(outer);
        }
        Self::new(&breaks, width, n_phi)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Density fields of one mode sampled on a [`PolarGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub grid: PolarGrid,
    pub label: String,
    pub energy: f64,
    pub two_mu: i32,
    pub prob: Vec<f64>,
    pub spin_z: Vec<f64>,
    pub oam_z: Vec<f64>,
    pub spin_rho: Vec<f64>,
    pub spin_phi: Vec<f64>,
    pub current_z: Vec<f64>,
}

impl DensityGrid {
    pub fn sample(mode: &Mode, grid: PolarGrid) -> Result<Self> {
        let n = grid.len();
        let mut out = Self {
            label: mode.label(),
            energy: mode.energy,
            two_mu: mode.qn.two_mu(),
            prob: Vec::with_capacity(n),
            spin_z: Vec::with_capacity(n),
            oam_z: Vec::with_capacity(n),
            spin_rho: Vec::with_capacity(n),
            spin_phi: Vec::with_capacity(n),
            current_z: Vec::with_capacity(n),
            grid,
        };
        for &rho in &out.grid.rho {
            let radial = mode.radial(rho)?;
            for &phi in &out.grid.phi {
                let s = SpinorSample::from_radial(radial, rho, phi, mode.qn.two_mu());
                let (sr, sp) = transverse_spin_density(&s);
                out.prob.push(probability_density(&s));
                out.spin_z.push(spin_z_density(&s));
                out.oam_z.push(oam_z_density(&s));
                out.spin_rho.push(sr);
                out.spin_phi.push(sp);
                out.current_z.push(current_z_density(&s));
            }
        }
        Ok(out)
    }

    /// Weighted sum of a field over the grid.
    pub fn integrate(&self, field: &[f64]) -> f64 {
        field.iter().zip(&self.grid.weights).map(|(f, w)| f * w).sum()
    }

    pub fn expectations(&self) -> Expectations {
        Expectations {
            probability: self.integrate(&self.prob),
            spin_z: self.integrate(&self.spin_z),
            oam_z: self.integrate(&self.oam_z),
            spin_rho: self.integrate(&self.spin_rho),
            spin_phi: self.integrate(&self.spin_phi),
            current_z: self.integrate(&self.current_z),
            beta: f64::NAN,
        }
    }
}

pub fn total_angular_momentum(mode: &Mode, grid: &DensityGrid) -> Result<AngularMomentumReport> {
    if grid.two_mu != mode.qn.two_mu() || grid.energy != mode.energy {
        return Err(Error::InvalidParameter(
            "density grid was sampled from a different mode".into(),
        ));
    }
    Ok(AngularMomentumReport::new(
        grid.integrate(&grid.spin_z),
        grid.integrate(&grid.oam_z),
        mode.qn.mu(),
    ))
}

/// Angular momentum from the adaptive-quadrature expectations.
pub fn angular_momentum(mode: &Mode) -> Result<AngularMomentumReport> {
    let e = expectations(mode)?;
    Ok(AngularMomentumReport::new(e.spin_z, e.oam_z, mode.qn.mu()))
}

/// Expectation of the velocity operator `∂H/∂(ħk_z)` in units of v_F:
/// `⟨α_z⟩`, plus `−2Bħ²k_z⟨β⟩/(ħv_F)` for a dispersive interior.
pub fn velocity_expectation(mode: &Mode) -> Result<f64> {
    let e = expectations(mode)?;
    Ok(match (mode.class, mode.spec.interior()) {
        (ProblemClass::JrD, MaterialLaw::DispersiveMass { b_hbar2, .. }) => {
            e.current_z - 2.0 * b_hbar2 * mode.qn.kz() * e.beta / mode.spec.hbar_vf()
        }
        _ => e.current_z,
    })
}

/// `v_g/v_F = (dE/dk_z)/(ħv_F)` from samples of one branch: second-order
/// differences on a possibly non-uniform grid, one-sided at the ends.
pub fn group_velocity(points: &[(f64, f64)], units: &UnitSystem) -> Result<Vec<(f64, f64)>> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "group velocity needs ≥ 3 samples, got {}",
            points.len()
        )));
    }
    let increasing = points.windows(2).all(|w| w[1].0 > w[0].0);
    let decreasing = points.windows(2).all(|w| w[1].0 < w[0].0);
    if !(increasing || decreasing) {
        return Err(Error::InvalidParameter("k_z samples must be strictly monotone".into()));
    }
    let hv = units.hbar_vf();
    let n = points.len();
    // Derivative at x[i] of the parabola through three samples.
    let slope = |i: usize, j: usize, k: usize, at: usize| {
        let (x0, y0) = points[i];
        let (x1, y1) = points[j];
        let (x2, y2) = points[k];
        let x = points[at].0;
        y0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2))
            + y1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2))
            + y2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))
    };
    Ok((0..n)
        .map(|i| {
            let d = if i == 0 {
                slope(0, 1, 2, 0)
            } else if i == n - 1 {
                slope(n - 3, n - 2, n - 1, n - 1)
            } else {
                slope(i - 1, i, i + 1, i)
            };
            (points[i].0, d / hv)
        })
        .collect())
}

/// Half-gap at k_z = 0: the lowest |E| over the modes of channel μ, `Some(0)`
/// when a root lies within the energy tolerance of zero, `None` when the
/// window holds no mode.
pub fn bandgap(spec: &WireSpec, two_mu: i32, opts: &SolverOptions) -> Result<Option<f64>> {
    let qn = QuantumNumbers::new(two_mu, 0.0)?;
    let found = find_modes(spec, &qn, opts)?;
    Ok(found
        .modes
        .iter()
        .map(|m| m.energy.abs())
        .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.min(e))))
        .map(|g| if g < opts.energy_tol { 0.0 } else { g }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(psi: [f64; 4]) -> SpinorSample {
        SpinorSample::new(psi.map(|x| Complex64::new(x, 0.0)), 1.0, 0.4, 1)
    }

    #[test]
    fn pointwise_definitions() {
        assert_eq!(spin_z_density(&sample([1.0, 0.0, 0.0, 0.0])), 0.5);
        assert_eq!(spin_z_density(&sample([0.0, 1.0, 0.0, 0.0])), -0.5);
        assert_eq!(oam_z_density(&sample([0.6, 0.0, 0.8, 0.0])), 0.0);
        assert_eq!(current_z_density(&sample([1.0, 0.0, 0.0, 0.0])), 0.0);
        let (_, sy) = transverse_spin_cartesian(&sample([0.3, 0.0, 0.0, 0.7]));
        assert_eq!(sy, 0.0);
    }

    #[test]
    fn total_angular_momentum_is_mu_pointwise() {
        let psi = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.05, -0.4),
            Complex64::new(0.7, 0.2),
        ];
        for two_mu in [-5, -1, 1, 3] {
            let s = SpinorSample::new(psi, 2.0, 1.1, two_mu);
            let j = spin_z_density(&s) + oam_z_density(&s);
            assert_relative_eq!(j, 0.5 * two_mu as f64 * probability_density(&s), max_relative = 1e-14);
        }
    }

    #[test]
    fn polar_weights_integrate_area() {
        let g = PolarGrid::new(&[0.0, 3.0, 7.5], 0.9, 12).unwrap();
        let area: f64 = g.weights.iter().sum();
        assert_relative_eq!(area, std::f64::consts::PI * 7.5 * 7.5, max_relative = 1e-12);
        let g = PolarGrid::new(&[2.0, 5.0], 10.0, 3).unwrap();
        let area: f64 = g.weights.iter().sum();
        assert_relative_eq!(area, std::f64::consts::PI * 21.0, max_relative = 1e-12);
    }

    #[test]
    fn group_velocity_of_linear_and_symmetric_branches() {
        let u = UnitSystem::from_hbar_vf(1.3).unwrap();
        let line: Vec<(f64, f64)> = [0.0, 0.1, 0.25, 0.3, 0.5].iter().map(|&k| (k, 1.3 * k)).collect();
        for (_, v) in group_velocity(&line, &u).unwrap() {
            assert_relative_eq!(v, 1.0, max_relative = 1e-12);
        }
        let sym: Vec<(f64, f64)> = (-3..=3).map(|i| {
            let k = 0.1 * i as f64;
            (k, (1.0 + k * k).sqrt())
        }).collect();
        let v = group_velocity(&sym, &u).unwrap();
        assert!(v[3].1.abs() < 1e-15);
        assert!(group_velocity(&line[..2], &u).is_err());
        let unsorted = [(0.0, 1.0), (0.2, 1.0), (0.1, 1.0)];
        assert!(group_velocity(&unsorted, &u).is_err());
    }
}
