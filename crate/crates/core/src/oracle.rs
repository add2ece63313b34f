//! Finite-difference check of the Dirac equation on sampled radial profiles.
//!
//! The oracle only sees sampled values: a fixed-(μ, k_z) profile is put on a
//! staggered grid `ρ_i = (i + 1/2)h` and the Hamiltonian is applied with
//! second-order central differences. With the phases `e^{in_jφ}` of component
//! j and `e^{ik_z z}`, at φ = 0 the gradient acts as
//! `σ_x ∂_ρ + σ_y (i n_b/ρ) + σ_z (i k_z)` on component b of a two-spinor, and
//!
//! ```text
//! H = [[ m,  ħv(−iσ·∇)],
//!      [ħv(−iσ·∇),  −m ]]
//! ```
//!
//! with `m → m₀ + Bħ²(∂_ρ² + ∂_ρ/ρ − n²/ρ² − k_z²)` for a dispersive mass.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{MaterialLaw, ProblemClass, QuantumNumbers, WireSpec};
use crate::spinor::{BasisSpinor, Mode};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coarsest spacing accepted, as a fraction of the wire radius.
const MAX_SPACING_FRACTION: f64 = 0.01;

/// Staggered radial grid `ρ_i = (i + 1/2)h < ρ_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub h: f64,
    pub rho: Vec<f64>,
    pub qn: QuantumNumbers,
}

impl RadialGrid {
    pub fn new(h: f64, rho_max: f64, qn: QuantumNumbers) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && rho_max > h) {
            return Err(Error::InvalidParameter(format!(
                "grid needs 0 < h < ρ_max, got h = {h}, ρ_max = {rho_max}"
            )));
        }
        let n = (rho_max / h - 0.5).ceil() as usize;
        let rho = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        Ok(Self { h, rho, qn })
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Piecewise material: `interior` for ρ < radius, `exterior` beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    pub radius: f64,
    pub interior: MaterialLaw,
    pub exterior: MaterialLaw,
    pub hbar_vf: f64,
}

impl Medium {
    pub fn from_spec(spec: &WireSpec) -> Self {
        Self {
            radius: spec.radius(),
            interior: spec.interior(),
            exterior: spec.exterior(),
            hbar_vf: spec.hbar_vf(),
        }
    }

    pub fn uniform(law: MaterialLaw, hbar_vf: f64) -> Self {
        Self {
            radius: f64::INFINITY,
            interior: law,
            exterior: law,
            hbar_vf,
        }
    }

    fn law_at(&self, rho: f64) -> MaterialLaw {
        if rho < self.radius {
            self.interior
        } else {
            self.exterior
        }
    }
}

/// Kinetic and mass parts of `Hψ` per grid point; `None` where the
/// three-point stencil leaves the grid or straddles the interface.
#[derive(Debug, Clone, PartialEq)]
pub struct AppliedHamiltonian {
    pub kinetic: Vec<Option<[Complex64; 4]>>,
    pub mass: Vec<Option<[Complex64; 4]>>,
}

/// Discretized `(v_F α·p + mv_F²β)ψ` of a sampled profile.
pub fn apply_hamiltonian(
    grid: &RadialGrid,
    profile: &[[Complex64; 4]],
    medium: &Medium,
) -> Result<AppliedHamiltonian> {
    if profile.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "profile has {} samples, grid has {}",
            profile.len(),
            grid.len()
        )));
    }
    let h = grid.h;
    let hv = medium.hbar_vf;
    let kz = grid.qn.kz();
    let (n1, n2) = grid.qn.angular_orders();
    let orders = [n1 as f64, n2 as f64, n1 as f64, n2 as f64];
    let n = grid.len();
    let mut kinetic = vec![None; n];
    let mut mass = vec![None; n];
    for i in 1..n.saturating_sub(1) {
        let (r_lo, r, r_hi) = (grid.rho[i - 1], grid.rho[i], grid.rho[i + 1]);
        let inside = r < medium.radius;
        if (r_lo < medium.radius) != inside || (r_hi < medium.radius) != inside {
            continue;
        }
        let d1: [Complex64; 4] =
            std::array::from_fn(|j| (profile[i + 1][j] - profile[i - 1][j]) / (2.0 * h));
        let psi = profile[i];
        // σ·∇ on the two-spinor (a, b) with angular orders (na, nb).
        let sigma_grad = |a: usize, b: usize| -> [Complex64; 2] {
            let da = d1[a];
            let db = d1[b];
            let ya = I * orders[a] / r * psi[a];
            let yb = I * orders[b] / r * psi[b];
            // σ_x(da, db) + σ_y(ya, yb) + σ_z(i k_z)(ψa, ψb)
            [
                db - I * yb + I * kz * psi[a],
                da + I * ya - I * kz * psi[b],
            ]
        };
        let upper = sigma_grad(2, 3);
        let lower = sigma_grad(0, 1);
        kinetic[i] = Some([
            -I * hv * upper[0],
            -I * hv * upper[1],
            -I * hv * lower[0],
            -I * hv * lower[1],
        ]);
        let m: [Complex64; 4] = match medium.law_at(r) {
            MaterialLaw::ConstantMass { mc2 } => std::array::from_fn(|j| mc2 * psi[j]),
            MaterialLaw::DispersiveMass { m0c2, b_hbar2 } => std::array::from_fn(|j| {
                let d2 = (profile[i + 1][j] - 2.0 * psi[j] + profile[i - 1][j]) / (h * h);
                let lap = d2 + d1[j] / r - (orders[j] * orders[j] / (r * r) + kz * kz) * psi[j];
                m0c2 * psi[j] + b_hbar2 * lap
            }),
        };
        mass[i] = Some([m[0], m[1], -m[2], -m[3]]);
    }
    Ok(AppliedHamiltonian { kinetic, mass })
}

/// `‖Hψ − Eψ‖ / (‖Kψ‖ + ‖Mψ‖ + |E|‖ψ‖)` in the area-weighted ℓ² norm over the
/// points with a valid stencil.
pub fn relative_residual(
    grid: &RadialGrid,
    profile: &[[Complex64; 4]],
    medium: &Medium,
    energy: f64,
) -> Result<f64> {
    let applied = apply_hamiltonian(grid, profile, medium)?;
    let (mut res, mut kin, mut mass, mut psi) = (0.0, 0.0, 0.0, 0.0);
    let mut used = 0usize;
    for i in 0..grid.len() {
        let (Some(k), Some(m)) = (applied.kinetic[i], applied.mass[i]) else {
            continue;
        };
        let w = grid.rho[i];
        used += 1;
        for j in 0..4 {
            res += w * (k[j] + m[j] - energy * profile[i][j]).norm_sqr();
            kin += w * k[j].norm_sqr();
            mass += w * m[j].norm_sqr();
            psi += w * profile[i][j].norm_sqr();
        }
    }
    if used == 0 {
        return Err(Error::InvalidParameter("no grid point has a full stencil".into()));
    }
    let scale = kin.sqrt() + mass.sqrt() + energy.abs() * psi.sqrt();
    if !(scale > 0.0) {
        return Err(Error::NonFinite("profile vanishes on the grid".into()));
    }
    Ok(res.sqrt() / scale)
}

fn check_spacing(h: f64, radius: f64) -> Result<()> {
    let limit = MAX_SPACING_FRACTION * radius;
    if h > limit {
        return Err(Error::GridTooCoarse { h, limit });
    }
    Ok(())
}

/// Grid for a mode: to `a + 6/κ` for constant masses, to `a` otherwise.
pub fn mode_grid(mode: &Mode, h: f64) -> Result<RadialGrid> {
    let a = mode.spec.radius();
    check_spacing(h, a)?;
    let rho_max = match (mode.class, mode.exterior_decay()) {
        (ProblemClass::JrD, _) => a,
        (_, Some(kappa)) => a + 6.0 / kappa,
        (_, None) => {
            return Err(Error::NotBoundState {
                energy: mode.energy,
                reason: "exterior is not evanescent".into(),
            })
        }
    };
    RadialGrid::new(h, rho_max, mode.qn)
}

/// Relative residual of a mode at its own energy.
pub fn residual(mode: &Mode, h: f64) -> Result<f64> {
    residual_at_energy(mode, mode.energy, h)
}

/// Relative residual of a mode's profile tested against an arbitrary energy.
pub fn residual_at_energy(mode: &Mode, energy: f64, h: f64) -> Result<f64> {
    let grid = mode_grid(mode, h)?;
    let profile = grid
        .rho
        .iter()
        .map(|&r| mode.radial(r))
        .collect::<Result<Vec<_>>>()?;
    relative_residual(&grid, &profile, &Medium::from_spec(&mode.spec), energy)
}

/// Residual of a single basis spinor in its own uniform medium on `[0, ρ_max]`
/// (or `[a/2, ρ_max]` for exterior solutions, which are singular at 0).
pub fn basis_residual(basis: &BasisSpinor, law: MaterialLaw, hbar_vf: f64, h: f64, rho_max: f64) -> Result<f64> {
    let grid = RadialGrid::new(h, rho_max, basis.qn)?;
    let start = match basis.region {
        crate::spinor::Region::Interior => 0,
        crate::spinor::Region::Exterior => grid.len() / 2,
    };
    let trimmed = RadialGrid {
        h,
        rho: grid.rho[start..].to_vec(),
        qn: basis.qn,
    };
    let profile = trimmed
        .rho
        .iter()
        .map(|&r| basis.radial(r))
        .collect::<Result<Vec<_>>>()?;
    let profile: Vec<[Complex64; 4]> = profile
        .into_iter()
        .map(|p| if p.iter().all(|c| c.is_finite()) { p } else { [ZERO; 4] })
        .collect();
    relative_residual(&trimmed, &profile, &Medium::uniform(law, hbar_vf), basis.energy)
}
