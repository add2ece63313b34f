//! Basis spinors of the cylindrical Dirac equation and assembled modes.
//!
//! Standard representation, `β = diag(1, 1, −1, −1)`. At fixed total angular
//! momentum μ and longitudinal wavenumber k_z, components 1 and 3 carry
//! `e^{i(μ−1/2)φ}` and components 2 and 4 carry `e^{i(μ+1/2)φ}`; everything
//! below works with the radial amplitudes at φ = 0, z = 0.
//!
//! Radial functions are normalized so that they are analytic in `k_⊥²`:
//! interior functions are `J_m(k_⊥ρ)/k_⊥^m` (equivalently `I_m(κρ)/κ^m` for
//! imaginary `k_⊥ = iκ`), with `m = |n|`. The two radial derivative relations
//! then read `(∂_ρ − n₁/ρ) g₁ = c_up g₂` and `(∂_ρ + n₂/ρ) g₂ = c_down g₁`.
//!
//! Each helicity spinor is stored multiplied through by `M = E + mv²` (upper
//! parametrization) or by `E − mv²` (lower parametrization), whichever is
//! larger in modulus, so no spinor is singular at either mass threshold.
//! Decaying exterior functions are scaled by `e^{κa}`. Growing interior
//! functions are scaled by `e^{−(κa − 30)}` once `κa` exceeds 30, so boundary
//! values stay representable for any radius while the scale is exactly 1 in a
//! neighbourhood of every threshold.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    classify, dispersive_k_squared, MaterialLaw, ProblemClass, QuantumNumbers, WireSpec,
};
use crate::specfun::{
    bessel_i_scaled_orders, bessel_j_orders, bessel_k_scaled_orders, CylFnKind,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Below this `|k_⊥ ρ|` the regular functions are summed as a series in `k_⊥²`.
const SERIES_ARGUMENT: f64 = 2.0;
/// Growth `|Im k_⊥| a` tolerated before interior functions are rescaled.
const UNSCALED_GROWTH: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Interior,
    Exterior,
}

/// Which half of the spinor carries the free amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parametrization {
    /// Upper components free, whole spinor multiplied by `E + mv²`.
    Upper,
    /// Lower components free, whole spinor multiplied by `E − mv²`.
    Lower,
}

/// One of the two transverse-helicity solutions of a region at fixed
/// `(E, μ, k_z)` and total wavenumber `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpinor {
    /// Transverse helicity label ±1 (relative sign of the upper components in
    /// the real gauge, see [`BasisSpinor::radial`]).
    pub helicity: i8,
    pub qn: QuantumNumbers,
    pub energy: f64,
    /// Total wavenumber squared, `k²` (Å⁻²).
    pub k_sq: Complex64,
    /// `k_⊥² = k² − k_z²` (Å⁻²).
    pub k_perp_sq: Complex64,
    /// Effective rest energy `mv²` of this solution (eV).
    pub mass: Complex64,
    /// `M = E + mv²` (eV).
    pub energy_mass_sum: Complex64,
    pub fn_kind: CylFnKind,
    pub region: Region,
    pub parametrization: Parametrization,
    hbar_vf: f64,
    scale_radius: f64,
}

impl BasisSpinor {
    fn build(
        energy: f64,
        mass: Complex64,
        k_sq: Complex64,
        qn: QuantumNumbers,
        helicity: i8,
        region: Region,
        hbar_vf: f64,
        scale_radius: f64,
    ) -> Self {
        let kz = qn.kz();
        let k_perp_sq = k_sq - kz * kz;
        let fn_kind = match region {
            Region::Exterior => CylFnKind::DecayingExterior,
            Region::Interior if k_perp_sq.im == 0.0 && k_perp_sq.re < 0.0 => {
                CylFnKind::RegularGrowing
            }
            Region::Interior => CylFnKind::RegularOscillatory,
        };
        let energy_mass_sum = energy + mass;
        let parametrization = if energy_mass_sum.norm() >= (energy - mass).norm() {
            Parametrization::Upper
        } else {
            Parametrization::Lower
        };
        Self {
            helicity,
            qn,
            energy,
            k_sq,
            k_perp_sq,
            mass,
            energy_mass_sum,
            fn_kind,
            region,
            parametrization,
            hbar_vf,
            scale_radius,
        }
    }

    /// Principal transverse wavenumber `k_⊥` (imaginary part ≥ 0).
    pub fn k_perp(&self) -> Complex64 {
        self.k_perp_sq.sqrt()
    }

    /// Factor the spinor was multiplied by: `M` (upper) or `−(E − mv²)`
    /// (lower). Dividing a boundary determinant by the factors of its column
    /// pairs makes it independent of the parametrization choice.
    pub fn pair_factor(&self) -> Complex64 {
        match self.parametrization {
            Parametrization::Upper => self.energy_mass_sum,
            Parametrization::Lower => -(self.energy - self.mass),
        }
    }

    /// Radial amplitudes `(ψ₁, ψ₂, ψ₃, ψ₄)` at φ = 0, z = 0.
    ///
    /// In the real gauge `r = (ψ₁, −iψ₂, ψ₃, −iψ₄)` the helicity-`s` solution is
    /// `(M g₁, sM g₂, ħv(k_z + s c_down) g₁, −ħv(c_up + s k_z) g₂)` (upper
    /// parametrization) and real whenever `k_⊥²` and `M` are.
    pub fn radial(&self, rho: f64) -> Result<[Complex64; 4]> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::Domain(format!("radius must be ≥ 0, got {rho}")));
        }
        let (n1, n2) = self.qn.angular_orders();
        let (m1, m2) = (n1.unsigned_abs() as usize, n2.unsigned_abs() as usize);
        let (g1, g2, c_up, c_down) = match self.region {
            Region::Interior => {
                let (g1, g2) = regular_pair(m1, m2, self.k_perp_sq, rho, self.scale_radius)?;
                if self.qn.two_mu() > 0 {
                    (g1, g2, -self.k_perp_sq, Complex64::new(1.0, 0.0))
                } else {
                    (g1, g2, Complex64::new(1.0, 0.0), -self.k_perp_sq)
                }
            }
            Region::Exterior => {
                let kappa = self.decay_constant()?;
                if rho == 0.0 {
                    return Err(Error::Domain("exterior solution is singular at ρ = 0".into()));
                }
                let (g1, g2) = decaying_pair(m1, m2, kappa, rho, self.scale_radius)?;
                let c = Complex64::new(-kappa, 0.0);
                (g1, g2, c, c)
            }
        };
        let s = self.helicity as f64;
        let hv = self.hbar_vf;
        let kz = self.qn.kz();
        let lower1 = hv * (kz + s * c_down) * g1;
        let lower2 = -hv * (c_up + s * kz) * g2;
        let r = match self.parametrization {
            Parametrization::Upper => {
                let m = self.energy_mass_sum;
                [m * g1, s * m * g2, lower1, lower2]
            }
            Parametrization::Lower => {
                let l = self.energy - self.mass;
                [lower1, lower2, l * g1, s * l * g2]
            }
        };
        Ok([r[0], I * r[1], r[2], I * r[3]])
    }

    /// Exterior decay constant `κ = |k_⊥|` for an evanescent region.
    pub fn decay_constant(&self) -> Result<f64> {
        if self.k_perp_sq.im != 0.0 || self.k_perp_sq.re >= 0.0 {
            return Err(Error::NotBoundState {
                energy: self.energy,
                reason: "exterior wave is not evanescent".into(),
            });
        }
        Ok((-self.k_perp_sq.re).sqrt())
    }

    pub fn sample(&self, rho: f64, phi: f64) -> Result<SpinorSample> {
        Ok(SpinorSample::from_radial(
            self.radial(rho)?,
            rho,
            phi,
            self.qn.two_mu(),
        ))
    }
}

/// `(g_{m1}, g_{m2})` of the regular interior functions, analytic in `q2`.
fn regular_pair(
    m1: usize,
    m2: usize,
    q2: Complex64,
    rho: f64,
    scale_radius: f64,
) -> Result<(Complex64, Complex64)> {
    let q = q2.sqrt();
    let shift = (q.im.abs() * scale_radius - UNSCALED_GROWTH).max(0.0);
    let damp = (-shift).exp();
    let mmax = m1.max(m2);
    let arg = q.norm() * rho;
    if arg < SERIES_ARGUMENT {
        let g = |m: usize| regular_series(m, q2, rho) * damp;
        return Ok((g(m1), g(m2)));
    }
    if q2.im == 0.0 && q2.re < 0.0 {
        let kappa = (-q2.re).sqrt();
        let vals = bessel_i_scaled_orders(mmax, kappa * rho)?;
        let grow = (kappa * rho - shift).exp();
        let g = |m: usize| Complex64::new(vals[m] * grow / kappa.powi(m as i32), 0.0);
        return Ok((g(m1), g(m2)));
    }
    if q2.im == 0.0 {
        let qr = q2.re.sqrt();
        let vals = bessel_j_orders(mmax, Complex64::new(qr * rho, 0.0))?;
        let g = |m: usize| Complex64::new(vals[m].re / qr.powi(m as i32), 0.0);
        return Ok((g(m1), g(m2)));
    }
    let vals = bessel_j_orders(mmax, q * rho)?;
    let g = |m: usize| vals[m] / q.powi(m as i32) * damp;
    Ok((g(m1), g(m2)))
}

/// `Σ_k (−q²ρ²/4)^k (ρ/2)^m / (k! (m+k)!)`, i.e. `J_m(qρ)/q^m`.
fn regular_series(m: usize, q2: Complex64, rho: f64) -> Complex64 {
    let half = 0.5 * rho;
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        term *= half / k as f64;
    }
    let step = -q2 * half * half;
    let mut sum = term;
    for k in 1..100 {
        term *= step / ((k * (m + k)) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn decaying_pair(
    m1: usize,
    m2: usize,
    kappa: f64,
    rho: f64,
    scale_radius: f64,
) -> Result<(Complex64, Complex64)> {
    let vals = bessel_k_scaled_orders(m1.max(m2), kappa * rho)?;
    let fall = (-kappa * (rho - scale_radius)).exp();
    Ok((
        Complex64::new(vals[m1] * fall, 0.0),
        Complex64::new(vals[m2] * fall, 0.0),
    ))
}

fn check_helicity(s: i8) -> Result<()> {
    if s != 1 && s != -1 {
        return Err(Error::InvalidParameter(format!("helicity must be ±1, got {s}")));
    }
    Ok(())
}

/// Interior solution of a constant-mass wire.
pub fn interior_basis_jr(
    energy: f64,
    spec: &WireSpec,
    qn: &QuantumNumbers,
    s: i8,
) -> Result<BasisSpinor> {
    check_helicity(s)?;
    let MaterialLaw::ConstantMass { mc2 } = spec.interior() else {
        return Err(Error::InvalidParameter("interior mass is dispersive".into()));
    };
    let hv = spec.hbar_vf();
    let k_sq = (energy - mc2) * (energy + mc2) / (hv * hv);
    Ok(BasisSpinor::build(
        energy,
        Complex64::new(mc2, 0.0),
        Complex64::new(k_sq, 0.0),
        *qn,
        s,
        Region::Interior,
        hv,
        spec.radius(),
    ))
}

/// Evanescent exterior solution; fails unless `E² < (m₂v²)² + (ħv k_z)²`.
pub fn exterior_basis_jr(
    energy: f64,
    spec: &WireSpec,
    qn: &QuantumNumbers,
    s: i8,
) -> Result<BasisSpinor> {
    check_helicity(s)?;
    let mc2 = spec.exterior().rest_energy();
    let hv = spec.hbar_vf();
    let k_sq = (energy - mc2) * (energy + mc2) / (hv * hv);
    let basis = BasisSpinor::build(
        energy,
        Complex64::new(mc2, 0.0),
        Complex64::new(k_sq, 0.0),
        *qn,
        s,
        Region::Exterior,
        hv,
        spec.radius(),
    );
    basis.decay_constant()?;
    Ok(basis)
}

/// Interior solution on branch 1 or 2 of a dispersive-mass wire.
pub fn interior_basis_jrd(
    energy: f64,
    spec: &WireSpec,
    qn: &QuantumNumbers,
    s: i8,
    branch: u8,
) -> Result<BasisSpinor> {
    check_helicity(s)?;
    let MaterialLaw::DispersiveMass { m0c2, b_hbar2 } = spec.interior() else {
        return Err(Error::InvalidParameter("interior mass is not dispersive".into()));
    };
    let index = match branch {
        1 => 0,
        2 => 1,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "branch must be 1 or 2, got {branch}"
            )))
        }
    };
    let units = spec.units();
    let k_sq = dispersive_k_squared(energy, m0c2, b_hbar2, &units)[index];
    let mass = m0c2 - b_hbar2 * k_sq;
    Ok(BasisSpinor::build(
        energy,
        mass,
        k_sq,
        *qn,
        s,
        Region::Interior,
        spec.hbar_vf(),
        spec.radius(),
    ))
}

/// The four basis spinors whose amplitudes a mode is expanded in: interior
/// `s = ±`, exterior `s = ±` for constant masses; branch 1 `s = ±`, branch 2
/// `s = ±` for a dispersive interior.
pub fn mode_basis(energy: f64, spec: &WireSpec, qn: &QuantumNumbers) -> Result<[BasisSpinor; 4]> {
    Ok(match classify(spec)? {
        ProblemClass::JrPlus | ProblemClass::JrMinus => [
            interior_basis_jr(energy, spec, qn, 1)?,
            interior_basis_jr(energy, spec, qn, -1)?,
            exterior_basis_jr(energy, spec, qn, 1)?,
            exterior_basis_jr(energy, spec, qn, -1)?,
        ],
        ProblemClass::JrD => [
            interior_basis_jrd(energy, spec, qn, 1, 1)?,
            interior_basis_jrd(energy, spec, qn, -1, 1)?,
            interior_basis_jrd(energy, spec, qn, 1, 2)?,
            interior_basis_jrd(energy, spec, qn, -1, 2)?,
        ],
    })
}

/// The four spinor components at a point, with the angular phases applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorSample {
    pub psi: [Complex64; 4],
    pub rho: f64,
    pub phi: f64,
    pub two_mu: i32,
}

impl SpinorSample {
    pub fn new(psi: [Complex64; 4], rho: f64, phi: f64, two_mu: i32) -> Self {
        Self {
            psi,
            rho,
            phi,
            two_mu,
        }
    }

    pub fn from_radial(radial: [Complex64; 4], rho: f64, phi: f64, two_mu: i32) -> Self {
        let lower = (two_mu - 1) / 2;
        let p1 = Complex64::from_polar(1.0, lower as f64 * phi);
        let p2 = Complex64::from_polar(1.0, (lower + 1) as f64 * phi);
        Self {
            psi: [radial[0] * p1, radial[1] * p2, radial[2] * p1, radial[3] * p2],
            rho,
            phi,
            two_mu,
        }
    }

    pub fn mu(&self) -> f64 {
        0.5 * self.two_mu as f64
    }
}

/// Mode families: hybrid, decaying, real pair, complex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    H,
    D,
    R,
    C,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::H => "H",
            Family::D => "D",
            Family::R => "R",
            Family::C => "C",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A bound state: `ψ = norm · Σ_j coeffs[j] · basis[j]` (exterior amplitudes
/// apply for ρ > a on constant-mass wires; a dispersive wire vanishes there).
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub energy: f64,
    pub qn: QuantumNumbers,
    pub family: Family,
    /// Radial index, absent for D modes.
    pub nu: Option<u32>,
    pub coeffs: [Complex64; 4],
    pub norm: f64,
    pub spec: WireSpec,
    pub class: ProblemClass,
    /// Family assigned at a threshold (a transverse wavenumber vanishes).
    pub at_threshold: bool,
    pub basis: [BasisSpinor; 4],
}

impl Mode {
    /// Radial amplitudes at φ = 0.
    pub fn radial(&self, rho: f64) -> Result<[Complex64; 4]> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::Domain(format!("radius must be ≥ 0, got {rho}")));
        }
        let a = self.spec.radius();
        let columns: &[usize] = match self.class {
            ProblemClass::JrD if rho >= a => return Ok([ZERO; 4]),
            ProblemClass::JrD => &[0, 1, 2, 3],
            _ if rho <= a => &[0, 1],
            _ => &[2, 3],
        };
        let mut out = [ZERO; 4];
        for &j in columns {
            if self.coeffs[j] == ZERO {
                continue;
            }
            let v = self.basis[j].radial(rho)?;
            for (o, x) in out.iter_mut().zip(v) {
                *o += self.coeffs[j] * x;
            }
        }
        for o in out.iter_mut() {
            *o *= self.norm;
        }
        Ok(out)
    }

    /// Interior transverse wavenumbers squared, one per distinct solution.
    pub fn interior_k_perp_sq(&self) -> Vec<Complex64> {
        match self.class {
            ProblemClass::JrD => vec![self.basis[0].k_perp_sq, self.basis[2].k_perp_sq],
            _ => vec![self.basis[0].k_perp_sq],
        }
    }

    /// Exterior decay constant for constant-mass wires.
    pub fn exterior_decay(&self) -> Option<f64> {
        match self.class {
            ProblemClass::JrD => None,
            _ => self.basis[2].decay_constant().ok(),
        }
    }

    pub fn label(&self) -> String {
        match self.nu {
            Some(nu) => format!("{}({}/2,{})", self.family, self.qn.two_mu(), nu),
            None => format!("{}({}/2)", self.family, self.qn.two_mu()),
        }
    }
}

pub fn eval_mode(mode: &Mode, rho: f64, phi: f64) -> Result<SpinorSample> {
    Ok(SpinorSample::from_radial(
        mode.radial(rho)?,
        rho,
        phi,
        mode.qn.two_mu(),
    ))
}
