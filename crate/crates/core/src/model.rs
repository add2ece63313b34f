//! Physical problem description: units, material laws, geometry, quantum
//! numbers and wavenumber kinematics.
//!
//! Energies are in eV and lengths in Å throughout. ħ and the Fermi velocity
//! only ever appear through the product `hbar_vf` (eV·Å), and the mass
//! dispersion factor as `b_hbar2` (eV·Å²).

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in eV·s (CODATA 2018).
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;
const ANGSTROM_PER_METER: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    hbar_vf: f64,
}

impl UnitSystem {
    pub fn from_fermi_velocity(vf_m_per_s: f64) -> Result<Self> {
        if !(vf_m_per_s.is_finite() && vf_m_per_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Fermi velocity must be positive, got {vf_m_per_s} m/s"
            )));
        }
        Self::from_hbar_vf(HBAR_EV_S * vf_m_per_s * ANGSTROM_PER_METER)
    }

    pub fn from_hbar_vf(hbar_vf: f64) -> Result<Self> {
        if !(hbar_vf.is_finite() && hbar_vf > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ħv_F must be positive, got {hbar_vf} eV·Å"
            )));
        }
        Ok(Self { hbar_vf })
    }

    /// ħ·v_F in eV·Å.
    pub fn hbar_vf(&self) -> f64 {
        self.hbar_vf
    }

    /// Fermi velocity in m/s.
    pub fn fermi_velocity(&self) -> f64 {
        self.hbar_vf / (HBAR_EV_S * ANGSTROM_PER_METER)
    }
}

/// Dirac mass law of one region. `mc2` is the signed rest energy m·v_F².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaterialLaw {
    ConstantMass { mc2: f64 },
    /// Mass `m0c2 - b_hbar2·k²`.
    DispersiveMass { m0c2: f64, b_hbar2: f64 },
}

impl MaterialLaw {
    pub fn constant(mc2: f64) -> Self {
        MaterialLaw::ConstantMass { mc2 }
    }

    pub fn dispersive(m0c2: f64, b_hbar2: f64) -> Self {
        MaterialLaw::DispersiveMass { m0c2, b_hbar2 }
    }

    /// Rest energy at k = 0.
    pub fn rest_energy(&self) -> f64 {
        match *self {
            MaterialLaw::ConstantMass { mc2 } => mc2,
            MaterialLaw::DispersiveMass { m0c2, .. } => m0c2,
        }
    }

    /// Coefficient of k² in the mass (zero for constant mass).
    pub fn dispersion(&self) -> f64 {
        match *self {
            MaterialLaw::ConstantMass { .. } => 0.0,
            MaterialLaw::DispersiveMass { b_hbar2, .. } => b_hbar2,
        }
    }

    pub fn is_dispersive(&self) -> bool {
        matches!(self, MaterialLaw::DispersiveMass { .. })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            MaterialLaw::ConstantMass { mc2 } if !mc2.is_finite() => Err(Error::InvalidParameter(
                format!("mass must be finite, got {mc2} eV"),
            )),
            MaterialLaw::DispersiveMass { m0c2, b_hbar2 } => {
                if !m0c2.is_finite() || !b_hbar2.is_finite() {
                    Err(Error::InvalidParameter(
                        "dispersive mass parameters must be finite".into(),
                    ))
                } else if b_hbar2 == 0.0 {
                    Err(Error::InvalidParameter(
                        "dispersive mass needs a nonzero B·ħ²".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Geometry and materials of a wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireSpec {
    radius: f64,
    interior: MaterialLaw,
    exterior: MaterialLaw,
    units: UnitSystem,
}

impl WireSpec {
    pub fn new(
        radius: f64,
        interior: MaterialLaw,
        exterior: MaterialLaw,
        units: UnitSystem,
    ) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wire radius must be positive, got {radius} Å"
            )));
        }
        interior.validate()?;
        exterior.validate()?;
        if exterior.is_dispersive() {
            return Err(Error::UnsupportedConfiguration(
                "exterior mass must be constant".into(),
            ));
        }
        Ok(Self {
            radius,
            interior,
            exterior,
            units,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn interior(&self) -> MaterialLaw {
        self.interior
    }

    pub fn exterior(&self) -> MaterialLaw {
        self.exterior
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn hbar_vf(&self) -> f64 {
        self.units.hbar_vf
    }

    /// Same materials, different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(radius, self.interior, self.exterior, self.units)
    }

    pub fn class(&self) -> Result<ProblemClass> {
        classify(self)
    }
}

/// Total angular momentum μ (stored as 2μ) and longitudinal wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    two_mu: i32,
    kz: f64,
}

impl QuantumNumbers {
    pub fn new(two_mu: i32, kz: f64) -> Result<Self> {
        if two_mu % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "2μ must be odd (μ half-integer), got {two_mu}"
            )));
        }
        if two_mu.abs() > 2 * crate::specfun::MAX_ORDER - 1 {
            return Err(Error::InvalidParameter(format!("|2μ| = {two_mu} too large")));
        }
        if !kz.is_finite() {
            return Err(Error::InvalidParameter(format!("k_z must be finite, got {kz}")));
        }
        Ok(Self { two_mu, kz })
    }

    pub fn two_mu(&self) -> i32 {
        self.two_mu
    }

    pub fn mu(&self) -> f64 {
        0.5 * self.two_mu as f64
    }

    pub fn kz(&self) -> f64 {
        self.kz
    }

    pub fn with_kz(&self, kz: f64) -> Result<Self> {
        Self::new(self.two_mu, kz)
    }

    /// Angular orders `(μ − 1/2, μ + 1/2)` of the components carrying
    /// `e^{i(μ−1/2)φ}` (1 and 3) and `e^{i(μ+1/2)φ}` (2 and 4).
    pub fn angular_orders(&self) -> (i32, i32) {
        let lower = (self.two_mu - 1) / 2;
        (lower, lower + 1)
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "μ={}/2, k_z={} Å⁻¹", self.two_mu, self.kz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemClass {
    /// Constant masses, both positive.
    JrPlus,
    /// Constant masses, negative inside and positive outside.
    JrMinus,
    /// Dispersive interior mass with open boundary.
    JrD,
}

impl ProblemClass {
    pub fn label(&self) -> &'static str {
        match self {
            ProblemClass::JrPlus => "JR+",
            ProblemClass::JrMinus => "JR-",
            ProblemClass::JrD => "JR-D",
        }
    }
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(spec: &WireSpec) -> Result<ProblemClass> {
    if spec.interior.is_dispersive() {
        return Ok(ProblemClass::JrD);
    }
    let inside = spec.interior.rest_energy();
    let outside = spec.exterior.rest_energy();
    match (inside, outside) {
        (m1, m2) if m1 > 0.0 && m2 > 0.0 => Ok(ProblemClass::JrPlus),
        (m1, m2) if m1 < 0.0 && m2 > 0.0 => Ok(ProblemClass::JrMinus),
        (m1, m2) => Err(Error::UnsupportedConfiguration(format!(
            "constant masses m1 = {m1} eV, m2 = {m2} eV: need m2 > 0 and m1 ≠ 0"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseK {
    pub k_perp: Complex64,
    pub kind: WaveKind,
}

/// `k_⊥² = (E² − (mc²)²)/(ħv_F)² − k_z²` for a constant-mass region.
pub fn transverse_k_squared(energy: f64, mc2: f64, kz: f64, units: &UnitSystem) -> f64 {
    let hv = units.hbar_vf;
    (energy - mc2) * (energy + mc2) / (hv * hv) - kz * kz
}

/// Principal transverse wavenumber of a constant-mass region.
pub fn transverse_k(
    energy: f64,
    law: &MaterialLaw,
    kz: f64,
    units: &UnitSystem,
) -> Result<TransverseK> {
    let MaterialLaw::ConstantMass { mc2 } = *law else {
        return Err(Error::InvalidParameter(
            "transverse_k needs a constant-mass law".into(),
        ));
    };
    let q2 = transverse_k_squared(energy, mc2, kz, units);
    if q2 == 0.0 {
        return Err(Error::Threshold { energy });
    }
    Ok(if q2 > 0.0 {
        TransverseK {
            k_perp: Complex64::new(q2.sqrt(), 0.0),
            kind: WaveKind::Real,
        }
    } else {
        TransverseK {
            k_perp: Complex64::new(0.0, (-q2).sqrt()),
            kind: WaveKind::Imaginary,
        }
    })
}

/// The two values of k² allowed inside a dispersive-mass region at energy E,
/// ordered as the `+` then `−` branch of the closed form.
pub fn dispersive_k_squared(energy: f64, m0c2: f64, b_hbar2: f64, units: &UnitSystem) -> [Complex64; 2] {
    let hv2 = units.hbar_vf * units.hbar_vf;
    let b = b_hbar2;
    let disc = dispersive_discriminant(energy, m0c2, b_hbar2, units);
    let root = Complex64::new(disc, 0.0).sqrt();
    let centre = 2.0 * m0c2 * b - hv2;
    let denom = 2.0 * b * b;
    [(centre + root) / denom, (centre - root) / denom]
}

/// `(ħv_F)⁴ − 4 m₀B (ħv_F)² + 4B²E²`; negative means a complex-conjugate pair.
pub fn dispersive_discriminant(energy: f64, m0c2: f64, b_hbar2: f64, units: &UnitSystem) -> f64 {
    let hv2 = units.hbar_vf * units.hbar_vf;
    hv2 * hv2 - 4.0 * m0c2 * b_hbar2 * hv2 + 4.0 * b_hbar2 * b_hbar2 * energy * energy
}

/// The two propagation constants `k⁽¹⁾, k⁽²⁾` inside a dispersive-mass
/// region, principal square roots of [`dispersive_k_squared`].
pub fn dispersive_roots(energy: f64, law: &MaterialLaw, units: &UnitSystem) -> Result<(Complex64, Complex64)> {
    let MaterialLaw::DispersiveMass { m0c2, b_hbar2 } = *law else {
        return Err(Error::InvalidParameter(
            "dispersive_roots needs a dispersive-mass law".into(),
        ));
    };
    if b_hbar2 == 0.0 {
        return Err(Error::InvalidParameter("B·ħ² must be nonzero".into()));
    }
    let [k1, k2] = dispersive_k_squared(energy, m0c2, b_hbar2, units);
    Ok((k1.sqrt(), k2.sqrt()))
}

/// Residual of `E² = (ħv_F k)² + (m₀v² − Bħ²k²)²`, relative to `E²` plus the
/// magnitude of the right-hand side terms.
pub fn quartic_residual(energy: f64, k: Complex64, m0c2: f64, b_hbar2: f64, units: &UnitSystem) -> f64 {
    let hv = units.hbar_vf;
    let k2 = k * k;
    let kinetic = hv * hv * k2;
    let mass = m0c2 - b_hbar2 * k2;
    let rhs = kinetic + mass * mass;
    let scale = energy * energy + kinetic.norm() + mass.norm_sqr();
    (rhs - energy * energy).norm() / scale
}

/// Band inversion of the dispersive mass: nontrivial iff m₀·B > 0.
pub fn z2_nontrivial(law: &MaterialLaw) -> Result<bool> {
    match *law {
        MaterialLaw::DispersiveMass { m0c2, b_hbar2 } => Ok(m0c2 * b_hbar2 > 0.0),
        MaterialLaw::ConstantMass { .. } => Err(Error::InvalidParameter(
            "Z2 index is defined for a dispersive mass".into(),
        )),
    }
}
