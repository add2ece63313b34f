//! Boundary matching, the characteristic function of the energy, and the
//! bound-state search built on it.
//!
//! Constant-mass wires match all four spinor components at ρ = a (two
//! interior and two exterior amplitudes). A dispersive wire carries four
//! interior solutions and requires ψ(a) = 0.
//!
//! The characteristic function is the 4×4 boundary determinant divided by
//! the parametrization factors of each column pair and, for a dispersive
//! interior, by the squared splitting of the two k² branches. Both divisions
//! remove zeros of the raw determinant that are not bound states, so sign
//! changes of the result are exactly the odd-order roots.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    classify, dispersive_discriminant, MaterialLaw, ProblemClass, QuantumNumbers, WireSpec,
};
use crate::quadrature::{integrate, Tolerance};
use crate::spinor::{mode_basis, BasisSpinor, Family, Mode};

/// Acceptance limit for a root: smallest over largest singular value.
const NULLITY_TOLERANCE: f64 = 1e-6;
/// Acceptance limit for a magnitude dip without sign change.
const DIP_TOLERANCE: f64 = 1e-9;
/// Exterior tail integrated out to `a + TAIL_DECAY_LENGTHS/κ`.
pub(crate) const TAIL_DECAY_LENGTHS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Base grid points across the energy window (≥ 100).
    pub scan_points: usize,
    /// Bisection stops once the bracket is narrower than this (eV).
    pub energy_tol: f64,
    /// Grid densification factor around family thresholds.
    pub threshold_refinement: usize,
    /// Energy window (eV); `None` selects [`CharSystem::default_window`].
    pub window: Option<(f64, f64)>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            scan_points: 2000,
            energy_tol: 1e-10,
            threshold_refinement: 10,
            window: None,
        }
    }
}

impl SolverOptions {
    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn with_scan_points(mut self, n: usize) -> Self {
        self.scan_points = n;
        self
    }
}

/// An energy interval whose endpoints bracket a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!("bracket [{lo}, {hi}] is empty")));
        }
        if f_lo * f_hi > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "no sign change on [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }
}

/// Boundary matrix at one energy.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub energy: f64,
    /// Column j holds basis spinor j at ρ = a (exterior columns negated).
    pub matrix: Matrix4<Complex64>,
    pub basis: [BasisSpinor; 4],
    /// Product of the parametrization factors of the two column pairs.
    pub pair_factor: Complex64,
    /// Dimensionless squared branch splitting (dispersive interior only).
    pub branch_splitting: Option<f64>,
    pub at_threshold: bool,
}

impl BoundaryMatrix {
    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// `|det| / Π‖column‖`, in [0, 1] by Hadamard's inequality.
    pub fn relative_determinant(&self) -> f64 {
        let scale: f64 = (0..4).map(|j| self.matrix.column(j).norm()).product();
        if scale == 0.0 {
            return 0.0;
        }
        self.determinant().norm() / scale
    }

    pub fn characteristic(&self) -> Complex64 {
        let mut v = self.determinant() / self.pair_factor;
        if let Some(split) = self.branch_splitting {
            v /= split;
        }
        v
    }

    /// Singular values (descending) and the right singular vector of the
    /// smallest one.
    pub fn null_vector(&self) -> Result<(Vector4<Complex64>, f64)> {
        let svd = self.matrix.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::NonFinite("SVD did not converge".into()))?;
        let sv = svd.singular_values;
        let (mut imin, mut imax) = (0, 0);
        for i in 0..4 {
            if sv[i] < sv[imin] {
                imin = i;
            }
            if sv[i] > sv[imax] {
                imax = i;
            }
        }
        let row = v_t.row(imin);
        let v = Vector4::new(row[0].conj(), row[1].conj(), row[2].conj(), row[3].conj());
        let ratio = if sv[imax] > 0.0 { sv[imin] / sv[imax] } else { 1.0 };
        Ok((v, ratio))
    }
}

/// Value of the characteristic function at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharValue {
    pub value: f64,
    /// Imaginary part left over after the real projection, relative to |value|.
    pub imag_ratio: f64,
    pub at_threshold: bool,
}

/// The dispersion relation of one channel `(spec, μ, k_z)` over an energy window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharSystem {
    pub spec: WireSpec,
    pub qn: QuantumNumbers,
    pub class: ProblemClass,
    pub window: (f64, f64),
}

impl CharSystem {
    pub fn new(spec: &WireSpec, qn: &QuantumNumbers) -> Result<Self> {
        let class = classify(spec)?;
        Ok(Self {
            spec: *spec,
            qn: *qn,
            class,
            window: Self::default_window(spec, qn)?,
        })
    }

    /// Constant masses: the open window `|E| < √((m₂v²)² + (ħv k_z)²)` where the
    /// exterior is evanescent. Dispersive interior: `|E| < 2|m₀v²| + ħv|k_z|`.
    pub fn default_window(spec: &WireSpec, qn: &QuantumNumbers) -> Result<(f64, f64)> {
        let hv = spec.hbar_vf();
        let kz = qn.kz();
        let half = match classify(spec)? {
            ProblemClass::JrD => 2.0 * spec.interior().rest_energy().abs() + hv * kz.abs(),
            _ => {
                let m2 = spec.exterior().rest_energy();
                (m2 * m2 + hv * hv * kz * kz).sqrt()
            }
        };
        Ok((-half, half))
    }

    pub fn with_window(mut self, window: Option<(f64, f64)>) -> Result<Self> {
        let Some((lo, hi)) = window else {
            return Ok(self);
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!("bad energy window ({lo}, {hi})")));
        }
        if self.class != ProblemClass::JrD {
            let (legal_lo, legal_hi) = Self::default_window(&self.spec, &self.qn)?;
            if lo < legal_lo || hi > legal_hi {
                return Err(Error::InvalidParameter(format!(
                    "window ({lo}, {hi}) leaves the evanescent range ({legal_lo}, {legal_hi})"
                )));
            }
        }
        self.window = (lo, hi);
        Ok(self)
    }

    /// Energies where a transverse wavenumber vanishes or the dispersive
    /// branches coalesce, restricted to the window.
    pub fn thresholds(&self) -> Vec<f64> {
        let hv = self.spec.hbar_vf();
        let kz = self.qn.kz();
        let mut out = Vec::new();
        match self.spec.interior() {
            MaterialLaw::ConstantMass { mc2 } => {
                let e = (mc2 * mc2 + hv * hv * kz * kz).sqrt();
                out.extend([-e, e]);
            }
            MaterialLaw::DispersiveMass { m0c2, b_hbar2 } => {
                let e_sq = (4.0 * m0c2 * b_hbar2 * hv * hv - hv.powi(4)) / (4.0 * b_hbar2 * b_hbar2);
                if e_sq > 0.0 {
                    out.extend([-e_sq.sqrt(), e_sq.sqrt()]);
                }
                let mass = m0c2 - b_hbar2 * kz * kz;
                let e = (hv * hv * kz * kz + mass * mass).sqrt();
                out.extend([-e, e]);
            }
        }
        let (lo, hi) = self.window;
        out.retain(|e| *e > lo && *e < hi);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn matrix(&self, energy: f64) -> Result<BoundaryMatrix> {
        let basis = mode_basis(energy, &self.spec, &self.qn)?;
        let a = self.spec.radius();
        let mut matrix = Matrix4::<Complex64>::zeros();
        for (j, b) in basis.iter().enumerate() {
            let col = b.radial(a)?;
            let sign = if self.class != ProblemClass::JrD && j >= 2 { -1.0 } else { 1.0 };
            for i in 0..4 {
                matrix[(i, j)] = sign * col[i];
            }
        }
        let pair_factor = basis[0].pair_factor() * basis[2].pair_factor();
        let mut at_threshold = basis.iter().any(|b| b.k_perp_sq == Complex64::new(0.0, 0.0));
        let branch_splitting = match self.spec.interior() {
            MaterialLaw::DispersiveMass { m0c2, b_hbar2 } => {
                let hv2 = self.spec.hbar_vf().powi(2);
                let d = dispersive_discriminant(energy, m0c2, b_hbar2, &self.spec.units()) / (hv2 * hv2);
                if d == 0.0 {
                    at_threshold = true;
                }
                Some(d)
            }
            MaterialLaw::ConstantMass { .. } => None,
        };
        Ok(BoundaryMatrix {
            energy,
            matrix,
            basis,
            pair_factor,
            branch_splitting,
            at_threshold,
        })
    }

    pub fn value(&self, energy: f64) -> Result<CharValue> {
        let m = self.matrix(energy)?;
        if m.branch_splitting == Some(0.0) {
            // Coalesced branches: 0/0, evaluate just beside the point.
            let nudge = 1e-9 * energy.abs().max(1e-3);
            let mut v = self.value(energy + nudge)?;
            v.at_threshold = true;
            return Ok(v);
        }
        let c = m.characteristic();
        if !c.re.is_finite() {
            return Err(Error::NonFinite(format!("characteristic function at E = {energy}")));
        }
        Ok(CharValue {
            value: c.re,
            imag_ratio: if c.re != 0.0 { (c.im / c.re).abs() } else { c.im.abs() },
            at_threshold: m.at_threshold,
        })
    }

    /// Scan grid: `n` cell-centred points plus a `refine`-times denser patch
    /// of ±5 cells around each threshold.
    pub fn scan_grid(&self, n: usize, refine: usize) -> Vec<f64> {
        let (lo, hi) = self.window;
        let step = (hi - lo) / n as f64;
        let mut grid: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect();
        let refine = refine.max(1);
        if refine > 1 {
            let fine = step / refine as f64;
            for t in self.thresholds() {
                let count = 5 * refine as i64;
                for j in -count..count {
                    let e = t + (j as f64 + 0.5) * fine;
                    if e > lo && e < hi {
                        grid.push(e);
                    }
                }
            }
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid
    }

    /// Bisection on a bracket until it is narrower than `tol`.
    pub fn refine_root(&self, bracket: RootBracket, tol: f64) -> Result<f64> {
        let RootBracket {
            mut lo,
            mut hi,
            mut f_lo,
            ..
        } = bracket;
        if bracket.f_lo == 0.0 {
            return Ok(lo);
        }
        if bracket.f_hi == 0.0 {
            return Ok(hi);
        }
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = self.value(mid)?.value;
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Characteristic function of `(spec, μ, k_z)` at energy E.
pub fn char_fn(energy: f64, spec: &WireSpec, qn: &QuantumNumbers) -> Result<f64> {
    Ok(CharSystem::new(spec, qn)?.value(energy)?.value)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchWarning {
    /// |det| dips to within tolerance of zero without a sign change.
    NearDoubleRoot { energy: f64, relative_det: f64 },
    /// A sign change whose matrix is not singular (discarded).
    RejectedSignChange { energy: f64, singular_ratio: f64 },
    /// Grid point where the characteristic function could not be evaluated.
    EvaluationFailed { energy: f64, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct ModeSearch {
    pub modes: Vec<Mode>,
    pub warnings: Vec<SearchWarning>,
}

/// All bound states of one channel inside the window, sorted by |E|.
pub fn find_modes(spec: &WireSpec, qn: &QuantumNumbers, opts: &SolverOptions) -> Result<ModeSearch> {
    if opts.scan_points < 100 {
        return Err(Error::InvalidParameter(format!(
            "scan_points must be ≥ 100, got {}",
            opts.scan_points
        )));
    }
    if !(opts.energy_tol > 0.0) {
        return Err(Error::InvalidParameter("energy tolerance must be positive".into()));
    }
    let class = classify(spec)?;
    if class == ProblemClass::JrPlus
        && spec.exterior().rest_energy() <= spec.interior().rest_energy()
    {
        // Confinement needs the larger gap outside.
        return Ok(ModeSearch::default());
    }
    let sys = CharSystem::new(spec, qn)?.with_window(opts.window)?;
    let grid = sys.scan_grid(opts.scan_points, opts.threshold_refinement);
    let values: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&e| sys.value(e).map(|v| v.value))
        .collect();

    let mut search = ModeSearch::default();
    let mut samples = Vec::with_capacity(grid.len());
    for (&e, v) in grid.iter().zip(values) {
        match v {
            Ok(v) => samples.push((e, v)),
            Err(err) => search.warnings.push(SearchWarning::EvaluationFailed {
                energy: e,
                message: err.to_string(),
            }),
        }
    }

    let mut roots = Vec::new();
    for pair in samples.windows(2) {
        let (e0, f0) = pair[0];
        let (e1, f1) = pair[1];
        if f0 == 0.0 {
            roots.push(e0);
        } else if f0 * f1 < 0.0 {
            let bracket = RootBracket::new(e0, e1, f0, f1)?;
            roots.push(sys.refine_root(bracket, opts.energy_tol)?);
        }
    }
    if let Some(&(e, f)) = samples.last() {
        if f == 0.0 {
            roots.push(e);
        }
    }

    for triple in samples.windows(3) {
        let (ea, fa) = triple[0];
        let (_, fb) = triple[1];
        let (ec, fc) = triple[2];
        if fa * fb <= 0.0 || fb * fc <= 0.0 {
            continue;
        }
        if fb.abs() < fa.abs() && fb.abs() < fc.abs() {
            if let Some(w) = probe_dip(&sys, ea, ec)? {
                search.warnings.push(w);
            }
        }
    }

    let mut modes = Vec::new();
    for e in roots {
        let m = sys.matrix(e)?;
        let (v, ratio) = m.null_vector()?;
        if ratio > NULLITY_TOLERANCE {
            search.warnings.push(SearchWarning::RejectedSignChange {
                energy: e,
                singular_ratio: ratio,
            });
            continue;
        }
        let coeffs = [v[0], v[1], v[2], v[3]];
        let mut mode = Mode {
            energy: e,
            qn: *qn,
            family: Family::H,
            nu: None,
            coeffs,
            norm: 1.0,
            spec: *spec,
            class,
            at_threshold: m.at_threshold,
            basis: m.basis,
        };
        let tag = classify_family(&mode);
        mode.family = tag.family;
        mode.at_threshold |= tag.at_threshold;
        modes.push(normalize(&mode)?);
    }

    modes.sort_by(|a, b| {
        a.energy
            .abs()
            .total_cmp(&b.energy.abs())
            .then(a.energy.total_cmp(&b.energy))
    });
    // ±E partners agree in |E| only to the root tolerance; list the negative
    // one first regardless of rounding.
    for i in 1..modes.len() {
        let (p, q) = (modes[i - 1].energy, modes[i].energy);
        if p > 0.0 && q < 0.0 && (p + q).abs() <= 10.0 * opts.energy_tol {
            modes.swap(i - 1, i);
        }
    }
    assign_radial_indices(&mut modes);
    search.modes = modes;
    Ok(search)
}

fn probe_dip(sys: &CharSystem, lo: f64, hi: f64) -> Result<Option<SearchWarning>> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let magnitude = |e: f64| sys.value(e).map(|v| v.value.abs());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = magnitude(c)?;
    let mut fd = magnitude(d)?;
    for _ in 0..80 {
        if b - a < 1e-12 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = magnitude(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = magnitude(d)?;
        }
    }
    let e = 0.5 * (a + b);
    let rel = sys.matrix(e)?.relative_determinant();
    Ok((rel < DIP_TOLERANCE).then_some(SearchWarning::NearDoubleRoot {
        energy: e,
        relative_det: rel,
    }))
}

/// ν counts modes of one family and energy sign in ascending |E|; D modes
/// carry no radial index.
fn assign_radial_indices(modes: &mut [Mode]) {
    let mut counters: Vec<((Family, bool), u32)> = Vec::new();
    for mode in modes.iter_mut() {
        if mode.family == Family::D {
            mode.nu = None;
            continue;
        }
        let key = (mode.family, mode.energy >= 0.0);
        let n = match counters.iter_mut().find(|(k, _)| *k == key) {
            Some((_, n)) => {
                *n += 1;
                *n
            }
            None => {
                counters.push((key, 1));
                1
            }
        };
        mode.nu = Some(n);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyTag {
    pub family: Family,
    pub at_threshold: bool,
}

/// Family from the interior transverse wavenumbers: real → oscillatory,
/// imaginary → decaying; for a dispersive interior both real is R, a
/// complex-conjugate pair is C, mixed is H and both imaginary is D.
pub fn classify_family(mode: &Mode) -> FamilyTag {
    let ks = mode.interior_k_perp_sq();
    let at_threshold = ks.iter().any(|k| k.re == 0.0 && k.im == 0.0);
    let family = if ks.iter().any(|k| k.im != 0.0) {
        Family::C
    } else {
        let real = ks.iter().filter(|k| k.re >= 0.0).count();
        match (mode.class, real, ks.len()) {
            (ProblemClass::JrD, 2, _) => Family::R,
            (ProblemClass::JrD, 0, _) => Family::D,
            (ProblemClass::JrD, _, _) => Family::H,
            (_, 1, _) => Family::H,
            _ => Family::D,
        }
    };
    FamilyTag {
        family,
        at_threshold,
    }
}

/// Radial extent used for integration: `(a, outer)` with the exterior tail cut
/// where `e^{−2κ(ρ−a)}` has fallen below `e^{−80}`.
pub(crate) fn integration_extent(mode: &Mode) -> (f64, f64) {
    let a = mode.spec.radius();
    match mode.exterior_decay() {
        Some(kappa) => (a, a + TAIL_DECAY_LENGTHS / kappa),
        None => (a, a),
    }
}

/// Rough number of initial integration panels over `[0, a]`.
pub(crate) fn interior_panels(mode: &Mode) -> usize {
    let a = mode.spec.radius();
    let kmax = mode
        .interior_k_perp_sq()
        .iter()
        .map(|k| k.sqrt().norm())
        .fold(0.0f64, f64::max);
    ((a * kmax / 2.0).ceil() as usize).clamp(4, 4000)
}

/// `∫ ψ†ψ dA` of a mode as stored.
pub fn probability_integral(mode: &Mode) -> Result<f64> {
    let (a, outer) = integration_extent(mode);
    let density = |rho: f64| -> Result<[f64; 1]> {
        let r = mode.radial(rho)?;
        Ok([rho * r.iter().map(|c| c.norm_sqr()).sum::<f64>()])
    };
    let tol = Tolerance::default();
    let inner = integrate(density, 0.0, a, interior_panels(mode), tol)?[0];
    let tail = if outer > a {
        integrate(density, a, outer, 16, tol)?[0]
    } else {
        0.0
    };
    Ok(2.0 * std::f64::consts::PI * (inner + tail))
}

/// Rescale so that `∫ψ†ψ dA = 1`, with coefficients fixed to unit largest
/// modulus and a real positive largest entry.
pub fn normalize(mode: &Mode) -> Result<Mode> {
    let pivot = mode
        .coeffs
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    if pivot.norm() == 0.0 || !pivot.norm().is_finite() {
        return Err(Error::NonFinite("mode has no nonzero coefficient".into()));
    }
    let mut out = mode.clone();
    for c in out.coeffs.iter_mut() {
        *c /= pivot;
    }
    out.norm = 1.0;
    let total = probability_integral(&out)?;
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::NonFinite(format!(
            "normalization integral is {total} at E = {} eV",
            mode.energy
        )));
    }
    out.norm = 1.0 / total.sqrt();
    Ok(out)
}

/// Boundary-condition violation at ρ = a relative to the peak amplitude:
/// the largest component jump for constant-mass wires, the largest interior
/// amplitude at the wall for dispersive ones.
pub fn boundary_mismatch(mode: &Mode) -> Result<f64> {
    let (a, outer) = integration_extent(mode);
    let columns = |cols: &[usize], rho: f64| -> Result<[Complex64; 4]> {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for &j in cols {
            let v = mode.basis[j].radial(rho)?;
            for (o, x) in out.iter_mut().zip(v) {
                *o += mode.norm * mode.coeffs[j] * x;
            }
        }
        Ok(out)
    };
    let jump: f64 = match mode.class {
        ProblemClass::JrD => columns(&[0, 1, 2, 3], a)?.iter().map(|c| c.norm()).fold(0.0, f64::max),
        _ => {
            let inside = columns(&[0, 1], a)?;
            let outside = columns(&[2, 3], a)?;
            inside
                .iter()
                .zip(&outside)
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max)
        }
    };
    const SAMPLES: usize = 1024;
    let mut peak = 0.0f64;
    for i in 0..=SAMPLES {
        let rho = outer * i as f64 / SAMPLES as f64;
        for c in mode.radial(rho)? {
            peak = peak.max(c.norm());
        }
    }
    if !(peak > 0.0) {
        return Err(Error::NonFinite("mode amplitude vanishes".into()));
    }
    Ok(jump / peak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UnitSystem;

    fn spec(interior: MaterialLaw) -> WireSpec {
        WireSpec::new(
            20.0,
            interior,
            MaterialLaw::constant(2.0),
            UnitSystem::from_fermi_velocity(1.52e5).unwrap(),
        )
        .unwrap()
    }

    fn sign_changes(sys: &CharSystem, lo: f64, hi: f64, n: usize) -> usize {
        let mut count = 0;
        let mut prev = sys.value(lo).unwrap().value;
        for i in 1..=n {
            let e = lo + (hi - lo) * i as f64 / n as f64;
            let v = sys.value(e).unwrap().value;
            if v * prev < 0.0 {
                count += 1;
            }
            prev = v;
        }
        count
    }

    #[test]
    fn jr_plus_sign_change_in_hybrid_window() {
        let sys = CharSystem::new(
            &spec(MaterialLaw::constant(1.0)),
            &QuantumNumbers::new(1, 0.0).unwrap(),
        )
        .unwrap();
        assert!(sign_changes(&sys, 1.0 + 1e-6, 2.0 - 1e-6, 500) >= 1);
    }

    #[test]
    fn jr_minus_sign_change_in_decaying_window() {
        let sys = CharSystem::new(
            &spec(MaterialLaw::constant(-1.0)),
            &QuantumNumbers::new(1, 0.0).unwrap(),
        )
        .unwrap();
        assert!(sign_changes(&sys, -1.0 + 1e-6, 1.0 - 1e-6, 500) >= 1);
    }

    #[test]
    fn jrd_has_root_below_one_ev() {
        let s = spec(MaterialLaw::dispersive(1.0, 50.0));
        let found = find_modes(&s, &QuantumNumbers::new(1, 0.0).unwrap(), &SolverOptions::default())
            .unwrap();
        assert!(found.modes.iter().any(|m| m.energy.abs() < 1.0));
    }

    #[test]
    fn characteristic_is_real() {
        for interior in [
            MaterialLaw::constant(1.0),
            MaterialLaw::constant(-1.0),
            MaterialLaw::dispersive(1.0, 50.0),
        ] {
            let sys = CharSystem::new(&spec(interior), &QuantumNumbers::new(3, 0.07).unwrap()).unwrap();
            for e in [-1.7, -0.9, -0.05, 0.1, 0.6, 1.2, 1.9] {
                let v = sys.value(e).unwrap();
                assert!(v.imag_ratio < 1e-8, "{interior:?} E={e}: {v:?}");
            }
        }
    }

    #[test]
    fn characteristic_continuous_across_parametrization_switch() {
        // JR+ switches parametrization at E = 0 and the interior threshold
        // sits at E = ±m1; neither may introduce a jump.
        let sys = CharSystem::new(
            &spec(MaterialLaw::constant(1.0)),
            &QuantumNumbers::new(1, 0.03).unwrap(),
        )
        .unwrap();
        let hv = sys.spec.hbar_vf();
        let threshold = (1.0f64 + hv * hv * 0.03 * 0.03).sqrt();
        // A jump would not shrink with the offset; a smooth function's
        // symmetric difference halves when the offset does.
        let f = |e: f64| sys.value(e).unwrap().value;
        for e0 in [0.0, -1.0, threshold, -threshold] {
            let d = 1e-7;
            let near = f(e0 + d) - f(e0 - d);
            let far = f(e0 + 2.0 * d) - f(e0 - 2.0 * d);
            assert!((2.0 * near - far).abs() <= 1e-3 * far.abs() + 1e-12, "E0={e0}: {near} vs {far}");
        }
    }

    #[test]
    fn no_modes_without_larger_exterior_gap() {
        let s = WireSpec::new(
            20.0,
            MaterialLaw::constant(2.0),
            MaterialLaw::constant(1.0),
            UnitSystem::from_hbar_vf(1.0).unwrap(),
        )
        .unwrap();
        let found = find_modes(&s, &QuantumNumbers::new(1, 0.0).unwrap(), &SolverOptions::default())
            .unwrap();
        assert!(found.modes.is_empty());
    }

    #[test]
    fn options_validation() {
        let s = spec(MaterialLaw::constant(1.0));
        let qn = QuantumNumbers::new(1, 0.0).unwrap();
        let opts = SolverOptions::default().with_scan_points(50);
        assert!(find_modes(&s, &qn, &opts).is_err());
        let opts = SolverOptions::default().with_window(-3.0, 3.0);
        assert!(find_modes(&s, &qn, &opts).is_err());
    }

    #[test]
    fn bracket_validation() {
        assert!(RootBracket::new(1.0, 0.0, -1.0, 1.0).is_err());
        assert!(RootBracket::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(RootBracket::new(0.0, 1.0, -1.0, 1.0).is_ok());
    }
}
