//! Dispersion and radius sweeps. Sweep points run in parallel and are
//! assembled by input index, so output never depends on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{find_modes, CharSystem, SolverOptions};
use crate::model::{QuantumNumbers, WireSpec};
use crate::observables::{expectations, group_velocity};
use crate::spinor::{Family, Mode};

/// Radii accepted by [`sweep_radius`] (Å).
pub const RADIUS_RANGE: (f64, f64) = (2.0, 500.0);
/// A stitched step may exceed the locally predicted change by this factor.
const JUMP_FACTOR: f64 = 5.0;

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Scan density grows with the radius, since level spacing shrinks as `1/a²`
/// near the band edges.
pub fn options_for_radius(opts: &SolverOptions, radius: f64) -> SolverOptions {
    let mut out = *opts;
    out.scan_points = opts.scan_points.max((40.0 * radius).ceil() as usize);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub kz: f64,
    pub energy: f64,
    pub family: Family,
    pub nu: Option<u32>,
    /// Stitched branch: `(energy sign, rank in |E|)`.
    pub branch: (i8, usize),
    pub vg_over_vf: Option<f64>,
    /// The step into this row exceeded the stitching threshold.
    pub discontinuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionTable {
    pub two_mu: i32,
    /// Sorted by k_z, then energy.
    pub rows: Vec<DispersionRow>,
}

impl DispersionTable {
    /// Rows of one stitched branch in k_z order.
    pub fn branch(&self, sign: i8, rank: usize) -> Vec<&DispersionRow> {
        self.rows
            .iter()
            .filter(|r| r.branch == (sign, rank))
            .collect()
    }

    /// Lowest positive-energy branch.
    pub fn dominant(&self) -> Vec<&DispersionRow> {
        self.branch(1, 0)
    }

    pub fn max_abs_velocity(&self, sign: i8, rank: usize) -> Option<f64> {
        self.branch(sign, rank)
            .iter()
            .filter_map(|r| r.vg_over_vf)
            .map(f64::abs)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    }
}

/// Modes for every k_z, stitched into branches by energy rank within each
/// energy sign, with group velocities for branches of three or more points.
pub fn sweep_dispersion(
    spec: &WireSpec,
    two_mu: i32,
    kz_values: &[f64],
    opts: &SolverOptions,
) -> Result<DispersionTable> {
    if kz_values.is_empty() {
        return Err(Error::InvalidParameter("dispersion sweep needs at least one k_z".into()));
    }
    if kz_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("k_z values must be strictly increasing".into()));
    }
    let per_kz: Vec<Vec<Mode>> = kz_values
        .par_iter()
        .map(|&kz| {
            let qn = QuantumNumbers::new(two_mu, kz)?;
            Ok(find_modes(spec, &qn, opts)?.modes)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (&kz, modes) in kz_values.iter().zip(&per_kz) {
        for sign in [1i8, -1] {
            let mut same: Vec<&Mode> = modes
                .iter()
                .filter(|m| (m.energy >= 0.0) == (sign > 0))
                .collect();
            same.sort_by(|a, b| a.energy.abs().total_cmp(&b.energy.abs()));
            for (rank, m) in same.iter().enumerate() {
                rows.push(DispersionRow {
                    kz,
                    energy: m.energy,
                    family: m.family,
                    nu: m.nu,
                    branch: (sign, rank),
                    vg_over_vf: None,
                    discontinuous: false,
                });
            }
        }
    }

    let mut keys: Vec<(i8, usize)> = rows.iter().map(|r| r.branch).collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        let idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].branch == key).collect();
        for (n, &i) in idx.iter().enumerate().skip(2) {
            let (p, q, r) = (&rows[idx[n - 2]], &rows[idx[n - 1]], &rows[i]);
            let slope = (q.energy - p.energy) / (q.kz - p.kz);
            let predicted = slope * (r.kz - q.kz);
            // Allow for the curvature seen over the previous two steps.
            let curvature = if n >= 3 {
                let o = &rows[idx[n - 3]];
                let before = (p.energy - o.energy) / (p.kz - o.kz);
                ((slope - before) * (r.kz - q.kz)).abs()
            } else {
                0.0
            };
            let allowed = JUMP_FACTOR * (predicted.abs() + curvature) + opts.energy_tol;
            if (r.energy - q.energy).abs() > allowed {
                rows[i].discontinuous = true;
            }
        }
        if idx.len() >= 3 {
            let points: Vec<(f64, f64)> = idx.iter().map(|&i| (rows[i].kz, rows[i].energy)).collect();
            let v = group_velocity(&points, &spec.units())?;
            for (&i, (_, vg)) in idx.iter().zip(v) {
                rows[i].vg_over_vf = Some(vg);
            }
        }
    }
    rows.sort_by(|a, b| a.kz.total_cmp(&b.kz).then(a.energy.total_cmp(&b.energy)));
    Ok(DispersionTable { two_mu, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub radius: f64,
    /// Half-gap (eV); the window edge when no mode was found.
    pub gap: f64,
    pub spin_z: f64,
    pub oam_z: f64,
    pub total_z: f64,
    pub energy: Option<f64>,
    pub family: Option<Family>,
    /// No mode in the window at this radius.
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSweepTable {
    pub two_mu: i32,
    pub rows: Vec<RadiusRow>,
}

impl RadiusSweepTable {
    pub fn gaps(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gap).collect()
    }
}

fn radius_row(spec: &WireSpec, two_mu: i32, radius: f64, opts: &SolverOptions) -> Result<RadiusRow> {
    let spec = spec.with_radius(radius)?;
    let qn = QuantumNumbers::new(two_mu, 0.0)?;
    let opts = options_for_radius(opts, radius);
    let modes = find_modes(&spec, &qn, &opts)?.modes;
    let gap = modes.iter().map(|m| m.energy.abs()).fold(f64::INFINITY, f64::min);
    let dominant = modes
        .iter()
        .filter(|m| m.energy > 0.0)
        .min_by(|a, b| a.energy.total_cmp(&b.energy));
    let Some(mode) = dominant else {
        let sys = CharSystem::new(&spec, &qn)?.with_window(opts.window)?;
        return Ok(RadiusRow {
            radius,
            gap: if gap.is_finite() { gap } else { sys.window.1 },
            spin_z: f64::NAN,
            oam_z: f64::NAN,
            total_z: f64::NAN,
            energy: None,
            family: None,
            empty: true,
        });
    };
    let e = expectations(mode)?;
    Ok(RadiusRow {
        radius,
        gap: if gap < opts.energy_tol { 0.0 } else { gap },
        spin_z: e.spin_z,
        oam_z: e.oam_z,
        total_z: e.spin_z + e.oam_z,
        energy: Some(mode.energy),
        family: Some(mode.family),
        empty: false,
    })
}

/// Half-gap and angular momenta of the dominant mode (lowest positive energy)
/// at k_z = 0 for each radius.
pub fn sweep_radius(
    spec: &WireSpec,
    two_mu: i32,
    radii: &[f64],
    opts: &SolverOptions,
) -> Result<RadiusSweepTable> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radius sweep needs at least one radius".into()));
    }
    let (lo, hi) = RADIUS_RANGE;
    if let Some(a) = radii.iter().find(|a| !(**a >= lo && **a <= hi)) {
        return Err(Error::InvalidParameter(format!(
            "radius {a} Å outside the sweep range [{lo}, {hi}] Å"
        )));
    }
    let rows = radii
        .par_iter()
        .map(|&a| radius_row(spec, two_mu, a, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadiusSweepTable { two_mu, rows })
}
