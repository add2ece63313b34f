//! CSV and JSON writers. Floats are written with `{:.16e}` so a file read back
//! reproduces every value bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use diracwire::sweeps::{DispersionTable, RadiusSweepTable};
use serde::Serialize;

pub const DISPERSION_HEADER: &str = "kz_invA,E_eV,family,nu,vg_over_vF";
pub const RADIUS_HEADER: &str = "a_A,gap_eV,Sz_hbar,Lz_hbar,Jz_hbar";
pub const DENSITY_HEADER: &str = "x_A,y_A,prob_invA2,Sz_invA2,Lz_invA2,Srho_invA2,Sphi_invA2";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map(num).unwrap_or_default()
}

pub fn dispersion_csv(table: &DispersionTable) -> String {
    let mut s = String::from(DISPERSION_HEADER);
    s.push('\n');
    for r in &table.rows {
        let nu = r.nu.map(|n| n.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(r.kz),
            num(r.energy),
            r.family,
            nu,
            opt_num(r.vg_over_vf)
        );
    }
    s
}

/// Empty rows (no mode in the window) leave the angular-momentum columns blank.
pub fn radius_csv(table: &RadiusSweepTable) -> String {
    let mut s = String::from(RADIUS_HEADER);
    s.push('\n');
    for r in &table.rows {
        let am = |x: f64| if r.empty { String::new() } else { num(x) };
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(r.radius),
            num(r.gap),
            am(r.spin_z),
            am(r.oam_z),
            am(r.total_z)
        );
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPixel {
    pub x: f64,
    pub y: f64,
    pub prob: f64,
    pub spin_z: f64,
    pub oam_z: f64,
    pub spin_rho: f64,
    pub spin_phi: f64,
}

pub fn density_csv(pixels: &[DensityPixel]) -> String {
    let mut s = String::from(DENSITY_HEADER);
    s.push('\n');
    for p in pixels {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            num(p.x),
            num(p.y),
            num(p.prob),
            num(p.spin_z),
            num(p.oam_z),
            num(p.spin_rho),
            num(p.spin_phi)
        );
    }
    s
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}
