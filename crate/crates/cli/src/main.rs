//! `diracwire`: mode tables, densities and sweeps for cylindrical Dirac wires.
//!
//! Exit status is 0 on success, 1 when a computation fails or a validation
//! check does not pass, and 2 for usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diracwire::observables::{
    oam_z_density, probability_density, spin_z_density, transverse_spin_density, velocity_expectation,
};
use diracwire::sweeps::linspace;
use diracwire::{
    boundary_mismatch, eval_mode, expectations, find_modes, oracle, sweep_dispersion, sweep_radius, Mode,
    QuantumNumbers, SearchWarning, SolverOptions, WireSpec,
};
use serde::Serialize;

use diracwire_cli::config::{self, Mu, OutputFormat, RunConfig};
use diracwire_cli::output::{self, DensityPixel};

/// Oracle grid spacing as a fraction of the radius.
const ORACLE_STEP: f64 = 1.0 / 2000.0;

#[derive(Parser, Debug)]
#[command(name = "diracwire", version, about = "Bound modes of cylindrical Dirac wires")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Run configuration (TOML, or JSON with a .json extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Total angular momentum, e.g. 1/2 or -3/2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<Mu>,
    /// Longitudinal wavenumber (1/Å).
    #[arg(long, global = true, allow_hyphen_values = true)]
    kz: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the bound modes of one (μ, k_z) channel.
    Modes {
        /// Fail unless at least this many modes are found.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Raster the densities of one mode over [-1.5a, 1.5a]².
    Density {
        /// Index into the mode list (sorted by |E|); default is the lowest
        /// positive-energy mode.
        #[arg(long)]
        mode: Option<usize>,
        /// Raster points per side.
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
    /// Energies and group velocities over a k_z range.
    Dispersion {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        kz_min: f64,
        #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
        kz_max: f64,
        #[arg(long, default_value_t = 41)]
        kz_points: usize,
    },
    /// Half-gap and angular momenta of the lowest mode against radius.
    SweepRadius {
        #[arg(long, default_value_t = 5.0)]
        a_min: f64,
        #[arg(long, default_value_t = 200.0)]
        a_max: f64,
        #[arg(long, default_value_t = 40)]
        a_points: usize,
    },
    /// Run the self-consistency checks on every mode of the channel.
    Validate,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<diracwire::Error> for Failure {
    fn from(e: diracwire::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(format!("cannot write output: {e}"))
    }
}

struct Run {
    cfg: RunConfig,
    spec: WireSpec,
    qn: QuantumNumbers,
    opts: SolverOptions,
    out: PathBuf,
}

impl Run {
    fn new(common: &Common) -> Result<Self, Failure> {
        let mut cfg = match &common.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(mu) = common.mu {
            cfg.channel.mu = mu;
        }
        if let Some(kz) = common.kz {
            cfg.channel.kz_invA = kz;
        }
        if let Some(dir) = &common.out {
            cfg.output.dir = dir.clone();
        }
        cfg.validate()?;
        let spec = cfg.wire_spec()?;
        let qn = QuantumNumbers::new(cfg.channel.mu.0, cfg.channel.kz_invA).map_err(|e| Failure::Usage(e.to_string()))?;
        let opts = cfg.solver_options()?;
        let out = cfg.output.dir.clone();
        Ok(Self {
            cfg,
            spec,
            qn,
            opts,
            out,
        })
    }

    fn modes(&self) -> Result<Vec<Mode>, Failure> {
        let search = find_modes(&self.spec, &self.qn, &self.opts)?;
        for w in &search.warnings {
            eprintln!("warning: {}", describe(w));
        }
        Ok(search.modes)
    }

    fn emit(&self, name: &str, format: OutputFormat, contents: &str) -> Result<(), Failure> {
        if self.cfg.writes(format) {
            let path = output::write(&self.out, name, contents)?;
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn describe(w: &SearchWarning) -> String {
    format!("{w:?}")
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct ModeRecord {
    label: String,
    family: String,
    nu: Option<u32>,
    two_mu: i32,
    kz_invA: f64,
    E_eV: f64,
    Sz_hbar: f64,
    Lz_hbar: f64,
    Jz_hbar: f64,
    Srho_hbar: f64,
    Sphi_hbar: f64,
    probability: f64,
    vz_over_vF: f64,
    at_threshold: bool,
    oracle_residual: f64,
    /// `[re, im]` of the interior pair then the exterior pair.
    coefficients: [[f64; 2]; 4],
    norm: f64,
}

#[derive(Serialize)]
struct ModesFile<'a> {
    config: &'a RunConfig,
    modes: Vec<ModeRecord>,
}

fn record(mode: &Mode) -> Result<ModeRecord, Failure> {
    let e = expectations(mode)?;
    let residual = oracle::residual(mode, ORACLE_STEP * mode.spec.radius())?;
    Ok(ModeRecord {
        label: mode.label(),
        family: mode.family.to_string(),
        nu: mode.nu,
        two_mu: mode.qn.two_mu(),
        kz_invA: mode.qn.kz(),
        E_eV: mode.energy,
        Sz_hbar: e.spin_z,
        Lz_hbar: e.oam_z,
        Jz_hbar: e.spin_z + e.oam_z,
        Srho_hbar: e.spin_rho,
        Sphi_hbar: e.spin_phi,
        probability: e.probability,
        vz_over_vF: velocity_expectation(mode)?,
        at_threshold: mode.at_threshold,
        oracle_residual: residual,
        coefficients: mode.coeffs.map(|c| [c.re, c.im]),
        norm: mode.norm,
    })
}

fn cmd_modes(run: &Run, expect: Option<usize>) -> Result<(), Failure> {
    let modes = run.modes()?;
    let records = modes.iter().map(record).collect::<Result<Vec<_>, _>>()?;
    println!(
        "{:<12} {:>4} {:>22} {:>10} {:>10} {:>10} {:>10}",
        "mode", "nu", "E_eV", "Sz", "Lz", "Jz", "residual"
    );
    for r in &records {
        println!(
            "{:<12} {:>4} {:>22.15e} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}",
            r.label,
            r.nu.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
            r.E_eV,
            r.Sz_hbar,
            r.Lz_hbar,
            r.Jz_hbar,
            r.oracle_residual
        );
    }
    let file = ModesFile {
        config: &run.cfg,
        modes: records,
    };
    run.emit("modes.json", OutputFormat::Json, &output::json(&file))?;
    if let Some(n) = expect {
        if file.modes.len() < n {
            return Err(Failure::Compute(format!(
                "expected at least {n} modes, found {}",
                file.modes.len()
            )));
        }
    }
    Ok(())
}

fn raster(mode: &Mode, n: usize) -> Result<Vec<DensityPixel>, Failure> {
    let half = 1.5 * mode.spec.radius();
    let step = 2.0 * half / n as f64;
    let centre = |i: usize| -half + (i as f64 + 0.5) * step;
    let mut pixels = Vec::with_capacity(n * n);
    for iy in 0..n {
        let y = centre(iy);
        for ix in 0..n {
            let x = centre(ix);
            let s = eval_mode(mode, x.hypot(y), y.atan2(x))?;
            let (spin_rho, spin_phi) = transverse_spin_density(&s);
            pixels.push(DensityPixel {
                x,
                y,
                prob: probability_density(&s),
                spin_z: spin_z_density(&s),
                oam_z: oam_z_density(&s),
                spin_rho,
                spin_phi,
            });
        }
    }
    Ok(pixels)
}

fn cmd_density(run: &Run, index: Option<usize>, grid: usize) -> Result<(), Failure> {
    if grid < 2 {
        return Err(Failure::Usage(format!("--grid must be at least 2, got {grid}")));
    }
    let modes = run.modes()?;
    let mode = match index {
        Some(i) => modes.get(i).ok_or_else(|| {
            Failure::Usage(format!("--mode {i} out of range ({} modes found)", modes.len()))
        })?,
        None => modes
            .iter()
            .filter(|m| m.energy > 0.0)
            .min_by(|a, b| a.energy.total_cmp(&b.energy))
            .ok_or_else(|| Failure::Compute("no positive-energy mode in the window".into()))?,
    };
    let pixels = raster(mode, grid)?;
    let cell = (3.0 * mode.spec.radius() / grid as f64).powi(2);
    let total: f64 = pixels.iter().map(|p| p.prob).sum::<f64>() * cell;
    println!("{} E = {:.12e} eV, raster probability {:.6}", mode.label(), mode.energy, total);
    run.emit("density.csv", OutputFormat::Csv, &output::density_csv(&pixels))
}

fn cmd_dispersion(run: &Run, lo: f64, hi: f64, n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("--kz-points must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) || (n > 1 && !(hi > lo)) {
        return Err(Failure::Usage(format!("empty k_z range [{lo}, {hi}]")));
    }
    let table = sweep_dispersion(&run.spec, run.qn.two_mu(), &linspace(lo, hi, n), &run.opts)?;
    let flagged = table.rows.iter().filter(|r| r.discontinuous).count();
    if flagged > 0 {
        eprintln!("warning: {flagged} rows follow a branch jump; refine the k_z grid");
    }
    println!("{} rows over {n} k_z points", table.rows.len());
    run.emit("dispersion.csv", OutputFormat::Csv, &output::dispersion_csv(&table))?;
    run.emit("dispersion.json", OutputFormat::Json, &output::json(&table))
}

fn cmd_sweep_radius(run: &Run, lo: f64, hi: f64, n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("--a-points must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) || (n > 1 && !(hi > lo)) {
        return Err(Failure::Usage(format!("empty radius range [{lo}, {hi}]")));
    }
    let (rmin, rmax) = diracwire::sweeps::RADIUS_RANGE;
    if lo < rmin || hi > rmax {
        return Err(Failure::Usage(format!("radii must lie in [{rmin}, {rmax}] Å")));
    }
    let table = sweep_radius(&run.spec, run.qn.two_mu(), &linspace(lo, hi, n), &run.opts)?;
    let empty = table.rows.iter().filter(|r| r.empty).count();
    if empty > 0 {
        eprintln!("warning: {empty} radii have no mode in the energy window");
    }
    println!("{} radii", table.rows.len());
    run.emit("radius.csv", OutputFormat::Csv, &output::radius_csv(&table))?;
    run.emit("radius.json", OutputFormat::Json, &output::json(&table))
}

struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
}

fn checks(mode: &Mode) -> Result<Vec<Check>, Failure> {
    let e = expectations(mode)?;
    let mu = mode.qn.mu();
    Ok(vec![
        Check {
            name: "normalization",
            value: (e.probability - 1.0).abs(),
            limit: 1e-8,
        },
        Check {
            name: "total angular momentum",
            value: (e.spin_z + e.oam_z - mu).abs(),
            limit: 1e-8,
        },
        Check {
            name: "spin bound",
            value: e.spin_z.abs(),
            limit: 0.5 + 1e-12,
        },
        Check {
            name: "radial spin",
            value: e.spin_rho.abs(),
            limit: 1e-8,
        },
        Check {
            name: "azimuthal spin",
            value: e.spin_phi.abs(),
            limit: 1e-8,
        },
        Check {
            name: "boundary residual",
            value: boundary_mismatch(mode)?,
            limit: 1e-8,
        },
        Check {
            name: "oracle residual",
            value: oracle::residual(mode, ORACLE_STEP * mode.spec.radius())?,
            limit: 1e-3,
        },
    ])
}

fn cmd_validate(run: &Run) -> Result<(), Failure> {
    let modes = run.modes()?;
    if modes.is_empty() {
        println!("no modes in the window; nothing to validate");
        return Ok(());
    }
    let mut failed = 0;
    for mode in &modes {
        for c in checks(mode)? {
            let ok = c.value <= c.limit;
            if !ok {
                failed += 1;
            }
            println!(
                "{} {:<12} {:<24} {:.3e} (limit {:.1e})",
                if ok { "PASS" } else { "FAIL" },
                mode.label(),
                c.name,
                c.value,
                c.limit
            );
        }
    }
    if failed > 0 {
        return Err(Failure::Compute(format!("{failed} checks failed")));
    }
    println!("all checks passed for {} modes", modes.len());
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let run = Run::new(&cli.common)?;
    match cli.command {
        Command::Modes { expect } => cmd_modes(&run, expect),
        Command::Density { mode, grid } => cmd_density(&run, mode, grid),
        Command::Dispersion {
            kz_min,
            kz_max,
            kz_points,
        } => cmd_dispersion(&run, kz_min, kz_max, kz_points),
        Command::SweepRadius {
            a_min,
            a_max,
            a_points,
        } => cmd_sweep_radius(&run, a_min, a_max, a_points),
        Command::Validate => cmd_validate(&run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
