//! Run configuration, read from TOML or JSON. Every dimensional key carries
//! its unit in the name.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use diracwire::{MaterialLaw, SolverOptions, UnitSystem, WireSpec};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug)]
pub enum ConfigError {
    Io(PathBuf, std::io::Error),
    Parse(String),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(p, e) => write!(f, "cannot read {}: {e}", p.display()),
            ConfigError::Parse(m) => write!(f, "cannot parse config: {m}"),
            ConfigError::Invalid(m) => write!(f, "invalid config: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<diracwire::Error> for ConfigError {
    fn from(e: diracwire::Error) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

/// Half-integer μ stored as 2μ. Written as `"1/2"`, `"-3/2"`; an integer in
/// a config file is read as 2μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mu(pub i32);

impl FromStr for Mu {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let two_mu = match t.split_once('/') {
            Some((num, "2")) => num
                .trim()
                .parse::<i32>()
                .map_err(|_| format!("bad numerator in μ = {t:?}"))?,
            Some(_) => return Err(format!("μ must be a half-integer like \"3/2\", got {t:?}")),
            None => {
                let x: f64 = t.parse().map_err(|_| format!("cannot read μ = {t:?}"))?;
                let doubled = 2.0 * x;
                if doubled.fract() != 0.0 || doubled.abs() > i32::MAX as f64 {
                    return Err(format!("μ must be a half-integer, got {t:?}"));
                }
                doubled as i32
            }
        };
        if two_mu % 2 == 0 {
            return Err(format!("μ must be a half-integer, got {t:?}"));
        }
        Ok(Mu(two_mu))
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl Serialize for Mu {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Mu {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Doubled(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Doubled(n) => {
                let n = i32::try_from(n).map_err(serde::de::Error::custom)?;
                if n % 2 == 0 {
                    return Err(serde::de::Error::custom(format!("2μ must be odd, got {n}")));
                }
                Ok(Mu(n))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "jr+")]
    JrPlus,
    #[serde(rename = "jr-")]
    JrMinus,
    #[serde(rename = "jrd")]
    JrD,
}

impl ProblemKind {
    /// `(interior mass, exterior mass, B·ħ²)` defaults.
    fn preset(self) -> (f64, f64, f64) {
        match self {
            ProblemKind::JrPlus => (1.0, 2.0, 0.0),
            ProblemKind::JrMinus => (-1.0, 2.0, 0.0),
            ProblemKind::JrD => (1.0, 2.0, 50.0),
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub class: ProblemKind,
    /// Interior rest energy m₁v² (m₀v² for `jrd`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_mass_eV: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exterior_mass_eV: Option<f64>,
    /// Bħ² of the dispersive interior mass; `jrd` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion_eV_A2: Option<f64>,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub a_angstrom: f64,
    pub vF_m_per_s: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub mu: Mu,
    pub kz_invA: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub scan_points: usize,
    pub energy_tol_eV: f64,
    pub threshold_refinement: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_eV: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub channel: ChannelConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            class: ProblemKind::JrPlus,
            interior_mass_eV: None,
            exterior_mass_eV: None,
            dispersion_eV_A2: None,
        }
    }
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            a_angstrom: 20.0,
            vF_m_per_s: 1.52e5,
        }
    }
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            mu: Mu(1),
            kz_invA: 0.0,
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            scan_points: d.scan_points,
            energy_tol_eV: d.energy_tol,
            threshold_refinement: d.threshold_refinement,
            window_eV: None,
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("."),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig::default(),
            geometry: GeometryConfig::default(),
            channel: ChannelConfig::default(),
            solver: SolverConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    /// Read a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let cfg = if is_json {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.wire_spec()?;
        self.solver_options()?;
        if self.problem.class != ProblemKind::JrD && self.problem.dispersion_eV_A2.is_some() {
            return Err(ConfigError::Invalid(
                "dispersion_eV_A2 only applies to class \"jrd\"".into(),
            ));
        }
        if !self.channel.kz_invA.is_finite() {
            return Err(ConfigError::Invalid("kz_invA must be finite".into()));
        }
        if self.output.formats.is_empty() {
            return Err(ConfigError::Invalid("output.formats is empty".into()));
        }
        Ok(())
    }

    pub fn wire_spec(&self) -> Result<WireSpec, ConfigError> {
        let (m_in, m_out, b) = self.problem.class.preset();
        let m_in = self.problem.interior_mass_eV.unwrap_or(m_in);
        let m_out = self.problem.exterior_mass_eV.unwrap_or(m_out);
        let interior = match self.problem.class {
            ProblemKind::JrD => MaterialLaw::dispersive(m_in, self.problem.dispersion_eV_A2.unwrap_or(b)),
            _ => MaterialLaw::constant(m_in),
        };
        let units = UnitSystem::from_fermi_velocity(self.geometry.vF_m_per_s)?;
        let spec = WireSpec::new(self.geometry.a_angstrom, interior, MaterialLaw::constant(m_out), units)?;
        let class = spec.class()?;
        let expected = match self.problem.class {
            ProblemKind::JrPlus => diracwire::ProblemClass::JrPlus,
            ProblemKind::JrMinus => diracwire::ProblemClass::JrMinus,
            ProblemKind::JrD => diracwire::ProblemClass::JrD,
        };
        if class != expected {
            return Err(ConfigError::Invalid(format!(
                "masses m₁ = {m_in} eV, m₂ = {m_out} eV describe {class}, not {}",
                expected
            )));
        }
        Ok(spec)
    }

    pub fn solver_options(&self) -> Result<SolverOptions, ConfigError> {
        let s = &self.solver;
        if s.scan_points < 100 {
            return Err(ConfigError::Invalid(format!(
                "scan_points must be ≥ 100, got {}",
                s.scan_points
            )));
        }
        if !(s.energy_tol_eV > 0.0) {
            return Err(ConfigError::Invalid("energy_tol_eV must be positive".into()));
        }
        if let Some([lo, hi]) = s.window_eV {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(ConfigError::Invalid(format!("window_eV [{lo}, {hi}] is empty")));
            }
        }
        Ok(SolverOptions {
            scan_points: s.scan_points,
            energy_tol: s.energy_tol_eV,
            threshold_refinement: s.threshold_refinement,
            window: s.window_eV.map(|[lo, hi]| (lo, hi)),
        })
    }

    pub fn writes(&self, format: OutputFormat) -> bool {
        self.output.formats.contains(&format)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_wire() {
        let c = RunConfig::default();
        let spec = c.wire_spec().unwrap();
        assert_eq!(spec.radius(), 20.0);
        assert_eq!(spec.interior(), MaterialLaw::constant(1.0));
        assert_eq!(spec.exterior(), MaterialLaw::constant(2.0));
        assert_eq!(c.channel.mu, Mu(1));
        assert_eq!(c.channel.kz_invA, 0.0);
    }

    #[test]
    fn minimal_toml() {
        let c = RunConfig::from_toml("[problem]\nclass = \"jrd\"\n").unwrap();
        c.validate().unwrap();
        assert_eq!(c.wire_spec().unwrap().interior(), MaterialLaw::dispersive(1.0, 50.0));
    }

    #[test]
    fn mu_forms() {
        assert_eq!("1/2".parse::<Mu>().unwrap(), Mu(1));
        assert_eq!("-3/2".parse::<Mu>().unwrap(), Mu(-3));
        assert_eq!("2.5".parse::<Mu>().unwrap(), Mu(5));
        assert!("1".parse::<Mu>().is_err());
        assert!("1/3".parse::<Mu>().is_err());
        let c = RunConfig::from_toml("[problem]\nclass = \"jr+\"\n[channel]\nmu = -3\nkz_invA = 0.1\n").unwrap();
        assert_eq!(c.channel.mu, Mu(-3));
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            "[problem]\nclass = \"jr+\"\n[geometry]\na_angstrom = -1.0\nvF_m_per_s = 1.52e5\n",
            "[problem]\nclass = \"jr+\"\ninterior_mass_eV = -1.0\n",
            "[problem]\nclass = \"jr+\"\ndispersion_eV_A2 = 3.0\n",
            "[problem]\nclass = \"jr+\"\n[solver]\nscan_points = 10\nenergy_tol_eV = 1e-10\nthreshold_refinement = 10\n",
        ];
        for text in bad {
            let c = RunConfig::from_toml(text).unwrap();
            assert!(c.validate().is_err(), "{text}");
        }
        assert!(RunConfig::from_toml("[problem]\nclass = \"jr+\"\nmass = 1\n").is_err());
    }
}
