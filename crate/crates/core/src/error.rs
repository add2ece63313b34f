use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// The transverse wavenumber vanishes exactly; callers treat this energy
    /// as a family threshold.
    #[error("degenerate channel: transverse wavenumber vanishes at E = {energy} eV")]
    Threshold { energy: f64 },

    #[error("E = {energy} eV is not a bound-state energy: {reason}")]
    NotBoundState { energy: f64, reason: String },

    #[error("grid too coarse: h = {h} Å exceeds {limit} Å")]
    GridTooCoarse { h: f64, limit: f64 },

    #[error("non-finite result: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
