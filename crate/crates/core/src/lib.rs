//! Bound-state mode solver for cylindrical Dirac waveguides.
//!
//! A wire of radius `a` with Dirac mass `m₁` (constant or `m₀ − Bk²`) inside
//! and constant mass `m₂` outside supports bound states labelled by the total
//! angular momentum μ and the longitudinal wavenumber k_z. [`find_modes`]
//! locates them, [`observables`] integrates their spin and orbital angular
//! momentum, [`oracle`] checks them against a finite-difference Hamiltonian
//! and [`sweeps`] scans k_z and `a`.

pub mod error;
pub mod matching;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod spinor;
pub mod sweeps;

pub use error::{Error, Result};
pub use matching::{boundary_mismatch, char_fn, classify_family, find_modes, normalize, ModeSearch, SearchWarning, SolverOptions};
pub use model::{
    classify, dispersive_roots, transverse_k, z2_nontrivial, MaterialLaw, ProblemClass, QuantumNumbers,
    UnitSystem, WireSpec,
};
pub use observables::{
    angular_momentum, bandgap, expectations, group_velocity, total_angular_momentum, AngularMomentumReport,
    DensityGrid, Expectations, PolarGrid,
};
pub use spinor::{eval_mode, Family, Mode, SpinorSample};
pub use sweeps::{sweep_dispersion, sweep_radius, DispersionTable, RadiusSweepTable};
