//! Scattering data of 1D Schrödinger operators with compactly supported
//! potentials, classification of their bound-state, resonance and
//! transmission-resonance poles, and continuation of the nonlinear
//! bound-state branches of the cubic NLS/GP equation that bifurcate from
//! each of these spectral features.
//!
//! Start from [`potential::PotentialSpec`], obtain spectral points via
//! [`spectrum`], seed and trace branches via [`branch`]. The `examples/`
//! directory has one runnable example per capability.

pub mod branch;
pub mod error;
pub mod glue;
pub mod nlsolve;
pub mod ode;
pub mod oracle;
pub mod potential;
pub mod report;
pub mod scattering;
pub mod spectrum;
pub mod validate;

pub use error::{Error, Result};
pub use potential::{PotentialDescriptor, PotentialSpec};
pub use scattering::{jost_minus, jost_plus, scattering_data, wronskian_on_axis, ScatteringData};
pub use spectrum::{SpectralClass, SpectralPoint, Target};

