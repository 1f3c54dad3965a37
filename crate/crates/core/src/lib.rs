//! Simulation toolkit for composite stimulated Raman adiabatic passage
//! (CSTIRAP) in a three-level Λ-system.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: RWA Hamiltonian, non-Hermitian decay, RK4 propagation of
//!   state vectors and density matrices.
//! - [`pulse`]: Gaussian pump/Stokes envelopes, pulse pairs and the tabulated
//!   composite phase sets.
//! - [`adiabatic`]: mixing angles, adiabatic states, pulse areas and the
//!   effective two-level model of far-detuned STIRAP.
//! - [`composite`]: SU(2) composite-pulse algebra and the universal
//!   five-pulse phase solver.
//! - [`ensemble`]: inhomogeneous ensemble averaging, probe read-out and
//!   delay/Rabi-scale sweeps.
//! - [`config`], [`presets`] and [`run`]: run configuration files, figure
//!   presets and the command implementations behind the `cstirap` binary.
//!
//! All frequencies inside the library are angular (rad/s) and all times are
//! in seconds. Configuration files use ordinary frequencies (Hz) with the
//! unit spelled out in every key.

pub mod adiabatic;
pub mod composite;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod presets;
pub mod pulse;
pub mod quantum;
pub mod run;

pub use error::{Error, Result};

/// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
#[inline]
pub fn hz_to_angular(hz: f64) -> f64 {
    std::f64::consts::TAU * hz
}

/// Converts an angular frequency in rad/s to an ordinary frequency in Hz.
#[inline]
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / std::f64::consts::TAU
}
