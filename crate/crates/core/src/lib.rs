//! Simulation and analysis toolkit for domain-engineered SPDC polarization-entanglement
//! sources: joint spectral amplitudes from crystal and pump physics, polarization density
//! matrices derived from spectra, tomography, Bell metrics, visibility and squeezing.

pub mod cli;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod grid_io;
pub mod measurement;
pub mod optics;
pub mod polarization;
pub mod published;
pub mod spectral;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Angular frequency (rad/s) of light with vacuum wavelength `wavelength` (m).
pub fn omega_of_wavelength(wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_LIGHT / wavelength
}

/// Vacuum wavelength (m) of angular frequency `omega` (rad/s).
pub fn wavelength_of_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_LIGHT / omega
}
