//! Physical source model: dispersion, phase matching, pump envelope and JSA assembly.

pub mod dispersion;
pub mod jsa;
pub mod phase_matching;
pub mod pump;
pub mod source;
pub mod walkoff;

pub use dispersion::{refractive_index, Axis, Dispersion, Sellmeier};
pub use jsa::{
    check_sampling, compute_jsa, compute_jsa_with, half_max_bounds, peak_fwhm_samples, FrequencyGrid,
    JsaGrid, PmfCoordinate, PmfMode,
};
pub use phase_matching::{
    delta_k, pmf_analytic, pmf_from_domains, DesignMap, PolarizationMap,
};
pub use pump::{coupling_coefficient, peak_power, peak_power_with_factor, pump_envelope};
pub use source::{CrystalSpec, GridSpec, PolingPattern, PulseShape, PumpSpec, SourceSpec};
pub use walkoff::{temporal_walkoff, walkoff_residual};
