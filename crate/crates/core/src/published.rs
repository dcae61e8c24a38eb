//! Values reported for the physical source, used as comparison targets.

/// Swap-overlap of the designed JSA.
pub const OVERLAP_THEORY: f64 = 0.998;
/// Swap-overlap of the measured JSI.
pub const OVERLAP_MEASURED: f64 = 0.992;
/// Schmidt purity of the designed two-lobe JSA.
pub const SCHMIDT_PURITY_THEORY: f64 = 0.496;
/// Schmidt purity of the measured JSI.
pub const SCHMIDT_PURITY_MEASURED: f64 = 0.494;

pub const F11: f64 = 0.4971;
pub const F22: f64 = 0.5028;
pub const F12: f64 = -0.4978;
/// Concurrence of the density matrix built from the measured lobe overlaps.
pub const LOBE_CONCURRENCE: f64 = 0.9956;
pub const LOBE_PURITY: f64 = 0.9955;

/// Tomography of the polarization state.
pub const QST_PURITY: f64 = 0.948;
pub const QST_CONCURRENCE: f64 = 0.948;
pub const QST_FIDELITY: f64 = 0.963;
pub const QST_CHSH: f64 = 2.747;

/// Fringe visibilities with the fixed polarizer at 0°, 90°, 45°, −45°.
pub const VISIBILITY_H: f64 = 0.94;
pub const VISIBILITY_V: f64 = 1.00;
pub const VISIBILITY_D: f64 = 0.90;
pub const VISIBILITY_A: f64 = 0.90;

/// Generation rate per mW of pump, Hz.
pub const GENERATION_RATE_PER_MW: f64 = 67e3;
pub const HERALDING_EFFICIENCY: f64 = 0.3;
/// Singles and coincidence rates at 1 mW pump, Hz.
pub const SINGLES_RATE: f64 = 20e3;
pub const COINCIDENCE_RATE: f64 = 6e3;

/// Mean pair number and squeezing at the highest pump power (620 mW).
pub const MU_AT_MAX_POWER: f64 = 0.1;
pub const SQUEEZING_DB_AT_MAX_POWER: f64 = -3.0;
pub const MAX_PUMP_POWER: f64 = 0.62;

pub const PEAK_POWER: f64 = 80e3;
pub const PULSE_DURATION: f64 = 90e-15;
/// Coupling coefficient at 50 mW and 620 mW.
pub const KAPPA_50MW: f64 = 0.5;
pub const KAPPA_620MW: f64 = 1.8;

/// Residual temporal walk-off after compensation, s.
pub const WALKOFF_RESIDUAL: f64 = 1.3e-15;
/// Spectrometer resolution, m.
pub const TOF_RESOLUTION: f64 = 0.83e-9;
/// Designed lobe FWHM, m.
pub const LOBE_FWHM: f64 = 13e-9;
