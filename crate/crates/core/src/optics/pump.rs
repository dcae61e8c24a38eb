use num_complex::Complex64;

use super::source::{PulseShape, PumpSpec};
use crate::error::{Error, Result};

/// Transform-limited pump amplitude at ω_s + ω_i, unit peak. |P|² has the configured FWHM.
pub fn pump_envelope(omega_sum: f64, pump: &PumpSpec) -> Complex64 {
    let x = omega_sum - pump.center_omega();
    let fwhm = pump.bandwidth_omega();
    let v = match pump.pulse_shape {
        PulseShape::Gaussian => {
            // |P|² = exp(−x²/s²)
            let s = fwhm / (2.0 * std::f64::consts::LN_2.sqrt());
            (-0.5 * x * x / (s * s)).exp()
        }
        PulseShape::Sech2 => {
            let t = fwhm / (2.0 * std::f64::consts::SQRT_2.acosh());
            1.0 / (x / t).cosh()
        }
    };
    Complex64::new(v, 0.0)
}

/// Peak power of a pulse train with the standard shape factor of the pump's pulse shape.
pub fn peak_power(pump: &PumpSpec, pulse_fwhm: f64) -> Result<f64> {
    peak_power_with_factor(pump, pulse_fwhm, pump.pulse_shape.shape_factor())
}

pub fn peak_power_with_factor(pump: &PumpSpec, pulse_fwhm: f64, shape_factor: f64) -> Result<f64> {
    if !(pulse_fwhm > 0.0) {
        return Err(Error::InvalidInput(format!(
            "pulse duration must be > 0, got {pulse_fwhm}"
        )));
    }
    pump.validate()?;
    Ok(shape_factor * pump.average_power / (pump.repetition_rate * pulse_fwhm))
}

/// κ at `power` given one calibration point; κ scales with the pump field amplitude.
pub fn coupling_coefficient(power: f64, power_ref: f64, kappa_ref: f64) -> Result<f64> {
    if !(power_ref > 0.0) || !(kappa_ref > 0.0) {
        return Err(Error::InvalidInput(
            "coupling reference power and kappa must be > 0".into(),
        ));
    }
    if !(power >= 0.0) {
        return Err(Error::InvalidInput(format!("pump power must be >= 0, got {power}")));
    }
    Ok(kappa_ref * (power / power_ref).sqrt())
}
