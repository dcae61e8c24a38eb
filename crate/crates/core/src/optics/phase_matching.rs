use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dispersion::{Axis, Dispersion};
use super::source::{CrystalSpec, PolingPattern};
use crate::error::Result;
use crate::{omega_of_wavelength, wavelength_of_omega, C_LIGHT};

/// Polarization axis carried by each field. The default type-II assignment puts the pump
/// and the signal (H) on Y and the idler (V) on Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationMap {
    pub pump: Axis,
    pub signal: Axis,
    pub idler: Axis,
}

impl Default for PolarizationMap {
    fn default() -> Self {
        PolarizationMap {
            pump: Axis::Y,
            signal: Axis::Y,
            idler: Axis::Z,
        }
    }
}

impl PolarizationMap {
    pub fn swapped(self) -> Self {
        PolarizationMap {
            pump: self.pump,
            signal: self.idler,
            idler: self.signal,
        }
    }
}

fn wavenumber(disp: &dyn Dispersion, axis: Axis, omega: f64) -> Result<f64> {
    Ok(disp.index(axis, wavelength_of_omega(omega))? * omega / C_LIGHT)
}

/// k_s + k_i − k_p without the grating term.
pub fn delta_k_material(
    disp: &dyn Dispersion,
    omega_s: f64,
    omega_i: f64,
    map: PolarizationMap,
) -> Result<f64> {
    let kp = wavenumber(disp, map.pump, omega_s + omega_i)?;
    let ks = wavenumber(disp, map.signal, omega_s)?;
    let ki = wavenumber(disp, map.idler, omega_i)?;
    Ok(ks + ki - kp)
}

/// Phase mismatch Δk = k_s + k_i − k_p − 2π/Λ in 1/m, with ω_p = ω_s + ω_i.
pub fn delta_k(
    disp: &dyn Dispersion,
    omega_s: f64,
    omega_i: f64,
    crystal: &CrystalSpec,
    map: PolarizationMap,
) -> Result<f64> {
    Ok(delta_k_material(disp, omega_s, omega_i, map)? - 2.0 * PI / crystal.poling_period)
}

/// Double-Gaussian phase-matching function with its 1/√(2πσ) prefactor.
pub fn pmf_analytic(dk: f64, sigma: f64, a: f64) -> f64 {
    let two_s2 = 2.0 * sigma * sigma;
    let g = |x: f64| (-(x * x) / two_s2).exp();
    (g(dk - a) - g(dk + a)) / (2.0 * PI * sigma).sqrt()
}

/// (1/L) Σ_j s_j ∫_{z_j}^{z_{j+1}} e^{iΔk z} dz with alternating signs.
pub fn pmf_from_domains(pattern: &PolingPattern, dk_without_qpm: f64) -> Complex64 {
    let b = pattern.boundaries();
    let mut sign = pattern.first_sign() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for w in b.windows(2) {
        let width = w[1] - w[0];
        let mid = 0.5 * (w[0] + w[1]);
        let x = 0.5 * dk_without_qpm * width;
        let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
        acc += Complex64::from_polar(sign * width * sinc, dk_without_qpm * mid);
        sign = -sign;
    }
    acc / pattern.length()
}

/// Linear map from the swap-antisymmetric part of the physical mismatch onto the PMF
/// coordinate, calibrated so that the lobe centres land on ±a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignMap {
    pub gain: f64,
    pub map: PolarizationMap,
}

impl DesignMap {
    pub const DEFAULT_LOBES_NM: (f64, f64) = (1548.0, 1572.0);

    /// `lobes_nm.0` is the signal wavelength of the lobe placed at +a.
    pub fn calibrate(
        disp: &dyn Dispersion,
        crystal: &CrystalSpec,
        map: PolarizationMap,
        lobes_nm: (f64, f64),
    ) -> Result<Self> {
        let w1 = omega_of_wavelength(lobes_nm.0 * 1e-9);
        let w2 = omega_of_wavelength(lobes_nm.1 * 1e-9);
        let anti = antisymmetric_dk(disp, w1, w2, map)?;
        if anti.abs() < 1e-9 {
            return Err(crate::Error::Numeric(
                "design map is singular: mismatch has no antisymmetric part at the lobe centres"
                    .into(),
            ));
        }
        Ok(DesignMap {
            gain: crystal.pmf_a / anti,
            map,
        })
    }

    pub fn coordinate(&self, disp: &dyn Dispersion, omega_s: f64, omega_i: f64) -> Result<f64> {
        Ok(self.gain * antisymmetric_dk(disp, omega_s, omega_i, self.map)?)
    }
}

/// (Δk(ω_s, ω_i) − Δk(ω_i, ω_s))/2 at fixed polarization assignment; the grating term cancels.
pub fn antisymmetric_dk(
    disp: &dyn Dispersion,
    omega_s: f64,
    omega_i: f64,
    map: PolarizationMap,
) -> Result<f64> {
    let fwd = delta_k_material(disp, omega_s, omega_i, map)?;
    let rev = delta_k_material(disp, omega_i, omega_s, map)?;
    Ok(0.5 * (fwd - rev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::Sellmeier;

    #[test]
    fn design_map_puts_first_lobe_at_plus_a() {
        let c = CrystalSpec::default();
        let d = DesignMap::calibrate(Sellmeier::ktp(), &c, PolarizationMap::default(), DesignMap::DEFAULT_LOBES_NM)
            .unwrap();
        let w1 = omega_of_wavelength(1548e-9);
        let w2 = omega_of_wavelength(1572e-9);
        let x = d.coordinate(Sellmeier::ktp(), w1, w2).unwrap();
        assert!((x - 2700.0).abs() < 1e-9);
        let y = d.coordinate(Sellmeier::ktp(), w2, w1).unwrap();
        assert!((y + 2700.0).abs() < 1e-9);
    }
}
