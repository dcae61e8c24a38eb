use super::dispersion::{Axis, Dispersion};
use super::phase_matching::DesignMap;
use super::source::CrystalSpec;
use crate::error::Result;
use crate::C_LIGHT;

/// Net H−V group delay (s): pairs born on average at the crystal centre travel L/2 of
/// poled crystal (H on y, V on z), then the compensator with the axes exchanged.
pub fn temporal_walkoff(
    disp: &dyn Dispersion,
    crystal: &CrystalSpec,
    wavelength_h: f64,
    wavelength_v: f64,
) -> Result<f64> {
    let poled = 0.5
        * crystal.length
        * (disp.group_index(Axis::Y, wavelength_h)? - disp.group_index(Axis::Z, wavelength_v)?);
    let comp = crystal.compensation_length
        * (disp.group_index(Axis::Z, wavelength_h)? - disp.group_index(Axis::Y, wavelength_v)?);
    Ok((poled + comp) / C_LIGHT)
}

/// Walk-off at the designed lobe centres (H at 1548 nm, V at 1572 nm).
pub fn walkoff_residual(disp: &dyn Dispersion, crystal: &CrystalSpec) -> Result<f64> {
    let (a, b) = DesignMap::DEFAULT_LOBES_NM;
    temporal_walkoff(disp, crystal, a * 1e-9, b * 1e-9)
}
