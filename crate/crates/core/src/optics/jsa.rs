use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dispersion::{Dispersion, Sellmeier};
use super::phase_matching::{
    delta_k, delta_k_material, pmf_analytic, pmf_from_domains, DesignMap, PolarizationMap,
};
use super::pump::pump_envelope;
use super::source::{CrystalSpec, PolingPattern, PumpSpec};
use crate::error::{Error, Result};
use crate::{omega_of_wavelength, wavelength_of_omega};

/// Minimum number of samples across the FWHM of a lobe in either marginal.
pub const MIN_SAMPLES_PER_FWHM: f64 = 8.0;

/// Uniformly spaced angular-frequency axes for signal and idler.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    signal: Vec<f64>,
    idler: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(signal: Vec<f64>, idler: Vec<f64>) -> Result<Self> {
        check_axis("signal", &signal)?;
        check_axis("idler", &idler)?;
        Ok(FrequencyGrid { signal, idler })
    }

    /// Identical signal and idler axes.
    pub fn symmetric(axis: Vec<f64>) -> Result<Self> {
        Self::new(axis.clone(), axis)
    }

    /// `n` points uniform in ω spanning the wavelength window `[lo, hi]` (m), used for both axes.
    pub fn from_wavelength_window(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidInput(format!(
                "wavelength window must satisfy 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 samples".into()));
        }
        let w0 = omega_of_wavelength(hi);
        let w1 = omega_of_wavelength(lo);
        let step = (w1 - w0) / (n - 1) as f64;
        let axis: Vec<f64> = (0..n).map(|k| w0 + k as f64 * step).collect();
        Self::symmetric(axis)
    }

    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn idler(&self) -> &[f64] {
        &self.idler
    }

    pub fn d_signal(&self) -> f64 {
        step(&self.signal)
    }

    pub fn d_idler(&self) -> f64 {
        step(&self.idler)
    }

    /// Area element Δω_s·Δω_i.
    pub fn cell(&self) -> f64 {
        self.d_signal() * self.d_idler()
    }

    pub fn is_symmetric(&self) -> bool {
        self.signal.len() == self.idler.len()
            && self
                .signal
                .iter()
                .zip(&self.idler)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs())
    }

    pub fn signal_wavelengths(&self) -> Vec<f64> {
        self.signal.iter().map(|&w| wavelength_of_omega(w)).collect()
    }

    pub fn idler_wavelengths(&self) -> Vec<f64> {
        self.idler.iter().map(|&w| wavelength_of_omega(w)).collect()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.signal.len(), self.idler.len())
    }
}

fn step(axis: &[f64]) -> f64 {
    (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::InvalidInput(format!("{name} axis needs at least 2 samples")));
    }
    if axis.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} axis has non-finite values")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(format!("{name} axis must be strictly increasing")));
    }
    let d = step(axis);
    let bad = axis
        .windows(2)
        .any(|w| ((w[1] - w[0]) - d).abs() > 1e-7 * d);
    if bad {
        return Err(Error::InvalidInput(format!(
            "{name} axis must be uniformly spaced in angular frequency"
        )));
    }
    Ok(())
}

/// Complex JSA sampled on a grid, indexed `[signal, idler]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JsaGrid {
    pub grid: FrequencyGrid,
    pub amplitude: DMatrix<Complex64>,
    pub normalized: bool,
}

impl JsaGrid {
    pub fn new(grid: FrequencyGrid, amplitude: DMatrix<Complex64>) -> Result<Self> {
        if amplitude.shape() != grid.shape() {
            return Err(Error::InvalidInput(format!(
                "amplitude shape {:?} does not match grid {:?}",
                amplitude.shape(),
                grid.shape()
            )));
        }
        if amplitude.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("amplitude has non-finite entries".into()));
        }
        Ok(JsaGrid {
            grid,
            amplitude,
            normalized: false,
        })
    }

    /// Σ|f|²·Δω_s·Δω_i
    pub fn norm_sq(&self) -> f64 {
        self.amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sq();
        if !(n > 0.0) {
            return Err(Error::InvalidInput("cannot normalize an all-zero JSA".into()));
        }
        let s = 1.0 / n.sqrt();
        self.amplitude.iter_mut().for_each(|z| *z *= s);
        self.normalized = true;
        Ok(())
    }

    pub fn into_normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// f(ω_i, ω_s) on the same grid; needs identical axes.
    pub fn transposed(&self) -> Result<Self> {
        if !self.grid.is_symmetric() {
            return Err(Error::InvalidInput(
                "signal and idler axes differ; swap is undefined".into(),
            ));
        }
        Ok(JsaGrid {
            grid: self.grid.clone(),
            amplitude: self.amplitude.transpose(),
            normalized: self.normalized,
        })
    }

    pub fn is_real(&self) -> bool {
        self.amplitude.iter().all(|z| z.im == 0.0)
    }
}

/// Coordinate fed to the analytic PMF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PmfCoordinate {
    /// Calibrated linear map placing the lobes at 1548/1572 nm.
    #[default]
    Design,
    /// Physical Δk including the grating term.
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PmfMode {
    Analytic(PmfCoordinate),
    FromDomains(PolingPattern),
}

impl Default for PmfMode {
    fn default() -> Self {
        PmfMode::Analytic(PmfCoordinate::Design)
    }
}

/// JSA of the KTP source with the default type-II polarization assignment.
pub fn compute_jsa(
    grid: &FrequencyGrid,
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    mode: &PmfMode,
) -> Result<JsaGrid> {
    compute_jsa_with(Sellmeier::ktp(), PolarizationMap::default(), grid, crystal, pump, mode)
}

/// f = P(ω_s + ω_i)·Φ(Δk(ω_s, ω_i)), normalized, then checked for resolution and coverage.
pub fn compute_jsa_with(
    disp: &dyn Dispersion,
    map: PolarizationMap,
    grid: &FrequencyGrid,
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    mode: &PmfMode,
) -> Result<JsaGrid> {
    crystal.validate()?;
    pump.validate()?;
    let design = match mode {
        PmfMode::Analytic(PmfCoordinate::Design) => Some(DesignMap::calibrate(
            disp,
            crystal,
            map,
            DesignMap::DEFAULT_LOBES_NM,
        )?),
        _ => None,
    };
    let (sigma, a) = (crystal.pmf_sigma, crystal.pmf_a);
    let pmf = |ws: f64, wi: f64| -> Result<Complex64> {
        Ok(match mode {
            PmfMode::Analytic(PmfCoordinate::Design) => {
                let x = design.as_ref().unwrap().coordinate(disp, ws, wi)?;
                Complex64::new(pmf_analytic(x, sigma, a), 0.0)
            }
            PmfMode::Analytic(PmfCoordinate::Raw) => {
                let x = delta_k(disp, ws, wi, crystal, map)?;
                Complex64::new(pmf_analytic(x, sigma, a), 0.0)
            }
            PmfMode::FromDomains(pattern) => {
                pmf_from_domains(pattern, delta_k_material(disp, ws, wi, map)?)
            }
        })
    };

    let idler = grid.idler();
    let rows: Vec<Vec<Complex64>> = grid
        .signal()
        .par_iter()
        .map(|&ws| {
            idler
                .iter()
                .map(|&wi| Ok(pump_envelope(ws + wi, pump) * pmf(ws, wi)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let (ns, ni) = grid.shape();
    let amp = DMatrix::from_fn(ns, ni, |i, j| rows[i][j]);
    let jsa = JsaGrid::new(grid.clone(), amp)?.into_normalized()?;
    check_sampling(&jsa)?;
    Ok(jsa)
}

/// Rejects grids that under-resolve the lobes or clip them at the window edge.
pub fn check_sampling(jsa: &JsaGrid) -> Result<()> {
    let a = &jsa.amplitude;
    let (ns, ni) = a.shape();
    let ms: Vec<f64> = (0..ns).map(|i| a.row(i).iter().map(|z| z.norm_sqr()).sum()).collect();
    let mi: Vec<f64> = (0..ni).map(|j| a.column(j).iter().map(|z| z.norm_sqr()).sum()).collect();
    for (name, m) in [("signal", &ms), ("idler", &mi)] {
        let width = peak_fwhm_samples(m);
        if width < MIN_SAMPLES_PER_FWHM {
            return Err(Error::InvalidInput(format!(
                "grid too coarse: {name} lobe FWHM spans {width:.1} samples, need at least {MIN_SAMPLES_PER_FWHM}"
            )));
        }
        let peak = m.iter().cloned().fold(0.0, f64::max);
        if m[0] > 0.05 * peak || m[m.len() - 1] > 0.05 * peak {
            return Err(Error::InvalidInput(format!(
                "window does not contain the lobes: {name} marginal is above 5% of its peak at the grid edge"
            )));
        }
    }
    Ok(())
}

/// FWHM, in fractional samples, of the highest peak of a sampled profile.
pub fn peak_fwhm_samples(m: &[f64]) -> f64 {
    match half_max_bounds(m) {
        Some((l, r)) => r - l,
        None => 0.0,
    }
}

/// Fractional sample positions where the highest peak of `m` crosses half its maximum,
/// clamped to the ends of the profile.
pub fn half_max_bounds(m: &[f64]) -> Option<(f64, f64)> {
    let (imax, &peak) = m.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    if !(peak > 0.0) {
        return None;
    }
    let half = 0.5 * peak;
    let mut i = imax;
    while i > 0 && m[i - 1] >= half {
        i -= 1;
    }
    let left = if i > 0 {
        (i - 1) as f64 + (half - m[i - 1]) / (m[i] - m[i - 1])
    } else {
        0.0
    };
    let mut j = imax;
    while j + 1 < m.len() && m[j + 1] >= half {
        j += 1;
    }
    let right = if j + 1 < m.len() {
        j as f64 + (m[j] - half) / (m[j] - m[j + 1])
    } else {
        (m.len() - 1) as f64
    };
    Some((left, right))
}
