use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    Sech2,
    Gaussian,
}

impl PulseShape {
    /// Peak-to-average factor for a pulse of given intensity FWHM.
    pub fn shape_factor(self) -> f64 {
        match self {
            PulseShape::Sech2 => 0.88,
            PulseShape::Gaussian => 0.94,
        }
    }
}

/// Pump laser. All fields SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpSpec {
    pub center_wavelength: f64,
    /// FWHM of the pump power spectrum, in wavelength.
    pub bandwidth_fwhm: f64,
    pub pulse_shape: PulseShape,
    pub repetition_rate: f64,
    pub average_power: f64,
}

impl Default for PumpSpec {
    fn default() -> Self {
        PumpSpec {
            center_wavelength: 780e-9,
            bandwidth_fwhm: 7e-9,
            pulse_shape: PulseShape::Sech2,
            repetition_rate: 76e6,
            average_power: 0.62,
        }
    }
}

impl PumpSpec {
    pub fn validate(&self) -> Result<()> {
        positive("pump.center_wavelength", self.center_wavelength)?;
        positive("pump.bandwidth_fwhm", self.bandwidth_fwhm)?;
        positive("pump.repetition_rate", self.repetition_rate)?;
        if !(self.average_power >= 0.0 && self.average_power.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "pump.average_power must be >= 0, got {}",
                self.average_power
            )));
        }
        Ok(())
    }

    pub fn center_omega(&self) -> f64 {
        crate::omega_of_wavelength(self.center_wavelength)
    }

    /// Spectral FWHM converted to angular frequency.
    pub fn bandwidth_omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * crate::C_LIGHT * self.bandwidth_fwhm
            / (self.center_wavelength * self.center_wavelength)
    }
}

/// Poled crystal plus the perpendicular unpoled compensator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrystalSpec {
    pub length: f64,
    pub poling_period: f64,
    pub pmf_sigma: f64,
    pub pmf_a: f64,
    /// °C
    pub temperature: f64,
    pub compensation_length: f64,
}

impl Default for CrystalSpec {
    fn default() -> Self {
        CrystalSpec {
            length: 4e-3,
            poling_period: 46e-6,
            pmf_sigma: 333.0,
            pmf_a: 2700.0,
            temperature: 23.0,
            compensation_length: 2e-3,
        }
    }
}

impl CrystalSpec {
    pub fn validate(&self) -> Result<()> {
        positive("crystal.length", self.length)?;
        positive("crystal.poling_period", self.poling_period)?;
        positive("crystal.pmf_sigma", self.pmf_sigma)?;
        if !(self.compensation_length >= 0.0 && self.compensation_length.is_finite()) {
            return Err(Error::InvalidInput(
                "crystal.compensation_length must be >= 0".into(),
            ));
        }
        if !self.pmf_a.is_finite() || !self.temperature.is_finite() {
            return Err(Error::InvalidInput("crystal fields must be finite".into()));
        }
        Ok(())
    }
}

/// Sampling window for the joint spectrum; signal and idler share it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub samples: usize,
    pub window_nm: [f64; 2],
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            samples: 512,
            window_nm: [1500.0, 1620.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceSpec {
    pub pump: PumpSpec,
    pub crystal: CrystalSpec,
    pub grid: GridSpec,
}

impl SourceSpec {
    /// Same crystal design with the sech² pump narrowed to 1.0 nm so that the pump envelope
    /// matches the PMF lobe width and each lobe is close to separable.
    pub fn pump_matched() -> Self {
        let mut s = SourceSpec::default();
        s.pump.bandwidth_fwhm = 1.0e-9;
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.pump.validate()?;
        self.crystal.validate()
    }
}

/// Domain layout of a poled crystal. `boundaries` includes both faces, 0 and L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolingPattern {
    boundaries: Vec<f64>,
    first_sign: i8,
}

impl PolingPattern {
    pub fn new(boundaries: Vec<f64>, first_sign: i8) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidInput(
                "poling pattern needs at least one domain (two boundaries)".into(),
            ));
        }
        if first_sign != 1 && first_sign != -1 {
            return Err(Error::InvalidInput("first domain sign must be +1 or -1".into()));
        }
        if boundaries[0] < 0.0 || boundaries.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("domain boundaries must be finite and >= 0".into()));
        }
        if boundaries.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "domain boundaries must be strictly increasing".into(),
            ));
        }
        Ok(PolingPattern {
            boundaries,
            first_sign,
        })
    }

    /// Unpoled crystal.
    pub fn single_domain(length: f64) -> Result<Self> {
        Self::new(vec![0.0, length], 1)
    }

    /// Periodic grating with 50 % duty cycle; a trailing partial domain is kept.
    pub fn uniform(period: f64, length: f64) -> Result<Self> {
        positive("poling period", period)?;
        positive("crystal length", length)?;
        let half = period / 2.0;
        let n = (length / half).floor() as usize;
        let mut b: Vec<f64> = (0..=n).map(|k| k as f64 * half).collect();
        if length - b[n] > 1e-6 * half {
            b.push(length);
        } else {
            b[n] = length;
        }
        Self::new(b, 1)
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn first_sign(&self) -> i8 {
        self.first_sign
    }

    pub fn length(&self) -> f64 {
        self.boundaries[self.boundaries.len() - 1]
    }

    pub fn domain_count(&self) -> usize {
        self.boundaries.len() - 1
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")))
    }
}
