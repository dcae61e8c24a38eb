use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const KTP_SELLMEIER_JSON: &str = include_str!("../../data/ktp_sellmeier.json");

/// Principal dielectric axis of the crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Y,
    Z,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Y => Axis::Z,
            Axis::Z => Axis::Y,
        }
    }
}

/// Anything that can supply phase and group indices along the two crystal axes.
pub trait Dispersion: Sync {
    fn index(&self, axis: Axis, wavelength: f64) -> Result<f64>;
    fn group_index(&self, axis: Axis, wavelength: f64) -> Result<f64>;
}

/// One additive contribution to n² with λ in µm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SellmeierTerm {
    /// s·λ²/(λ² − r)
    ScaledPole { strength: f64, resonance: f64 },
    /// s/(λ² − r)
    Pole { strength: f64, resonance: f64 },
    /// −s·λ²
    Ir { strength: f64 },
}

impl SellmeierTerm {
    fn value(&self, x: f64) -> f64 {
        match *self {
            SellmeierTerm::ScaledPole { strength, resonance } => strength * x / (x - resonance),
            SellmeierTerm::Pole { strength, resonance } => strength / (x - resonance),
            SellmeierTerm::Ir { strength } => -strength * x,
        }
    }

    /// d/d(λ²)
    fn slope(&self, x: f64) -> f64 {
        match *self {
            SellmeierTerm::ScaledPole { strength, resonance } => {
                -strength * resonance / ((x - resonance) * (x - resonance))
            }
            SellmeierTerm::Pole { strength, resonance } => {
                -strength / ((x - resonance) * (x - resonance))
            }
            SellmeierTerm::Ir { strength } => -strength,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SellmeierAxis {
    pub source: String,
    pub constant: f64,
    pub terms: Vec<SellmeierTerm>,
}

impl SellmeierAxis {
    fn n_squared(&self, x: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.value(x)).sum::<f64>()
    }

    fn n_squared_slope(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.slope(x)).sum()
    }
}

#[derive(Debug, Clone, Deserialize)]
struct SellmeierAxes {
    y: SellmeierAxis,
    z: SellmeierAxis,
}

#[derive(Debug, Clone, Deserialize)]
struct SellmeierFile {
    material: String,
    validity_um: [f64; 2],
    reference_temperature_c: f64,
    axes: SellmeierAxes,
}

/// Two-axis Sellmeier model, wavelengths in metres at the API boundary.
#[derive(Debug, Clone)]
pub struct Sellmeier {
    pub material: String,
    pub y: SellmeierAxis,
    pub z: SellmeierAxis,
    /// Validity window in µm.
    pub window_um: (f64, f64),
    pub reference_temperature: f64,
}

impl Sellmeier {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: SellmeierFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("sellmeier data line {}: {e}", e.line())))?;
        Ok(Sellmeier {
            material: f.material,
            y: f.axes.y,
            z: f.axes.z,
            window_um: (f.validity_um[0], f.validity_um[1]),
            reference_temperature: f.reference_temperature_c,
        })
    }

    /// The bundled flux-grown KTP data set.
    pub fn ktp() -> &'static Sellmeier {
        static KTP: OnceLock<Sellmeier> = OnceLock::new();
        KTP.get_or_init(|| Sellmeier::from_json(KTP_SELLMEIER_JSON).expect("bundled KTP data"))
    }

    fn axis(&self, axis: Axis) -> &SellmeierAxis {
        match axis {
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }

    fn check_window(&self, wavelength: f64) -> Result<f64> {
        let um = wavelength * 1e6;
        let (lo, hi) = self.window_um;
        if !um.is_finite() || um < lo - 1e-12 || um > hi + 1e-12 {
            return Err(Error::Domain(format!(
                "wavelength {wavelength:e} m outside the Sellmeier validity window {lo}–{hi} µm"
            )));
        }
        Ok(um)
    }

    /// dn/dλ in 1/m.
    pub fn dn_dlambda(&self, axis: Axis, wavelength: f64) -> Result<f64> {
        let um = self.check_window(wavelength)?;
        let ax = self.axis(axis);
        let x = um * um;
        let n = ax.n_squared(x).sqrt();
        // dn/dλ[1/µm] = λ/n · d(n²)/d(λ²)
        Ok(um / n * ax.n_squared_slope(x) * 1e6)
    }
}

impl Dispersion for Sellmeier {
    fn index(&self, axis: Axis, wavelength: f64) -> Result<f64> {
        let um = self.check_window(wavelength)?;
        Ok(self.axis(axis).n_squared(um * um).sqrt())
    }

    fn group_index(&self, axis: Axis, wavelength: f64) -> Result<f64> {
        let n = self.index(axis, wavelength)?;
        Ok(n - wavelength * self.dn_dlambda(axis, wavelength)?)
    }
}

/// Refractive index of KTP along `axis`. The data set is a fixed room-temperature fit, so
/// `temperature` (°C) is only checked for finiteness.
pub fn refractive_index(axis: Axis, wavelength: f64, temperature: f64) -> Result<f64> {
    if !temperature.is_finite() {
        return Err(Error::InvalidInput("temperature must be finite".into()));
    }
    Sellmeier::ktp().index(axis, wavelength)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_slope_matches_finite_difference() {
        let s = Sellmeier::ktp();
        for axis in [Axis::Y, Axis::Z] {
            for wl in [0.5e-6, 0.78e-6, 1.56e-6, 3.0e-6] {
                let h = 1e-12;
                let fd = (s.index(axis, wl + h).unwrap() - s.index(axis, wl - h).unwrap()) / (2.0 * h);
                let an = s.dn_dlambda(axis, wl).unwrap();
                assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "{axis:?} {wl}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn window_edges_are_inclusive() {
        assert!(refractive_index(Axis::Y, 0.4e-6, 23.0).is_ok());
        assert!(refractive_index(Axis::Z, 3.5e-6, 23.0).is_ok());
        assert!(refractive_index(Axis::Z, 3.6e-6, 23.0).is_err());
    }
}
