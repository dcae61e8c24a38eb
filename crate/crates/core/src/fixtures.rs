//! Checked-in synthetic stand-ins for data known only as plots and summary metrics: a measured-like
//! JSI and a tomography density matrix.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::grid_io::parse_jsi_csv;
use crate::optics::FrequencyGrid;
use crate::polarization::TwoQubitState;
use crate::spectral::JsiGrid;

const MEASURED_JSI_CSV: &str = include_str!("../data/measured_jsi_fixture.csv");
const QST_FIXTURE_JSON: &str = include_str!("../data/qst_fixture.json");

/// Generator settings for the measured-JSI fixture. Wavelengths in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredJsiParams {
    pub samples: usize,
    pub window_nm: (f64, f64),
    pub lobe_centers_nm: (f64, f64),
    /// Intensity FWHM of each lobe along either axis.
    pub lobe_fwhm_nm: f64,
    /// Signal–idler correlation coefficient within a lobe.
    pub correlation: f64,
    /// Signal-axis displacement of the second lobe.
    pub second_lobe_shift_nm: f64,
    pub second_lobe_scale: f64,
    /// Per-axis Gaussian blur FWHM (spectrometer resolution).
    pub blur_fwhm_nm: f64,
    pub significant_digits: usize,
}

impl Default for MeasuredJsiParams {
    fn default() -> Self {
        MeasuredJsiParams {
            samples: 192,
            window_nm: (1520.0, 1600.0),
            lobe_centers_nm: (1548.0, 1572.0),
            lobe_fwhm_nm: 8.0,
            correlation: -0.156,
            second_lobe_shift_nm: 0.60,
            second_lobe_scale: 1.012,
            blur_fwhm_nm: 0.83,
            significant_digits: 6,
        }
    }
}

fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits - 1, v).parse().unwrap()
}

/// Two correlated Gaussian lobes at (λ1, λ2) and (λ2 + shift, λ1), blurred along each axis,
/// scaled to unit peak and rounded.
pub fn generate_measured_jsi(p: &MeasuredJsiParams) -> Result<JsiGrid> {
    let grid = FrequencyGrid::from_wavelength_window(p.window_nm.0 * 1e-9, p.window_nm.1 * 1e-9, p.samples)?;
    let lam: Vec<f64> = grid.signal_wavelengths().iter().map(|l| l * 1e9).collect();
    let n = lam.len();
    let s = p.lobe_fwhm_nm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    let rc = p.correlation;
    let g = |x: f64, y: f64| (-(x * x - 2.0 * rc * x * y + y * y) / (2.0 * s * s * (1.0 - rc * rc))).exp();
    let (c1, c2) = p.lobe_centers_nm;
    let raw = DMatrix::from_fn(n, n, |a, b| {
        g(lam[a] - c1, lam[b] - c2)
            + p.second_lobe_scale * g(lam[a] - c2 - p.second_lobe_shift_nm, lam[b] - c1)
    });
    let bs = p.blur_fwhm_nm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    let mut k = DMatrix::from_fn(n, n, |a, b| (-(lam[a] - lam[b]).powi(2) / (2.0 * bs * bs)).exp());
    for mut row in k.row_iter_mut() {
        let sum = row.sum();
        row /= sum;
    }
    let blurred = &k * raw * k.transpose();
    let peak = blurred.max();
    let out = blurred.map(|v| round_sig(v / peak, p.significant_digits));
    JsiGrid::new(grid, out)
}

/// The checked-in measured-JSI fixture.
pub fn measured_jsi() -> JsiGrid {
    parse_jsi_csv(MEASURED_JSI_CSV, "measured_jsi_fixture.csv").expect("bundled JSI fixture")
}

pub fn measured_jsi_csv() -> &'static str {
    MEASURED_JSI_CSV
}

/// The checked-in tomography fixture state.
pub fn qst_fixture_state() -> TwoQubitState {
    let v: serde_json::Value = serde_json::from_str(QST_FIXTURE_JSON).expect("bundled QST fixture");
    TwoQubitState::from_json(&v).expect("valid QST fixture")
}
