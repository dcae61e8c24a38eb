//! Joint-spectrum analysis: JSI, swap overlap, Schmidt decomposition, lobe splitting and
//! the lobe-overlap matrix that feeds the polarization density matrix.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{half_max_bounds, FrequencyGrid, JsaGrid};
use crate::{omega_of_wavelength, wavelength_of_omega};

/// Intensity fraction allowed within ±1 nm of a lobe cut.
pub const MAX_NEAR_CUT_FRACTION: f64 = 0.01;

/// Default cut between the designed lobes, m.
pub const DEFAULT_CUT_WAVELENGTH: f64 = 1560e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct JsiGrid {
    pub grid: FrequencyGrid,
    pub intensity: DMatrix<f64>,
}

impl JsiGrid {
    pub fn new(grid: FrequencyGrid, intensity: DMatrix<f64>) -> Result<Self> {
        if intensity.shape() != grid.shape() {
            return Err(Error::InvalidInput(format!(
                "intensity shape {:?} does not match grid {:?}",
                intensity.shape(),
                grid.shape()
            )));
        }
        if intensity.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "JSI must be finite and non-negative".into(),
            ));
        }
        Ok(JsiGrid { grid, intensity })
    }

    pub fn total(&self) -> f64 {
        self.intensity.sum()
    }
}

pub fn jsi_of(jsa: &JsaGrid) -> JsiGrid {
    JsiGrid {
        grid: jsa.grid.clone(),
        intensity: jsa.amplitude.map(|z| z.norm_sqr()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseRule {
    /// Negate every sample with ω_i > ω_s.
    PiBetweenLobes,
    Flat,
}

/// Normalized real amplitude √JSI with the chosen sign rule.
pub fn jsa_from_jsi(jsi: &JsiGrid, rule: PhaseRule) -> Result<JsaGrid> {
    let total = jsi.total() * jsi.grid.cell();
    if !(total > 0.0) {
        return Err(Error::InvalidInput("JSI is identically zero".into()));
    }
    let s = jsi.grid.signal();
    let i = jsi.grid.idler();
    let amp = DMatrix::from_fn(s.len(), i.len(), |a, b| {
        let v = (jsi.intensity[(a, b)] / total).sqrt();
        let flip = rule == PhaseRule::PiBetweenLobes && i[b] > s[a];
        Complex64::new(if flip { -v } else { v }, 0.0)
    });
    let mut out = JsaGrid::new(jsi.grid.clone(), amp)?;
    out.normalized = true;
    Ok(out)
}

/// |⟨f(ω_i, ω_s)|f(ω_s, ω_i)⟩|² for the unit-normalized amplitude.
pub fn overlap_integral(jsa: &JsaGrid) -> Result<f64> {
    if !jsa.grid.is_symmetric() {
        return Err(Error::InvalidInput(
            "overlap integral needs identical signal and idler axes".into(),
        ));
    }
    let f = &jsa.amplitude;
    let n = f.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += f[(i, j)] * f[(j, i)].conj();
        }
    }
    let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("overlap integral of a zero JSA".into()));
    }
    Ok(acc.norm_sqr() / (norm * norm))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResult {
    /// Descending, summing to one.
    pub coefficients: Vec<f64>,
    pub purity: f64,
    pub schmidt_number: f64,
}

/// Schmidt decomposition via the singular values of the amplitude matrix.
pub fn schmidt(jsa: &JsaGrid) -> Result<SchmidtResult> {
    let (ns, ni) = jsa.amplitude.shape();
    let fail = |what: &str| {
        Error::Numeric(format!(
            "{what} (grid {ns}x{ni}, Σ|f|²ΔωΔω = {:.6e})",
            jsa.norm_sq()
        ))
    };
    let sv: Vec<f64> = if jsa.is_real() {
        let re = jsa.amplitude.map(|z| z.re);
        re.try_svd(false, false, f64::EPSILON, 0)
            .ok_or_else(|| fail("SVD did not converge"))?
            .singular_values
            .iter()
            .copied()
            .collect()
    } else {
        jsa.amplitude
            .clone()
            .try_svd(false, false, f64::EPSILON, 0)
            .ok_or_else(|| fail("SVD did not converge"))?
            .singular_values
            .iter()
            .copied()
            .collect()
    };
    schmidt_from_singular_values(sv).ok_or_else(|| fail("zero or non-finite singular values"))
}

fn schmidt_from_singular_values(sv: Vec<f64>) -> Option<SchmidtResult> {
    let mut lam: Vec<f64> = sv.iter().map(|s| s * s).collect();
    let total: f64 = lam.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    lam.iter_mut().for_each(|l| *l /= total);
    lam.sort_by(|a, b| b.total_cmp(a));
    let purity: f64 = lam.iter().map(|l| l * l).sum();
    Some(SchmidtResult {
        coefficients: lam,
        purity,
        schmidt_number: 1.0 / purity,
    })
}

/// The two halves of a JSA separated at a signal-axis cut.
#[derive(Debug, Clone, PartialEq)]
pub struct LobePair {
    /// ω_s above the cut (signal wavelength below it).
    pub f1: JsaGrid,
    pub f2: JsaGrid,
    pub cut_frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lobe {
    F1,
    F2,
}

impl LobePair {
    pub fn lobe(&self, which: Lobe) -> &JsaGrid {
        match which {
            Lobe::F1 => &self.f1,
            Lobe::F2 => &self.f2,
        }
    }
}

/// Fraction of |f|² whose signal wavelength lies within `half_width` of `cut_wavelength`.
pub fn near_cut_fraction(jsa: &JsaGrid, cut_wavelength: f64, half_width: f64) -> f64 {
    let wl = jsa.grid.signal_wavelengths();
    let mut near = 0.0;
    let mut total = 0.0;
    for (a, &l) in wl.iter().enumerate() {
        let row: f64 = jsa.amplitude.row(a).iter().map(|z| z.norm_sqr()).sum();
        total += row;
        if (l - cut_wavelength).abs() <= half_width {
            near += row;
        }
    }
    if total > 0.0 {
        near / total
    } else {
        0.0
    }
}

/// Signal wavelength of the intensity minimum between the two strongest marginal peaks.
pub fn suggest_cut_wavelength(jsa: &JsaGrid) -> Option<f64> {
    let m = signal_marginal(jsa);
    let mut peaks: Vec<usize> = (1..m.len().saturating_sub(1))
        .filter(|&k| m[k] > m[k - 1] && m[k] >= m[k + 1])
        .collect();
    if peaks.len() < 2 {
        return None;
    }
    peaks.sort_by(|a, b| m[*b].total_cmp(&m[*a]));
    let (lo, hi) = (peaks[0].min(peaks[1]), peaks[0].max(peaks[1]));
    let kmin = (lo..=hi).min_by(|a, b| m[*a].total_cmp(&m[*b]))?;
    Some(wavelength_of_omega(jsa.grid.signal()[kmin]))
}

/// Splits at `cut_wavelength` after checking that the cut runs between the lobes.
pub fn split_lobes(jsa: &JsaGrid, cut_wavelength: f64) -> Result<LobePair> {
    let frac = near_cut_fraction(jsa, cut_wavelength, 1e-9);
    if frac > MAX_NEAR_CUT_FRACTION {
        let hint = match suggest_cut_wavelength(jsa) {
            Some(w) => {
                let there = near_cut_fraction(jsa, w, 1e-9);
                if there <= MAX_NEAR_CUT_FRACTION {
                    format!("; try a cut near {:.2} nm", w * 1e9)
                } else {
                    format!(
                        "; no cut separates the lobes, the best is {:.2} nm with {:.2}% \
                         (split_lobes_unchecked skips this check)",
                        w * 1e9,
                        100.0 * there
                    )
                }
            }
            None => String::new(),
        };
        return Err(Error::InvalidInput(format!(
            "cut at {:.2} nm runs through a lobe: {:.2}% of the intensity lies within ±1 nm{hint}",
            cut_wavelength * 1e9,
            100.0 * frac
        )));
    }
    split_lobes_unchecked(jsa, cut_wavelength)
}

/// Splits without the near-cut check.
pub fn split_lobes_unchecked(jsa: &JsaGrid, cut_wavelength: f64) -> Result<LobePair> {
    if !(cut_wavelength > 0.0) {
        return Err(Error::InvalidInput("cut wavelength must be > 0".into()));
    }
    let wc = omega_of_wavelength(cut_wavelength);
    let s = jsa.grid.signal();
    let zero = Complex64::new(0.0, 0.0);
    let (ns, ni) = jsa.amplitude.shape();
    let f1 = DMatrix::from_fn(ns, ni, |a, b| if s[a] > wc { jsa.amplitude[(a, b)] } else { zero });
    let f2 = DMatrix::from_fn(ns, ni, |a, b| if s[a] > wc { zero } else { jsa.amplitude[(a, b)] });
    let mk = |m| JsaGrid {
        grid: jsa.grid.clone(),
        amplitude: m,
        normalized: false,
    };
    Ok(LobePair {
        f1: mk(f1),
        f2: mk(f2),
        cut_frequency: wc,
    })
}

/// f_mn = ∬ g_m g_n* with g_1 = f1 and g_2 = f2 transposed onto f1's coordinates,
/// normalized so that f_11 + f_22 = 1.
pub fn lobe_overlap_matrix(lobes: &LobePair) -> Result<Matrix2<Complex64>> {
    if !lobes.f1.grid.is_symmetric() {
        return Err(Error::InvalidInput(
            "lobe overlap needs identical signal and idler axes".into(),
        ));
    }
    let f1 = &lobes.f1.amplitude;
    let f2 = &lobes.f2.amplitude;
    let n = f1.nrows();
    let f11: f64 = f1.iter().map(|z| z.norm_sqr()).sum();
    let f22: f64 = f2.iter().map(|z| z.norm_sqr()).sum();
    let mut f12 = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            f12 += f1[(i, j)] * f2[(j, i)].conj();
        }
    }
    let total = f11 + f22;
    if !(total > 0.0) {
        return Err(Error::InvalidInput("both lobes are empty".into()));
    }
    let (f11, f22, f12) = (f11 / total, f22 / total, f12 / total);
    if 2.0 * f12.norm() > 2.0 * (f11 * f22).sqrt() + 1e-12 {
        return Err(Error::Numeric(format!(
            "lobe overlap violates Cauchy-Schwarz: |f12| = {} > sqrt(f11 f22) = {}",
            f12.norm(),
            (f11 * f22).sqrt()
        )));
    }
    Ok(Matrix2::new(
        Complex64::new(f11, 0.0),
        f12,
        f12.conj(),
        Complex64::new(f22, 0.0),
    ))
}

/// Schmidt purity of one lobe on its own.
pub fn single_lobe_purity(lobes: &LobePair, which: Lobe) -> Result<f64> {
    let lobe = lobes.lobe(which);
    if !(lobe.norm_sq() > 0.0) {
        return Err(Error::InvalidInput(format!("lobe {which:?} is empty")));
    }
    Ok(schmidt(lobe)?.purity)
}

pub fn signal_marginal(jsa: &JsaGrid) -> Vec<f64> {
    (0..jsa.amplitude.nrows())
        .map(|a| jsa.amplitude.row(a).iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

pub fn idler_marginal(jsa: &JsaGrid) -> Vec<f64> {
    (0..jsa.amplitude.ncols())
        .map(|b| jsa.amplitude.column(b).iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// Centroids and marginal FWHMs of one lobe, in nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeStats {
    pub centroid_signal_nm: f64,
    pub centroid_idler_nm: f64,
    pub fwhm_signal_nm: f64,
    pub fwhm_idler_nm: f64,
    pub weight: f64,
}

pub fn lobe_stats(lobe: &JsaGrid) -> LobeStats {
    let ms = signal_marginal(lobe);
    let mi = idler_marginal(lobe);
    let ws = lobe.grid.signal();
    let wi = lobe.grid.idler();
    let (cs, fs) = marginal_stats(&ms, ws);
    let (ci, fi) = marginal_stats(&mi, wi);
    LobeStats {
        centroid_signal_nm: cs * 1e9,
        centroid_idler_nm: ci * 1e9,
        fwhm_signal_nm: fs * 1e9,
        fwhm_idler_nm: fi * 1e9,
        weight: lobe.norm_sq(),
    }
}

/// Mean wavelength and FWHM of the wavelength density of a marginal sampled uniformly in ω.
fn marginal_stats(m: &[f64], omega: &[f64]) -> (f64, f64) {
    let total: f64 = m.iter().sum();
    let centroid = if total > 0.0 {
        m.iter()
            .zip(omega)
            .map(|(p, &w)| p * wavelength_of_omega(w))
            .sum::<f64>()
            / total
    } else {
        f64::NAN
    };
    // per-wavelength density ∝ per-ω density · ω²
    let dens: Vec<f64> = m.iter().zip(omega).map(|(p, w)| p * w * w).collect();
    let fwhm = match half_max_bounds(&dens) {
        Some((l, r)) => (interp_wavelength(omega, l) - interp_wavelength(omega, r)).abs(),
        None => f64::NAN,
    };
    (centroid, fwhm)
}

fn interp_wavelength(omega: &[f64], x: f64) -> f64 {
    let k = (x.floor() as usize).min(omega.len() - 2);
    let t = x - k as f64;
    wavelength_of_omega(omega[k] + t * (omega[k + 1] - omega[k]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::symmetric((0..n).map(|k| 1.0 + k as f64).collect()).unwrap()
    }

    #[test]
    fn disjoint_product_has_zero_overlap() {
        let g = tiny_grid(8);
        let amp = DMatrix::from_fn(8, 8, |a, b| {
            let ga = if a < 3 { 1.0 } else { 0.0 };
            let hb = if b >= 5 { 1.0 } else { 0.0 };
            Complex64::new(ga * hb, 0.0)
        });
        let f = JsaGrid::new(g, amp).unwrap().into_normalized().unwrap();
        assert_eq!(overlap_integral(&f).unwrap(), 0.0);
    }

    #[test]
    fn equal_orthogonal_modes_have_purity_half() {
        let g = tiny_grid(4);
        let mut amp = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
        amp[(0, 1)] = Complex64::new(1.0, 0.0);
        amp[(2, 3)] = Complex64::new(-1.0, 0.0);
        let f = JsaGrid::new(g, amp).unwrap();
        let s = schmidt(&f).unwrap();
        assert!((s.purity - 0.5).abs() < 1e-12);
        assert!((s.schmidt_number - 2.0).abs() < 1e-12);
    }
}
