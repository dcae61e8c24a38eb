//! Simulated measurements: time-of-flight JSI spectroscopy, polarization visibility scans,
//! the multi-pair visibility model with squeezing inversion, and rate bookkeeping.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3, Matrix4, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{FrequencyGrid, JsaGrid};
use crate::polarization::{coincidence_probability, TwoQubitState, VisibilityBasis};
use crate::spectral::JsiGrid;
use crate::wavelength_of_omega;

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_4;
/// Pairs (or pulses) per independently seeded Monte Carlo chunk.
const MC_CHUNK: u64 = 1 << 16;

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunks(n: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    let count = n.div_ceil(MC_CHUNK);
    (0..count)
        .into_par_iter()
        .map(move |c| (c, MC_CHUNK.min(n - c * MC_CHUNK)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FiberSpec {
    pub length: f64,
    /// ps/(nm·km)
    pub dispersion_ps_per_nm_km: f64,
    pub reference_wavelength: f64,
}

impl Default for FiberSpec {
    fn default() -> Self {
        FiberSpec {
            length: 10e3,
            dispersion_ps_per_nm_km: 18.0,
            reference_wavelength: 1560e-9,
        }
    }
}

impl FiberSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) {
            return Err(Error::InvalidInput("fiber length must be > 0".into()));
        }
        if self.dispersion_ps_per_nm_km == 0.0 || !self.dispersion_ps_per_nm_km.is_finite() {
            return Err(Error::InvalidInput("fiber dispersion must be non-zero".into()));
        }
        if !(self.reference_wavelength > 0.0) {
            return Err(Error::InvalidInput("reference wavelength must be > 0".into()));
        }
        Ok(())
    }

    /// Accumulated dispersion D·L in s/m.
    pub fn delay_per_wavelength(&self) -> f64 {
        self.dispersion_ps_per_nm_km * 1e-6 * self.length
    }

    pub fn delay(&self, wavelength: f64) -> f64 {
        self.delay_per_wavelength() * (wavelength - self.reference_wavelength)
    }

    pub fn wavelength_at(&self, delay: f64) -> f64 {
        self.reference_wavelength + delay / self.delay_per_wavelength()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorModel {
    #[default]
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSpec {
    pub jitter_fwhm: f64,
    pub efficiency: f64,
    pub model: DetectorModel,
}

impl Default for DetectorSpec {
    fn default() -> Self {
        DetectorSpec {
            jitter_fwhm: 150e-12,
            efficiency: 0.3,
            model: DetectorModel::Threshold,
        }
    }
}

impl DetectorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.jitter_fwhm >= 0.0 && self.jitter_fwhm.is_finite()) {
            return Err(Error::InvalidInput("detector jitter must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(Error::InvalidInput("detector efficiency must be in [0, 1]".into()));
        }
        Ok(())
    }

    /// Histogram bin width: a third of the jitter, 50 ps without jitter.
    pub fn bin_width(&self) -> f64 {
        if self.jitter_fwhm > 0.0 {
            self.jitter_fwhm / 3.0
        } else {
            50e-12
        }
    }
}

/// Spectral resolution of the time-of-flight spectrometer, m.
pub fn tof_resolution(fiber: &FiberSpec, det: &DetectorSpec) -> f64 {
    det.jitter_fwhm / fiber.delay_per_wavelength().abs()
}

/// Two-dimensional arrival-time histogram; both arms share the binning.
#[derive(Debug, Clone, PartialEq)]
pub struct TofHistogram {
    /// Left edge of the first bin, s.
    pub t0: f64,
    pub bin_width: f64,
    /// `[signal bin, idler bin]`
    pub counts: DMatrix<u64>,
}

impl TofHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        self.t0 + (k as f64 + 0.5) * self.bin_width
    }

    pub fn n_bins(&self) -> usize {
        self.counts.nrows()
    }
}

/// Sample pairs from |f|², map wavelength to delay, add Gaussian jitter and histogram.
pub fn tof_simulate(
    jsa: &JsaGrid,
    fiber: &FiberSpec,
    det: &DetectorSpec,
    n_pairs: u64,
    seed: u64,
) -> Result<TofHistogram> {
    if n_pairs == 0 {
        return Err(Error::InvalidInput("n_pairs must be > 0".into()));
    }
    fiber.validate()?;
    det.validate()?;
    let (ns, ni) = jsa.amplitude.shape();
    // cumulative distribution over cells in row-major order
    let mut cdf = Vec::with_capacity(ns * ni);
    let mut acc = 0.0;
    for a in 0..ns {
        for b in 0..ni {
            acc += jsa.amplitude[(a, b)].norm_sqr();
            cdf.push(acc);
        }
    }
    if !(acc > 0.0) {
        return Err(Error::InvalidInput("cannot sample an all-zero JSA".into()));
    }
    let ts: Vec<f64> = jsa.grid.signal().iter().map(|&w| fiber.delay(wavelength_of_omega(w))).collect();
    let ti: Vec<f64> = jsa.grid.idler().iter().map(|&w| fiber.delay(wavelength_of_omega(w))).collect();

    let sigma = det.jitter_fwhm / FWHM_PER_SIGMA;
    let bw = det.bin_width();
    let pad = 5.0 * sigma + bw;
    let lo = ts.iter().chain(&ti).cloned().fold(f64::INFINITY, f64::min) - pad;
    let hi = ts.iter().chain(&ti).cloned().fold(f64::NEG_INFINITY, f64::max) + pad;
    let nb = ((hi - lo) / bw).ceil() as usize + 1;
    let t0 = lo;
    let bin = |t: f64| -> Option<usize> {
        let k = ((t - t0) / bw).floor();
        (k >= 0.0 && (k as usize) < nb).then_some(k as usize)
    };
    let jitter = if sigma > 0.0 {
        Some(Normal::new(0.0, sigma).map_err(|e| Error::Numeric(e.to_string()))?)
    } else {
        None
    };

    let hist = chunks(n_pairs)
        .map(|(c, n)| {
            let mut rng = chunk_rng(seed, c);
            let mut h = vec![0u64; nb * nb];
            for _ in 0..n {
                let u: f64 = rng.random::<f64>() * acc;
                let cell = cdf.partition_point(|&v| v <= u).min(cdf.len() - 1);
                let (a, b) = (cell / ni, cell % ni);
                let (mut x, mut y) = (ts[a], ti[b]);
                if let Some(j) = &jitter {
                    x += j.sample(&mut rng);
                    y += j.sample(&mut rng);
                }
                if let (Some(p), Some(q)) = (bin(x), bin(y)) {
                    h[p * nb + q] += 1;
                }
            }
            h
        })
        .reduce(
            || vec![0u64; nb * nb],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(TofHistogram {
        t0,
        bin_width: bw,
        counts: DMatrix::from_row_slice(nb, nb, &hist),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TofReconstruction {
    pub jsi: JsiGrid,
    /// Wavelength resolution, m.
    pub resolution: f64,
}

/// Invert the delay map onto a grid uniform in ω (one sample per time bin) including the
/// Jacobian |dt/dω| for each arm.
pub fn tof_reconstruct(
    hist: &TofHistogram,
    fiber: &FiberSpec,
    det: &DetectorSpec,
) -> Result<TofReconstruction> {
    if hist.total() == 0 {
        return Err(Error::InvalidInput("time-of-flight histogram is empty".into()));
    }
    fiber.validate()?;
    let nb = hist.n_bins();
    if nb < 2 {
        return Err(Error::InvalidInput("histogram needs at least 2 bins".into()));
    }
    let l_a = fiber.wavelength_at(hist.bin_center(0));
    let l_b = fiber.wavelength_at(hist.bin_center(nb - 1));
    let (lmin, lmax) = (l_a.min(l_b), l_a.max(l_b));
    if !(lmin > 0.0) {
        return Err(Error::InvalidInput(
            "histogram time range maps to non-positive wavelengths".into(),
        ));
    }
    let grid = FrequencyGrid::from_wavelength_window(lmin, lmax, nb)?;
    let omega = grid.signal().to_vec();
    let dl = fiber.delay_per_wavelength();
    // fractional bin position and |dt/dω| for every grid frequency
    let pos: Vec<(f64, f64)> = omega
        .iter()
        .map(|&w| {
            let t = fiber.delay(wavelength_of_omega(w));
            let x = (t - hist.t0) / hist.bin_width - 0.5;
            let jac = (dl * 2.0 * PI * crate::C_LIGHT / (w * w)).abs();
            (x, jac)
        })
        .collect();
    let sample = |x: f64, y: f64| -> f64 {
        let fx = x.clamp(0.0, (nb - 1) as f64);
        let fy = y.clamp(0.0, (nb - 1) as f64);
        let (i0, j0) = ((fx.floor() as usize).min(nb - 2), (fy.floor() as usize).min(nb - 2));
        let (tx, ty) = (fx - i0 as f64, fy - j0 as f64);
        let c = |i: usize, j: usize| hist.counts[(i, j)] as f64;
        (1.0 - tx) * (1.0 - ty) * c(i0, j0)
            + tx * (1.0 - ty) * c(i0 + 1, j0)
            + (1.0 - tx) * ty * c(i0, j0 + 1)
            + tx * ty * c(i0 + 1, j0 + 1)
    };
    let intensity = DMatrix::from_fn(nb, nb, |a, b| {
        let (x, jx) = pos[a];
        let (y, jy) = pos[b];
        sample(x, y) * jx * jy
    });
    Ok(TofReconstruction {
        jsi: JsiGrid::new(grid, intensity)?,
        resolution: tof_resolution(fiber, det),
    })
}

/// Least-squares fit of a·sin²(bθ + c) + d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// a / (a + 2d)
    pub visibility: f64,
    pub r_square: f64,
}

impl VisibilityFit {
    /// Fit quality gate used for the published scans.
    pub fn passes_quality_gate(&self) -> bool {
        self.r_square >= 0.99
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityScan {
    pub fixed_angle: f64,
    pub sweep_angles: Vec<f64>,
    pub counts: Vec<u64>,
    pub fit: Option<VisibilityFit>,
}

/// Poisson counts as the second polarizer sweeps [0, π] with the first at `fixed_angle`.
pub fn visibility_scan(
    rho: &TwoQubitState,
    fixed_angle: f64,
    n_points: usize,
    pairs_per_point: f64,
    seed: u64,
) -> Result<VisibilityScan> {
    if n_points < 8 {
        return Err(Error::InvalidInput("a visibility scan needs at least 8 points".into()));
    }
    if !(pairs_per_point > 0.0) {
        return Err(Error::InvalidInput("pairs per point must be > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles: Vec<f64> = (0..n_points).map(|k| PI * k as f64 / (n_points - 1) as f64).collect();
    let counts = angles
        .iter()
        .map(|&t| {
            let mean = pairs_per_point * coincidence_probability(rho, fixed_angle, t).max(0.0);
            Ok(if mean > 0.0 {
                Poisson::new(mean)
                    .map_err(|e| Error::Numeric(e.to_string()))?
                    .sample(&mut rng) as u64
            } else {
                0
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(VisibilityScan {
        fixed_angle,
        sweep_angles: angles,
        counts,
        fit: None,
    })
}

fn model(p: &[f64; 4], t: f64) -> f64 {
    let s = (p[1] * t + p[2]).sin();
    p[0] * s * s + p[3]
}

/// Linear start for b = 1 followed by projected Levenberg–Marquardt with a, d ≥ 0 and
/// Poisson weights 1/max(y, 1).
pub fn fit_visibility(scan: &VisibilityScan) -> Result<VisibilityFit> {
    let th = &scan.sweep_angles;
    let y: Vec<f64> = scan.counts.iter().map(|&c| c as f64).collect();
    if th.len() != y.len() {
        return Err(Error::InvalidInput("angles and counts differ in length".into()));
    }
    if th.len() < 8 {
        return Err(Error::InvalidInput("fit needs at least 8 points".into()));
    }
    let span = th.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - th.iter().cloned().fold(f64::INFINITY, f64::min);
    if span < PI / 2.0 - 1e-12 {
        return Err(Error::InvalidInput(
            "sweep must cover at least half a fringe period (π/2)".into(),
        ));
    }
    // y ≈ α + β cos2θ + γ sin2θ
    let mut ata = Matrix3::<f64>::zeros();
    let mut aty = Vector3::<f64>::zeros();
    for (&t, &v) in th.iter().zip(&y) {
        let r = Vector3::new(1.0, (2.0 * t).cos(), (2.0 * t).sin());
        ata += r * r.transpose();
        aty += r * v;
    }
    let sol = ata
        .lu()
        .solve(&aty)
        .ok_or_else(|| Error::Numeric("singular linear start for the fringe fit".into()))?;
    let half = (sol[1] * sol[1] + sol[2] * sol[2]).sqrt();
    let mut p = [
        2.0 * half,
        1.0,
        0.5 * sol[2].atan2(-sol[1]),
        (sol[0] - half).max(0.0),
    ];
    let w: Vec<f64> = y.iter().map(|v| 1.0 / v.max(1.0)).collect();
    let cost = |p: &[f64; 4]| -> f64 {
        th.iter()
            .zip(&y)
            .zip(&w)
            .map(|((&t, &v), &wk)| wk * (model(p, t) - v).powi(2))
            .sum()
    };
    let mut c0 = cost(&p);
    let mut lambda = 1e-3;
    let mut converged = false;
    for _ in 0..500 {
        let mut jtj = Matrix4::<f64>::zeros();
        let mut jtr = Vector4::<f64>::zeros();
        for ((&t, &v), &wk) in th.iter().zip(&y).zip(&w) {
            let arg = p[1] * t + p[2];
            let (s, c) = arg.sin_cos();
            let ds = 2.0 * p[0] * s * c;
            let j = Vector4::new(s * s, ds * t, ds, 1.0);
            let r = model(&p, t) - v;
            jtj += wk * j * j.transpose();
            jtr += wk * j * r;
        }
        // a and d sitting on their bound with the gradient pushing outward are held fixed
        let mut rhs = -jtr;
        for k in [0, 3] {
            if p[k] <= 0.0 && jtr[k] > 0.0 {
                for q in 0..4 {
                    jtj[(k, q)] = 0.0;
                    jtj[(q, k)] = 0.0;
                }
                jtj[(k, k)] = 1.0;
                rhs[k] = 0.0;
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut m = jtj;
            for k in 0..4 {
                m[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = m.lu().solve(&rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [
                (p[0] + step[0]).max(0.0),
                p[1] + step[1],
                p[2] + step[2],
                (p[3] + step[3]).max(0.0),
            ];
            let c1 = cost(&trial);
            if c1 <= c0 {
                let rel = (c0 - c1) / c0.max(1e-300);
                p = trial;
                c0 = c1;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < 1e-13 || step.norm() < 1e-12 * (1.0 + p[0].abs()) {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // no descent direction left at this damping: a stationary point
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged || !c0.is_finite() {
        return Err(Error::Numeric(format!(
            "fringe fit did not converge (weighted residual {c0:e})"
        )));
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = th.iter().zip(&y).map(|(&t, &v)| (model(&p, t) - v).powi(2)).sum();
    let r_square = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let denom = p[0] + 2.0 * p[3];
    if !(denom > 0.0) {
        return Err(Error::Numeric("fitted fringe has zero amplitude and offset".into()));
    }
    Ok(VisibilityFit {
        a: p[0],
        b: p[1],
        c: p[2],
        d: p[3],
        visibility: p[0] / denom,
        r_square,
    })
}

/// Analyzer angles (arm 1, arm 2) of maximum and minimum singlet coincidences.
fn setting_angles(basis: VisibilityBasis) -> ((f64, f64), (f64, f64)) {
    let a = basis.fixed_angle();
    ((a, a + PI / 2.0), (a, a))
}

/// Per-pair joint detection probabilities (p1, p2, q11) behind polarizers at θ1, θ2.
fn pair_probabilities(det: &DetectorSpec, theta1: f64, theta2: f64) -> (f64, f64, f64) {
    let eta = det.efficiency;
    let s = (theta2 - theta1).sin();
    (0.5 * eta, 0.5 * eta, 0.5 * eta * eta * s * s)
}

/// Coincidence probability per pulse for a thermal pair number with mean μ, each pair an
/// independent singlet, threshold detectors.
pub fn multipair_coincidence(mu: f64, det: &DetectorSpec, theta1: f64, theta2: f64) -> f64 {
    let (p1, p2, q11) = pair_probabilities(det, theta1, theta2);
    let q00 = 1.0 - p1 - p2 + q11;
    1.0 - 1.0 / (1.0 + mu * p1) - 1.0 / (1.0 + mu * p2) + 1.0 / (1.0 + mu * (1.0 - q00))
}

pub fn mu_of_r(r: f64) -> f64 {
    r.sinh().powi(2)
}

pub fn r_of_mu(mu: f64) -> f64 {
    mu.sqrt().asinh()
}

/// 10·log10(e^(−2r))
pub fn squeezing_db(r: f64) -> f64 {
    10.0 * (-2.0 * r).exp().log10()
}

/// Closed-form visibility of the multi-pair model.
pub fn multipair_visibility_analytic(r: f64, det: &DetectorSpec, basis: VisibilityBasis) -> f64 {
    let mu = mu_of_r(r);
    if mu == 0.0 {
        return 1.0;
    }
    let ((a1, a2), (b1, b2)) = setting_angles(basis);
    let cmax = multipair_coincidence(mu, det, a1, a2);
    let cmin = multipair_coincidence(mu, det, b1, b2);
    (cmax - cmin) / (cmax + cmin)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultipairResult {
    pub visibility: f64,
    /// Standard error from counting statistics.
    pub std_error: f64,
    pub coincidences_max: u64,
    pub coincidences_min: u64,
}

/// Monte Carlo over pulses. Pulses without pairs never give coincidences, so the pair
/// number is drawn conditioned on n ≥ 1; the ratio defining V is unaffected.
pub fn multipair_visibility(
    r: f64,
    det: &DetectorSpec,
    basis: VisibilityBasis,
    n_trials: u64,
    seed: u64,
) -> Result<MultipairResult> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("squeezing parameter must be >= 0, got {r}")));
    }
    if n_trials < 100_000 {
        return Err(Error::InvalidInput("multipair Monte Carlo needs at least 1e5 trials".into()));
    }
    det.validate()?;
    if det.efficiency == 0.0 {
        return Err(Error::InvalidInput("detector efficiency is zero".into()));
    }
    let mu = mu_of_r(r);
    let x = mu / (1.0 + mu);
    let geo = Geometric::new(1.0 - x).map_err(|e| Error::Numeric(e.to_string()))?;
    let ((a1, a2), (b1, b2)) = setting_angles(basis);
    let pmax = pair_probabilities(det, a1, a2);
    let pmin = pair_probabilities(det, b1, b2);
    let coinc = |rng: &mut ChaCha8Rng, n: u64, (p1, p2, q11): (f64, f64, f64)| -> bool {
        // per-pair outcome: both, arm 1 only, arm 2 only, neither
        let (mut c1, mut c2) = (false, false);
        for _ in 0..n {
            let u: f64 = rng.random();
            if u < q11 {
                c1 = true;
                c2 = true;
            } else if u < p1 {
                c1 = true;
            } else if u < p1 + p2 - q11 {
                c2 = true;
            }
            if c1 && c2 {
                return true;
            }
        }
        false
    };
    let (cmax, cmin) = chunks(n_trials)
        .map(|(c, n)| {
            let mut rng = chunk_rng(seed, c);
            let (mut hi, mut lo) = (0u64, 0u64);
            for _ in 0..n {
                let pairs = 1 + geo.sample(&mut rng);
                hi += coinc(&mut rng, pairs, pmax) as u64;
                lo += coinc(&mut rng, pairs, pmin) as u64;
            }
            (hi, lo)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let (a, b) = (cmax as f64, cmin as f64);
    if !(a + b > 0.0) {
        return Err(Error::Numeric("no coincidences recorded".into()));
    }
    Ok(MultipairResult {
        visibility: (a - b) / (a + b),
        std_error: 2.0 * (a * b / (a + b).powi(3)).sqrt(),
        coincidences_max: cmax,
        coincidences_min: cmin,
    })
}

/// Invert the analytic multi-pair model for r by bisection.
pub fn invert_visibility(v: f64, det: &DetectorSpec, basis: VisibilityBasis) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::InvalidInput(format!("visibility {v} outside (0, 1]")));
    }
    if v == 1.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 4.0);
    if multipair_visibility_analytic(hi, det, basis) > v {
        return Err(Error::Numeric(format!(
            "visibility {v} is below the model range (r ≤ {hi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if multipair_visibility_analytic(mid, det, basis) > v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingPoint {
    /// W
    pub pump_power: f64,
    pub visibility: f64,
    pub r: f64,
    pub mu: f64,
    pub squeezing_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezingEstimate {
    /// r = C·√P with P in W.
    pub c: f64,
    pub basis: VisibilityBasis,
    pub points: Vec<SqueezingPoint>,
}

/// Least-squares C in r = C√P.
pub fn fit_c(points: &[SqueezingPoint]) -> f64 {
    let num: f64 = points.iter().map(|p| p.r * p.pump_power.sqrt()).sum();
    let den: f64 = points.iter().map(|p| p.pump_power).sum();
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

pub fn squeezing_point(power: f64, v: f64, det: &DetectorSpec, basis: VisibilityBasis) -> Result<SqueezingPoint> {
    let r = invert_visibility(v, det, basis).map_err(|e| match e {
        Error::Numeric(m) => Error::Numeric(format!("pump power {:.1} mW: {m}", power * 1e3)),
        Error::InvalidInput(m) => Error::InvalidInput(format!("pump power {:.1} mW: {m}", power * 1e3)),
        other => other,
    })?;
    Ok(SqueezingPoint {
        pump_power: power,
        visibility: v,
        r,
        mu: mu_of_r(r),
        squeezing_db: squeezing_db(r),
    })
}

/// Per-point inversion of (pump power [W], V) and a fit of r = C√P.
pub fn estimate_squeezing(
    visibilities: &[(f64, f64)],
    det: &DetectorSpec,
    basis: VisibilityBasis,
) -> Result<SqueezingEstimate> {
    if visibilities.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "squeezing fit needs at least 3 power points, got {}",
            visibilities.len()
        )));
    }
    let points = visibilities
        .iter()
        .map(|&(p, v)| squeezing_point(p, v, det, basis))
        .collect::<Result<Vec<_>>>()?;
    Ok(SqueezingEstimate {
        c: fit_c(&points),
        basis,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRecord {
    pub singles_1: f64,
    pub singles_2: f64,
    pub coincidences: f64,
    pub pump_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub generation_rate: f64,
    pub heralding_efficiency: f64,
}

pub fn rates_summary(rec: &RateRecord) -> Result<RateSummary> {
    if !(rec.coincidences > 0.0) {
        return Err(Error::InvalidInput("coincidence rate must be > 0".into()));
    }
    if rec.singles_1 < 0.0 || rec.singles_2 < 0.0 {
        return Err(Error::InvalidInput("singles rates must be >= 0".into()));
    }
    if rec.coincidences > rec.singles_1.min(rec.singles_2) {
        return Err(Error::InvalidInput("coincidences exceed the singles rates".into()));
    }
    let prod = rec.singles_1 * rec.singles_2;
    Ok(RateSummary {
        generation_rate: prod / rec.coincidences,
        heralding_efficiency: rec.coincidences / prod.sqrt(),
    })
}

/// Convenience: delay span between two wavelengths, s.
pub fn delay_between(fiber: &FiberSpec, wl_a: f64, wl_b: f64) -> f64 {
    (fiber.delay(wl_b) - fiber.delay(wl_a)).abs()
}
