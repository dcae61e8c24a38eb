//! Sixteen-setting two-qubit state tomography: forward simulation and maximum-likelihood
//! reconstruction over the Cholesky parameterization ρ = T†T / Tr(T†T).

use std::collections::VecDeque;
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use nalgebra::{Cholesky, DMatrix, DVector, Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarization::{bell_state, metric_report, pauli, BellKind, MetricReport, TwoQubitState};

/// Single-qubit analyzer state for a label letter. R = (H − iV)/√2, L = (H + iV)/√2.
pub fn qubit_state(letter: char) -> Option<Vector2<Complex64>> {
    let s = FRAC_1_SQRT_2;
    let z = |re: f64, im: f64| Complex64::new(re, im);
    Some(match letter {
        'H' => Vector2::new(z(1.0, 0.0), z(0.0, 0.0)),
        'V' => Vector2::new(z(0.0, 0.0), z(1.0, 0.0)),
        'D' => Vector2::new(z(s, 0.0), z(s, 0.0)),
        'A' => Vector2::new(z(s, 0.0), z(-s, 0.0)),
        'R' => Vector2::new(z(s, 0.0), z(0.0, -s)),
        'L' => Vector2::new(z(s, 0.0), z(0.0, s)),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSetting {
    pub label: String,
    pub arm1: Vector2<Complex64>,
    pub arm2: Vector2<Complex64>,
}

impl ProjectorSetting {
    /// Two letters from {H, V, D, A, R, L}, arm 1 first.
    pub fn from_label(label: &str) -> Result<Self> {
        let chars: Vec<char> = label.trim().chars().collect();
        let bad = || Error::Parse(format!("unknown tomography setting label '{label}'"));
        if chars.len() != 2 {
            return Err(bad());
        }
        Ok(ProjectorSetting {
            label: chars.iter().collect(),
            arm1: qubit_state(chars[0]).ok_or_else(bad)?,
            arm2: qubit_state(chars[1]).ok_or_else(bad)?,
        })
    }

    pub fn vector(&self) -> Vector4<Complex64> {
        self.arm1.kronecker(&self.arm2)
    }

    pub fn projector(&self) -> Matrix4<Complex64> {
        let v = self.vector();
        v * v.adjoint()
    }
}

/// {H, V, D, R} ⊗ {H, V, D, R}, arm 1 varying slowest: HH, HV, HD, HR, VH, … , RR.
pub fn standard_16_settings() -> Vec<ProjectorSetting> {
    let letters = ['H', 'V', 'D', 'R'];
    letters
        .iter()
        .flat_map(|a| letters.iter().map(move |b| format!("{a}{b}")))
        .map(|l| ProjectorSetting::from_label(&l).expect("standard label"))
        .collect()
}

fn two_qubit_paulis() -> Vec<Matrix4<Complex64>> {
    let p = pauli();
    let one = Matrix2::identity();
    let single = [one, p[0], p[1], p[2]];
    let mut out = Vec::with_capacity(16);
    for a in &single {
        for b in &single {
            out.push(a.kronecker(b));
        }
    }
    out
}

/// Row k maps Stokes-product coordinates r_ab (ρ = Σ r_ab σ_a⊗σ_b / 4) to p_k.
pub fn design_matrix(settings: &[ProjectorSetting]) -> DMatrix<f64> {
    let basis = two_qubit_paulis();
    DMatrix::from_fn(settings.len(), 16, |k, ab| {
        (settings[k].projector() * basis[ab]).trace().re / 4.0
    })
}

pub fn design_rank(settings: &[ProjectorSetting]) -> usize {
    let b = design_matrix(settings);
    let sv = b.singular_values();
    let max = sv.max();
    sv.iter().filter(|s| **s > 1e-10 * max).count()
}

/// Born-rule probability Tr(ρ · P1⊗P2).
pub fn expected_probability(rho: &TwoQubitState, setting: &ProjectorSetting) -> f64 {
    let v = setting.vector();
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyRecord {
    pub setting: ProjectorSetting,
    pub counts: u64,
    /// Expected number of pairs entering the analyzers for this setting.
    pub acquisition_scale: f64,
}

/// Poisson counts with mean `pairs_per_setting · p`, one ChaCha8 stream per call.
pub fn simulate_counts(
    rho: &TwoQubitState,
    settings: &[ProjectorSetting],
    pairs_per_setting: f64,
    seed: u64,
) -> Result<Vec<TomographyRecord>> {
    if !(pairs_per_setting > 0.0 && pairs_per_setting.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "pairs per setting must be > 0, got {pairs_per_setting}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    settings
        .iter()
        .map(|s| {
            let mean = pairs_per_setting * expected_probability(rho, s);
            let counts = if mean > 0.0 {
                Poisson::new(mean)
                    .map_err(|e| Error::Numeric(format!("poisson mean {mean}: {e}")))?
                    .sample(&mut rng) as u64
            } else {
                0
            };
            Ok(TomographyRecord {
                setting: s.clone(),
                counts,
                acquisition_scale: pairs_per_setting,
            })
        })
        .collect()
}

/// Noise-free records: counts are the rounded expected values.
pub fn expected_counts(
    rho: &TwoQubitState,
    settings: &[ProjectorSetting],
    pairs_per_setting: f64,
) -> Vec<TomographyRecord> {
    settings
        .iter()
        .map(|s| TomographyRecord {
            setting: s.clone(),
            counts: (pairs_per_setting * expected_probability(rho, s)).round() as u64,
            acquisition_scale: pairs_per_setting,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Likelihood {
    #[default]
    Poisson,
    /// Weighted least squares with variance max(n, 1).
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOptions {
    pub max_iter: usize,
    /// Bound on ‖∇L‖·‖x‖ / Σn at convergence.
    pub tol: f64,
    pub likelihood: Likelihood,
    /// Expected accidental coincidences per setting.
    pub background: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        MleOptions {
            max_iter: 5000,
            tol: 1e-8,
            likelihood: Likelihood::Poisson,
            background: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MleResult {
    pub state: TwoQubitState,
    pub neg_log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted step, starting from the initial point.
    pub nll_history: Vec<f64>,
}

/// Linear (Stokes) inversion projected onto the physical states.
pub fn linear_inversion(records: &[TomographyRecord], background: f64) -> Result<TwoQubitState> {
    let settings: Vec<ProjectorSetting> = records.iter().map(|r| r.setting.clone()).collect();
    let b = design_matrix(&settings);
    let p = DVector::from_iterator(
        records.len(),
        records
            .iter()
            .map(|r| (r.counts as f64 - background) / r.acquisition_scale),
    );
    let svd = b.svd(true, true);
    let r = svd
        .solve(&p, 1e-12)
        .map_err(|e| Error::Numeric(format!("linear inversion: {e}")))?;
    let basis = two_qubit_paulis();
    let mut m = Matrix4::zeros();
    for (ab, sigma) in basis.iter().enumerate() {
        m += sigma * Complex64::new(r[ab] / 4.0, 0.0);
    }
    TwoQubitState::project(m)
}

const N_PARAMS: usize = 16;
const LOWER: [(usize, usize); 6] = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];

fn t_of(x: &[f64]) -> Matrix4<Complex64> {
    let mut t = Matrix4::zeros();
    for d in 0..4 {
        t[(d, d)] = Complex64::new(x[d], 0.0);
    }
    for (k, &(i, j)) in LOWER.iter().enumerate() {
        t[(i, j)] = Complex64::new(x[4 + 2 * k], x[5 + 2 * k]);
    }
    t
}

fn x_of(t: &Matrix4<Complex64>) -> Vec<f64> {
    let mut x = vec![0.0; N_PARAMS];
    for d in 0..4 {
        x[d] = t[(d, d)].re;
    }
    for (k, &(i, j)) in LOWER.iter().enumerate() {
        x[4 + 2 * k] = t[(i, j)].re;
        x[5 + 2 * k] = t[(i, j)].im;
    }
    x
}

fn rho_of(x: &[f64]) -> Matrix4<Complex64> {
    let t = t_of(x);
    let m = t.adjoint() * t;
    let tr = m.trace().re;
    m / Complex64::new(tr, 0.0)
}

/// ρ = T†T with T lower triangular, via a Cholesky factor of the index-reversed matrix.
fn cholesky_t(rho: &Matrix4<Complex64>) -> Option<Matrix4<Complex64>> {
    let j = Matrix4::from_fn(|r, c| {
        if r + c == 3 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let l = Cholesky::new(j * rho * j)?.unpack();
    Some((j * l * j).adjoint())
}

struct Problem {
    projectors: Vec<Matrix4<Complex64>>,
    counts: Vec<f64>,
    scale: Vec<f64>,
    background: f64,
    likelihood: Likelihood,
}

impl Problem {
    fn value(&self, x: &[f64]) -> f64 {
        let rho = rho_of(x);
        let mut l = 0.0;
        for k in 0..self.counts.len() {
            let p = (self.projectors[k] * rho).trace().re;
            let mu = self.scale[k] * p + self.background;
            let n = self.counts[k];
            match self.likelihood {
                Likelihood::Poisson => {
                    if n > 0.0 {
                        if mu <= 0.0 {
                            return f64::INFINITY;
                        }
                        l += mu - n * mu.ln();
                    } else {
                        l += mu;
                    }
                }
                Likelihood::Gaussian => {
                    l += (mu - n) * (mu - n) / (2.0 * n.max(1.0));
                }
            }
        }
        l
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let t = t_of(x);
        let m = t.adjoint() * t;
        let tr = m.trace().re;
        let rho = m / Complex64::new(tr, 0.0);
        let mut g = Matrix4::zeros();
        for k in 0..self.counts.len() {
            let p = (self.projectors[k] * rho).trace().re;
            let mu = self.scale[k] * p + self.background;
            let n = self.counts[k];
            let dp = match self.likelihood {
                Likelihood::Poisson => {
                    if n > 0.0 {
                        self.scale[k] * (1.0 - n / mu.max(f64::MIN_POSITIVE))
                    } else {
                        self.scale[k]
                    }
                }
                Likelihood::Gaussian => self.scale[k] * (mu - n) / n.max(1.0),
            };
            g += self.projectors[k] * Complex64::new(dp, 0.0);
        }
        let shift = (g * rho).trace().re;
        let gp = (g - Matrix4::identity() * Complex64::new(shift, 0.0)) / Complex64::new(tr, 0.0);
        let xm = gp * t.adjoint();
        let mut out = vec![0.0; N_PARAMS];
        for d in 0..4 {
            out[d] = 2.0 * xm[(d, d)].re;
        }
        for (k, &(i, j)) in LOWER.iter().enumerate() {
            out[4 + 2 * k] = 2.0 * xm[(j, i)].re;
            out[5 + 2 * k] = -2.0 * xm[(j, i)].im;
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Maximum-likelihood state from tomography records (L-BFGS with Armijo backtracking).
pub fn mle_reconstruct(records: &[TomographyRecord], options: MleOptions) -> Result<MleResult> {
    if records.len() < 16 {
        return Err(Error::InvalidInput(format!(
            "tomography needs at least 16 records, got {}",
            records.len()
        )));
    }
    if records
        .iter()
        .any(|r| !(r.acquisition_scale > 0.0 && r.acquisition_scale.is_finite()))
    {
        return Err(Error::InvalidInput("acquisition scale must be > 0".into()));
    }
    let settings: Vec<ProjectorSetting> = records.iter().map(|r| r.setting.clone()).collect();
    let rank = design_rank(&settings);
    if rank < 16 {
        return Err(Error::InvalidInput(format!(
            "measurement design has rank {rank}, need 16"
        )));
    }
    let problem = Problem {
        projectors: settings.iter().map(|s| s.projector()).collect(),
        counts: records.iter().map(|r| r.counts as f64).collect(),
        scale: records.iter().map(|r| r.acquisition_scale).collect(),
        background: options.background.max(0.0),
        likelihood: options.likelihood,
    };
    let total: f64 = problem.counts.iter().sum::<f64>().max(1.0);

    let lin = linear_inversion(records, problem.background)?;
    let eps = 1e-3;
    let start = lin.matrix() * Complex64::new(1.0 - eps, 0.0)
        + Matrix4::identity() * Complex64::new(eps / 4.0, 0.0);
    let t0 = cholesky_t(&start)
        .ok_or_else(|| Error::Numeric("initial state is not positive definite".into()))?;
    let mut x = x_of(&t0);

    let mut f = problem.value(&x);
    if !f.is_finite() {
        return Err(Error::Numeric("likelihood is not finite at the initial point".into()));
    }
    let mut g = problem.gradient(&x);
    let mut history = vec![f];
    let mut mem: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut converged = false;
    let mut iterations = 0;
    let crit = |g: &[f64], x: &[f64]| norm(g) * norm(x) / total;

    for it in 0..options.max_iter {
        if crit(&g, &x) < options.tol {
            converged = true;
            break;
        }
        iterations = it + 1;
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(mem.len());
        for (s, y, rho) in mem.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        let gamma = match mem.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 0.01 * norm(&x) / norm(&g).max(f64::MIN_POSITIVE),
        };
        q.iter_mut().for_each(|v| *v *= gamma);
        for ((s, y, rho), a) in mem.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            mem.clear();
            let s = 0.01 * norm(&x) / norm(&g).max(f64::MIN_POSITIVE);
            d = g.iter().map(|v| -s * v).collect();
            slope = dot(&g, &d);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let fnew = problem.value(&xn);
            if fnew.is_finite() && fnew <= f + 1e-4 * step * slope {
                accepted = Some((xn, fnew));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fnew)) = accepted else {
            break;
        };
        let gn = problem.gradient(&xn);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            mem.push_back((s, y, 1.0 / sy));
            if mem.len() > 10 {
                mem.pop_front();
            }
        }
        x = xn;
        f = fnew;
        g = gn;
        history.push(f);

        // the objective is scale invariant; keep ‖x‖ near one
        let nx = norm(&x);
        if !(0.25..=4.0).contains(&nx) {
            x.iter_mut().for_each(|v| *v /= nx);
            g.iter_mut().for_each(|v| *v *= nx);
            mem.clear();
        }
    }
    if !converged && crit(&g, &x) < options.tol {
        converged = true;
    }
    let state = TwoQubitState::project(rho_of(&x))?;
    Ok(MleResult {
        state,
        neg_log_likelihood: f,
        iterations,
        converged,
        nll_history: history,
    })
}

/// Purity, concurrence, |Ψ⁻⟩ fidelity and CHSH of a converged reconstruction.
pub fn tomography_report(result: &MleResult) -> Result<MetricReport> {
    if !result.converged {
        return Err(Error::Numeric(format!(
            "reconstruction did not converge after {} iterations",
            result.iterations
        )));
    }
    metric_report(&result.state, &bell_state(BellKind::PsiMinus))
}

#[derive(Debug, Serialize, Deserialize)]
struct RecordRow {
    label: String,
    counts: u64,
    acquisition_scale: f64,
}

pub fn write_records_csv(path: &Path, records: &[TomographyRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for r in records {
        w.serialize(RecordRow {
            label: r.setting.label.clone(),
            counts: r.counts,
            acquisition_scale: r.acquisition_scale,
        })
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_records_csv(path: &Path) -> Result<Vec<TomographyRecord>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut out = Vec::new();
    for (k, row) in rd.deserialize::<RecordRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse(format!("{} record {}: {e}", path.display(), k + 1)))?;
        out.push(TomographyRecord {
            setting: ProjectorSetting::from_label(&row.label)?,
            counts: row.counts,
            acquisition_scale: row.acquisition_scale,
        });
    }
    Ok(out)
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    if let csv::ErrorKind::Io(_) = e.kind() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::Parse(format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let rho = TwoQubitState::werner(0.7).unwrap();
        let recs = simulate_counts(&rho, &standard_16_settings(), 1e4, 3).unwrap();
        for lik in [Likelihood::Poisson, Likelihood::Gaussian] {
            let p = Problem {
                projectors: recs.iter().map(|r| r.setting.projector()).collect(),
                counts: recs.iter().map(|r| r.counts as f64).collect(),
                scale: recs.iter().map(|r| r.acquisition_scale).collect(),
                background: 0.0,
                likelihood: lik,
            };
            let x: Vec<f64> = (0..16).map(|k| 0.3 + 0.05 * k as f64).collect();
            let g = p.gradient(&x);
            for k in 0..16 {
                let h = 1e-6;
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let fd = (p.value(&xp) - p.value(&xm)) / (2.0 * h);
                assert!((fd - g[k]).abs() < 1e-4 * (1.0 + g[k].abs()), "{lik:?} {k}: {fd} vs {}", g[k]);
            }
        }
    }

    #[test]
    fn cholesky_round_trip() {
        let rho = TwoQubitState::werner(0.5).unwrap();
        let t = cholesky_t(rho.matrix()).unwrap();
        let back = t.adjoint() * t;
        assert!((back - rho.matrix()).norm() < 1e-12);
        assert!((0..4).all(|i| (0..4).all(|j| j <= i || t[(i, j)].norm() == 0.0)));
    }
}
