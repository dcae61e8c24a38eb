//! Helpers shared by the integration tests: random states and oracles that avoid the
//! library's own code paths.
#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use spdc_studio::polarization::TwoQubitState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cgauss(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// ρ = G G† / tr with G a 4×rank complex Ginibre matrix.
pub fn random_matrix(rng: &mut impl Rng, rank: usize) -> Matrix4<Complex64> {
    let g = DMatrix::from_fn(4, rank, |_, _| cgauss(rng));
    let m = &g * g.adjoint();
    let tr: Complex64 = (0..4).map(|k| m[(k, k)]).sum();
    Matrix4::from_fn(|i, j| m[(i, j)] / tr)
}

pub fn random_state(rng: &mut impl Rng, rank: usize) -> TwoQubitState {
    TwoQubitState::new(random_matrix(rng, rank)).unwrap()
}

/// Haar-ish single-qubit unitary from the QR of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng) -> Matrix2<Complex64> {
    let g = Matrix2::from_fn(|_, _| cgauss(rng));
    g.qr().q()
}

/// Wootters concurrence from the Schur form of the non-Hermitian ρρ̃, without √ρ.
pub fn concurrence_oracle(rho: &Matrix4<Complex64>) -> f64 {
    let sy = Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    );
    let yy = sy.kronecker(&sy);
    let tilde = yy * rho.conjugate() * yy;
    let m = rho * tilde;
    let ev = m.schur().eigenvalues().expect("Schur form of a complex matrix is triangular");
    let mut l: Vec<f64> = ev.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Tr ρ² by a direct double sum.
pub fn purity_oracle(rho: &Matrix4<Complex64>) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += rho[(i, j)].norm_sqr();
        }
    }
    s
}

/// η by explicit quadruple-free double sum over grid indices.
pub fn overlap_oracle(f: &DMatrix<Complex64>) -> f64 {
    let n = f.nrows();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..n {
        for j in 0..n {
            num += f[(i, j)] * f[(j, i)].conj();
            den += f[(i, j)].norm_sqr();
        }
    }
    num.norm_sqr() / (den * den)
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
