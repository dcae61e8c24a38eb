//! Two-qubit polarization states in the basis (HH, HV, VH, VV) and their entanglement metrics.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn hermitian_part(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Validated 4×4 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix4<Complex64>,
}

impl TwoQubitState {
    /// Validates hermiticity and trace; eigenvalues down to −1e-9 are clipped to zero and
    /// the result renormalized.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("density matrix has non-finite entries".into()));
        }
        let herm = (matrix - matrix.adjoint()).norm();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix is not Hermitian (‖ρ−ρ†‖ = {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidInput(format!("density matrix trace is {tr}, not 1")));
        }
        let h = hermitian_part(&matrix);
        let eig = SymmetricEigen::new(h);
        let min = eig.eigenvalues.min();
        if min < -PSD_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix is not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        if min < 0.0 {
            Ok(Self::from_eigen(&eig))
        } else {
            Ok(TwoQubitState { matrix: h })
        }
    }

    fn from_eigen(eig: &SymmetricEigen<Complex64, nalgebra::U4>) -> Self {
        let vals = eig.eigenvalues.map(|v| v.max(0.0));
        let total = vals.sum();
        let mut m = Matrix4::zeros();
        for k in 0..4 {
            let v = eig.eigenvectors.column(k);
            m += (v * v.adjoint()) * c(vals[k] / total);
        }
        TwoQubitState {
            matrix: hermitian_part(&m),
        }
    }

    /// Hermitian part, clipped to PSD and normalized to unit trace. Errors only on a zero
    /// or non-finite input.
    pub fn project(matrix: Matrix4<Complex64>) -> Result<Self> {
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("cannot project a non-finite matrix".into()));
        }
        let h = hermitian_part(&matrix);
        let eig = SymmetricEigen::new(h);
        if !(eig.eigenvalues.map(|v| v.max(0.0)).sum() > 0.0) {
            return Err(Error::Numeric("matrix has no positive part".into()));
        }
        Ok(Self::from_eigen(&eig))
    }

    pub fn from_pure(psi: Vector4<Complex64>) -> Result<Self> {
        let n = psi.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        let v = psi / c(n);
        Self::new(v * v.adjoint())
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState {
            matrix: Matrix4::identity() * c(0.25),
        }
    }

    /// p·|Ψ⁻⟩⟨Ψ⁻| + (1 − p)·I/4
    pub fn werner(p: f64) -> Result<Self> {
        if !(-1.0 / 3.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("Werner weight {p} outside [-1/3, 1]")));
        }
        let psi = bell_state(BellKind::PsiMinus).matrix;
        Self::new(psi * c(p) + Matrix4::identity() * c((1.0 - p) / 4.0))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.matrix).eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// JSON value: 4×4 array of [re, im] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..4)
            .map(|i| (0..4).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect();
        serde_json::json!({ "basis": ["HH", "HV", "VH", "VV"], "matrix": rows })
    }

    /// Accepts either the bare 4×4 array or an object with a `matrix` key.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let m = value.get("matrix").unwrap_or(value);
        let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(m.clone())
            .map_err(|e| Error::Parse(format!("density matrix: {e}")))?;
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(Error::Parse("density matrix must be 4x4".into()));
        }
        let mut out = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] = Complex64::new(rows[i][j][0], rows[i][j][1]);
            }
        }
        Self::new(out)
    }

    /// (U⊗V) ρ (U⊗V)†
    pub fn local_unitary(&self, u: &Matrix2<Complex64>, v: &Matrix2<Complex64>) -> Self {
        let k = u.kronecker(v);
        let m = k * self.matrix * k.adjoint();
        TwoQubitState {
            matrix: hermitian_part(&m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

/// Bell projector; |Ψ⁻⟩ = (|HV⟩ − |VH⟩)/√2.
pub fn bell_state(kind: BellKind) -> TwoQubitState {
    let s = FRAC_1_SQRT_2;
    let v = match kind {
        BellKind::PsiMinus => Vector4::new(0.0, s, -s, 0.0),
        BellKind::PsiPlus => Vector4::new(0.0, s, s, 0.0),
        BellKind::PhiMinus => Vector4::new(s, 0.0, 0.0, -s),
        BellKind::PhiPlus => Vector4::new(s, 0.0, 0.0, s),
    }
    .map(c);
    TwoQubitState {
        matrix: v * v.adjoint(),
    }
}

/// Density matrix of the ADF output: only the {HV, VH} block is populated,
/// block = [[f11, f21], [f12, f22]].
pub fn rho_from_lobes(f: &Matrix2<Complex64>) -> Result<TwoQubitState> {
    let (f11, f22, f12, f21) = (f[(0, 0)], f[(1, 1)], f[(0, 1)], f[(1, 0)]);
    if (f11.re + f22.re - 1.0).abs() > 1e-6 || f11.im.abs() > 1e-9 || f22.im.abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "lobe weights must be real and sum to one, got f11 = {f11}, f22 = {f22}"
        )));
    }
    if (f12 - f21.conj()).norm() > 1e-9 {
        return Err(Error::InvalidInput("f12 must equal conj(f21)".into()));
    }
    let tr = f11.re + f22.re;
    let mut m = Matrix4::zeros();
    m[(1, 1)] = c(f11.re / tr);
    m[(2, 2)] = c(f22.re / tr);
    m[(1, 2)] = f21 / tr;
    m[(2, 1)] = f12 / tr;
    TwoQubitState::new(m).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::InvalidInput(format!("inconsistent f_mn: {msg}")),
        other => other,
    })
}

pub fn purity(rho: &TwoQubitState) -> f64 {
    (rho.matrix * rho.matrix).trace().re
}

fn sigma_y_y() -> Matrix4<Complex64> {
    let sy = Matrix2::new(c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0));
    sy.kronecker(&sy)
}

fn hermitian_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(hermitian_part(&m));
    let mut out = Matrix4::zeros();
    for k in 0..4 {
        let v = eig.eigenvectors.column(k);
        out += (v * v.adjoint()) * c(eig.eigenvalues[k].max(0.0).sqrt());
    }
    out
}

/// Wootters concurrence, from the eigenvalues of the Hermitian √ρ ρ̃ √ρ.
pub fn concurrence(rho: &TwoQubitState) -> Result<f64> {
    let yy = sigma_y_y();
    let tilde = yy * rho.matrix.conjugate() * yy;
    let s = hermitian_sqrt(&rho.matrix);
    let r = s * tilde * s;
    let eig = SymmetricEigen::new(hermitian_part(&r));
    let mut l: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    if l.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("concurrence eigenvalues are not finite".into()));
    }
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Uhlmann fidelity (Tr√(√ρ τ √ρ))²; reduces to Tr(ρτ) when either state is pure.
pub fn fidelity(rho: &TwoQubitState, target: &TwoQubitState) -> f64 {
    let overlap = (rho.matrix * target.matrix).trace().re;
    if (purity(target) - 1.0).abs() < 1e-12 || (purity(rho) - 1.0).abs() < 1e-12 {
        return overlap.clamp(0.0, 1.0);
    }
    let s = hermitian_sqrt(&rho.matrix);
    let inner = s * target.matrix * s;
    let eig = SymmetricEigen::new(hermitian_part(&inner));
    let t: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).sum();
    (t * t).clamp(0.0, 1.0)
}

pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0)),
        Matrix2::new(c(0.0), -i, i, c(0.0)),
        Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0)),
    ]
}

/// T_ij = Tr(ρ σ_i⊗σ_j)
pub fn correlation_matrix(rho: &TwoQubitState) -> Matrix3<f64> {
    let p = pauli();
    Matrix3::from_fn(|i, j| (rho.matrix * p[i].kronecker(&p[j])).trace().re)
}

/// Maximal CHSH value over analyzer settings (Horodecki).
pub fn chsh_max(rho: &TwoQubitState) -> f64 {
    let t = correlation_matrix(rho);
    let mut m: Vec<f64> = SymmetricEigen::new(t.transpose() * t).eigenvalues.iter().copied().collect();
    m.sort_by(|a, b| b.total_cmp(a));
    2.0 * (m[0].max(0.0) + m[1].max(0.0)).sqrt()
}

/// E(θ1, θ2) for linear analyzers in the H/V–D/A plane.
pub fn correlation(rho: &TwoQubitState, theta1: f64, theta2: f64) -> f64 {
    let p = pauli();
    let obs = |t: f64| p[2] * c((2.0 * t).cos()) + p[0] * c((2.0 * t).sin());
    (rho.matrix * obs(theta1).kronecker(&obs(theta2))).trace().re
}

/// |E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)| at analyzer angles a = 0, a′ = 45°,
/// b = 22.5°, b′ = 67.5°.
pub fn chsh_fixed_angles(rho: &TwoQubitState) -> f64 {
    let (a, ap, b, bp) = (0.0, PI / 4.0, PI / 8.0, 3.0 * PI / 8.0);
    (correlation(rho, a, b) - correlation(rho, a, bp)
        + correlation(rho, ap, b)
        + correlation(rho, ap, bp))
    .abs()
}

fn linear(theta: f64) -> Vector2<Complex64> {
    Vector2::new(c(theta.cos()), c(theta.sin()))
}

/// Tr(ρ · P(θ1)⊗P(θ2)) for linear polarizers.
pub fn coincidence_probability(rho: &TwoQubitState, theta1: f64, theta2: f64) -> f64 {
    let v = linear(theta1).kronecker(&linear(theta2));
    (v.adjoint() * rho.matrix * v)[(0, 0)].re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VisibilityBasis {
    HV,
    DA,
}

impl VisibilityBasis {
    pub fn fixed_angle(self) -> f64 {
        match self {
            VisibilityBasis::HV => 0.0,
            VisibilityBasis::DA => PI / 4.0,
        }
    }
}

/// Fringe visibility as the second analyzer rotates with the first fixed at `theta_fixed`.
pub fn visibility_at(rho: &TwoQubitState, theta_fixed: f64) -> Result<f64> {
    // p(θ) = v(θ)ᵀ Re(M) v(θ) with M the arm-2 block conditioned on arm 1
    let a = linear(theta_fixed);
    let mut m = Matrix2::<f64>::zeros();
    for j in 0..2 {
        for l in 0..2 {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for k in 0..2 {
                    s += a[i].conj() * rho.matrix[(2 * i + j, 2 * k + l)] * a[k];
                }
            }
            m[(j, l)] = s.re;
        }
    }
    let m = 0.5 * (m + m.transpose());
    let e = SymmetricEigen::new(m).eigenvalues;
    let (lo, hi) = (e.min(), e.max());
    if !(hi + lo > 1e-15) {
        return Err(Error::Numeric(format!(
            "no coincidences with the first analyzer at {theta_fixed} rad"
        )));
    }
    Ok((hi - lo) / (hi + lo))
}

pub fn predicted_visibility(rho: &TwoQubitState, basis: VisibilityBasis) -> Result<f64> {
    visibility_at(rho, basis.fixed_angle())
}

/// ½ Σ|λ_k(ρ − σ)|
pub fn trace_distance(a: &TwoQubitState, b: &TwoQubitState) -> f64 {
    let d = a.matrix - b.matrix;
    let eig = SymmetricEigen::new(hermitian_part(&d));
    0.5 * eig.eigenvalues.iter().map(|v| v.abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub purity: f64,
    pub concurrence: f64,
    pub fidelity_to_target: f64,
    pub chsh_s: f64,
}

pub fn metric_report(rho: &TwoQubitState, target: &TwoQubitState) -> Result<MetricReport> {
    Ok(MetricReport {
        purity: purity(rho),
        concurrence: concurrence(rho)?,
        fidelity_to_target: fidelity(rho, target),
        chsh_s: chsh_max(rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_anticorrelated_in_every_linear_basis() {
        let s = bell_state(BellKind::PsiMinus);
        for t in [0.0, 0.3, PI / 4.0, 1.0] {
            assert!(coincidence_probability(&s, t, t).abs() < 1e-15);
            assert!((correlation(&s, t, t) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_angle_chsh_is_tsirelson_for_singlet() {
        let s = bell_state(BellKind::PsiMinus);
        assert!((chsh_fixed_angles(&s) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn small_negative_eigenvalue_is_clipped() {
        let mut m = bell_state(BellKind::PsiMinus).matrix;
        m[(0, 0)] = c(-5e-10);
        m[(1, 1)] += c(5e-10);
        let s = TwoQubitState::new(m).unwrap();
        assert!(s.eigenvalues().iter().all(|v| *v >= -1e-15));
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}
