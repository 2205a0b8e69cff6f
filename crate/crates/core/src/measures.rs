//! Quantum-information quantities of the two-qubit thermal state.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::Result;
use crate::model::ModelParams;
use crate::xfer::{dimer_density_matrix, XState};

/// Default field step of [`qfi_field_derivative`].
pub const DEFAULT_FIELD_STEP: f64 = 1e-3;

/// Relative cutoff on `tau_i + tau_j` below which a QFI term is dropped.
pub const QFI_SUPPORT_TOL: f64 = 1e-12;

/// Every measure of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureBundle {
    pub concurrence: f64,
    pub coherence_l1: f64,
    pub sxsx: f64,
    pub szsz: f64,
    pub qfi: f64,
    pub qfi_db: Option<f64>,
}

impl MeasureBundle {
    pub fn of(st: &XState) -> Self {
        let (sxsx, szsz) = spin_correlators(st);
        Self { concurrence: concurrence_x(st), coherence_l1: l1_coherence(st), sxsx, szsz, qfi: qfi(st), qfi_db: None }
    }
}

/// `C = 2 max(|r23| - sqrt(r11 r44), 0)`.
pub fn concurrence_x(st: &XState) -> f64 {
    let outer = (st.r11 * st.r44).max(0.0).sqrt();
    (2.0 * (st.r23.abs() - outer)).max(0.0)
}

/// Sum of absolute off-diagonal entries, `2 |r23|` for an X state.
pub fn l1_coherence(st: &XState) -> f64 {
    2.0 * st.r23.abs()
}

/// Spin-1/2 operators `S^x`, `S^y`, `S^z`.
pub fn spin_operators() -> [Matrix2<Complex64>; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    [
        Matrix2::new(z, c(0.5, 0.0), c(0.5, 0.0), z),
        Matrix2::new(z, c(0.0, -0.5), c(0.0, 0.5), z),
        Matrix2::new(c(0.5, 0.0), z, z, c(-0.5, 0.0)),
    ]
}

/// `A (x) B` on the `{|00>, |01>, |10>, |11>}` basis.
pub fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

fn complex(st: &XState) -> Matrix4<Complex64> {
    st.to_matrix().map(|x| Complex64::new(x, 0.0))
}

/// `(<S^x S^x>, <S^z S^z>)` by explicit trace against `S^a (x) S^a`.
pub fn spin_correlators(st: &XState) -> (f64, f64) {
    let [sx, _, sz] = spin_operators();
    let rho = complex(st);
    let xx = (rho * kron(&sx, &sx)).trace().re;
    let zz = (rho * kron(&sz, &sz)).trace().re;
    (xx, zz)
}

/// The shortcut expressions `(r22 / 2, 1/4 - r23)` printed for the correlators.
/// They do not follow from the trace and are kept only for side-by-side output.
pub fn printed_correlators(st: &XState) -> (f64, f64) {
    (st.r22 / 2.0, 0.25 - st.r23)
}

/// `F(rho, A) = 2 sum_ij (tau_i - tau_j)^2 / (tau_i + tau_j) |<chi_i|A|chi_j>|^2`.
pub fn qfi_for_observable(rho: &Matrix4<Complex64>, observable: &Matrix4<Complex64>) -> f64 {
    let eig = SymmetricEigen::new(*rho);
    let tau = eig.eigenvalues;
    let cutoff = QFI_SUPPORT_TOL * tau.max().max(0.0);
    let a = eig.eigenvectors.adjoint() * observable * eig.eigenvectors;
    let mut total = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let sum = tau[i] + tau[j];
            if sum <= cutoff {
                continue;
            }
            let diff = tau[i] - tau[j];
            total += diff * diff / sum * a[(i, j)].norm_sqr();
        }
    }
    2.0 * total
}

/// Local observables `sqrt(2) {I, S^x, S^y, S^z}` lifted to `A (x) I + I (x) A`.
pub fn collective_observables() -> [Matrix4<Complex64>; 4] {
    let id = Matrix2::<Complex64>::identity();
    let [sx, sy, sz] = spin_operators();
    [id, sx, sy, sz].map(|a| {
        let a = a.scale(SQRT_2);
        kron(&a, &id) + kron(&id, &a)
    })
}

/// QFI summed over the complete set of local observables.
pub fn qfi(st: &XState) -> f64 {
    qfi_dense(&complex(st))
}

pub fn qfi_dense(rho: &Matrix4<Complex64>) -> f64 {
    collective_observables().iter().map(|obs| qfi_for_observable(rho, obs)).sum()
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    x: f64,
    h: f64,
) -> std::result::Result<f64, E> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// `dF/dB` by central difference through the whole pipeline.
pub fn qfi_field_derivative(p: &ModelParams, step: f64, impurity: bool) -> Result<f64> {
    central_difference(|b| qfi_at(p, b, impurity), p.b, step)
}

/// Richardson-extrapolated `dF/dB` from steps `h` and `h/2`.
pub fn qfi_field_derivative_richardson(p: &ModelParams, step: f64, impurity: bool) -> Result<f64> {
    let coarse = qfi_field_derivative(p, step, impurity)?;
    let fine = qfi_field_derivative(p, step / 2.0, impurity)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn qfi_at(p: &ModelParams, b: f64, impurity: bool) -> Result<f64> {
    Ok(qfi(&dimer_density_matrix(&p.with_field(b), impurity)?))
}
