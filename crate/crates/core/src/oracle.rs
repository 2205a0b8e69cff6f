//! Independent reference implementations used to check the fast paths.
//!
//! [`brute_force_density_matrix`] sums over every periodic nodal configuration and
//! diagonalizes each cell with a generic dense eigensolver, so it shares nothing with
//! the transfer-matrix route except the Hamiltonian blocks. [`wootters_concurrence`]
//! works on any two-qubit state, not only X states.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{dimer_block, CellKind, ModelParams, NodalSector};
use crate::numeric::log_sum_exp;
use crate::xfer::XState;

/// Enumeration cost is `2^N`.
pub const MAX_ENUMERATION_N: usize = 14;

/// Negative eigenvalues of the Wootters product above this magnitude are rejected
/// as noise-free; below it they are clamped to zero.
pub const R_CLAMP: f64 = 1e-12;

const STATE_TOL: f64 = 1e-12;

/// Dense Hermitian two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTwoQubitState {
    m: Matrix4<Complex64>,
}

impl DenseTwoQubitState {
    /// Validates Hermiticity, unit trace and positivity to `1e-12`.
    pub fn new(m: Matrix4<Complex64>) -> Result<Self> {
        let herm = (m - m.adjoint()).camax();
        if herm > STATE_TOL {
            return Err(Error::NotAState(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let min = SymmetricEigen::new(m).eigenvalues.min();
        if min < -STATE_TOL {
            return Err(Error::NotAState(format!("eigenvalue {min:.3e}")));
        }
        Ok(Self { m })
    }

    pub fn from_xstate(st: &XState) -> Result<Self> {
        Self::new(st.to_matrix().map(|x| Complex64::new(x, 0.0)))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.m
    }
}

fn sigma_y_sigma_y() -> Matrix4<Complex64> {
    // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1)
    let mut m = Matrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// `C = max(0, l1 - l2 - l3 - l4)` with `l_i` the descending square roots of the
/// eigenvalues of `R = rho (sy sy) rho* (sy sy)`.
///
/// `R` is similar to the Hermitian `sqrt(rho) (sy sy) rho* (sy sy) sqrt(rho)`, whose
/// eigenvalues are computed instead.
pub fn wootters_concurrence(rho: &DenseTwoQubitState) -> Result<f64> {
    let eig = SymmetricEigen::new(rho.m);
    let sqrt_vals = eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let yy = sigma_y_sigma_y();
    let flipped = yy * rho.m.conjugate() * yy;
    let h = sqrt_rho * flipped * sqrt_rho;
    let h = (h + h.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    for v in &mut vals {
        if *v < -R_CLAMP {
            return Err(Error::NotAState(format!("R has eigenvalue {v:.3e}")));
        }
        *v = v.max(0.0).sqrt();
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok((vals[0] - vals[1] - vals[2] - vals[3]).clamp(0.0, 1.0))
}

/// Cell data for the enumeration: per sector, `ln w(s)` and the normalized dimer
/// state, both from a dense eigensolver.
struct EnumCell {
    log_weight: [f64; 3],
    state: [Matrix4<f64>; 3],
}

fn enum_cell(p: &ModelParams, kind: CellKind) -> EnumCell {
    let beta = p.beta();
    let mut log_weight = [0.0; 3];
    let mut state = [Matrix4::zeros(); 3];
    for sec in NodalSector::ALL {
        let eig = SymmetricEigen::new(dimer_block(p, sec, kind));
        let x: Vec<f64> = eig.eigenvalues.iter().map(|e| if beta == 0.0 { 0.0 } else { -beta * e }).collect();
        let norm = log_sum_exp(&x);
        let mut rho = Matrix4::zeros();
        for (k, xk) in x.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            rho += (xk - norm).exp() * v * v.transpose();
        }
        log_weight[sec.index()] = norm;
        state[sec.index()] = rho;
    }
    EnumCell { log_weight, state }
}

/// Sector of the bond between nodal spins `a` and `b` (bit set = spin up).
fn bond_sector(a: bool, b: bool) -> usize {
    match (a, b) {
        (true, true) => NodalSector::Up.index(),
        (false, false) => NodalSector::Down.index(),
        _ => NodalSector::Mixed.index(),
    }
}

/// Log weights of each of the `2^N` periodic configurations with the impurity on the
/// bond between nodes 0 and 1, together with that bond's sector.
fn enumerate(p: &ModelParams, n: usize) -> Result<(EnumCell, Vec<(f64, usize)>)> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge(n));
    }
    p.validate()?;
    let host = enum_cell(p, CellKind::Host);
    let imp = enum_cell(p, CellKind::Impurity);
    let configs = (0u32..1 << n)
        .map(|bits| {
            let spin = |i: usize| bits >> (i % n) & 1 == 1;
            let imp_sector = bond_sector(spin(0), spin(1));
            let mut lw = imp.log_weight[imp_sector];
            for i in 1..n {
                lw += host.log_weight[bond_sector(spin(i), spin(i + 1))];
            }
            (lw, imp_sector)
        })
        .collect();
    Ok((imp, configs))
}

/// Reduced impurity density matrix of a periodic chain of `n <= 14` cells by explicit
/// enumeration of all nodal configurations.
pub fn brute_force_density_matrix(p: &ModelParams, n: usize) -> Result<XState> {
    let (imp, configs) = enumerate(p, n)?;
    let max = configs.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let mut rho = Matrix4::zeros();
    let mut z = 0.0;
    for (lw, sec) in configs {
        let weight = (lw - max).exp();
        rho += weight * imp.state[sec];
        z += weight;
    }
    Ok(XState::from_matrix(&(rho / z)))
}

/// `ln Z_N` by enumeration, in absolute energy units.
pub fn brute_force_log_partition(p: &ModelParams, n: usize) -> Result<f64> {
    let (_, configs) = enumerate(p, n)?;
    let lws: Vec<f64> = configs.iter().map(|c| c.0).collect();
    Ok(log_sum_exp(&lws))
}
