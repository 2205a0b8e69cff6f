//! Transfer matrices, partition functions and the reduced state of the impurity dimer.
//!
//! `W` collects host Boltzmann factors and `W~` the impurity ones, both indexed by the
//! nodal pair `(mu_i, mu_{i+1})` with `+` first. For a periodic chain of `N` cells with
//! the impurity anywhere, `Z_N = tr(W~ W^{N-1})` and the impurity reduced density matrix
//! is `tr(P~_{kl} W^{N-1}) / Z_N`, where `P~_{kl}` holds the impurity cell operator
//! elements. By cyclicity the impurity position drops out.
//!
//! All matrices are stored as a mantissa with entries in `[0, 1]` (largest equal to 1)
//! plus a log scale, and the exact logarithm of every Boltzmann factor is kept next to
//! it. Powers are never formed as raw numbers; `Lambda^{N-1}` enters only as a ratio
//! `(Lambda_-/Lambda_+)^{N-1}` or through logarithms.

use nalgebra::{Matrix2, Matrix4};

use crate::error::{Error, Result};
use crate::model::{CellKind, CellSpectra, ModelParams, NodalSector};
use crate::numeric::{log_add_exp, softmax};

const LN_4: f64 = std::f64::consts::LN_2 * 2.0;

/// Two-qubit X state with a real `|01>,|10>` coherence, the only kind of state the
/// impurity dimer can be in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r44: f64,
    pub r23: f64,
}

impl XState {
    pub const TRACE_TOL: f64 = 1e-12;
    pub const PSD_TOL: f64 = 1e-12;

    pub fn maximally_mixed() -> Self {
        Self { r11: 0.25, r22: 0.25, r33: 0.25, r44: 0.25, r23: 0.0 }
    }

    /// `|Psi-> = (|01> - |10>)/sqrt(2)`.
    pub fn singlet() -> Self {
        Self { r11: 0.0, r22: 0.5, r33: 0.5, r44: 0.0, r23: -0.5 }
    }

    /// `|Psi+> = (|01> + |10>)/sqrt(2)`.
    pub fn triplet_zero() -> Self {
        Self { r11: 0.0, r22: 0.5, r33: 0.5, r44: 0.0, r23: 0.5 }
    }

    /// Reads the X entries of a real 4x4 matrix; the `(2,3)` and `(3,2)` entries are averaged.
    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        Self { r11: m[(0, 0)], r22: m[(1, 1)], r33: m[(2, 2)], r44: m[(3, 3)], r23: 0.5 * (m[(1, 2)] + m[(2, 1)]) }
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.r11;
        m[(1, 1)] = self.r22;
        m[(2, 2)] = self.r33;
        m[(3, 3)] = self.r44;
        m[(1, 2)] = self.r23;
        m[(2, 1)] = self.r23;
        m
    }

    pub fn trace(&self) -> f64 {
        self.r11 + self.r22 + self.r33 + self.r44
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mean = 0.5 * (self.r22 + self.r33);
        let half = 0.5 * (self.r22 - self.r33).hypot(2.0 * self.r23);
        let mut ev = [self.r11, self.r44, mean - half, mean + half];
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_finite(&self) -> bool {
        [self.r11, self.r22, self.r33, self.r44, self.r23].iter().all(|v| v.is_finite())
    }

    /// Unit trace and positivity within [`Self::TRACE_TOL`] / [`Self::PSD_TOL`].
    pub fn validate(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NotAState(format!("non-finite entries {self:?}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -Self::PSD_TOL {
            return Err(Error::NotAState(format!("eigenvalue {min}")));
        }
        Ok(())
    }
}

/// Symmetric nonnegative 2x2 transfer matrix `true = m * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTransferMatrix {
    /// Mantissa; index 0 is nodal `+1/2`, index 1 is `-1/2`. Largest entry is 1.
    pub m: Matrix2<f64>,
    pub log_scale: f64,
    /// Exact `ln w(s)` of the three sectors, ordered like [`NodalSector::ALL`].
    pub log_weights: [f64; 3],
}

impl ScaledTransferMatrix {
    pub fn from_log_weights(log_weights: [f64; 3]) -> Self {
        let log_scale = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let [down, mixed, up] = log_weights.map(|lw| (lw - log_scale).exp());
        Self { m: Matrix2::new(up, mixed, mixed, down), log_scale, log_weights }
    }

    pub fn from_weights(w: [f64; 3]) -> Self {
        Self::from_log_weights(w.map(f64::ln))
    }

    /// `w++`, `w+-`, `w--` of the mantissa.
    pub fn entries(&self) -> (f64, f64, f64) {
        (self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 1)])
    }

    pub fn log_entry(&self, sec: NodalSector) -> f64 {
        self.log_weights[sec.index()]
    }

    /// Unscaled matrix. May overflow for extreme parameters; meant for checks.
    pub fn to_dense(&self) -> Matrix2<f64> {
        self.m * self.log_scale.exp()
    }

    /// Product of two scaled matrices, renormalized.
    pub fn mul(&self, other: &Self) -> ScaledProduct {
        ScaledProduct::from(self).mul(&ScaledProduct::from(other))
    }

    /// `W^k` by repeated squaring, `k >= 0`.
    pub fn pow(&self, k: usize) -> ScaledProduct {
        let mut result = ScaledProduct::identity();
        let mut base = ScaledProduct::from(self);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }
}

/// General (not necessarily symmetric) scaled 2x2 product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledProduct {
    pub m: Matrix2<f64>,
    pub log_scale: f64,
}

impl ScaledProduct {
    pub fn identity() -> Self {
        Self { m: Matrix2::identity(), log_scale: 0.0 }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { m: self.m * other.m, log_scale: self.log_scale + other.log_scale }.normalized()
    }

    fn normalized(self) -> Self {
        let max = self.m.amax();
        if max == 0.0 || !max.is_finite() {
            return self;
        }
        Self { m: self.m / max, log_scale: self.log_scale + max.ln() }
    }

    /// `ln tr`, assuming a positive trace.
    pub fn log_trace(&self) -> f64 {
        self.m.trace().ln() + self.log_scale
    }
}

impl From<&ScaledTransferMatrix> for ScaledProduct {
    fn from(w: &ScaledTransferMatrix) -> Self {
        Self { m: w.m, log_scale: w.log_scale }
    }
}

/// Eigenvalues of a transfer-matrix mantissa, `Lambda_+- = (w++ + w-- +- Q) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmEigen {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `sqrt((w++ - w--)^2 + 4 w+-^2)`.
    pub q: f64,
    /// Shared scale: true eigenvalues are `lambda * exp(log_scale)`.
    pub log_scale: f64,
}

impl TmEigen {
    pub fn log_lambda_plus(&self) -> f64 {
        self.lambda_plus.ln() + self.log_scale
    }
}

pub fn tm_eigen(w: &ScaledTransferMatrix) -> TmEigen {
    let (pp, pm, mm) = w.entries();
    let trace = pp + mm;
    let q = (pp - mm).hypot(2.0 * pm);
    let lambda_plus = 0.5 * (trace + q);
    // (tr - Q)/2 cancels when the spectrum is very uneven; det/Lambda_+ is exact there
    let lambda_minus = if q > 0.5 * trace { (pp * mm - pm * pm) / lambda_plus } else { 0.5 * (trace - q) };
    TmEigen { lambda_plus, lambda_minus, q, log_scale: w.log_scale }
}

/// Host and impurity transfer matrices sharing one energy reference.
pub fn transfer_matrices(p: &ModelParams) -> Result<(ScaledTransferMatrix, ScaledTransferMatrix)> {
    let spectra = CellSpectra::new(p)?;
    Ok(transfer_matrices_from(&spectra, CellKind::Impurity))
}

/// `(W, W~)` where the observed cell is of kind `observed`; `Host` gives the
/// homogeneous chain.
fn transfer_matrices_from(spectra: &CellSpectra, observed: CellKind) -> (ScaledTransferMatrix, ScaledTransferMatrix) {
    (
        ScaledTransferMatrix::from_log_weights(spectra.log_weights(CellKind::Host)),
        ScaledTransferMatrix::from_log_weights(spectra.log_weights(observed)),
    )
}

/// Logs of the coefficients `(Q + d, 4 w+-, Q - d)` with `d = w++ - w--`, in units of
/// the mantissa of `W`, ordered like [`NodalSector::ALL`] (that is `--`, `+-`, `++`).
///
/// These are `2Q` times the weights of the projector onto the leading eigenvector of
/// `W`. The small one of `Q +- d` is taken from `(Q+d)(Q-d) = 4 w+-^2` to avoid
/// cancellation.
fn projector_log_coefficients(w: &ScaledTransferMatrix) -> Result<[f64; 3]> {
    let (pp, _, mm) = w.entries();
    let log_pm = w.log_entry(NodalSector::Mixed) - w.log_scale;
    let d = pp - mm;
    let log_q = 0.5 * log_add_exp(2.0 * d.abs().ln(), LN_4 + 2.0 * log_pm);
    if !log_q.is_finite() {
        return Err(Error::DegenerateGap);
    }
    let log_big = log_add_exp(log_q, d.abs().ln());
    let log_small = LN_4 + 2.0 * log_pm - log_big;
    let (log_q_plus_d, log_q_minus_d) = if d >= 0.0 { (log_big, log_small) } else { (log_small, log_big) };
    Ok([log_q_minus_d, LN_4 + log_pm, log_q_plus_d])
}

/// Amplitudes `a`, `d` of `Z_N = a Lambda_+^{N-1} + d Lambda_-^{N-1}`, in units of the
/// mantissas of `W` (eigenvalues) and `W~` (amplitudes).
pub fn partition_amplitudes(w: &ScaledTransferMatrix, w_imp: &ScaledTransferMatrix) -> Result<(f64, f64)> {
    let coef = projector_log_coefficients(w)?;
    let eig = tm_eigen(w);
    let (tpp, tpm, tmm) = w_imp.entries();
    let tilde = [tmm, tpm, tpp];
    let two_q_a: f64 = coef.iter().zip(tilde).map(|(c, t)| c.exp() * t).sum();
    let a = two_q_a / (2.0 * eig.q);
    // d collects the subleading projector: (Q-d) w~++ + (Q+d) w~-- - 4 w+- w~+-
    let two_q_d = coef[0].exp() * tpp + coef[2].exp() * tmm - coef[1].exp() * tpm;
    Ok((a, two_q_d / (2.0 * eig.q)))
}

/// `ln Z_N` of the periodic chain with one impurity cell, `N >= 2`.
pub fn partition_function(p: &ModelParams, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let spectra = CellSpectra::new(p)?;
    let (w, w_imp) = transfer_matrices_from(&spectra, CellKind::Impurity);
    let eig = tm_eigen(&w);
    let ratio = eig.lambda_minus / eig.lambda_plus;
    let powered = ratio.powi((n - 1) as i32);
    let (pp, pm, mm) = w.entries();
    let (a, d) = if pm > 0.0 {
        partition_amplitudes(&w, &w_imp)?
    } else {
        // diagonal W: the eigenvectors are the nodal states themselves
        let (tpp, _, tmm) = w_imp.entries();
        if pp >= mm {
            (tpp, tmm)
        } else {
            (tmm, tpp)
        }
    };
    let total = a + d * powered;
    Ok(total.ln()
        + w_imp.log_scale
        + (n - 1) as f64 * (eig.lambda_plus.ln() + w.log_scale)
        + n as f64 * log_offset(&spectra))
}

/// `ln Lambda_+` of the host transfer matrix in absolute energy units: the free
/// energy per cell is `-T ln Lambda_+` in the thermodynamic limit.
pub fn log_lambda_plus(p: &ModelParams) -> Result<f64> {
    let spectra = CellSpectra::new(p)?;
    let (w, _) = transfer_matrices_from(&spectra, CellKind::Impurity);
    Ok(tm_eigen(&w).log_lambda_plus() + log_offset(&spectra))
}

/// `ln` of the factor that turns shifted weights back into absolute ones.
fn log_offset(spectra: &CellSpectra) -> f64 {
    if spectra.beta == 0.0 {
        0.0
    } else {
        -spectra.beta * spectra.shift
    }
}

/// Unnormalized impurity cell operator `rho~(s)`, X-shaped; its trace is `w~(s)`
/// relative to the shared energy shift.
pub fn cell_density_elements(p: &ModelParams, sec: NodalSector) -> Result<Matrix4<f64>> {
    let spectra = CellSpectra::new(p)?;
    Ok(spectra.cell_operator(CellKind::Impurity, sec))
}

/// Thermodynamic-limit reduced density matrix of the impurity dimer.
pub fn impurity_density_matrix(p: &ModelParams) -> Result<XState> {
    let spectra = CellSpectra::new(p)?;
    limit_density_matrix(&spectra, CellKind::Impurity)
}

/// Reduced density matrix of one dimer of the uniform chain (no impurity anywhere).
pub fn homogeneous_density_matrix(p: &ModelParams) -> Result<XState> {
    let spectra = CellSpectra::new(p)?;
    limit_density_matrix(&spectra, CellKind::Host)
}

/// Reduced state of the observed dimer for `impurity = true` (impurity cell) or
/// `false` (uniform chain).
pub fn dimer_density_matrix(p: &ModelParams, impurity: bool) -> Result<XState> {
    if impurity {
        impurity_density_matrix(p)
    } else {
        homogeneous_density_matrix(p)
    }
}

/// `rho~ = (A + B) / M` with
/// `A + B = (Q + d) rho~(++) + (Q - d) rho~(--) + 4 w+- rho~(+-)` and `M` its trace.
///
/// Each sector contributes `coef(s) w~(s)` times the normalized sector state, so the
/// sum is a softmax over exact log weights and cannot overflow or underflow as a whole.
fn limit_density_matrix(spectra: &CellSpectra, observed: CellKind) -> Result<XState> {
    let (w, w_obs) = transfer_matrices_from(spectra, observed);
    let coef = projector_log_coefficients(&w)?;
    let logits = [0, 1, 2].map(|i| coef[i] + w_obs.log_weights[i]);
    let probs = softmax(logits);
    let mut rho = Matrix4::zeros();
    for sec in NodalSector::ALL {
        rho += probs[sec.index()] * spectra.sector_state(observed, sec);
    }
    let state = XState::from_matrix(&rho);
    debug_assert!((state.trace() - 1.0).abs() < 1e-12, "M != sum of diagonal A + B");
    if !state.is_finite() {
        return Err(Error::NonFinite { quantity: "rho".into(), point: format!("T = {}", 1.0 / spectra.beta) });
    }
    Ok(state)
}

/// The thermodynamic-limit formula `(A + B)/M` evaluated term by term in plain
/// mantissa arithmetic, exactly as written (`A = Q[rho(++) + rho(--)] + 4 w+- rho(+-)`,
/// `B = [rho(++) - rho(--)](w++ - w--)`). Loses accuracy where `Q ~ |w++ - w--|`; used as
/// a cross-check of [`impurity_density_matrix`].
pub fn printed_limit_formula(p: &ModelParams) -> Result<(XState, f64)> {
    let spectra = CellSpectra::new(p)?;
    let (w, w_imp) = transfer_matrices_from(&spectra, CellKind::Impurity);
    let (pp, pm, mm) = w.entries();
    let q = (pp - mm).hypot(2.0 * pm);
    let sector = |sec: NodalSector| {
        (w_imp.log_entry(sec) - w_imp.log_scale).exp() * spectra.sector_state(CellKind::Impurity, sec)
    };
    let (rpp, rpm, rmm) = (sector(NodalSector::Up), sector(NodalSector::Mixed), sector(NodalSector::Down));
    let a = q * (rpp + rmm) + 4.0 * pm * rpm;
    let b = (rpp - rmm) * (pp - mm);
    let (tpp, tpm, tmm) = w_imp.entries();
    let m = q * (tpp + tmm) + 4.0 * pm * tpm + (tpp - tmm) * (pp - mm);
    let numerator = a + b;
    Ok((XState::from_matrix(&(numerator / m)), numerator.trace() / m))
}

/// The 2x2 matrix `P~_{kl}` for each X entry of the impurity cell operator, in units
/// of the `W~` mantissa.
fn impurity_p_matrices(spectra: &CellSpectra, w_imp: &ScaledTransferMatrix, observed: CellKind) -> [Matrix2<f64>; 5] {
    let sectors = NodalSector::ALL
        .map(|sec| (w_imp.log_entry(sec) - w_imp.log_scale).exp() * spectra.sector_state(observed, sec));
    let entry = |r: usize, c: usize| {
        let [down, mixed, up] = sectors.map(|s| s[(r, c)]);
        Matrix2::new(up, mixed, mixed, down)
    };
    [entry(0, 0), entry(1, 1), entry(2, 2), entry(3, 3), entry(1, 2)]
}

/// Diagonalizing matrix `U` of `W` and its inverse, in the closed form
/// `U = [[Lambda_+ - w--, Lambda_- - w--], [w+-, w+-]]`.
///
/// Both `Lambda -- w--` entries are computed in the non-cancelling form. A diagonal
/// `W` (`w+- = 0` after scaling) is already diagonal, so `U = 1` there.
fn closed_form_diagonalizer(w: &ScaledTransferMatrix) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
    let (pp, pm, mm) = w.entries();
    let d = pp - mm;
    let q = d.hypot(2.0 * pm);
    if pm == 0.0 {
        if q == 0.0 && pp != mm {
            return Err(Error::DegenerateGap);
        }
        return Ok(if pp >= mm {
            (Matrix2::identity(), Matrix2::identity())
        } else {
            let swap = Matrix2::new(0.0, 1.0, 1.0, 0.0);
            (swap, swap)
        });
    }
    if q == 0.0 {
        return Err(Error::DegenerateGap);
    }
    let small = 2.0 * pm * pm / (q + d.abs());
    // Lambda_+ - w-- = (d + Q)/2, Lambda_- - w-- = (d - Q)/2
    let (plus, minus) = if d >= 0.0 { (0.5 * (d + q), -small) } else { (small, 0.5 * (d - q)) };
    let u = Matrix2::new(plus, minus, pm, pm);
    let u_inv = Matrix2::new(1.0 / q, -minus / (q * pm), -1.0 / q, plus / (q * pm));
    Ok((u, u_inv))
}

/// Exact reduced density matrix of the impurity dimer for a periodic chain of `n`
/// cells, via `tr(U^-1 P~ U diag(Lambda_+^{N-1}, Lambda_-^{N-1})) / Z_N`.
pub fn finite_n_density_matrix(p: &ModelParams, n: usize) -> Result<XState> {
    finite_n_density_matrix_of(p, n, CellKind::Impurity)
}

pub(crate) fn finite_n_density_matrix_of(p: &ModelParams, n: usize, observed: CellKind) -> Result<XState> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let spectra = CellSpectra::new(p)?;
    let (w, w_imp) = transfer_matrices_from(&spectra, observed);
    let eig = tm_eigen(&w);
    let (u, u_inv) = closed_form_diagonalizer(&w)?;
    let ratio = (eig.lambda_minus / eig.lambda_plus).powi((n - 1) as i32);
    let weigh = |p: &Matrix2<f64>| {
        let t = u_inv * p * u;
        t[(0, 0)] + t[(1, 1)] * ratio
    };
    let z = weigh(&w_imp.m);
    let [r11, r22, r33, r44, r23] = impurity_p_matrices(&spectra, &w_imp, observed).map(|pm| weigh(&pm) / z);
    Ok(XState { r11, r22, r33, r44, r23 })
}

/// Same quantity as [`finite_n_density_matrix`] but from the explicit product
/// `tr(W^{r-1} P~ W^{N-r})` with the impurity at position `r` (1-based).
pub fn finite_n_density_matrix_at(p: &ModelParams, n: usize, r: usize) -> Result<XState> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    if r == 0 || r > n {
        return Err(Error::InvalidParams(format!("impurity position {r} outside 1..={n}")));
    }
    let spectra = CellSpectra::new(p)?;
    let (w, w_imp) = transfer_matrices_from(&spectra, CellKind::Impurity);
    let left = w.pow(r - 1);
    let right = w.pow(n - r);
    let trace = |m: &Matrix2<f64>| {
        let mid = ScaledProduct { m: *m, log_scale: 0.0 };
        let full = left.mul(&mid).mul(&right);
        (full.m.trace(), full.log_scale)
    };
    let (z, z_scale) = trace(&w_imp.m);
    let [r11, r22, r33, r44, r23] = impurity_p_matrices(&spectra, &w_imp, CellKind::Impurity).map(|pm| {
        let (t, scale) = trace(&pm);
        t / z * (scale - z_scale).exp()
    });
    Ok(XState { r11, r22, r33, r44, r23 })
}
