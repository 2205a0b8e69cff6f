//! Standard two-qubit teleportation through two independent copies of the thermal
//! impurity channel.
//!
//! The channel acts on each input qubit as a Pauli channel with probabilities
//! `p_i = tr(E^i rho_ch)`, where `E^0..E^3` project onto `Psi-`, `Phi-`, `Phi+`, `Psi+`.
//! Bell states use `|Psi+-> = (|01> +- |10>)/sqrt2`, `|Phi+-> = (|00> +- |11>)/sqrt2`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::kron;
use crate::xfer::XState;

/// Best average fidelity reachable without entanglement.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Allowed disagreement between the closed-form and Kraus output states.
pub const FORMULA_TOL: f64 = 1e-10;

/// Nodes per axis of the cross-check quadrature for the average fidelity.
pub const QUADRATURE_NODES: usize = 64;

/// Input `cos(theta/2)|10> + e^{i phi} sin(theta/2)|01>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    pub theta: f64,
    pub phi: f64,
}

impl InputState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidParams(format!(
                "input angles theta = {theta}, phi = {phi} outside [0, pi] x [0, 2pi)"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// `|sin theta|`.
    pub fn concurrence(&self) -> f64 {
        self.theta.sin().abs()
    }

    pub fn ket(&self) -> Vector4<Complex64> {
        let (s, c) = (self.theta / 2.0).sin_cos();
        Vector4::new(
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(s, self.phi),
            Complex64::new(c, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn density(&self) -> Matrix4<Complex64> {
        let k = self.ket();
        k * k.adjoint()
    }
}

/// Output state `[[c,0,0,0],[0,f,kappa,0],[0,kappa*,g,0],[0,0,0,c]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutput {
    pub c: f64,
    pub f: f64,
    pub g: f64,
    pub kappa: Complex64,
    pub rho: Matrix4<Complex64>,
}

/// Bell-measurement probabilities `(p0, p1, p2, p3)` of the channel state.
pub fn bell_probabilities(ch: &XState) -> Result<[f64; 4]> {
    ch.validate()?;
    let mid = 0.5 * (ch.r22 + ch.r33);
    let outer = 0.5 * (ch.r11 + ch.r44);
    // r14 = 0 in X form, so Phi+ and Phi- are equally likely
    Ok([mid - ch.r23, outer, outer, mid + ch.r23])
}

fn pauli() -> [Matrix2<Complex64>; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    [
        Matrix2::new(l, o, o, l),
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, c(0.0, -1.0), c(0.0, 1.0), o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// `sum_ij p_i p_j (s_i (x) s_j) rho_in (s_i (x) s_j)`.
pub fn kraus_output(ch: &XState, input: &InputState) -> Result<Matrix4<Complex64>> {
    let p = bell_probabilities(ch)?;
    let rho_in = input.density();
    let sigmas = pauli();
    let mut out = Matrix4::zeros();
    for (i, si) in sigmas.iter().enumerate() {
        for (j, sj) in sigmas.iter().enumerate() {
            let k = kron(si, sj);
            out += (k * rho_in * k).scale(p[i] * p[j]);
        }
    }
    Ok(out)
}

/// Closed-form output state, checked against [`kraus_output`].
pub fn teleport_output(ch: &XState, input: &InputState) -> Result<TeleportOutput> {
    let flip = ch.r11 + ch.r44;
    let keep = ch.r22 + ch.r33;
    let (s, co) = (input.theta / 2.0).sin_cos();
    let c = keep * flip;
    let f = flip * flip * co * co + keep * keep * s * s;
    let g = keep * keep * co * co + flip * flip * s * s;
    let kappa = Complex64::from_polar(2.0 * ch.r23 * ch.r23 * input.theta.sin(), input.phi);
    let zero = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let rho = Matrix4::new(
        re(c),
        zero,
        zero,
        zero, //
        zero,
        re(f),
        kappa,
        zero, //
        zero,
        kappa.conj(),
        re(g),
        zero, //
        zero,
        zero,
        zero,
        re(c),
    );
    let kraus = kraus_output(ch, input)?;
    let diff = (rho - kraus).camax();
    if diff > FORMULA_TOL {
        return Err(Error::FormulaMismatch(diff));
    }
    Ok(TeleportOutput { c, f, g, kappa, rho })
}

/// `C_out = 2 max(2 r23^2 C_in - (r22 + r33)(r11 + r44), 0)`.
pub fn output_concurrence(ch: &XState, input: &InputState) -> f64 {
    let cross = (ch.r22 + ch.r33).abs() * (ch.r11 + ch.r44).abs();
    (2.0 * (2.0 * ch.r23 * ch.r23 * input.concurrence() - cross)).max(0.0)
}

/// Closed-form fidelity `<psi_in| rho_out |psi_in>`.
pub fn fidelity(ch: &XState, input: &InputState) -> f64 {
    let flip = ch.r11 + ch.r44;
    let keep = ch.r22 + ch.r33;
    let sin2 = input.theta.sin().powi(2);
    sin2 / 2.0 * (flip * flip + 4.0 * ch.r23 * ch.r23 - keep * keep) + keep * keep
}

/// Fidelity as the expectation of the Kraus-composed output state.
pub fn fidelity_direct(ch: &XState, input: &InputState) -> Result<f64> {
    let rho = kraus_output(ch, input)?;
    let k = input.ket();
    Ok((k.adjoint() * rho * k)[(0, 0)].re)
}

/// Fidelity averaged over all inputs with the `sin(theta) / 4pi` measure.
pub fn average_fidelity(ch: &XState) -> f64 {
    let flip = ch.r11 + ch.r44;
    let keep = ch.r22 + ch.r33;
    (flip * flip + 4.0 * ch.r23 * ch.r23 - keep * keep) / 3.0 + keep * keep
}

/// `F_A > 2/3`.
pub fn beats_classical(average: f64) -> bool {
    average > CLASSICAL_FIDELITY
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pn_1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn_1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Average fidelity by tensor Gauss-Legendre quadrature of the direct fidelity over
/// `theta in [0, pi]`, `phi in [0, 2pi]`.
pub fn average_fidelity_quadrature(ch: &XState, nodes: usize) -> Result<f64> {
    let (x, w) = gauss_legendre(nodes);
    let mut total = 0.0;
    for (xt, wt) in x.iter().zip(&w) {
        let theta = PI / 2.0 * (xt + 1.0);
        for (xp, wp) in x.iter().zip(&w) {
            let phi = PI * (xp + 1.0);
            // phi = 2pi is allowed here as a quadrature point only
            let input = InputState { theta, phi };
            total += wt * wp * fidelity_direct(ch, &input)? * theta.sin();
        }
    }
    // Jacobians pi/2 and pi, measure 1/(4pi)
    Ok(total * (PI / 2.0) * PI / (4.0 * PI))
}
