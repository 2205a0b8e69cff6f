//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use impurity_chain::cli::config::{Axis, AxisParam, Measurement, Quantity, SweepConfig};
use impurity_chain::cli::finders::{find_critical_field, threshold_brackets, CriticalTarget};
use impurity_chain::cli::{csv_string, run_sweep};
use impurity_chain::measures::{collective_observables, concurrence_x, qfi, qfi_dense};
use impurity_chain::model::maximal_entanglement_field;
use impurity_chain::oracle::{brute_force_density_matrix, wootters_concurrence, DenseTwoQubitState};
use impurity_chain::teleport::{
    average_fidelity, average_fidelity_quadrature, kraus_output, teleport_output, CLASSICAL_FIDELITY, QUADRATURE_NODES,
};
use impurity_chain::xfer::{dimer_density_matrix, finite_n_density_matrix, log_lambda_plus, partition_function};
use impurity_chain::{InputState, ModelParams, XState};
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn impurity(j0: f64, t: f64) -> ModelParams {
    ModelParams::fe_mn_cu().with_gamma(-0.8).with_j0(j0).with_delta(0.5).with_temperature(t)
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn criterion_1() -> Outcome {
    let p = impurity(1.0, 0.01);
    let analytic = maximal_entanglement_field(&p);
    let formula = p.j0 / ((p.g2 - p.g3) * (1.0 + p.gamma));
    let b = find_critical_field(&p, true, 0.0, 3.0, CriticalTarget::MaxConcurrence, 1e-3).map_err(|e| e.to_string())?;
    let c = concurrence_x(&dimer_density_matrix(&p.with_field(b), true).map_err(|e| e.to_string())?);
    check(
        (b - 1.282).abs() <= 0.002 && c >= 0.99 && (analytic - formula).abs() < 1e-6 && (b - analytic).abs() < 1e-3,
        format!("B_max = {b:.5}, C = {c:.6}, analytic B* = {analytic:.6}"),
    )
}

fn criterion_2() -> Outcome {
    let p = impurity(1.0, 0.05);
    let f = |q: &ModelParams, b: f64| -> Result<f64, String> {
        Ok(qfi(&dimer_density_matrix(&q.with_field(b), true).map_err(|e| e.to_string())?))
    };
    let mut max = 0.0f64;
    for b in grid(0.0, 3.0, 601) {
        max = max.max(f(&p, b)?);
    }
    let at = f(&p, 1.282)?;
    let dip = at <= 0.05 * max;
    let peaks: Vec<f64> = [0.7, 1.0]
        .iter()
        .map(|&j0| find_critical_field(&impurity(j0, 0.05), true, 0.1, 1.0, CriticalTarget::DqfiPeak, 1e-3))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let agree = (peaks[0] - peaks[1]).abs() <= 0.02;
    check(
        dip && agree,
        format!(
            "F(1.282) = {at:.3e} vs max {max:.4} [{}]; |dF/dB| peak at B = {:.4} (J0 = 0.7) and {:.4} (J0 = 1) [{}]",
            if dip { "ok" } else { "fail" },
            peaks[0],
            peaks[1],
            if agree { "ok" } else { "fail" }
        ),
    )
}

fn criterion_3() -> Outcome {
    let at = average_fidelity(
        &dimer_density_matrix(&impurity(1.0, 0.01).with_field(1.282), true).map_err(|e| e.to_string())?,
    );
    let mut interval: Option<(f64, f64)> = None;
    for b in grid(0.0, 3.0, 601) {
        let imp = average_fidelity(
            &dimer_density_matrix(&impurity(1.0, 0.01).with_field(b), true).map_err(|e| e.to_string())?,
        );
        let host = average_fidelity(
            &dimer_density_matrix(&impurity(1.0, 0.01).with_gamma(0.0).with_field(b), false)
                .map_err(|e| e.to_string())?,
        );
        if imp > CLASSICAL_FIDELITY && host < CLASSICAL_FIDELITY {
            interval = Some(interval.map_or((b, b), |(lo, _)| (lo, b)));
        }
    }
    let shown = interval.map_or("none".to_string(), |(lo, hi)| format!("[{lo:.3}, {hi:.3}]"));
    check(at >= 0.99 && interval.is_some(), format!("F_A(1.282) = {at:.6}; impurity > 2/3 > uniform on B in {shown}"))
}

fn random_params(rng: &mut StdRng) -> ModelParams {
    ModelParams {
        j: rng.gen_range(0.5..2.0),
        delta: rng.gen_range(-1.0..3.0),
        j0: rng.gen_range(0.0..2.0),
        g1: 1.2,
        g2: 5.0,
        g3: 1.1,
        gamma: rng.gen_range(-1.0..1.0),
        b: rng.gen_range(0.0..3.0),
        t: rng.gen_range(0.05..5.0),
    }
}

fn max_diff(a: &XState, b: &XState) -> f64 {
    (a.to_matrix() - b.to_matrix()).amax()
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let n = rng.gen_range(2..=12);
        let tm = finite_n_density_matrix(&p, n).map_err(|e| e.to_string())?;
        let bf = brute_force_density_matrix(&p, n).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(&tm, &bf));
    }
    // gated on the reference couplings; near B = 0 at J0 = 1.7 the two Ising orderings are
    // almost degenerate and the finite-size term (L-/L+)^N is still ~1e-3 at N = 30
    let limit_gap = |j0s: &[f64]| -> Result<f64, String> {
        let mut worst = 0.0f64;
        for &t in &[0.2, 0.5, 1.0, 2.0, 5.0] {
            for delta in [0.0, 0.5, 1.0, 2.0] {
                for &j0 in j0s {
                    for gamma in [0.0, -0.8] {
                        for b in grid(0.0, 3.0, 61) {
                            let p = ModelParams::fe_mn_cu()
                                .with_temperature(t)
                                .with_delta(delta)
                                .with_j0(j0)
                                .with_gamma(gamma)
                                .with_field(b);
                            let lim = dimer_density_matrix(&p, true).map_err(|e| e.to_string())?;
                            let fin = finite_n_density_matrix(&p, 30).map_err(|e| e.to_string())?;
                            worst = worst.max(max_diff(&lim, &fin));
                        }
                    }
                }
            }
        }
        Ok(worst)
    };
    let worst_limit = limit_gap(&[0.7, 1.0])?;
    let strong = limit_gap(&[1.7])?;
    check(
        worst <= 1e-10 && worst_limit <= 1e-8,
        format!("transfer matrix vs enumeration {worst:.2e}; limit vs N = 30 {worst_limit:.2e} (J0 = 0.7, 1), {strong:.2e} (J0 = 1.7, not gated)"),
    )
}

fn random_xstate(rng: &mut StdRng) -> XState {
    let mut d = [0.0f64; 4].map(|_| rng.gen_range(0.0..1.0));
    let s: f64 = d.iter().sum();
    for v in &mut d {
        *v /= s;
    }
    let bound = (d[1] * d[2]).sqrt();
    XState { r11: d[0], r22: d[1], r33: d[2], r44: d[3], r23: rng.gen_range(-bound..=bound) }
}

fn variance_qfi(psi: &Vector4<Complex64>) -> f64 {
    collective_observables()
        .iter()
        .map(|a| {
            let mean = (psi.adjoint() * a * psi)[(0, 0)].re;
            let second = (psi.adjoint() * a * a * psi)[(0, 0)].re;
            4.0 * (second - mean * mean)
        })
        .sum()
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut conc = 0.0f64;
    for _ in 0..1000 {
        let st = random_xstate(&mut rng);
        let w = wootters_concurrence(&DenseTwoQubitState::from_xstate(&st).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        conc = conc.max((concurrence_x(&st) - w).abs());
    }
    let mut tele = 0.0f64;
    for _ in 0..1000 {
        let ch = random_xstate(&mut rng);
        let input =
            InputState::new(rng.gen_range(0.0..=PI), rng.gen_range(0.0..2.0 * PI)).map_err(|e| e.to_string())?;
        let closed = teleport_output(&ch, &input).map_err(|e| e.to_string())?;
        let kraus = kraus_output(&ch, &input).map_err(|e| e.to_string())?;
        tele = tele.max((closed.rho - kraus).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let mut fa = 0.0f64;
    for _ in 0..100 {
        let ch = random_xstate(&mut rng);
        let quad = average_fidelity_quadrature(&ch, QUADRATURE_NODES).map_err(|e| e.to_string())?;
        fa = fa.max((average_fidelity(&ch) - quad).abs());
    }
    let mut pure = 0.0f64;
    for _ in 0..200 {
        let a: f64 = rng.gen_range(0.0..PI);
        let psi = Vector4::new(0.0, a.cos(), a.sin(), 0.0).map(|x| Complex64::new(x, 0.0));
        let rho: Matrix4<Complex64> = psi * psi.adjoint();
        pure = pure.max((qfi_dense(&rho) - variance_qfi(&psi)).abs());
        let st = XState { r11: 0.0, r22: a.cos().powi(2), r33: a.sin().powi(2), r44: 0.0, r23: a.cos() * a.sin() };
        pure = pure.max((qfi(&st) - variance_qfi(&psi)).abs());
    }
    check(
        conc <= 1e-10 && tele <= 1e-12 && fa <= 1e-8 && pure <= 1e-10,
        format!("Wootters {conc:.1e}, teleport {tele:.1e}, F_A quadrature {fa:.1e}, pure-state QFI {pure:.1e}"),
    )
}

fn criterion_6() -> Outcome {
    let mut worst_trace = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut count = 0;
    for b in grid(0.0, 5.0, 101) {
        for t in [0.01, 0.05, 0.2, 1.0, 5.0] {
            for delta in [0.0, 0.5, 1.0, 2.0] {
                for j0 in [0.7, 1.0, 1.7] {
                    for gamma in [0.0, -0.8] {
                        let p = ModelParams::fe_mn_cu()
                            .with_field(b)
                            .with_temperature(t)
                            .with_delta(delta)
                            .with_j0(j0)
                            .with_gamma(gamma);
                        for imp in [true, false] {
                            let st = dimer_density_matrix(&p, imp).map_err(|e| format!("{p:?}: {e}"))?;
                            if !st.is_finite() {
                                return Err(format!("non-finite state at {p:?}"));
                            }
                            worst_trace = worst_trace.max((st.trace() - 1.0).abs());
                            min_eig = min_eig.min(st.min_eigenvalue());
                            count += 1;
                        }
                        let lz = partition_function(&p, 1000).map_err(|e| e.to_string())?;
                        let ll = log_lambda_plus(&p).map_err(|e| e.to_string())?;
                        if !lz.is_finite() || !ll.is_finite() {
                            return Err(format!("non-finite ln Z at {p:?}"));
                        }
                    }
                }
            }
        }
    }
    check(
        worst_trace <= 1e-12 && min_eig >= -1e-12,
        format!("{count} states: max |tr - 1| = {worst_trace:.1e}, min eigenvalue = {min_eig:.1e}"),
    )
}

fn all_quantities() -> Vec<Quantity> {
    Quantity::ALL.to_vec()
}

fn criterion_7() -> Outcome {
    let mut identical = true;
    for (axis, template) in [
        (Axis::new(AxisParam::B, 0.0, 3.0, 61), ModelParams::fe_mn_cu().with_temperature(0.05).with_delta(0.5)),
        (Axis::new(AxisParam::T, 0.01, 2.0, 40), ModelParams::fe_mn_cu().with_field(1.0).with_j0(0.7)),
    ] {
        let mut m = Measurement::new(all_quantities());
        m.debug_correlators = true;
        let with = SweepConfig { template, axes: vec![axis], measurement: m.clone() };
        let mut m_off = m;
        m_off.impurity = false;
        let without = SweepConfig { template, axes: vec![axis], measurement: m_off };
        let a = csv_string(&with.measurement, &run_sweep(&with, Some(2)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let b = csv_string(&without.measurement, &run_sweep(&without, Some(3)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        identical &= a == b;
    }
    let p = ModelParams::fe_mn_cu().with_j0(1.7).with_field(1.0).with_delta(0.5);
    let host = threshold_brackets(&p, false, 0.01, 5.0).map_err(|e| e.to_string())?.len();
    let imp = threshold_brackets(&p.with_gamma(-0.8), true, 0.01, 5.0).map_err(|e| e.to_string())?.len();
    check(
        identical && host >= 2 && imp == 1,
        format!(
            "gamma = 0 sweeps byte-identical to uniform chain: {identical}; C(T) brackets at J0 = 1.7, B = 1, Delta = 0.5: uniform {host}, impurity {imp}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let cfg = SweepConfig {
        template: ModelParams::fe_mn_cu().with_gamma(-0.8),
        axes: vec![Axis::new(AxisParam::B, 0.0, 3.0, 25), Axis::new(AxisParam::T, 0.01, 1.0, 8)],
        measurement: Measurement::new(all_quantities()),
    };
    let outputs: Vec<String> = [1, 2, 5, 16]
        .iter()
        .map(|&w| -> Result<String, String> {
            let recs = run_sweep(&cfg, Some(w)).map_err(|e| e.to_string())?;
            csv_string(&cfg.measurement, &recs).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    check(same, format!("{} rows identical across 1, 2, 5, 16 workers: {same}", cfg.row_count()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("critical field", criterion_1),
        ("QFI anomaly", criterion_2),
        ("teleportation optimum", criterion_3),
        ("oracle equivalence", criterion_4),
        ("formula cross-checks", criterion_5),
        ("state validity", criterion_6),
        ("reduction and re-entrance", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL  {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
