//! Threshold temperatures and critical fields.
//!
//! Both finders scan coarsely first and refine inside the bracket found by the scan:
//! bisection to [`T_TOL`] for thresholds, golden-section search to [`B_TOL`] for
//! extrema.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::{concurrence_x, qfi, qfi_field_derivative};
use crate::model::ModelParams;
use crate::xfer::dimer_density_matrix;

pub const THRESHOLD_SCAN_POINTS: usize = 64;
pub const CRITICAL_SCAN_POINTS: usize = 301;
pub const T_TOL: f64 = 1e-6;
pub const B_TOL: f64 = 1e-4;

/// Concurrence at or below this counts as dead.
///
/// Where the ground state is a product state, the low-temperature concurrence is
/// positive but of order `exp(-dE / T)`; without a floor such a state would never
/// be reported as disentangled.
pub const CONCURRENCE_FLOOR: f64 = 1e-10;

pub fn concurrence_at(p: &ModelParams, impurity: bool) -> Result<f64> {
    Ok(concurrence_x(&dimer_density_matrix(p, impurity)?))
}

fn alive(p: &ModelParams, impurity: bool) -> Result<bool> {
    Ok(concurrence_at(p, impurity)? > CONCURRENCE_FLOOR)
}

/// Geometric temperature grid of [`THRESHOLD_SCAN_POINTS`] points.
pub fn temperature_grid(t_lo: f64, t_hi: f64) -> Result<Vec<f64>> {
    if !(t_lo > 0.0 && t_lo < t_hi && t_hi.is_finite()) {
        return Err(Error::InvalidParams(format!("temperature range {t_lo}..{t_hi} must be positive and increasing")));
    }
    let n = THRESHOLD_SCAN_POINTS;
    let ratio = t_hi / t_lo;
    Ok((0..n).map(|i| if i + 1 == n { t_hi } else { t_lo * ratio.powf(i as f64 / (n - 1) as f64) }).collect())
}

/// Scan points `(T_i, T_{i+1})` across which the entangled/dead status changes.
pub fn threshold_brackets(p: &ModelParams, impurity: bool, t_lo: f64, t_hi: f64) -> Result<Vec<(f64, f64)>> {
    let grid = temperature_grid(t_lo, t_hi)?;
    let status: Vec<bool> = grid.iter().map(|&t| alive(&p.with_temperature(t), impurity)).collect::<Result<_>>()?;
    Ok((1..grid.len()).filter(|&i| status[i] != status[i - 1]).map(|i| (grid[i - 1], grid[i])).collect())
}

/// Largest temperature at which the concurrence dies (or revives), bisected to
/// [`T_TOL`]. `None` when the concurrence never changes status in the range.
pub fn find_threshold_temperature(p: &ModelParams, impurity: bool, t_lo: f64, t_hi: f64) -> Result<Option<f64>> {
    let Some(&(mut lo, mut hi)) = threshold_brackets(p, impurity, t_lo, t_hi)?.last() else {
        return Ok(None);
    };
    let lo_alive = alive(&p.with_temperature(lo), impurity)?;
    while hi - lo > T_TOL {
        let mid = 0.5 * (lo + hi);
        if alive(&p.with_temperature(mid), impurity)? == lo_alive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Functional whose extremum defines a critical field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalTarget {
    /// Maximum of the concurrence.
    MaxConcurrence,
    /// Minimum of the QFI.
    QfiMin,
    /// Maximum of `|dF/dB|`.
    DqfiPeak,
}

impl CriticalTarget {
    pub fn name(self) -> &'static str {
        match self {
            CriticalTarget::MaxConcurrence => "max_concurrence",
            CriticalTarget::QfiMin => "qfi_min",
            CriticalTarget::DqfiPeak => "dqfi_peak",
        }
    }

    /// The functional to maximize.
    fn objective(self, p: &ModelParams, impurity: bool, field_step: f64) -> Result<f64> {
        Ok(match self {
            CriticalTarget::MaxConcurrence => concurrence_at(p, impurity)?,
            CriticalTarget::QfiMin => -qfi(&dimer_density_matrix(p, impurity)?),
            CriticalTarget::DqfiPeak => qfi_field_derivative(p, field_step, impurity)?.abs(),
        })
    }
}

impl FromStr for CriticalTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [CriticalTarget::MaxConcurrence, CriticalTarget::QfiMin, CriticalTarget::DqfiPeak]
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown target `{s}` (max_concurrence, qfi_min, dqfi_peak)")))
    }
}

/// Field in `[b_lo, b_hi]` extremizing `target`, refined to [`B_TOL`].
pub fn find_critical_field(
    p: &ModelParams,
    impurity: bool,
    b_lo: f64,
    b_hi: f64,
    target: CriticalTarget,
    field_step: f64,
) -> Result<f64> {
    if !(b_lo < b_hi && b_lo.is_finite() && b_hi.is_finite()) {
        return Err(Error::InvalidParams(format!("field range {b_lo}..{b_hi} must be increasing")));
    }
    let f = |b: f64| target.objective(&p.with_field(b), impurity, field_step);
    let n = CRITICAL_SCAN_POINTS;
    let grid: Vec<f64> = (0..n).map(|i| b_lo + (b_hi - b_lo) * i as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&b| f(b)).collect::<Result<_>>()?;
    let best = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).expect("scan is nonempty");
    if best == 0 || best == n - 1 {
        return Err(Error::NotFound(format!("{} is monotone on the scan of B in [{b_lo}, {b_hi}]", target.name())));
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > B_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(0.5 * (a + b))
}
