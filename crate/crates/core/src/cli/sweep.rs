//! Grid evaluation and CSV output.
//!
//! Rows are ordered lexicographically by axis index (first axis outermost). Each row
//! depends only on its own parameter point, so the parallel map gathers into the same
//! bytes for any worker count.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{concurrence_x, l1_coherence, printed_correlators, qfi, qfi_field_derivative, spin_correlators};
use crate::model::ModelParams;
use crate::teleport::{average_fidelity, output_concurrence};
use crate::xfer::dimer_density_matrix;

use super::config::{AxisParam, Measurement, Quantity, SweepConfig};

/// Parameter columns, written before the quantity columns of every row.
pub const PARAM_COLUMNS: [&str; 9] = ModelParams::KEYS;

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub params: ModelParams,
    pub values: Vec<f64>,
}

fn describe(p: &ModelParams) -> String {
    ModelParams::KEYS.iter().map(|k| format!("{k}={}", p.get(k).unwrap_or(f64::NAN))).collect::<Vec<_>>().join(", ")
}

/// Column names in row order.
pub fn columns(m: &Measurement) -> Vec<String> {
    let mut cols: Vec<String> = PARAM_COLUMNS.iter().map(|s| s.to_string()).collect();
    for q in &m.quantities {
        cols.extend(q.columns().iter().map(|s| s.to_string()));
    }
    if m.debug_correlators {
        cols.push("sxsx_printed".into());
        cols.push("szsz_printed".into());
    }
    cols
}

/// Evaluates every requested quantity at `p`.
///
/// With the impurity off the uniform chain is evaluated and `gamma` is reported as 0.
pub fn run_point(p: &ModelParams, m: &Measurement) -> Result<SweepRecord> {
    let mut params = *p;
    if !m.impurity {
        params.gamma = 0.0;
    }
    let at = |e: Error| Error::AtPoint { point: describe(&params), source: Box::new(e) };
    params.validate().map_err(at)?;
    let st = dimer_density_matrix(&params, m.impurity).map_err(at)?;
    let mut values = Vec::new();
    for q in &m.quantities {
        match q {
            Quantity::Concurrence => values.push(concurrence_x(&st)),
            Quantity::Coherence => values.push(l1_coherence(&st)),
            Quantity::SxSx => values.push(spin_correlators(&st).0),
            Quantity::SzSz => values.push(spin_correlators(&st).1),
            Quantity::Qfi => values.push(qfi(&st)),
            Quantity::QfiDb => values.push(qfi_field_derivative(&params, m.field_step, m.impurity).map_err(at)?),
            Quantity::Favg => values.push(average_fidelity(&st)),
            Quantity::Cout => values.push(output_concurrence(&st, &m.input)),
            Quantity::RhoElements => values.extend([st.r11, st.r22, st.r33, st.r44, st.r23]),
        }
    }
    if m.debug_correlators {
        let (x, z) = printed_correlators(&st);
        values.extend([x, z]);
    }
    let cols = columns(m);
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { quantity: cols[PARAM_COLUMNS.len() + i].clone(), point: describe(&params) });
    }
    Ok(SweepRecord { params, values })
}

fn apply(p: &mut ModelParams, axis: AxisParam, v: f64) {
    match axis {
        AxisParam::B => p.b = v,
        AxisParam::T => p.t = v,
        AxisParam::Delta => p.delta = v,
        AxisParam::J0 => p.j0 = v,
        AxisParam::Gamma => p.gamma = v,
    }
}

/// Parameter points of the grid in row order.
pub fn grid_points(cfg: &SweepConfig) -> Vec<ModelParams> {
    let mut points = vec![cfg.template];
    for axis in &cfg.axes {
        let values = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p;
                    apply(&mut q, axis.param, v);
                    q
                })
            })
            .collect();
    }
    points
}

/// Evaluates the whole grid on `workers` threads (all cores if `None`).
pub fn run_sweep(cfg: &SweepConfig, workers: Option<usize>) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let points = grid_points(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| points.par_iter().map(|p| run_point(p, &cfg.measurement)).collect())
}

/// Scientific notation with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(w: &mut impl Write, m: &Measurement, records: &[SweepRecord]) -> Result<()> {
    writeln!(w, "{}", columns(m).join(","))?;
    for r in records {
        let mut fields: Vec<String> =
            PARAM_COLUMNS.iter().map(|k| format_value(r.params.get(k).unwrap_or(f64::NAN))).collect();
        fields.extend(r.values.iter().map(|&v| format_value(v)));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn csv_string(m: &Measurement, records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, m, records)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

/// Path of the manifest written next to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.txt");
    PathBuf::from(s)
}

/// Resolved configuration of a sweep as `key = value` lines.
pub fn manifest(cfg: &SweepConfig, extra: &[(String, String)]) -> String {
    let mut out = format!("tool = {} {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    for k in ModelParams::KEYS {
        out += &format!("{k} = {}\n", cfg.template.get(k).unwrap_or(f64::NAN));
    }
    for (i, a) in cfg.axes.iter().enumerate() {
        out += &format!("axis{} = {a}\n", i + 1);
    }
    let m = &cfg.measurement;
    let q: Vec<&str> = m.quantities.iter().map(|q| q.name()).collect();
    out += &format!("quantities = {}\n", q.join(","));
    out += &format!("impurity = {}\n", m.impurity);
    out += &format!("dB = {}\n", m.field_step);
    out += &format!("theta = {}\nphi = {}\n", m.input.theta, m.input.phi);
    out += &format!("debug_paper_correlators = {}\n", m.debug_correlators);
    out += &format!("rows = {}\n", cfg.row_count());
    for (k, v) in extra {
        out += &format!("{k} = {v}\n");
    }
    out
}

/// Runs the sweep and writes the CSV plus its manifest.
pub fn run_sweep_to_file(
    cfg: &SweepConfig,
    workers: Option<usize>,
    out: &Path,
    extra: &[(String, String)],
) -> Result<usize> {
    let records = run_sweep(cfg, workers)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::io::BufWriter::new(std::fs::File::create(out)?);
    write_csv(&mut f, &cfg.measurement, &records)?;
    f.flush()?;
    std::fs::write(manifest_path(out), manifest(cfg, extra))?;
    Ok(records.len())
}
