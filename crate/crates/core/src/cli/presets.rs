//! Named parameter sets for the standard figures.
//!
//! A preset is a base sweep plus panel dimensions; every combination of panel values
//! becomes one CSV file. Curves with `gamma = 0` are evaluated on the uniform chain.
//! Panel values can be replaced with list keys (`deltas`, `j0s`, `fields`,
//! `temperatures`, `gammas`, `js`), the axes with `axis1`/`axis2` and the point count
//! of a one-axis preset with `points`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::config::{Axis, AxisParam, Quantity, RunConfig, Settings, SweepConfig};
use super::finders::{find_threshold_temperature, threshold_brackets};
use super::sweep::run_sweep_to_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig3,
    Fig5,
    FigQfi,
    FigDbQfi,
    Fig8,
    Fig10,
    Fig22Threshold,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Fig3,
        Preset::Fig5,
        Preset::FigQfi,
        Preset::FigDbQfi,
        Preset::Fig8,
        Preset::Fig10,
        Preset::Fig22Threshold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig5 => "fig5",
            Preset::FigQfi => "fig-qfi",
            Preset::FigDbQfi => "fig-dbqfi",
            Preset::Fig8 => "fig8",
            Preset::Fig10 => "fig10",
            Preset::Fig22Threshold => "fig22-threshold",
        }
    }

    fn spec(self) -> PresetSpec {
        let b_axis = Axis::new(AxisParam::B, 0.0, 3.0, 601);
        let t_axis = Axis::new(AxisParam::T, 0.01, 2.0, 400);
        let gammas = Dim::product("gamma", &[0.0, -0.8]);
        let impurity_only = Dim::product("gamma", &[-0.8]);
        match self {
            Preset::Fig3 => PresetSpec {
                axes: vec![b_axis],
                quantity: Quantity::Concurrence,
                dims: vec![
                    Dim::product("Delta", &[0.5, 2.0]),
                    Dim::product("J0", &[0.7, 1.0]),
                    gammas,
                    Dim::product("T", &[0.01, 0.05, 0.2]),
                ],
            },
            Preset::Fig5 => PresetSpec {
                axes: vec![t_axis],
                quantity: Quantity::Coherence,
                dims: vec![
                    Dim::product("Delta", &[0.0, 0.5, 1.0, 2.0]),
                    Dim::product("J0", &[1.0]),
                    gammas,
                    Dim::product("B", &[0.5, 1.0, 1.282, 2.0]),
                ],
            },
            Preset::FigQfi => PresetSpec {
                axes: vec![b_axis],
                quantity: Quantity::Qfi,
                dims: vec![
                    gammas,
                    Dim::product("J0", &[0.7, 1.0]),
                    Dim::product("T", &[0.05]),
                    Dim::product("Delta", &[0.0, 0.5, 1.0, 2.0]),
                ],
            },
            Preset::FigDbQfi => PresetSpec {
                axes: vec![b_axis],
                quantity: Quantity::QfiDb,
                dims: vec![
                    impurity_only,
                    Dim::product("J0", &[0.7, 1.0]),
                    Dim::product("T", &[0.05]),
                    Dim::product("Delta", &[0.0, 0.5, 1.0, 2.0]),
                ],
            },
            Preset::Fig8 => PresetSpec {
                axes: vec![t_axis],
                quantity: Quantity::Favg,
                dims: vec![
                    Dim::product("Delta", &[0.5, 1.0]),
                    Dim::product("J0", &[1.0]),
                    Dim::product("J", &[1.0]),
                    impurity_only,
                    Dim::product("B", &[0.5, 1.0, 1.282, 2.0]),
                ],
            },
            Preset::Fig10 => PresetSpec {
                axes: vec![b_axis],
                quantity: Quantity::Favg,
                dims: vec![
                    Dim { keys: vec!["J", "Delta"], rows: vec![vec![4.0, 0.5], vec![2.0, 1.0]] },
                    Dim::product("J0", &[1.0]),
                    impurity_only,
                    Dim::product("T", &[0.01, 0.05, 0.2]),
                ],
            },
            Preset::Fig22Threshold => PresetSpec {
                axes: vec![Axis::new(AxisParam::Delta, 0.0, 3.0, 61), Axis::new(AxisParam::T, 0.01, 3.0, 150)],
                quantity: Quantity::Concurrence,
                dims: vec![Dim::product("J0", &[0.7, 1.7]), Dim::product("B", &[0.5, 1.0]), gammas],
            },
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(s.trim())).ok_or_else(|| {
            let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
            Error::Config(format!("unknown preset `{s}` (one of {})", names.join(", ")))
        })
    }
}

/// Parameters varied together; a single key is a plain list.
#[derive(Debug, Clone, PartialEq)]
struct Dim {
    keys: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Dim {
    fn product(key: &'static str, values: &[f64]) -> Self {
        Self { keys: vec![key], rows: values.iter().map(|&v| vec![v]).collect() }
    }
}

#[derive(Debug, Clone)]
struct PresetSpec {
    axes: Vec<Axis>,
    quantity: Quantity,
    dims: Vec<Dim>,
}

fn list_key(param: &str) -> &'static str {
    match param {
        "Delta" => "deltas",
        "J0" => "j0s",
        "B" => "fields",
        "T" => "temperatures",
        "gamma" => "gammas",
        _ => "js",
    }
}

/// One output file of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub tag: String,
    pub config: SweepConfig,
}

/// Expands a preset into its curves, applying overrides from `settings`.
///
/// Scalar model parameters in `settings` become the template; panel lists override
/// the preset's own values.
pub fn curves(preset: Preset, settings: &Settings) -> Result<Vec<Curve>> {
    let mut spec = preset.spec();
    let rc = RunConfig::from_settings(settings)?;
    if !rc.axes.is_empty() {
        spec.axes = rc.axes.clone();
    }
    if let Some(n) = settings.usize("points")? {
        if spec.axes.len() != 1 {
            return Err(Error::Config("`points` applies to one-axis presets; set axis1/axis2 instead".into()));
        }
        spec.axes[0].count = n;
    }
    for dim in &mut spec.dims {
        let mut columns: Vec<Vec<f64>> = (0..dim.keys.len()).map(|k| dim.rows.iter().map(|r| r[k]).collect()).collect();
        for (k, key) in dim.keys.iter().enumerate() {
            if let Some(list) = settings.list(list_key(key))? {
                columns[k] = list;
            }
        }
        let len = columns[0].len();
        if len == 0 || columns.iter().any(|c| c.len() != len) {
            return Err(Error::Config(format!(
                "panel lists for {} must be nonempty and equally long",
                dim.keys.join("/")
            )));
        }
        dim.rows = (0..len).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    }
    // a panel value fixed by the preset must not also be swept
    spec.dims.retain(|d| !d.keys.iter().any(|k| spec.axes.iter().any(|a| a.param.key() == *k)));

    let mut combos: Vec<Vec<(&'static str, f64)>> = vec![Vec::new()];
    for dim in &spec.dims {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                dim.rows.iter().map(move |row| {
                    let mut c = c.clone();
                    c.extend(dim.keys.iter().copied().zip(row.iter().copied()));
                    c
                })
            })
            .collect();
    }

    let mut measurement = rc.measurement.clone();
    measurement.quantities =
        if settings.contains("quantities") { rc.measurement.quantities.clone() } else { vec![spec.quantity] };
    let mut out = Vec::new();
    for combo in combos {
        let mut template = rc.params;
        let mut tag = preset.name().to_string();
        for (k, v) in &combo {
            template.set(k, *v)?;
            write!(tag, "_{k}{v}").expect("writing to a String");
        }
        let mut m = measurement.clone();
        m.impurity = template.gamma != 0.0;
        let config = SweepConfig { template, axes: spec.axes.clone(), measurement: m };
        config.validate()?;
        out.push(Curve { tag, config });
    }
    Ok(out)
}

/// Writes every curve of `preset` into `dir`; returns the written paths.
pub fn run_preset(preset: Preset, settings: &Settings, dir: &Path, workers: Option<usize>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let extra = vec![("preset".to_string(), preset.name().to_string())];
    let mut written = Vec::new();
    let all = curves(preset, settings)?;
    for c in &all {
        let path = dir.join(format!("{}.csv", c.tag));
        run_sweep_to_file(&c.config, workers, &path, &extra)?;
        written.push(path);
    }
    if preset == Preset::Fig22Threshold {
        let path = dir.join(format!("{}_thresholds.csv", preset.name()));
        std::fs::write(&path, threshold_table(&all, settings)?)?;
        written.push(path);
    }
    Ok(written)
}

/// Threshold temperature and number of status changes of `C(T)` along the anisotropy
/// axis of each `fig22-threshold` panel. An empty `T_threshold` means none was found.
fn threshold_table(all: &[Curve], settings: &Settings) -> Result<String> {
    let rc = RunConfig::from_settings(settings)?;
    let (t_lo, t_hi) = rc.t_range;
    let mut out = String::from("J0,B,gamma,Delta,brackets,T_threshold\n");
    for c in all {
        let p: ModelParams = c.config.template;
        let deltas = c
            .config
            .axes
            .iter()
            .find(|a| a.param == AxisParam::Delta)
            .map(|a| a.values())
            .unwrap_or_else(|| vec![p.delta]);
        let impurity = c.config.measurement.impurity;
        for d in deltas {
            let q = p.with_delta(d);
            let n = threshold_brackets(&q, impurity, t_lo, t_hi)?.len();
            let t =
                find_threshold_temperature(&q, impurity, t_lo, t_hi)?.map(|t| format!("{t:.16e}")).unwrap_or_default();
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{n},{t}", p.j0, p.b, p.gamma, d)
                .expect("writing to a String");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig3_has_24_curves_of_601_points() {
        let c = curves(Preset::Fig3, &Settings::default()).unwrap();
        assert_eq!(c.len(), 24);
        assert!(c.iter().all(|c| c.config.row_count() == 601));
        assert_eq!(c[0].tag, "fig3_Delta0.5_J00.7_gamma0_T0.01");
        assert!(!c[0].config.measurement.impurity);
        assert!(c[3].config.measurement.impurity);
    }

    #[test]
    fn panel_lists_can_be_overridden() {
        let mut s = Settings::default();
        s.set("deltas", "1, 2").unwrap();
        s.set("points", "11").unwrap();
        let c = curves(Preset::Fig8, &s).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c.iter().all(|c| c.config.row_count() == 11));
        assert_eq!(c[0].config.template.delta, 1.0);
        assert_eq!(c[7].config.template.delta, 2.0);
    }

    #[test]
    fn paired_panels_stay_paired() {
        let c = curves(Preset::Fig10, &Settings::default()).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!((c[0].config.template.j, c[0].config.template.delta), (4.0, 0.5));
        assert_eq!((c[5].config.template.j, c[5].config.template.delta), (2.0, 1.0));
        let mut s = Settings::default();
        s.set("js", "1,2,3").unwrap();
        assert!(curves(Preset::Fig10, &s).is_err());
    }

    #[test]
    fn every_preset_expands() {
        for p in Preset::ALL {
            assert!(!curves(p, &Settings::default()).unwrap().is_empty(), "{}", p.name());
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig99".parse::<Preset>().is_err());
    }
}
