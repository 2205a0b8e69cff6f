//! Plain-text `key = value` configuration with `#` comments.
//!
//! Keys are case-insensitive. Model parameters use their canonical names
//! (`J`, `Delta`, `J0`, `g1`, `g2`, `g3`, `gamma`, `B`, `T`); the remaining keys are
//! listed in [`KNOWN_KEYS`]. A sweep axis is written `name:start:stop:count`, lists
//! are comma separated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::DEFAULT_FIELD_STEP;
use crate::model::ModelParams;
use crate::teleport::InputState;

use super::finders::CriticalTarget;

/// Non-parameter keys understood by [`RunConfig::from_settings`].
pub const KNOWN_KEYS: [&str; 22] = [
    "axis1",
    "axis2",
    "quantities",
    "impurity",
    "db",
    "theta",
    "phi",
    "workers",
    "out",
    "debug_paper_correlators",
    "t_min",
    "t_max",
    "b_min",
    "b_max",
    "target",
    "points",
    "deltas",
    "j0s",
    "fields",
    "temperatures",
    "gammas",
    "js",
];

/// Raw key/value pairs, later entries overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            s.set_pair(line).map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies one `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) =
            pair.split_once('=').ok_or_else(|| Error::Config(format!("expected `key = value`, got `{pair}`")))?;
        self.set(k, v)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase();
        let known =
            ModelParams::KEYS.iter().any(|k| k.eq_ignore_ascii_case(&key)) || KNOWN_KEYS.contains(&key.as_str());
        if !known {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        self.entries.insert(key, value.trim().to_string());
        Ok(())
    }

    /// Entries of `other` override those of `self`.
    pub fn merged(mut self, other: &Settings) -> Self {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&key.to_ascii_lowercase()).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key).map(|v| v.parse::<T>().map_err(|e| Error::Config(format!("`{key}` = `{v}`: {e}")))).transpose()
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parsed(key)
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parsed(key)
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.get(key)
            .map(|v| match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Ok(true),
                "false" | "no" | "off" | "0" => Ok(false),
                _ => Err(Error::Config(format!("`{key}` = `{v}` is not a boolean"))),
            })
            .transpose()
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key).map(|v| parse_list(key, v)).transpose()
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Config(format!("`{key}` item `{x}`: {e}"))))
        .collect()
}

/// Parameters that may be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisParam {
    B,
    T,
    Delta,
    J0,
    Gamma,
}

impl AxisParam {
    pub fn key(self) -> &'static str {
        match self {
            AxisParam::B => "B",
            AxisParam::T => "T",
            AxisParam::Delta => "Delta",
            AxisParam::J0 => "J0",
            AxisParam::Gamma => "gamma",
        }
    }
}

impl FromStr for AxisParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "b" => AxisParam::B,
            "t" => AxisParam::T,
            "delta" => AxisParam::Delta,
            "j0" => AxisParam::J0,
            "gamma" => AxisParam::Gamma,
            _ => return Err(Error::Config(format!("`{s}` cannot be swept (use B, T, Delta, J0 or gamma)"))),
        })
    }
}

/// Evenly spaced axis, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: AxisParam, start: f64, stop: f64, count: usize) -> Self {
        Self { param, start, stop, count }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Config(format!("axis {} needs at least 2 points", self.param.key())));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::Config(format!(
                "axis {} needs finite start < stop, got {}..{}",
                self.param.key(),
                self.start,
                self.stop
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [name, start, stop, count] = parts[..] else {
            return Err(Error::Config(format!("axis `{s}` must be name:start:stop:count")));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| Error::Config(format!("axis `{s}`: {e}")));
        let count = count.parse::<usize>().map_err(|e| Error::Config(format!("axis `{s}`: {e}")))?;
        Ok(Self::new(name.parse()?, num(start)?, num(stop)?, count))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.param.key(), self.start, self.stop, self.count)
    }
}

/// Output quantities of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Concurrence,
    Coherence,
    SxSx,
    SzSz,
    Qfi,
    QfiDb,
    Favg,
    Cout,
    RhoElements,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Concurrence,
        Quantity::Coherence,
        Quantity::SxSx,
        Quantity::SzSz,
        Quantity::Qfi,
        Quantity::QfiDb,
        Quantity::Favg,
        Quantity::Cout,
        Quantity::RhoElements,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Concurrence => "concurrence",
            Quantity::Coherence => "coherence",
            Quantity::SxSx => "sxsx",
            Quantity::SzSz => "szsz",
            Quantity::Qfi => "qfi",
            Quantity::QfiDb => "qfi_dB",
            Quantity::Favg => "favg",
            Quantity::Cout => "cout",
            Quantity::RhoElements => "rho_elements",
        }
    }

    /// CSV columns produced by this quantity.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::Concurrence => &["concurrence"],
            Quantity::Coherence => &["coherence_l1"],
            Quantity::SxSx => &["sxsx"],
            Quantity::SzSz => &["szsz"],
            Quantity::Qfi => &["qfi"],
            Quantity::QfiDb => &["qfi_dB"],
            Quantity::Favg => &["favg"],
            Quantity::Cout => &["cout"],
            Quantity::RhoElements => &["r11", "r22", "r33", "r44", "r23"],
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown quantity `{s}`")))
    }
}

pub fn parse_quantities(s: &str) -> Result<Vec<Quantity>> {
    let mut out = Vec::new();
    for q in s.split(',').filter(|x| !x.trim().is_empty()) {
        let q: Quantity = q.parse()?;
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

/// What to evaluate at each parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub quantities: Vec<Quantity>,
    /// `false` evaluates the uniform chain (no impurity cell).
    pub impurity: bool,
    /// Central-difference step for `qfi_dB`.
    pub field_step: f64,
    /// Teleported input state for `cout`.
    pub input: InputState,
    /// Adds `sxsx_printed` and `szsz_printed` columns.
    pub debug_correlators: bool,
}

impl Measurement {
    pub fn new(quantities: Vec<Quantity>) -> Self {
        Self {
            quantities,
            impurity: true,
            field_step: DEFAULT_FIELD_STEP,
            input: InputState { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 },
            debug_correlators: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.quantities.is_empty() {
            return Err(Error::Config("no quantities requested".into()));
        }
        if !(self.field_step.is_finite() && self.field_step > 0.0) {
            return Err(Error::Config(format!("dB = {} must be positive", self.field_step)));
        }
        InputState::new(self.input.theta, self.input.phi)?;
        Ok(())
    }
}

/// A one- or two-axis grid over a parameter template.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub template: ModelParams,
    pub axes: Vec<Axis>,
    pub measurement: Measurement,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Config(format!("a sweep needs 1 or 2 axes, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::Config("both axes sweep the same parameter".into()));
        }
        for a in &self.axes {
            a.validate()?;
            if a.param == AxisParam::Gamma && !self.measurement.impurity {
                return Err(Error::Config("sweeping gamma requires impurity = true".into()));
            }
        }
        self.measurement.validate()?;
        self.template.validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn row_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }
}

/// Everything the command-line tool can read from a config file and overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub axes: Vec<Axis>,
    pub measurement: Measurement,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub t_range: (f64, f64),
    pub b_range: (f64, f64),
    pub target: CriticalTarget,
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let mut params = ModelParams::fe_mn_cu();
        for key in ModelParams::KEYS {
            if let Some(v) = s.f64(key)? {
                params.set(key, v)?;
            }
        }
        let mut axes = Vec::new();
        for key in ["axis1", "axis2"] {
            if let Some(a) = s.get(key) {
                axes.push(a.parse()?);
            }
        }
        let quantities = match s.get("quantities") {
            Some(q) => parse_quantities(q)?,
            None => vec![Quantity::Concurrence],
        };
        let mut measurement = Measurement::new(quantities);
        if let Some(v) = s.bool("impurity")? {
            measurement.impurity = v;
        }
        if let Some(v) = s.f64("dB")? {
            measurement.field_step = v;
        }
        if let Some(v) = s.f64("theta")? {
            measurement.input.theta = v;
        }
        if let Some(v) = s.f64("phi")? {
            measurement.input.phi = v;
        }
        if let Some(v) = s.bool("debug_paper_correlators")? {
            measurement.debug_correlators = v;
        }
        let workers = s.usize("workers")?;
        if workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let target = match s.get("target") {
            Some(t) => t.parse()?,
            None => CriticalTarget::MaxConcurrence,
        };
        Ok(Self {
            params,
            axes,
            measurement,
            workers,
            out: s.get("out").map(PathBuf::from),
            t_range: (s.f64("T_min")?.unwrap_or(0.01), s.f64("T_max")?.unwrap_or(5.0)),
            b_range: (s.f64("B_min")?.unwrap_or(0.0), s.f64("B_max")?.unwrap_or(3.0)),
            target,
        })
    }

    pub fn sweep(&self) -> Result<SweepConfig> {
        let cfg = SweepConfig { template: self.params, axes: self.axes.clone(), measurement: self.measurement.clone() };
        cfg.validate()?;
        Ok(cfg)
    }
}
