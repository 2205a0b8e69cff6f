//! Sweep configuration, grid runner, CSV output, finders and figure presets behind
//! the `impurity-chain` binary.

pub mod config;
pub mod finders;
pub mod presets;
pub mod sweep;

pub use config::{Axis, AxisParam, Measurement, Quantity, RunConfig, Settings, SweepConfig};
pub use finders::{find_critical_field, find_threshold_temperature, threshold_brackets, CriticalTarget};
pub use presets::{curves, run_preset, Curve, Preset};
pub use sweep::{csv_string, run_point, run_sweep, run_sweep_to_file, write_csv, SweepRecord};
