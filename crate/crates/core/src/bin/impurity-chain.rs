use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use impurity_chain::cli::{
    csv_string, find_critical_field, find_threshold_temperature, run_point, run_preset, run_sweep, run_sweep_to_file,
    threshold_brackets, Preset, RunConfig, Settings,
};
use impurity_chain::{Error, Result};

/// Exact thermal solver for the Fe-Mn-Cu Ising-XXZ chain with one impurity dimer.
#[derive(Debug, Parser)]
#[command(name = "impurity-chain", version)]
struct Cli {
    /// Key-value config file (`key = value` lines, `#` comments).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path (sweep, point) or directory (figure).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override one config key, e.g. `--set B=1.282`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Also emit the printed correlator variants `sxsx_printed`, `szsz_printed`.
    #[arg(long, global = true)]
    debug_paper_correlators: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the requested quantities at one parameter point.
    Point,
    /// Evaluate a one- or two-axis grid (`axis1`, `axis2` keys).
    Sweep,
    /// Threshold temperature of the concurrence in [T_min, T_max].
    Threshold,
    /// Critical field in [B_min, B_max] for `target`.
    Critical,
    /// Write the data files of a named figure preset.
    Figure {
        /// fig3, fig5, fig-qfi, fig-dbqfi, fig8, fig10 or fig22-threshold.
        preset: String,
    },
}

fn settings(cli: &Cli) -> Result<Settings> {
    let mut s = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    for pair in &cli.set {
        s.set_pair(pair)?;
    }
    if cli.debug_paper_correlators {
        s.set("debug_paper_correlators", "true")?;
    }
    if let Some(w) = cli.workers {
        s.set("workers", &w.to_string())?;
    }
    if let Some(out) = &cli.out {
        s.set("out", &out.to_string_lossy())?;
    }
    Ok(s)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let s = settings(cli)?;
    let rc = RunConfig::from_settings(&s)?;
    match &cli.command {
        Command::Point => {
            rc.measurement.validate()?;
            let record = run_point(&rc.params, &rc.measurement)?;
            emit(rc.out.as_ref(), &csv_string(&rc.measurement, &[record])?)
        }
        Command::Sweep => {
            let cfg = rc.sweep()?;
            match &rc.out {
                Some(path) => {
                    let rows = run_sweep_to_file(&cfg, rc.workers, path, &[])?;
                    eprintln!("wrote {rows} rows to {}", path.display());
                    Ok(())
                }
                None => {
                    let records = run_sweep(&cfg, rc.workers)?;
                    emit(None, &csv_string(&cfg.measurement, &records)?)
                }
            }
        }
        Command::Threshold => {
            let (lo, hi) = rc.t_range;
            let impurity = rc.measurement.impurity;
            let brackets = threshold_brackets(&rc.params, impurity, lo, hi)?;
            let t = find_threshold_temperature(&rc.params, impurity, lo, hi)?;
            println!("brackets = {}", brackets.len());
            match t {
                Some(t) => {
                    println!("T_threshold = {t:.16e}");
                    Ok(())
                }
                None => Err(Error::NotFound(format!("no threshold temperature in [{lo}, {hi}]"))),
            }
        }
        Command::Critical => {
            let (lo, hi) = rc.b_range;
            let b =
                find_critical_field(&rc.params, rc.measurement.impurity, lo, hi, rc.target, rc.measurement.field_step)?;
            println!("target = {}", rc.target.name());
            println!("B_critical = {b:.16e}");
            Ok(())
        }
        Command::Figure { preset } => {
            let preset: Preset = preset.parse()?;
            let dir = rc.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in run_preset(preset, &s, &dir, rc.workers)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
