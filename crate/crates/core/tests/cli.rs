use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impurity-chain")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sweep_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "sweep",
            "--set",
            "axis1=B:0:3:31",
            "--set",
            "gamma=-0.8",
            "--set",
            "quantities=concurrence,favg",
            "--out",
            "c.csv",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "J,Delta,J0,g1,g2,g3,gamma,B,T,concurrence,favg");
    assert_eq!(lines.count(), 31);
    let manifest = std::fs::read_to_string(dir.path().join("c.csv.manifest.txt")).unwrap();
    assert!(manifest.contains("tool = impurity-chain"));
    assert!(manifest.contains("axis1 = B:0:3:31"));
}

#[test]
fn worker_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = |w: &'static str| {
        vec![
            "sweep",
            "--set",
            "axis1=B:0:3:13",
            "--set",
            "axis2=T:0.01:1:5",
            "--set",
            "gamma=-0.8",
            "--set",
            "quantities=qfi,qfi_dB,rho_elements",
            "--workers",
            w,
        ]
    };
    let a = run(dir.path(), &args("1"));
    let b = run(dir.path(), &args("4"));
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "# impurity dimer\ngamma = -0.8\nT = 0.01\nDelta = 0.5\nB = 2\n")
        .unwrap();
    let o = run(dir.path(), &["point", "--config", "run.cfg", "--set", "B=1.282", "--set", "quantities=concurrence"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[7], 1.282);
    assert!(row[9] > 0.99);
}

#[test]
fn critical_field_of_the_impurity() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "critical",
            "--set",
            "gamma=-0.8",
            "--set",
            "T=0.01",
            "--set",
            "Delta=0.5",
            "--set",
            "target=max_concurrence",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o).lines().find(|l| l.starts_with("B_critical")).unwrap().to_string();
    let b: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!((b - 1.282).abs() < 2e-3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["point", "--set", "mu=1"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["point", "--set", "T=-1"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["point", "--config", "missing.cfg"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["threshold", "--set", "B=500", "--set", "impurity=false"]).status.code(), Some(4));
    assert_eq!(
        run(
            dir.path(),
            &["critical", "--set", "gamma=-0.8", "--set", "T=0.01", "--set", "b_min=1.5", "--set", "b_max=3"]
        )
        .status
        .code(),
        Some(4)
    );
}

#[test]
fn uniform_chain_threshold_is_reentrant() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["threshold", "--set", "J0=1.7", "--set", "B=1", "--set", "Delta=0.5", "--set", "impurity=false"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("brackets = 2"));
}

#[test]
fn figure_preset_writes_every_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["figure", "fig8", "--set", "points=5", "--out", "figs"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csvs: Vec<_> = std::fs::read_dir(dir.path().join("figs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    assert!(!csvs.is_empty());
    for p in csvs {
        assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 6, "{}", p.display());
    }
    assert_eq!(run(dir.path(), &["figure", "fig99"]).status.code(), Some(2));
}
