//! End-to-end checks of the command-line surface: exit codes, output
//! determinism and the documented file formats.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gammachain"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn unknown_flag_exits_with_parameter_error() {
    let out = bin().args(["spectrum", "--nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_chain_size_exits_with_parameter_error() {
    let out = bin()
        .args(["spectrum", "--N", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn conflicting_sweeps_rejected() {
    let out = bin()
        .args([
            "correlate",
            "--h-range",
            "0:1:10",
            "--alpha-range",
            "0:1:10",
            "--N",
            "16",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unwritable_output_is_a_parameter_error() {
    let out = bin()
        .args(["spectrum", "--N", "8", "--out", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_output_is_deterministic_and_well_formed() {
    let args = ["spectrum", "--N", "8", "--alpha", "0.5", "--h", "0.5"];
    let a = run_ok(&args);
    let b = run_ok(&args);
    assert_eq!(a, b, "identical invocations must be bit-identical");
    let mut lines = a.lines();
    // comment header first, then the column header
    assert!(lines.next().unwrap().starts_with("# "));
    let header = a
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("column header");
    assert_eq!(header, "k,energy,u,v,phi,filled");
    let rows: Vec<&str> = a.lines().filter(|l| !l.starts_with('#') && l.contains(',')).collect();
    assert_eq!(rows.len() - 1, 8, "one row per momentum");
}

#[test]
fn json_output_mirrors_the_table() {
    let text = run_ok(&[
        "spectrum", "--N", "8", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["columns"][0], "k");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert_eq!(doc["params"]["N"], "8");
}

#[test]
fn phase_diagram_small_grid() {
    let text = run_ok(&[
        "phase-diagram",
        "--alpha-range",
        "-1:1:11",
        "--h-range",
        "0:2:11",
    ]);
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 121);
    assert!(text.contains("Spiral"));
    assert!(text.contains("AFM"));
    assert!(text.contains("PM"));
}

#[test]
fn sqc_sweep_has_requested_columns() {
    let text = run_ok(&[
        "sqc", "--N", "64", "--alpha", "-0.5", "--h-range", "0:2:5", "--r-list", "1,2",
    ]);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "h,sqc_r1,sqc_r2");
}

#[test]
fn couplings_reduce_the_documented_example() {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/docs/couplings-example.toml");
    let text = run_ok(&["couplings", "--config", config]);
    assert!(text.contains("# reducible=true"), "got:\n{text}");
    // strictly nearest-neighbor kernel: the ring has 6 sites
    assert!(text.contains("# sites=6"));
    // chain parameters present in the header
    assert!(text.lines().any(|l| l.starts_with("# chain_J=")));
}

#[test]
fn oracle_check_passes_and_reports() {
    let text = run_ok(&["oracle-check", "--n", "8", "--draws", "3", "--seed", "11"]);
    assert!(text.contains("# pass=true"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 3);
}

#[test]
fn file_output_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let stdout = run_ok(&["spectrum", "--N", "8"]);
    let _ = run_ok(&["spectrum", "--N", "8", "--out", path.to_str().unwrap()]);
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stdout, file);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.toml");
    std::fs::write(&path, "alpha = -0.5\nh = 0.25\nN = 12\n").unwrap();
    let text = run_ok(&["spectrum", "--config", path.to_str().unwrap()]);
    assert!(text.contains("# alpha=-5.0000000000000000e-1"));
    assert!(text.contains("# N=12"));
    let text = run_ok(&[
        "spectrum",
        "--config",
        path.to_str().unwrap(),
        "--alpha",
        "0.75",
    ]);
    assert!(text.contains("# alpha=7.5000000000000000e-1"));
}
