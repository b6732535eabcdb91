//! Exit codes and output files of the `lgas` binary.

use std::path::Path;
use std::process::Command;

const GOOD: &str = "scheme = \"sp\"\nbc = \"rigid-walls\"\n[gas]\nn = 0\ngamma = 1.4\n[mesh]\ncells = 16\n[time]\nt_end = 0.05\ntau = 0.01\n[preset]\nid = \"isentropic-smooth\"\nvelocity = 0.1\n";

fn lgas(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lgas"))
        .args(args)
        .env("GASDYN_OUTPUT_DIR", dir.join("out"))
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn run_succeeds_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GOOD);
    let (code, err) = lgas(dir.path(), &["run", &cfg]);
    assert_eq!(code, 0, "{err}");
    for f in ["summary.json", "monitors.csv", "snapshot_000000.csv", "snapshot_000005.csv"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
}

#[test]
fn invalid_config_exits_with_one_and_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &GOOD.replace("gamma = 1.4", "gamma = 0.5"));
    let (code, err) = lgas(dir.path(), &["run", &cfg]);
    assert_eq!(code, 1);
    assert!(err.contains("line 5"), "{err}");

    let cfg = write_config(dir.path(), &format!("{GOOD}bogus = 1\n"));
    assert_eq!(lgas(dir.path(), &["run", &cfg]).0, 1);
    assert_eq!(lgas(dir.path(), &["run", "/nonexistent/run.toml"]).0, 1);
}

#[test]
fn bad_arguments_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lgas(dir.path(), &["verify", "no-such-suite"]).0, 1);
    assert_eq!(lgas(dir.path(), &["frobnicate"]).0, 1);
    let cfg = write_config(dir.path(), GOOD);
    assert_eq!(lgas(dir.path(), &["invariance", &cfg, "--generator", "x9", "--a", "0.1"]).0, 1);
    assert_eq!(lgas(dir.path(), &["convergence", &cfg, "--levels", "2"]).0, 1);
    assert_eq!(lgas(dir.path(), &["--help"]).0, 0);
}

#[test]
fn invariance_and_convergence_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GOOD);
    let (code, err) = lgas(dir.path(), &["invariance", &cfg, "--generator", "galilean", "--a", "-0.5,0.5"]);
    assert_eq!(code, 0, "{err}");
    assert!(dir.path().join("out/invariance_galilean.json").exists());
    let (code, err) = lgas(dir.path(), &["convergence", &cfg, "--levels", "3"]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(dir.path().join("out/convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn non_smooth_convergence_warns() {
    let dir = tempfile::tempdir().unwrap();
    let text = GOOD.replace("\"isentropic-smooth\"\nvelocity = 0.1", "\"sod-like-two-state\"");
    let cfg = write_config(dir.path(), &text);
    let (code, err) = lgas(dir.path(), &["convergence", &cfg, "--levels", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("warning"), "{err}");
}

#[test]
fn numerical_failure_exits_with_two_and_keeps_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = "scheme = \"explicit-invariant\"\nbc = \"periodic\"\n[gas]\nn = 0\ngamma_star = true\n[mesh]\ncells = 16\n[time]\nt_end = 10.0\ntau = 0.2\n[preset]\nid = \"isentropic-smooth\"\namplitude = 0.5\nvelocity = 0.5\n";
    let cfg = write_config(dir.path(), text);
    let (code, err) = lgas(dir.path(), &["run", &cfg]);
    assert_eq!(code, 2, "{err}");
    let summary = std::fs::read_to_string(dir.path().join("out/summary.json")).unwrap();
    assert!(summary.contains("\"failed\""));
    assert!(dir.path().join("out/snapshot_000000.csv").exists());
}
