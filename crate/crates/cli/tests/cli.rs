use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(sub: &str, config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degenlab"))
        .args([sub, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .env("DEGEN_LAB_THREADS", "2")
        .output()
        .expect("spawn degenlab")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn passing_run_exits_zero_with_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("remark11");
    let o = run("remark11", &configs().join("remark11.cfg"), &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["scenario"], "remark11");
    assert!(r["metrics"].as_object().unwrap().values().all(|m| m["pass"] == true));
    assert!(out.join("remark11.json").exists());
    assert!(String::from_utf8_lossy(&o.stdout).contains("remark11 pass"));
}

#[test]
fn liouville_run_writes_snapshots_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("liouville");
    let o = run("liouville-t", &configs().join("liouville.cfg"), &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("liouville_deviation.csv").exists());
    assert!(out.join("snapshots").is_dir());
    let r = report(&out);
    assert_eq!(r["metrics"]["liouville.t_degree"]["value"], 1.0);
}

#[test]
fn failing_metric_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("liouville.cfg"))
        .unwrap()
        .replace("tolerance = 1e-4", "tolerance = 1e-30");
    let cfg = write_config(dir.path(), "strict.cfg", &text);
    let out = dir.path().join("strict");
    let o = run("liouville-t", &cfg, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAILED liouville.deviation"));
    assert_eq!(report(&out)["metrics"]["liouville.deviation"]["pass"], false);
}

#[test]
fn scenario_mismatch_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("uniqueness", &configs().join("remark11.cfg"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("remark11"));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn bad_config_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.cfg",
        "scenario = uniqueness\nbeta = 1\n# comment\nwarp = 9\n",
    );
    let o = run("uniqueness", &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4") && err.contains("warp"), "{err}");
}

#[test]
fn missing_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("estimates", &dir.path().join("absent.cfg"), dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("uniqueness.cfg")).unwrap();
    let cfg = write_config(dir.path(), "u.cfg", &text);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run("uniqueness", &cfg, &a).status.code(), Some(0));
    assert_eq!(run("uniqueness", &cfg, &b).status.code(), Some(0));
    assert_eq!(
        std::fs::read(a.join("report.json")).unwrap(),
        std::fs::read(b.join("report.json")).unwrap()
    );
}
