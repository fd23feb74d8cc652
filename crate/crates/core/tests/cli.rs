use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn swfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swfem")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn experiment(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../experiments").join(name);
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn small_converge(ns: &[usize]) -> Value {
    let mut v = experiment("table1.json");
    v["study"]["spatial"]["ns"] = json!(ns);
    v
}

fn run_cfg(dt_ratio: f64, snapshots: &[f64]) -> Value {
    json!({
        "run": {
            "problem": {
                "formulation": "supercritical_char",
                "bathymetry": {"kind": "gaussian", "depth": 1.0, "amplitude": 0.04, "rate": 100.0, "center": 0.5},
                "constants": {"eta0": 0.0, "u0": 3.0, "g": 1.0},
                "initial": {"kind": "pulse", "eta_amp": 0.05, "rate": 400.0, "center": 0.25}
            },
            "mesh": {"n": 40},
            "dt": {"ratio": dt_ratio},
            "t_end": 0.2,
            "snapshots": snapshots
        }
    })
}

#[test]
fn malformed_json_is_a_config_error_with_position() {
    let d = TempDir::new().unwrap();
    let p = d.path().join("bad.json");
    fs::write(&p, "{\n  \"problem\": {\n    \"formulation\": ,\n  }\n}\n").unwrap();
    let o = swfem(&["converge", p.to_str().unwrap(), "--out", d.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("line 3"), "{e}");
    assert!(e.contains("column"), "{e}");
}

#[test]
fn unknown_fields_and_missing_files_are_config_errors() {
    let d = TempDir::new().unwrap();
    let mut v = small_converge(&[10]);
    v["study"]["spatial"]["nss"] = json!([1]);
    let p = write(d.path(), "c.json", &v);
    let out = d.path().join("o");
    assert_eq!(swfem(&["converge", p.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(1));
    let o = swfem(&["steady", "/nonexistent/x.json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn snapshot_after_final_time_is_a_config_error() {
    let d = TempDir::new().unwrap();
    let p = write(d.path(), "r.json", &run_cfg(0.1, &[0.1, 0.3]));
    let o = swfem(&["simulate", p.to_str().unwrap(), "--out", d.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn blow_up_exits_two_and_keeps_earlier_profiles() {
    let d = TempDir::new().unwrap();
    let p = write(d.path(), "r.json", &run_cfg(3.0, &[0.1]));
    let out = d.path().join("o");
    let o = swfem(&["simulate", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("blow-up"));
    let m: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["status"], "blow_up");
    assert_eq!(m["exit_code"], 2);
    assert!(out.join("eta_t0.csv").exists());
}

#[test]
fn rerunning_a_manifest_reproduces_the_csv() {
    let d = TempDir::new().unwrap();
    let p = write(d.path(), "c.json", &small_converge(&[10, 20]));
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    assert_eq!(swfem(&["converge", p.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.code(), Some(0));
    let m = a.join("manifest.json");
    assert_eq!(swfem(&["converge", m.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(fs::read(a.join("rates.csv")).unwrap(), fs::read(b.join("rates.csv")).unwrap());
}

#[test]
fn thread_count_does_not_change_results() {
    let d = TempDir::new().unwrap();
    let p = write(d.path(), "c.json", &small_converge(&[10, 20, 40]));
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    swfem(&["converge", p.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    swfem(&["converge", p.to_str().unwrap(), "--out", b.to_str().unwrap(), "--threads", "3"]);
    assert_eq!(fs::read(a.join("rates.csv")).unwrap(), fs::read(b.join("rates.csv")).unwrap());
}

#[test]
fn one_resolution_gives_empty_rates() {
    let d = TempDir::new().unwrap();
    let p = write(d.path(), "c.json", &small_converge(&[10]));
    let out = d.path().join("o");
    assert_eq!(swfem(&["converge", p.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let csv = fs::read_to_string(out.join("rates.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    let cols: Vec<&str> = last.split(',').collect();
    assert_eq!(cols[0], "10");
    assert_eq!((cols[2], cols[4], cols[5]), ("", "", "ok"));
}

#[test]
fn seed_flag_moves_perturbed_nodes() {
    let d = TempDir::new().unwrap();
    let mut v = small_converge(&[10, 20]);
    v["study"]["spatial"]["perturbation"] = json!(0.2);
    let p = write(d.path(), "c.json", &v);
    let dirs: Vec<PathBuf> = ["a", "b", "c"].iter().map(|s| d.path().join(s)).collect();
    swfem(&["converge", p.to_str().unwrap(), "--out", dirs[0].to_str().unwrap(), "--seed", "1"]);
    swfem(&["converge", p.to_str().unwrap(), "--out", dirs[1].to_str().unwrap(), "--seed", "1"]);
    swfem(&["converge", p.to_str().unwrap(), "--out", dirs[2].to_str().unwrap(), "--seed", "2"]);
    let read = |i: usize| fs::read_to_string(dirs[i].join("rates.csv")).unwrap();
    assert_eq!(read(0), read(1));
    assert_ne!(read(0), read(2));
}

#[test]
fn flat_bottom_steady_flow_is_kept_to_roundoff() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("o");
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../experiments/steady_flat.json");
    let o = swfem(&["steady", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("preservation.csv")).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!(row[5] <= 1e-12 && row[6] <= 1e-12, "{csv}");
}
