use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fcm_vibro::scenarios::preset;

fn solver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solver")).args(args).output().unwrap()
}

fn small_config(dir: &Path, dt: f64) -> String {
    let mut cfg = preset("benchmark").unwrap();
    cfg.structure.grid.cells = [15, 5];
    cfg.fluid.grid.cells = [15, 5];
    cfg.quadrature.depth = 3;
    cfg.time.dt = dt;
    cfg.time.duration = 3e-7;
    let path = dir.join("small.toml");
    fs::write(&path, cfg.to_toml()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn presets_are_listed() {
    let out = solver(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["benchmark", "tube-v1", "tube-v2", "tube-v3"]);
}

#[test]
fn unknown_preset_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = solver(&["run", "no-such-preset", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_time_step_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 0.0);
    let out = solver(&["run", &cfg, "-o", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("time.dt"));
}

#[test]
fn run_force_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 1e-7);
    let out_dir = dir.path().join("run");
    let out = out_dir.to_str().unwrap();
    let first = solver(&["run", &cfg, "-o", out, "--scheme", "trapezoidal", "--snapshot-stride", "3"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert!(out_dir.join("observers.csv").is_file());
    assert!(out_dir.join("snapshot_00000003.vtk").is_file());

    let again = solver(&["run", &cfg, "-o", out]);
    assert_eq!(again.status.code(), Some(3));
    let forced = solver(&["run", &cfg, "-o", out, "--force", "--dt", "5e-8"]);
    assert!(forced.status.success());
    assert_eq!(fs::read_to_string(out_dir.join("observers.csv")).unwrap().lines().count(), 1 + 7);
    assert!(!out_dir.join("snapshot_00000003.vtk").exists());

    let a = dir.path().join("a");
    let b = dir.path().join("b");
    fs::create_dir_all(&a).unwrap();
    fs::create_dir_all(&b).unwrap();
    fs::write(a.join("rt_measures.csv"), "t,P_ref,P_tra\n0,0,0\n1e-3,1,2\n2e-3,3,5\n").unwrap();
    fs::write(b.join("rt_measures.csv"), "t,P_ref,P_tra\n0,0,0\n1e-3,1,2\n").unwrap();
    let csv = dir.path().join("table.csv");
    let single = solver(&["report", a.join("rt_measures.csv").to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert!(single.status.success());
    assert_eq!(String::from_utf8(single.stdout).unwrap().lines().count(), 2);
    let table = fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("run,reflectance,transmittance\na,"));

    let mixed = solver(&["report", a.join("rt_measures.csv").to_str().unwrap(), b.join("rt_measures.csv").to_str().unwrap()]);
    assert_eq!(mixed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&mixed.stderr).contains("incompatible time axes"));

    let missing = solver(&["report", dir.path().join("nope.csv").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(3));
}
