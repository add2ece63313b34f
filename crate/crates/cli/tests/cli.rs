use std::path::Path;
use std::process::{Command, Output};

use diracwire_cli::output::{DENSITY_HEADER, DISPERSION_HEADER, RADIUS_HEADER};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diracwire"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_owned();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn modes_writes_json_for_the_default_wire() {
    let dir = TempDir::new().unwrap();
    let out = run(&["modes", "--out", dir.path().to_str().unwrap(), "--expect", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("modes.json")).unwrap()).unwrap();
    let modes = json["modes"].as_array().unwrap();
    let lowest = modes
        .iter()
        .filter(|m| m["E_eV"].as_f64().unwrap() > 0.0)
        .min_by(|a, b| a["E_eV"].as_f64().unwrap().total_cmp(&b["E_eV"].as_f64().unwrap()))
        .unwrap();
    assert_eq!(lowest["family"], "H");
    assert_eq!(lowest["nu"], 1);
    assert!(lowest["Sz_hbar"].as_f64().unwrap() > 0.49);
    assert!(lowest["oracle_residual"].as_f64().unwrap() < 1e-3);
    assert_eq!(json["config"]["channel"]["mu"], "1/2");
}

#[test]
fn dispersion_schema() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[problem]\nclass = \"jr-\"\n");
    let out = run(&[
        "dispersion", "--config", &cfg, "--out", dir.path().to_str().unwrap(),
        "--kz-min", "0", "--kz-max", "0.1", "--kz-points", "6",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("dispersion.csv"));
    assert_eq!(header, DISPERSION_HEADER);
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r.len(), 5);
        f(&r[0]);
        f(&r[1]);
        assert!(["H", "D", "R", "C"].contains(&r[2].as_str()));
        assert!(r[3].is_empty() || r[3].parse::<u32>().is_ok());
        assert!(f(&r[4]).abs() <= 1.0 + 1e-6);
    }
    assert!(dir.path().join("dispersion.json").exists());
}

#[test]
fn radius_schema() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "sweep-radius", "--out", dir.path().to_str().unwrap(),
        "--a-min", "10", "--a-max", "40", "--a-points", "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("radius.csv"));
    assert_eq!(header, RADIUS_HEADER);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.len(), 5);
        assert!((f(&r[4]) - 0.5).abs() < 1e-8);
        assert!((f(&r[2]) + f(&r[3]) - f(&r[4])).abs() < 1e-12);
    }
}

#[test]
fn jrd_density_vanishes_outside_and_sums_to_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[problem]\nclass = \"jrd\"\n");
    let out = run(&["density", "--config", &cfg, "--out", dir.path().to_str().unwrap(), "--grid", "151"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("density.csv"));
    assert_eq!(header, DENSITY_HEADER);
    assert_eq!(rows.len(), 151 * 151);
    let a = 20.0;
    let cell = (3.0 * a / 151.0f64).powi(2);
    let mut total = 0.0;
    for r in &rows {
        assert_eq!(r.len(), 7);
        let (x, y, p) = (f(&r[0]), f(&r[1]), f(&r[2]));
        if x.hypot(y) >= a {
            assert_eq!(p, 0.0);
        }
        total += p * cell;
    }
    assert!((total - 1.0).abs() < 0.01, "{total}");
}

#[test]
fn jr_minus_density_peaks_near_the_surface() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[problem]\nclass = \"jr-\"\n");
    let out = run(&["density", "--config", &cfg, "--out", dir.path().to_str().unwrap(), "--grid", "241"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("density.csv"));
    let peak = rows
        .iter()
        .max_by(|p, q| f(&p[2]).total_cmp(&f(&q[2])))
        .unwrap();
    let rho = f(&peak[0]).hypot(f(&peak[1]));
    assert!((rho - 20.0).abs() < 0.15 * 20.0, "peak at ρ = {rho}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let out = run(&[
            "dispersion", "--out", dir.path().to_str().unwrap(),
            "--kz-min", "0", "--kz-max", "0.05", "--kz-points", "4",
        ]);
        assert!(out.status.success());
    }
    for name in ["dispersion.csv", "dispersion.json"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap()
        );
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let bad_cfg = write_config(dir.path(), "[problem]\nclass = \"jr+\"\ninterior_mass_eV = -1.0\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["dispersion", "--kz-points", "0", "--out", out],
        vec!["dispersion", "--kz-min", "0.2", "--kz-max", "0.1", "--out", out],
        vec!["modes", "--mu", "1", "--out", out],
        vec!["modes", "--config", "/nonexistent/run.toml"],
        vec!["modes", "--config", &bad_cfg],
        vec!["sweep-radius", "--a-min", "1", "--out", out],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn missing_expected_modes_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[problem]\nclass = \"jr+\"\n[solver]\nscan_points = 400\nenergy_tol_eV = 1e-10\nthreshold_refinement = 10\nwindow_eV = [-0.5, 0.5]\n",
    );
    let out = run(&["modes", "--config", &cfg, "--out", dir.path().to_str().unwrap(), "--expect", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_passes_for_each_class() {
    let dir = TempDir::new().unwrap();
    for class in ["jr+", "jr-", "jrd"] {
        let cfg = write_config(dir.path(), &format!("[problem]\nclass = \"{class}\"\n"));
        let out = run(&["validate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(out.status.success(), "{class}: {stdout}");
        assert!(!stdout.contains("FAIL"));
    }
}

#[test]
fn json_config_is_accepted() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"problem": {"class": "jr-"}, "channel": {"mu": "-1/2", "kz_invA": 0.02}}"#).unwrap();
    let out = run(&["modes", "--config", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("modes.json")).unwrap()).unwrap();
    assert!(json["modes"].as_array().unwrap().iter().all(|m| m["two_mu"] == -1));
}
