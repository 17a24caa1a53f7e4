use std::path::Path;
use std::process::{Command, Output};

fn varreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varreg"))
        .args(args)
        .env_remove("VARREG_TOL")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn boundary_preset_writes_curve_sidecar_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("1L.csv");
    let svg = dir.path().join("1L.svg");
    let out = varreg(&[
        "boundary",
        "--preset",
        "1L",
        "--out",
        path_str(&csv),
        "--svg",
        path_str(&svg),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,re,im"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 512);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    let meta = read_json(&dir.path().join("1L.csv.json"));
    assert_eq!(meta["convex"], true);
    assert_eq!(meta["simple"], true);
    assert_eq!(meta["singleton"], false);
    assert_eq!(meta["preset"], "1L");
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(svg.contains("viewBox="));
}

#[test]
fn boundary_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a", "b"] {
        let csv = dir.path().join(format!("{name}.csv"));
        let svg = dir.path().join(format!("{name}.svg"));
        let out = varreg(&[
            "boundary",
            "--z0",
            "-0.3,0.45",
            "--lambda",
            "0.2,-0.1",
            "--mu",
            "40,-15",
            "--samples",
            "64",
            "--out",
            path_str(&csv),
            "--svg",
            path_str(&svg),
        ]);
        assert!(out.status.success());
        files.push((
            std::fs::read(&csv).unwrap(),
            std::fs::read(dir.path().join(format!("{name}.csv.json"))).unwrap(),
            std::fs::read(&svg).unwrap(),
        ));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn boundary_origin_is_flagged_singleton() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = varreg(&[
        "boundary",
        "--z0",
        "0,0",
        "--lambda",
        "0.1,0.2",
        "--mu",
        "3,1",
        "--out",
        path_str(&csv),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2);
    let meta = read_json(&dir.path().join("s.csv.json"));
    assert_eq!(meta["singleton"], true);
    assert!(meta["convex"].is_null());
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &[
            "boundary", "--z0", "0.1,0", "--lambda", "0,0", "--mu", "-1,0",
        ][..],
        &[
            "boundary", "--z0", "1.2,0", "--lambda", "0,0", "--mu", "1,0",
        ],
        &[
            "boundary", "--z0", "0.1,0", "--lambda", "1.5,0", "--mu", "1,0",
        ],
        &["boundary", "--preset", "9Z"],
        &["boundary", "--preset", "all"],
        &["boundary", "--preset", "1L", "--tol", "-1"],
        &["bounds", "--z0", "0.1"],
        &["sample", "--preset", "1L", "--max-degree", "9"],
    ] {
        let out = varreg(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn tolerance_from_environment_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_varreg"));
        cmd.args(["bounds", "--preset", "2R"]);
        if let Some(f) = flag {
            cmd.args(["--tol", f]);
        }
        match env {
            Some(e) => cmd.env("VARREG_TOL", e),
            None => cmd.env_remove("VARREG_TOL"),
        };
        let out = cmd.output().unwrap();
        (
            out.status.code(),
            serde_json::from_slice::<serde_json::Value>(&out.stdout).ok(),
        )
    };
    let (_, json) = run(Some("1e-7"), None);
    assert_eq!(json.unwrap()["tol"], 1e-7);
    let (_, json) = run(Some("1e-7"), Some("1e-9"));
    assert_eq!(json.unwrap()["tol"], 1e-9);
    let (code, _) = run(Some("nonsense"), None);
    assert_eq!(code, Some(2));
}

#[test]
fn radial_bounds_contain_the_curve() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    assert!(
        varreg(&["boundary", "--preset", "1L", "--out", path_str(&csv)])
            .status
            .success()
    );
    let out = varreg(&["bounds", "--preset", "1L", "--path", "radial"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (cx, cy) = (
        json["center"][0].as_f64().unwrap(),
        json["center"][1].as_f64().unwrap(),
    );
    let r = json["radius"].as_f64().unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(((v[1] - cx).powi(2) + (v[2] - cy).powi(2)).sqrt() <= r * (1.0 + 1e-8));
    }
}

#[test]
fn gamma0_bounds_report_tangency() {
    let out = varreg(&[
        "bounds", "--preset", "1L", "--path", "gamma0", "--theta", "0",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["tangency"]["relative_residual"].as_f64().unwrap() < 1e-6);
    assert!(json["tangency"]["direction_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn unimodular_lambda_gives_zero_radius() {
    let out = varreg(&[
        "bounds", "--z0", "0.3,-0.2", "--lambda", "0.6,0.8", "--mu", "5,2",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["radius"], 0.0);
}

#[test]
fn gamma0_at_origin_is_rejected() {
    let out = varreg(&[
        "bounds", "--z0", "0,0", "--lambda", "0.1,0", "--mu", "5,2", "--path", "gamma0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_has_no_outsiders_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for name in ["x", "y"] {
        let csv = dir.path().join(format!("{name}.csv"));
        let out = varreg(&[
            "sample",
            "--preset",
            "1L",
            "--count",
            "200",
            "--seed",
            "7",
            "--out",
            path_str(&csv),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let summary = read_json(&dir.path().join(format!("{name}.csv.json")));
        assert_eq!(summary["outside"], 0);
        assert_eq!(summary["count"], 200);
        bytes.push((
            std::fs::read(&csv).unwrap(),
            std::fs::read(dir.path().join(format!("{name}.csv.json"))).unwrap(),
        ));
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(String::from_utf8_lossy(&bytes[0].0).lines().count(), 201);
}

#[test]
fn empty_sample() {
    let out = varreg(&["sample", "--preset", "1L", "--count", "0"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "index,seed,degree,re,im,verdict\n"
    );
}

#[test]
fn verify_quick_preset_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("v.json");
    let out = varreg(&[
        "verify",
        "--preset",
        "1L",
        "--quick",
        "--out",
        path_str(&json),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("1/1 passed"));
    let report = read_json(&json);
    assert!(report[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn verify_lambda_zero_runs_formula_grid() {
    let out = varreg(&[
        "verify", "--quick", "--z0", "0.4,0.3", "--lambda", "0,0", "--mu", "9,4",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("bounds.lambda0_formulas"));
}

#[test]
fn verify_failure_exits_5_naming_the_invariant() {
    // 16 against 32 samples is too coarse for the refinement check
    let out = varreg(&["verify", "--quick", "--preset", "1R", "--samples", "32"]);
    assert_eq!(
        out.status.code(),
        Some(5),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("invariant region.refinement failed"));
}
