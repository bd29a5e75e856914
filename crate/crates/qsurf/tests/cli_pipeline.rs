//! End-to-end runs of the installed binary: exit codes, determinism of
//! emitted files, geometry of the exported mesh, and the error surface
//! for bad inputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsurf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const CATENOID: &str = r#"{
  "epsilon": 0,
  "n": 2,
  "base": { "kind": "round_sphere", "params": { "r": 1.0 } },
  "profile": { "kind": "minimal", "a0": 0.6584789484624083, "h0": 0.25, "sign": 1 },
  "s_range": [0.0, 2.0],
  "grid": { "u": 48, "s": 33 },
  "verify": { "samples": 40, "seed": 11 }
}"#;

const SPHERE_LINEAR: &str = r#"{
  "epsilon": 1,
  "n": 2,
  "base": { "kind": "geodesic_sphere", "params": { "r": 1.0 } },
  "profile": { "kind": "linear", "A": 1.0 },
  "s_range": [-0.5, 0.5],
  "grid": { "u": 16, "s": 9 },
  "verify": { "samples": 25, "seed": 3 }
}"#;

const PLANE_CMC: &str = r#"{
  "epsilon": 0,
  "n": 2,
  "base": { "kind": "hyperplane", "params": {} },
  "profile": { "kind": "cmc", "H": 0.0, "a0": 0.0, "a1": 1.0 },
  "s_range": [-0.5, 0.5],
  "grid": { "u": 8, "s": 5 },
  "verify": { "samples": 20, "seed": 5 }
}"#;

#[test]
fn verify_exits_zero_on_a_good_config_and_one_on_an_impossible_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_LINEAR);

    let ok = run(&["verify", "--config", &cfg]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&ok.stderr));
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(text.contains("[PASS]"), "summary missing: {text}");
    assert!(!text.contains("[FAIL]"), "unexpected failure: {text}");

    let strict = run(&["verify", "--config", &cfg, "--tol", "1e-14"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stdout).contains("[FAIL]"));
}

#[test]
fn malformed_inputs_exit_two_with_a_pointed_message() {
    let dir = tempfile::tempdir().unwrap();

    // Broken JSON: the message should carry a position.
    let bad = write_config(dir.path(), "bad.json", "{ \"epsilon\": 1, ");
    let out = run(&["verify", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("column"), "stderr: {err}");

    // Unknown top-level field.
    let unknown = write_config(
        dir.path(),
        "unknown.json",
        &SPHERE_LINEAR.replacen("\"epsilon\"", "\"bogus\": 1, \"epsilon\"", 1),
    );
    let out = run(&["verify", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    // Missing file.
    let out = run(&["verify", "--config", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Base kind incompatible with the requested geometry.
    let wrong = write_config(
        dir.path(),
        "wrong.json",
        &SPHERE_LINEAR.replace("\"epsilon\": 1", "\"epsilon\": -1"),
    );
    let out = run(&["verify", "--config", &wrong]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("geodesic_sphere"), "stderr: {err}");
}

#[test]
fn catalog_lists_all_eight_base_kinds() {
    let out = run(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for kind in [
        "geodesic_sphere",
        "equator",
        "clifford_torus",
        "hyperplane",
        "round_sphere",
        "horosphere",
        "equidistant",
        "hyperbolic_geodesic_sphere",
    ] {
        assert!(text.contains(kind), "catalog output missing {kind}: {text}");
    }

    let json = run(&["catalog", "--json"]);
    assert_eq!(json.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(parsed.as_array().map(Vec::len), Some(8));
}

#[test]
fn build_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "catenoid.json", CATENOID);
    let csv1 = dir.path().join("a.csv");
    let csv2 = dir.path().join("b.csv");

    for (csv, _tag) in [(&csv1, "a"), (&csv2, "b")] {
        let out = run(&["build", "--config", &cfg, "--out", csv.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let bytes1 = fs::read(&csv1).unwrap();
    let bytes2 = fs::read(&csv2).unwrap();
    assert!(!bytes1.is_empty());
    assert_eq!(bytes1, bytes2, "csv output is not deterministic");

    let obj1 = fs::read(csv1.with_extension("obj")).unwrap();
    let obj2 = fs::read(csv2.with_extension("obj")).unwrap();
    assert_eq!(obj1, obj2, "obj output is not deterministic");
}

#[test]
fn verify_report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_LINEAR);
    let rep1 = dir.path().join("r1.json");
    let rep2 = dir.path().join("r2.json");
    for rep in [&rep1, &rep2] {
        let out = run(&["verify", "--config", &cfg, "--report", rep.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(&rep1).unwrap();
    let b = fs::read(&rep2).unwrap();
    assert_eq!(a, b, "report JSON is not deterministic");
    let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(parsed["all_pass"], serde_json::Value::Bool(true));
}

#[test]
fn exported_catenoid_mesh_satisfies_the_radius_height_relation() {
    // Every vertex of the flat rotational minimal surface must satisfy
    // radius = cosh(2 height) / 2.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "catenoid.json", CATENOID);
    let csv = dir.path().join("mesh.csv");
    let out = run(&["build", "--config", &cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let obj = fs::read_to_string(csv.with_extension("obj")).unwrap();
    let mut vertices = 0;
    let mut faces = 0;
    let mut worst: f64 = 0.0;
    for line in obj.lines() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first() {
            Some(&"v") => {
                let x: f64 = fields[1].parse().unwrap();
                let y: f64 = fields[2].parse().unwrap();
                let t: f64 = fields[3].parse().unwrap();
                let radius = x.hypot(y);
                worst = worst.max((radius - 0.5 * (2.0 * t).cosh()).abs());
                vertices += 1;
            }
            Some(&"f") => faces += 1,
            _ => {}
        }
    }
    assert_eq!(vertices, 48 * 33);
    assert_eq!(faces, 48 * 32);
    assert!(worst <= 1e-6, "radius/height relation violated by {worst:e}");
}

#[test]
fn obj_export_only_happens_for_flat_two_dimensional_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_LINEAR);
    let csv = dir.path().join("sphere.csv");
    let out = run(&["build", "--config", &cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(csv.exists());
    assert!(!csv.with_extension("obj").exists(), "obj written for a non-embeddable case");
}

#[test]
fn profile_table_carries_residuals_and_the_minimal_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "plane.json", PLANE_CMC);
    let out_path = dir.path().join("profile.csv");
    let out = run(&["profile", "--config", &cfg, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,a,a_prime,a_second,b,nu,Hs,ode_residual"));
    assert!(
        text.contains("minimal_cross_check_max_delta"),
        "zero-target run should compare against the first-order route: {text}"
    );
    for line in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let resid: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(resid.abs() <= 1e-8, "profile equation residual {resid:e} in {line}");
    }
}

#[test]
fn clipped_offset_ranges_are_announced_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let clifford = r#"{
      "epsilon": 1,
      "n": 3,
      "base": { "kind": "clifford_torus", "params": { "p": 1, "q": 1, "r": 0.7071067811865476 } },
      "profile": { "kind": "linear", "A": 1.0 },
      "s_range": [-2.0, 2.0],
      "grid": { "u": 4, "s": 5 },
      "verify": { "samples": 10, "seed": 1 }
    }"#;
    let cfg = write_config(dir.path(), "clifford.json", clifford);
    let csv = dir.path().join("clifford.csv");
    let out = run(&["build", "--config", &cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("clipped"), "no clip warning: {err}");
}

#[test]
fn usage_errors_and_help_behave_like_a_normal_cli() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["catalog", "build", "verify", "profile"] {
        assert!(text.contains(sub), "help missing {sub}");
    }

    let unknown = run(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
}
