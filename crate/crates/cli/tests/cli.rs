//! End-to-end runs of the `billiard` binary: report contents, exit codes,
//! byte stability, and the solve -> verify round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn billiard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiard"))
        .args(args)
        .output()
        .expect("the binary launches")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Per-test scratch directory under the target dir (always writable).
fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../target/cli-scratch")
        .join(name);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

#[test]
fn xi_solves_the_equilateral_triangle() {
    let out = billiard(&["xi", &fixture("equilateral.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = stdout_json(&out);
    assert_eq!(rep["schema"], 1);
    assert!((rep["xi"].as_f64().unwrap() - 1.5).abs() <= 1e-6);
    assert_eq!(rep["classical"], true);
    assert_eq!(rep["bounce_count"], 3);
    assert_eq!(rep["trajectory"].as_array().unwrap().len(), 3);
    assert!(!rep["certificate"].as_array().unwrap().is_empty());
    for r in rep["law_residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() <= 1e-7);
    }
}

#[test]
fn xi_reports_are_byte_stable_and_round_trip_through_verify() {
    let problem = fixture("equilateral.json");
    let first = billiard(&["xi", &problem]);
    let second = billiard(&["xi", &problem]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "re-runs must agree byte for byte");

    let rep = stdout_json(&first);
    let dir = scratch("round-trip");
    let traj_path = dir.join("trajectory.json");
    let traj = serde_json::json!({ "vertices": rep["trajectory"] });
    std::fs::write(&traj_path, serde_json::to_string_pretty(&traj).unwrap()).unwrap();

    let verify = billiard(&["verify", &problem, traj_path.to_str().unwrap()]);
    assert_eq!(code(&verify), 0, "{}", String::from_utf8_lossy(&verify.stderr));
    let vrep = stdout_json(&verify);
    assert_eq!(vrep["valid"], true);
    assert_eq!(vrep["classical"], true);
    let diff = (vrep["length"].as_f64().unwrap() - rep["xi"].as_f64().unwrap()).abs();
    assert!(diff <= 1e-12, "lengths diverged by {diff}");
}

#[test]
fn xi_embeds_the_grid_oracle_and_flags_generalized_bounces() {
    let out = billiard(&["xi", &fixture("right-isoceles.json"), "--oracle", "--grid", "0.01"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = stdout_json(&out);
    let xi = rep["xi"].as_f64().unwrap();
    assert!((xi - std::f64::consts::SQRT_2).abs() <= 1e-6);
    assert_eq!(rep["classical"], false);
    let oracle = &rep["oracle"];
    assert_eq!(oracle["grid"].as_f64().unwrap(), 0.01);
    assert!((oracle["xi"].as_f64().unwrap() - xi).abs() <= 5.0 * 0.01);
}

#[test]
fn xi_picks_the_grid_from_the_problem_file_options() {
    let out = billiard(&["xi", &fixture("square-ellipsoid.json"), "--oracle"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = stdout_json(&out);
    // The norm unit ball is a shifted disk; shifts cancel over a closed
    // cycle, so the width-pair answer survives.
    assert!((rep["xi"].as_f64().unwrap() - 2.0).abs() <= 1e-6);
    assert_eq!(rep["oracle"]["grid"].as_f64().unwrap(), 0.01);
    assert!((rep["oracle"]["xi"].as_f64().unwrap() - 2.0).abs() <= 5.0 * 0.01);
}

#[test]
fn xi_rejects_norms_without_unique_momenta() {
    let out = billiard(&["xi", &fixture("dual-norm.json")]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("momenta"), "unexpected stderr: {err}");
}

#[test]
fn parse_body_and_io_failures_use_distinct_exit_codes() {
    let malformed = billiard(&["xi", &fixture("malformed.json")]);
    assert_eq!(code(&malformed), 2);
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("parse error"));

    let unbounded = billiard(&["xi", &fixture("unbounded.json")]);
    assert_eq!(code(&unbounded), 3);
    assert!(String::from_utf8_lossy(&unbounded.stderr).contains("invalid body"));

    let missing = billiard(&["xi", &fixture("no-such-file.json")]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn acuteness_separates_the_tetrahedron_from_the_square() {
    let tet = billiard(&["acuteness", &fixture("tetrahedron.json")]);
    assert_eq!(code(&tet), 0);
    let rep = stdout_json(&tet);
    assert_eq!(rep["acute"], true);
    let angles = rep["dihedral_angles"].as_array().unwrap();
    assert_eq!(angles.len(), 6);
    for a in angles {
        assert!((a["angle_rad"].as_f64().unwrap() - 1.2309594173407747).abs() <= 1e-9);
    }
    assert_eq!(rep["wide_section_probe"]["confirmed"], true);

    let sq = billiard(&["acuteness", &fixture("square.json"), "--seed", "11"]);
    assert_eq!(code(&sq), 0);
    let rep = stdout_json(&sq);
    assert_eq!(rep["acute"], false);
    assert_eq!(rep["dihedral_angles"], serde_json::Value::Null);
    assert_eq!(rep["wide_section_probe"]["confirmed"], false);
    assert_eq!(rep["wide_section_probe"]["seed"], 11);
}

#[test]
fn verify_accepts_the_orthic_cycle_and_rejects_an_interior_vertex() {
    let problem = fixture("equilateral.json");
    let good = billiard(&["verify", &problem, &fixture("orthic.json")]);
    assert_eq!(code(&good), 0, "{}", String::from_utf8_lossy(&good.stderr));
    let rep = stdout_json(&good);
    assert_eq!(rep["valid"], true);
    assert_eq!(rep["classical"], true);

    // Invalid input still produces a full report on stdout, with exit 1.
    let bad = billiard(&["verify", &problem, &fixture("interior.json")]);
    assert_eq!(code(&bad), 1);
    let rep = stdout_json(&bad);
    assert_eq!(rep["valid"], false);
    assert!(!rep["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_tolerance_flag_widens_the_boundary_band() {
    let problem = fixture("equilateral.json");
    let shifted = fixture("orthic-shifted.json");
    let strict = billiard(&["verify", &problem, &shifted]);
    assert_eq!(code(&strict), 1, "1e-5 off the boundary must fail at 1e-7");

    let loose = billiard(&["verify", &problem, &shifted, "--tol", "1e-4"]);
    assert_eq!(code(&loose), 0, "{}", String::from_utf8_lossy(&loose.stdout));
    assert_eq!(stdout_json(&loose)["valid"], true);
}

#[test]
fn verify_rejects_trajectories_of_the_wrong_dimension() {
    let out = billiard(&["verify", &fixture("equilateral.json"), &fixture("tetra-segment.json")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid trajectory"));
}

#[test]
fn render_writes_deterministic_svg_and_honors_exit_codes() {
    let dir = scratch("render");
    let problem = fixture("equilateral.json");
    let orthic = fixture("orthic.json");

    let a = dir.join("a.svg");
    let b = dir.join("b.svg");
    let first = billiard(&["render", &problem, &orthic, "-o", a.to_str().unwrap()]);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let second = billiard(&["render", &problem, &orthic, "-o", b.to_str().unwrap()]);
    assert_eq!(code(&second), 0);
    let svg = std::fs::read_to_string(&a).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polygon"));
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());

    let missing_dir = dir.join("does-not-exist").join("x.svg");
    let out = billiard(&["render", &problem, &orthic, "-o", missing_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 5);

    let spatial = billiard(&[
        "render",
        &fixture("tetrahedron.json"),
        &fixture("tetra-segment.json"),
        "-o",
        dir.join("t.svg").to_str().unwrap(),
    ]);
    assert_eq!(code(&spatial), 3, "rendering is planar only");
}

#[test]
fn text_format_is_human_readable() {
    let xi = billiard(&["xi", &fixture("equilateral.json"), "--format", "text"]);
    assert_eq!(code(&xi), 0);
    let text = String::from_utf8_lossy(&xi.stdout);
    assert!(text.contains("xi = 1.500000000"), "{text}");

    let ac = billiard(&["acuteness", &fixture("square.json"), "--format", "text"]);
    let text = String::from_utf8_lossy(&ac.stdout);
    assert!(text.contains("not acute"), "{text}");
}

#[test]
fn output_flag_writes_the_report_to_disk() {
    let dir = scratch("output-flag");
    let path = dir.join("report.json");
    let out = billiard(&[
        "xi",
        &fixture("equilateral.json"),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((rep["xi"].as_f64().unwrap() - 1.5).abs() <= 1e-6);

    let denied = billiard(&[
        "xi",
        &fixture("equilateral.json"),
        "-o",
        dir.join("nope").join("report.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&denied), 5);
}
