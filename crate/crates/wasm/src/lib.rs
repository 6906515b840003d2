//! Browser bindings: the solver, the acuteness classifier, and the
//! trajectory checker as plain JSON-string functions.
//!
//! Every export takes and returns JSON strings so the page needs no glue
//! types: a report object on success (with an `svg` field when the scene is
//! planar), or `{ "error": message, "code": n }` where `code` mirrors the
//! CLI exit codes (2 malformed input, 3 invalid body or norm, 4 internal
//! verification failure).

use billiard_core::problem::{ProblemError, ProblemFile, TrajectoryFile};
use billiard_core::render::{render_solution, render_verification};
use billiard_core::report::{to_json, AcutenessReport, VerifyReport, XiReport};
use billiard_core::solver::{shortest_trajectory, SolveError};
use billiard_core::tol::{BOUNDARY_TOL, LAW_TOL};
use billiard_core::trajectory;
use wasm_bindgen::prelude::wasm_bindgen;

fn fail(code: u8, message: impl AsRef<str>) -> String {
    serde_json::json!({ "error": message.as_ref(), "code": code }).to_string()
}

fn problem_code(e: &ProblemError) -> u8 {
    match e {
        ProblemError::Parse(_) | ProblemError::Trajectory(_) => 2,
        ProblemError::Body(_) | ProblemError::Norm(_) => 3,
    }
}

fn solver_code(e: &SolveError) -> u8 {
    match e {
        SolveError::VerificationFailed(_) | SolveError::StructuralCheck(_) => 4,
        _ => 3,
    }
}

/// Inserts the drawing into the report object; key order changes, content
/// does not.
fn attach_svg(report_json: String, svg: Option<String>) -> String {
    match svg {
        None => report_json,
        Some(svg) => {
            let mut v: serde_json::Value =
                serde_json::from_str(&report_json).expect("reports are JSON");
            v["svg"] = serde_json::Value::String(svg);
            serde_json::to_string_pretty(&v).expect("augmented report is JSON")
        }
    }
}

/// Computes the shortest closed trajectory of the problem and returns the
/// full report; planar scenes carry an `svg` drawing of the trajectory and
/// its certificate arrows.
#[wasm_bindgen]
pub fn solve(problem_json: &str) -> String {
    let file = match ProblemFile::from_json(problem_json) {
        Ok(f) => f,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let (k, t) = match file.build() {
        Ok(p) => p,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let sol = match shortest_trajectory(&k, &t) {
        Ok(s) => s,
        Err(e) => return fail(solver_code(&e), e.to_string()),
    };
    let report = XiReport::from_solution(k.dim(), &sol);
    let svg = (k.dim() == 2)
        .then(|| render_solution(&k, &sol).ok())
        .flatten();
    attach_svg(to_json(&report), svg)
}

/// Classifies the body of the problem: per-face normal-cone widths, the
/// acute / not-acute verdict, and a seeded wide-section probe.
#[wasm_bindgen]
pub fn acuteness(problem_json: &str, seed: u32) -> String {
    let file = match ProblemFile::from_json(problem_json) {
        Ok(f) => f,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let k = match file.build_body() {
        Ok(k) => k,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let report = AcutenessReport::build(&k).with_probe(&k, 32, seed as u64);
    to_json(&report)
}

/// Checks a closed polyline against the reflection law; the report lists
/// every violation, and planar scenes carry an `svg` drawing.
#[wasm_bindgen]
pub fn verify(problem_json: &str, trajectory_json: &str) -> String {
    let file = match ProblemFile::from_json(problem_json) {
        Ok(f) => f,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let (k, t) = match file.build() {
        Ok(p) => p,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let q = match TrajectoryFile::from_json(trajectory_json)
        .and_then(|f| f.to_polyline(k.dim()))
    {
        Ok(q) => q,
        Err(e) => return fail(problem_code(&e), e.to_string()),
    };
    let boundary = file.options.boundary_tol.unwrap_or(BOUNDARY_TOL);
    let law = file.options.law_tol.unwrap_or(LAW_TOL);
    let report = trajectory::verify(&k, &t, &q, boundary, law);
    let flat = VerifyReport::from_trajectory_report(&report);
    let svg = (k.dim() == 2)
        .then(|| render_verification(&k, &q, &report).ok())
        .flatten();
    attach_svg(to_json(&flat), svg)
}
