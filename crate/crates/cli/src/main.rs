//! `billiard`: solve, classify, check, and draw shortest closed billiard
//! trajectories in convex polytopes.
//!
//! Subcommands: `xi` (solve), `acuteness` (classify the body), `verify`
//! (check a trajectory file), `render` (static SVG of a planar scene).
//! Exit codes: 0 success, 1 invalid trajectory (report still printed),
//! 2 unreadable or malformed input, 3 invalid body or norm, 4 internal
//! verification failure, 5 output not writable.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use billiard_core::problem::{ProblemError, ProblemFile, TrajectoryFile};
use billiard_core::render::render_verification;
use billiard_core::report::{to_json, AcutenessReport, VerifyReport, XiReport};
use billiard_core::solver::{brute_force_xi, shortest_trajectory, SolveError};
use billiard_core::tol::{BOUNDARY_TOL, LAW_TOL};
use billiard_core::trajectory::verify;
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_INVALID_TRAJECTORY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BAD_BODY: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;
const EXIT_OUTPUT: u8 = 5;

#[derive(Parser)]
#[command(
    name = "billiard",
    version,
    about = "Shortest closed billiard trajectories in convex polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the shortest closed trajectory, its length, and a
    /// non-translatability certificate.
    Xi {
        /// Problem file (JSON).
        problem: PathBuf,
        /// Also run the exhaustive planar grid oracle and embed its result.
        #[arg(long)]
        oracle: bool,
        /// Arclength step of the grid oracle (planar bodies only).
        #[arg(long)]
        grid: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify the body: per-face normal-cone widths and the overall
    /// acute / not-acute verdict.
    Acuteness {
        /// Problem file (JSON); the norm section is ignored.
        problem: PathBuf,
        /// Seed of the sampled wide-section probe.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a closed polyline against the reflection law and report every
    /// violation. Exits 1 when invalid; the report is still printed.
    Verify {
        /// Problem file (JSON).
        problem: PathBuf,
        /// Trajectory file (JSON).
        trajectory: PathBuf,
        /// Overrides both the boundary and the reflection-law tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a planar body, a trajectory, and its bounce normals as SVG.
    Render {
        /// Problem file (JSON); the body must be two-dimensional.
        problem: PathBuf,
        /// Trajectory file (JSON).
        trajectory: PathBuf,
        /// Output SVG path; the parent directory must already exist.
        #[arg(short, long)]
        output: PathBuf,
    },
}

type Failure = (u8, String);

fn problem_code(e: &ProblemError) -> u8 {
    match e {
        ProblemError::Parse(_) | ProblemError::Trajectory(_) => EXIT_PARSE,
        ProblemError::Body(_) | ProblemError::Norm(_) => EXIT_BAD_BODY,
    }
}

fn solver_code(e: &SolveError) -> u8 {
    match e {
        SolveError::VerificationFailed(_) | SolveError::StructuralCheck(_) => EXIT_VERIFICATION,
        _ => EXIT_BAD_BODY,
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| (EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn load_problem(path: &PathBuf) -> Result<ProblemFile, Failure> {
    let text = read_file(path)?;
    ProblemFile::from_json(&text)
        .map_err(|e| (problem_code(&e), format!("{}: {e}", path.display())))
}

fn load_trajectory(path: &PathBuf, dim: usize) -> Result<billiard_core::ClosedPolyline, Failure> {
    let text = read_file(path)?;
    let file = TrajectoryFile::from_json(&text)
        .map_err(|e| (problem_code(&e), format!("{}: {e}", path.display())))?;
    file.to_polyline(dim)
        .map_err(|e| (problem_code(&e), format!("{}: {e}", path.display())))
}

/// Prints to stdout or writes to `output`; either way the payload ends in
/// exactly one newline so re-runs are byte-comparable.
fn emit(body: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    let payload = format!("{}\n", body.trim_end_matches('\n'));
    match output {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => fs::write(path, payload)
            .map_err(|e| (EXIT_OUTPUT, format!("cannot write {}: {e}", path.display()))),
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Xi {
            problem,
            oracle,
            grid,
            format,
            output,
        } => {
            let file = load_problem(&problem)?;
            let (k, t) = file
                .build()
                .map_err(|e| (problem_code(&e), e.to_string()))?;
            let sol =
                shortest_trajectory(&k, &t).map_err(|e| (solver_code(&e), e.to_string()))?;
            let mut report = XiReport::from_solution(k.dim(), &sol);
            if oracle {
                let step = grid.or(file.options.grid).unwrap_or(1e-2);
                let brute =
                    brute_force_xi(&k, &t, step).map_err(|e| (solver_code(&e), e.to_string()))?;
                report = report.with_oracle(step, &brute);
            }
            let body = match format {
                Format::Json => to_json(&report),
                Format::Text => report.to_text(),
            };
            emit(&body, output.as_ref())?;
            Ok(0)
        }
        Command::Acuteness {
            problem,
            seed,
            format,
            output,
        } => {
            let file = load_problem(&problem)?;
            let k = file
                .build_body()
                .map_err(|e| (problem_code(&e), e.to_string()))?;
            let seed = seed.or(file.options.seed).unwrap_or(7);
            let report = AcutenessReport::build(&k).with_probe(&k, 32, seed);
            let body = match format {
                Format::Json => to_json(&report),
                Format::Text => report.to_text(),
            };
            emit(&body, output.as_ref())?;
            Ok(0)
        }
        Command::Verify {
            problem,
            trajectory,
            tol,
            format,
            output,
        } => {
            let file = load_problem(&problem)?;
            let (k, t) = file
                .build()
                .map_err(|e| (problem_code(&e), e.to_string()))?;
            let q = load_trajectory(&trajectory, k.dim())?;
            let boundary = tol.or(file.options.boundary_tol).unwrap_or(BOUNDARY_TOL);
            let law = tol.or(file.options.law_tol).unwrap_or(LAW_TOL);
            let report = VerifyReport::from_trajectory_report(&verify(&k, &t, &q, boundary, law));
            let body = match format {
                Format::Json => to_json(&report),
                Format::Text => report.to_text(),
            };
            emit(&body, output.as_ref())?;
            Ok(if report.valid {
                0
            } else {
                EXIT_INVALID_TRAJECTORY
            })
        }
        Command::Render {
            problem,
            trajectory,
            output,
        } => {
            let file = load_problem(&problem)?;
            let (k, t) = file
                .build()
                .map_err(|e| (problem_code(&e), e.to_string()))?;
            let q = load_trajectory(&trajectory, k.dim())?;
            let boundary = file.options.boundary_tol.unwrap_or(BOUNDARY_TOL);
            let law = file.options.law_tol.unwrap_or(LAW_TOL);
            let report = verify(&k, &t, &q, boundary, law);
            let svg = render_verification(&k, &q, &report).map_err(|m| (EXIT_BAD_BODY, m))?;
            fs::write(&output, svg)
                .map_err(|e| (EXIT_OUTPUT, format!("cannot write {}: {e}", output.display())))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
