//! Input file schema: bodies, norms, options, and trajectory files.
//!
//! Problems are plain JSON objects so fixtures stay human-writable. Every
//! parse or validation failure names the offending field.

use crate::linalg::{Covector, Matrix, Vector};
use crate::norm::NormBody;
use crate::polytope::{Halfspace, Polytope};
use crate::trajectory::ClosedPolyline;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    /// Malformed file: not parseable as the schema at all.
    #[error("parse error: {0}")]
    Parse(String),
    /// Parsed but does not define a valid body.
    #[error("invalid body: {0}")]
    Body(String),
    /// Parsed but does not define a valid norm.
    #[error("invalid norm: {0}")]
    Norm(String),
    /// Trajectory file is malformed or inconsistent with the problem.
    #[error("invalid trajectory: {0}")]
    Trajectory(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BodySpec {
    /// Intersection of halfspaces `<normals[i], x> <= offsets[i]`.
    Hrep {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    /// Convex hull of points.
    Vrep { vertices: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NormSpec {
    Euclidean,
    /// `{ p : (p - center)^T matrix (p - center) <= 1 }` in the dual space.
    Ellipsoid {
        matrix: Vec<Vec<f64>>,
        center: Vec<f64>,
    },
    /// Convex hull of momenta; piecewise-linear norm.
    DualPolytope { vertices: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Distance from the boundary tolerated during verification.
    pub boundary_tol: Option<f64>,
    /// Reflection-law residual tolerated during verification.
    pub law_tol: Option<f64>,
    /// Seed for randomized suites built on top of the solver.
    pub seed: Option<u64>,
    /// Arclength step of the exhaustive grid oracle.
    pub grid: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub body: BodySpec,
    #[serde(default)]
    pub norm: Option<NormSpec>,
    #[serde(default)]
    pub options: Options,
}

fn vectors_from(field: &str, rows: &[Vec<f64>], dim: usize) -> Result<Vec<Vector>, String> {
    if rows.is_empty() {
        return Err(format!("{field} is empty"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != dim {
            return Err(format!(
                "{field}[{i}] has {} coordinates, dimension is {dim}",
                r.len()
            ));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(format!("{field}[{i}] has a non-finite coordinate"));
        }
    }
    Ok(rows.iter().map(|r| Vector::new(r.clone())).collect())
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema types are serializable")
    }

    pub fn build_body(&self) -> Result<Polytope, ProblemError> {
        let d = self.dimension;
        if !(2..=4).contains(&d) {
            return Err(ProblemError::Body(format!(
                "dimension must be 2, 3, or 4, got {d}"
            )));
        }
        match &self.body {
            BodySpec::Hrep { normals, offsets } => {
                if normals.len() != offsets.len() {
                    return Err(ProblemError::Body(format!(
                        "body.normals has {} rows, body.offsets has {}",
                        normals.len(),
                        offsets.len()
                    )));
                }
                let rows =
                    vectors_from("body.normals", normals, d).map_err(ProblemError::Body)?;
                let mut hs = Vec::with_capacity(rows.len());
                for (i, (row, &b)) in rows.iter().zip(offsets).enumerate() {
                    if !b.is_finite() {
                        return Err(ProblemError::Body(format!(
                            "body.offsets[{i}] is not finite"
                        )));
                    }
                    let n = Covector::new(row.coords().to_vec());
                    let h = Halfspace::new(n, b).ok_or_else(|| {
                        ProblemError::Body(format!("body.normals[{i}] is the zero vector"))
                    })?;
                    hs.push(h);
                }
                Polytope::from_halfspaces(d, hs)
                    .map_err(|e| ProblemError::Body(format!("body: {e}")))
            }
            BodySpec::Vrep { vertices } => {
                let pts =
                    vectors_from("body.vertices", vertices, d).map_err(ProblemError::Body)?;
                Polytope::from_vertices(d, pts)
                    .map_err(|e| ProblemError::Body(format!("body: {e}")))
            }
        }
    }

    pub fn build_norm(&self) -> Result<NormBody, ProblemError> {
        let d = self.dimension;
        match &self.norm {
            None | Some(NormSpec::Euclidean) => Ok(NormBody::euclidean(d)),
            Some(NormSpec::Ellipsoid { matrix, center }) => {
                if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
                    return Err(ProblemError::Norm(format!(
                        "norm.matrix must be {d}x{d}"
                    )));
                }
                if center.len() != d {
                    return Err(ProblemError::Norm(format!(
                        "norm.center has {} coordinates, dimension is {d}",
                        center.len()
                    )));
                }
                let m = Matrix::from_fn(d, d, |r, c| matrix[r][c]);
                NormBody::ellipsoid(m, Covector::new(center.clone()))
                    .map_err(|e| ProblemError::Norm(format!("norm: {e}")))
            }
            Some(NormSpec::DualPolytope { vertices }) => {
                let pts =
                    vectors_from("norm.vertices", vertices, d).map_err(ProblemError::Norm)?;
                let cov = pts
                    .into_iter()
                    .map(|p| Covector::new(p.coords().to_vec()))
                    .collect();
                NormBody::dual_polytope(cov).map_err(|e| ProblemError::Norm(format!("norm: {e}")))
            }
        }
    }

    /// Validates and assembles the full problem.
    pub fn build(&self) -> Result<(Polytope, NormBody), ProblemError> {
        Ok((self.build_body()?, self.build_norm()?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryFile {
    pub vertices: Vec<Vec<f64>>,
}

impl TrajectoryFile {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))
    }

    pub fn from_polyline(q: &ClosedPolyline) -> Self {
        TrajectoryFile {
            vertices: q.points().iter().map(|p| p.coords().to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema types are serializable")
    }

    pub fn to_polyline(&self, dim: usize) -> Result<ClosedPolyline, ProblemError> {
        let pts =
            vectors_from("vertices", &self.vertices, dim).map_err(ProblemError::Trajectory)?;
        ClosedPolyline::new(pts).map_err(|e| ProblemError::Trajectory(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds_a_vrep_problem() {
        let text = r#"{
            "dimension": 2,
            "body": {
                "type": "vrep",
                "vertices": [[0, 0], [1, 0], [0.5, 0.8660254037844386]]
            },
            "norm": { "type": "euclidean" },
            "options": { "seed": 7 }
        }"#;
        let pf = ProblemFile::from_json(text).unwrap();
        let (k, t) = pf.build().unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.halfspaces().len(), 3);
        assert!(t.is_symmetric());
        assert_eq!(pf.options.seed, Some(7));
    }

    #[test]
    fn parses_an_hrep_problem_with_an_ellipsoid_norm() {
        let text = r#"{
            "dimension": 2,
            "body": {
                "type": "hrep",
                "normals": [[1, 0], [-1, 0], [0, 1], [0, -1]],
                "offsets": [1, 0, 1, 0]
            },
            "norm": {
                "type": "ellipsoid",
                "matrix": [[1, 0], [0, 1]],
                "center": [0.3, 0]
            }
        }"#;
        let pf = ProblemFile::from_json(text).unwrap();
        let (k, t) = pf.build().unwrap();
        assert_eq!(k.vertices().len(), 4);
        assert!(!t.is_symmetric());
        assert!(t.is_smooth());
    }

    #[test]
    fn missing_norm_defaults_to_euclidean() {
        let text = r#"{
            "dimension": 2,
            "body": { "type": "vrep", "vertices": [[0,0],[1,0],[0,1]] }
        }"#;
        let (_, t) = ProblemFile::from_json(text).unwrap().build().unwrap();
        assert!(matches!(t, NormBody::Euclidean { .. }));
    }

    #[test]
    fn diagnostics_name_the_offending_field() {
        let bad_dim = r#"{
            "dimension": 5,
            "body": { "type": "vrep", "vertices": [[0,0],[1,0],[0,1]] }
        }"#;
        let err = ProblemFile::from_json(bad_dim).unwrap().build().unwrap_err();
        assert!(err.to_string().contains("dimension"), "{err}");

        let short_row = r#"{
            "dimension": 2,
            "body": { "type": "vrep", "vertices": [[0,0],[1],[0,1]] }
        }"#;
        let err = ProblemFile::from_json(short_row)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("body.vertices[1]"), "{err}");

        let bad_norm = r#"{
            "dimension": 2,
            "body": { "type": "vrep", "vertices": [[0,0],[1,0],[0,1]] },
            "norm": { "type": "ellipsoid", "matrix": [[1,0],[0,1]], "center": [2, 0] }
        }"#;
        let err = ProblemFile::from_json(bad_norm).unwrap().build().unwrap_err();
        assert!(matches!(err, ProblemError::Norm(_)), "{err}");

        let unknown_field = r#"{
            "dimension": 2,
            "body": { "type": "vrep", "vertices": [[0,0],[1,0],[0,1]] },
            "extra": true
        }"#;
        assert!(matches!(
            ProblemFile::from_json(unknown_field),
            Err(ProblemError::Parse(_))
        ));
    }

    #[test]
    fn trajectory_files_round_trip() {
        let q = ClosedPolyline::new(vec![
            Vector::new(vec![0.5, 0.0]),
            Vector::new(vec![0.75, 0.4]),
            Vector::new(vec![0.25, 0.4]),
        ])
        .unwrap();
        let tf = TrajectoryFile::from_polyline(&q);
        let text = tf.to_json();
        let back = TrajectoryFile::from_json(&text).unwrap().to_polyline(2).unwrap();
        for (a, b) in back.points().iter().zip(q.points()) {
            assert!(a.dist(b) <= 1e-15);
        }
        assert!(TrajectoryFile::from_json("{\"vertices\": [[0,0]]}")
            .unwrap()
            .to_polyline(2)
            .is_err());
        assert!(matches!(
            TrajectoryFile::from_json("not json"),
            Err(ProblemError::Parse(_))
        ));
    }
}
