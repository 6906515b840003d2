//! Versioned, machine-readable reports for the solver, the verifier, and
//! the acuteness decision, with plain-text renderings.
//!
//! Every report carries `schema: 1`. JSON output is byte-stable for fixed
//! inputs: field order is fixed by the struct definitions and all floats
//! are emitted by the same serializer.

use crate::cones::{
    body_acuteness, simplex_dihedral_angles, weak_acuteness_probe, ProbeVerdict,
    SphericalDiameter,
};
use crate::polytope::Polytope;
use crate::solver::{BruteForceXi, SolveResult};
use crate::trajectory::TrajectoryReport;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BounceRecord {
    pub index: usize,
    pub point: Vec<f64>,
    pub on_boundary: bool,
    pub active_facets: Vec<usize>,
    /// Scale of the momentum transfer along the outer normal; zero for a
    /// straight pass-through.
    pub lambda: f64,
    pub law_residual: f64,
    pub classical: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub point_index: usize,
    pub facet: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub valid: bool,
    pub classical: bool,
    pub length: f64,
    pub bounce_count: usize,
    pub bounces: Vec<BounceRecord>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn from_trajectory_report(r: &TrajectoryReport) -> Self {
        VerifyReport {
            schema: 1,
            valid: r.valid,
            classical: r.classical,
            length: r.length,
            bounce_count: r.bounce_count,
            bounces: r
                .bounces
                .iter()
                .map(|b| BounceRecord {
                    index: b.index,
                    point: b.point.coords().to_vec(),
                    on_boundary: b.on_boundary,
                    active_facets: b.active_facets.clone(),
                    lambda: b.lambda,
                    law_residual: b.law_residual,
                    classical: b.classical,
                })
                .collect(),
            failures: r.failures.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.valid { "valid" } else { "INVALID" };
        let kind = if self.classical {
            "classical"
        } else {
            "generalized"
        };
        let _ = writeln!(s, "trajectory: {verdict}, {kind}");
        let _ = writeln!(s, "length: {:.9}", self.length);
        let _ = writeln!(s, "bounces: {}", self.bounce_count);
        for b in &self.bounces {
            let _ = writeln!(
                s,
                "  bounce {}: point {} facets {:?} lambda {:.6} residual {:.3e}{}",
                b.index,
                fmt_point(&b.point),
                b.active_facets,
                b.lambda,
                b.law_residual,
                if b.classical { "" } else { " (generalized)" },
            );
        }
        for f in &self.failures {
            let _ = writeln!(s, "  failure: {f}");
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleRecord {
    pub xi: f64,
    pub grid: f64,
    /// True when refinement left the sampling grid; value is then only a
    /// coarse bound.
    pub coarse: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XiReport {
    pub schema: u32,
    pub xi: f64,
    pub dimension: usize,
    pub bounce_count: usize,
    pub classical: bool,
    pub trajectory: Vec<Vec<f64>>,
    /// Facet index per raw cycle point (before merging coincidences).
    pub sequence: Vec<usize>,
    pub cycle: Vec<Vec<f64>>,
    pub certificate: Vec<CertificateRecord>,
    pub law_residuals: Vec<f64>,
    /// Margin to the best other facet sequence; null when it is the only one.
    pub runner_up_gap: Option<f64>,
    pub oracle: Option<OracleRecord>,
}

impl XiReport {
    pub fn from_solution(dim: usize, sol: &SolveResult) -> Self {
        XiReport {
            schema: 1,
            xi: sol.xi,
            dimension: dim,
            bounce_count: sol.report.bounce_count,
            classical: sol.report.classical,
            trajectory: sol
                .trajectory
                .points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            sequence: sol.sequence.indices().to_vec(),
            cycle: sol
                .cycle
                .points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            certificate: sol
                .certificate
                .entries
                .iter()
                .map(|e| CertificateRecord {
                    point_index: e.point_index,
                    facet: e.facet,
                    weight: e.weight,
                })
                .collect(),
            law_residuals: sol.report.bounces.iter().map(|b| b.law_residual).collect(),
            runner_up_gap: sol.runner_up_gap.is_finite().then_some(sol.runner_up_gap),
            oracle: None,
        }
    }

    pub fn with_oracle(mut self, grid: f64, oracle: &BruteForceXi) -> Self {
        self.oracle = Some(OracleRecord {
            xi: oracle.xi,
            grid,
            coarse: oracle.coarse,
        });
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "xi = {:.9}", self.xi);
        let kind = if self.classical {
            "classical"
        } else {
            "generalized"
        };
        let _ = writeln!(s, "trajectory: {kind}, {} bounces", self.bounce_count);
        for p in &self.trajectory {
            let _ = writeln!(s, "  vertex {}", fmt_point(p));
        }
        let _ = writeln!(s, "facet sequence: {:?}", self.sequence);
        let _ = writeln!(s, "certificate (facet: weight):");
        for e in &self.certificate {
            let _ = writeln!(
                s,
                "  point {} on facet {}: {:.6}",
                e.point_index, e.facet, e.weight
            );
        }
        let peak = self.law_residuals.iter().cloned().fold(0.0, f64::max);
        let _ = writeln!(s, "max law residual: {peak:.3e}");
        if let Some(gap) = self.runner_up_gap {
            let _ = writeln!(s, "runner-up gap: {gap:.6}");
        }
        if let Some(o) = &self.oracle {
            let flag = if o.coarse { " (coarse)" } else { "" };
            let _ = writeln!(s, "oracle: {:.9} at grid {:.0e}{flag}", o.xi, o.grid);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceRecord {
    pub facets: Vec<usize>,
    pub face_vertices: Vec<usize>,
    pub representative: Vec<f64>,
    /// Spherical diameter of the pointed part of the tangent cone, in
    /// radians; null when it is at least a right angle.
    pub diameter_rad: Option<f64>,
    pub acute: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcutenessReport {
    pub schema: u32,
    pub acute: bool,
    pub faces: Vec<FaceRecord>,
    /// Pairwise facet dihedral angles, present only for simplices.
    pub dihedral_angles: Option<Vec<DihedralRecord>>,
    /// Seeded sampling check of the weaker wide-section condition.
    #[serde(default)]
    pub wide_section_probe: Option<ProbeRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DihedralRecord {
    pub facet_a: usize,
    pub facet_b: usize,
    pub angle_rad: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeRecord {
    /// True when every sampled normal ray admitted a planar section of its
    /// normal cone wider than a right angle.
    pub confirmed: bool,
    pub worst_width_rad: f64,
    pub seed: u64,
    pub witness_point: Option<Vec<f64>>,
    pub witness_ray: Option<Vec<f64>>,
}

impl AcutenessReport {
    pub fn build(k: &Polytope) -> Self {
        let body = body_acuteness(k);
        let dihedral_angles = simplex_dihedral_angles(k).ok().map(|list| {
            list.into_iter()
                .map(|(a, b, angle)| DihedralRecord {
                    facet_a: a,
                    facet_b: b,
                    angle_rad: angle,
                })
                .collect()
        });
        AcutenessReport {
            schema: 1,
            acute: body.acute,
            faces: body
                .faces
                .iter()
                .map(|f| FaceRecord {
                    facets: f.facets.clone(),
                    face_vertices: f.face_vertices.clone(),
                    representative: f.representative.coords().to_vec(),
                    diameter_rad: match f.diameter {
                        SphericalDiameter::Angle(a) => Some(a),
                        SphericalDiameter::AtLeastRightAngle => None,
                    },
                    acute: f.acute,
                })
                .collect(),
            dihedral_angles,
            wide_section_probe: None,
        }
    }

    /// Attaches a seeded wide-section sampling probe to the report.
    pub fn with_probe(mut self, k: &Polytope, rays_per_face: usize, seed: u64) -> Self {
        let probe = weak_acuteness_probe(k, rays_per_face, seed);
        let (witness_point, witness_ray) = match &probe.witness {
            Some((p, n)) => (Some(p.coords().to_vec()), Some(n.coords().to_vec())),
            None => (None, None),
        };
        self.wide_section_probe = Some(ProbeRecord {
            confirmed: probe.verdict == ProbeVerdict::Confirmed,
            worst_width_rad: probe.worst_width,
            seed,
            witness_point,
            witness_ray,
        });
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.acute { "acute" } else { "not acute" };
        let _ = writeln!(s, "body: {verdict}");
        for f in &self.faces {
            let width = match f.diameter_rad {
                Some(a) => format!("{a:.6} rad"),
                None => ">= pi/2".to_string(),
            };
            let _ = writeln!(
                s,
                "  face (vertices {:?}, facets {:?}): diameter {width}{}",
                f.face_vertices,
                f.facets,
                if f.acute { "" } else { "  <- not acute" },
            );
        }
        if let Some(list) = &self.dihedral_angles {
            let _ = writeln!(s, "simplex dihedral angles:");
            for d in list {
                let _ = writeln!(
                    s,
                    "  facets {} and {}: {:.10} rad",
                    d.facet_a, d.facet_b, d.angle_rad
                );
            }
        }
        if let Some(p) = &self.wide_section_probe {
            let verdict = if p.confirmed {
                "confirmed"
            } else {
                "unresolved"
            };
            let _ = writeln!(
                s,
                "wide-section probe (seed {}): {verdict}, worst section width {:.6} rad",
                p.seed, p.worst_width_rad
            );
        }
        s
    }
}

fn fmt_point(p: &[f64]) -> String {
    let coords: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", coords.join(", "))
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("report types are serializable")
}
