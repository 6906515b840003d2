//! Deterministic SVG rendering of planar scenes: the body, a trajectory,
//! bounce normals, and certificate arrows.
//!
//! Byte-deterministic for fixed inputs: no timestamps, no randomness, all
//! numbers printed with fixed precision in struct-defined order.

use crate::containment::NonFitCertificate;
use crate::linalg::{Covector, Vector};
use crate::polytope::Polytope;
use crate::solver::SolveResult;
use crate::trajectory::{ClosedPolyline, TrajectoryReport};
use std::fmt::Write as _;

/// An arrow anchored at a boundary point, pointing along an outer normal.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub base: Vector,
    pub direction: Covector,
    /// Relative shaft length in [0, 1]; certificate weights plot shorter
    /// arrows for smaller weights.
    pub strength: f64,
    /// True for certificate arrows, false for bounce normals.
    pub from_certificate: bool,
}

pub struct Scene<'a> {
    pub body: &'a Polytope,
    pub trajectory: Option<&'a ClosedPolyline>,
    pub arrows: Vec<Arrow>,
}

pub fn bounce_normal_arrows(report: &TrajectoryReport) -> Vec<Arrow> {
    report
        .bounces
        .iter()
        .filter_map(|b| {
            b.normal.as_ref().map(|n| Arrow {
                base: b.point.clone(),
                direction: n.clone(),
                strength: 1.0,
                from_certificate: false,
            })
        })
        .collect()
}

pub fn certificate_arrows(
    k: &Polytope,
    points: &[Vector],
    cert: &NonFitCertificate,
) -> Vec<Arrow> {
    let peak = cert
        .entries
        .iter()
        .map(|e| e.weight)
        .fold(0.0, f64::max)
        .max(1e-12);
    cert.entries
        .iter()
        .map(|e| Arrow {
            base: points[e.point_index].clone(),
            direction: k.halfspaces()[e.facet].normal.clone(),
            strength: (e.weight / peak).max(0.35),
            from_certificate: true,
        })
        .collect()
}

fn fmt(x: f64) -> String {
    // Fixed precision, and a canonical zero so -0.0000 never appears.
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// Renders the scene to a standalone SVG document. Planar bodies only.
pub fn render_svg(scene: &Scene) -> Result<String, String> {
    let k = scene.body;
    if k.dim() != 2 {
        return Err(format!("rendering is planar only, body has dimension {}", k.dim()));
    }
    let (loop_pts, _) = k.boundary_loop();

    // Bounds as [min_x, max_x, min_y, max_y].
    fn grow(b: &mut [f64; 4], p: &Vector) {
        b[0] = b[0].min(p.coords()[0]);
        b[1] = b[1].max(p.coords()[0]);
        b[2] = b[2].min(p.coords()[1]);
        b[3] = b[3].max(p.coords()[1]);
    }
    let mut b = [
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    ];
    for p in &loop_pts {
        grow(&mut b, p);
    }
    if let Some(t) = scene.trajectory {
        for p in t.points() {
            grow(&mut b, p);
        }
    }
    let diag = ((b[1] - b[0]).powi(2) + (b[3] - b[2]).powi(2)).sqrt().max(1e-9);
    let arrow_len = 0.18 * diag;
    for a in &scene.arrows {
        let tip = tip_of(a, arrow_len);
        grow(&mut b, &a.base);
        grow(&mut b, &tip);
    }
    let margin = 0.08 * diag;
    let (min_x, max_x, min_y, max_y) = (b[0] - margin, b[1] + margin, b[2] - margin, b[3] + margin);

    let width = 640.0;
    let scale = width / (max_x - min_x);
    let height = (max_y - min_y) * scale;
    // SVG y grows downward; flip about the vertical midline of the box.
    let tx = |p: &Vector| -> (f64, f64) {
        (
            (p.coords()[0] - min_x) * scale,
            (max_y - p.coords()[1]) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    );
    let _ = writeln!(
        s,
        "<style>.body{{fill:#eef3f8;stroke:#31506b;stroke-width:2}}\
.traj{{fill:none;stroke:#c0392b;stroke-width:2}}\
.traj-vertex{{fill:#c0392b}}\
.normal{{stroke:#2471a3;stroke-width:2;fill:#2471a3}}\
.cert{{stroke:#1e8449;stroke-width:2;fill:#1e8449}}</style>"
    );

    let body_path: Vec<String> = loop_pts
        .iter()
        .map(|p| {
            let (x, y) = tx(p);
            format!("{},{}", fmt(x), fmt(y))
        })
        .collect();
    let _ = writeln!(s, "<polygon class=\"body\" points=\"{}\"/>", body_path.join(" "));

    for a in &scene.arrows {
        let class = if a.from_certificate { "cert" } else { "normal" };
        let tip = tip_of(a, arrow_len);
        let (x0, y0) = tx(&a.base);
        let (x1, y1) = tx(&tip);
        let _ = writeln!(
            s,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            fmt(x0),
            fmt(y0),
            fmt(x1),
            fmt(y1)
        );
        // Arrowhead: two short back-swept strokes at the tip.
        let dx = x1 - x0;
        let dy = y1 - y0;
        let l = (dx * dx + dy * dy).sqrt().max(1e-12);
        let (ux, uy) = (dx / l, dy / l);
        let head = 8.0;
        for side in [-1.0, 1.0] {
            let hx = x1 - head * (ux + side * 0.5 * uy);
            let hy = y1 - head * (uy - side * 0.5 * ux);
            let _ = writeln!(
                s,
                "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                fmt(x1),
                fmt(y1),
                fmt(hx),
                fmt(hy)
            );
        }
    }

    if let Some(t) = scene.trajectory {
        let pts: Vec<String> = t
            .points()
            .iter()
            .map(|p| {
                let (x, y) = tx(p);
                format!("{},{}", fmt(x), fmt(y))
            })
            .collect();
        let _ = writeln!(s, "<polygon class=\"traj\" points=\"{}\"/>", pts.join(" "));
        for p in t.points() {
            let (x, y) = tx(p);
            let _ = writeln!(
                s,
                "<circle class=\"traj-vertex\" cx=\"{}\" cy=\"{}\" r=\"4\"/>",
                fmt(x),
                fmt(y)
            );
        }
    }

    s.push_str("</svg>\n");
    Ok(s)
}

fn tip_of(a: &Arrow, arrow_len: f64) -> Vector {
    let n = &a.direction;
    let l = n.norm().max(1e-12);
    let d = Vector::new(n.coords().iter().map(|c| c / l).collect());
    &a.base + &d.scale(arrow_len * a.strength.clamp(0.0, 1.0))
}

/// Scene for a solved problem: trajectory plus certificate arrows.
pub fn render_solution(k: &Polytope, sol: &SolveResult) -> Result<String, String> {
    let mut arrows = certificate_arrows(k, sol.cycle.points(), &sol.certificate);
    arrows.extend(bounce_normal_arrows(&sol.report));
    render_svg(&Scene {
        body: k,
        trajectory: Some(&sol.trajectory),
        arrows,
    })
}

/// Scene for a verified trajectory: bounce normals only.
pub fn render_verification(
    k: &Polytope,
    q: &ClosedPolyline,
    report: &TrajectoryReport,
) -> Result<String, String> {
    render_svg(&Scene {
        body: k,
        trajectory: Some(q),
        arrows: bounce_normal_arrows(report),
    })
}
