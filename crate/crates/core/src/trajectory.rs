//! Closed polylines, the generalized reflection law, and local moves.
//!
//! A closed polyline visits boundary points of a body; at each vertex the
//! momentum jump `p - p'` (incoming minus outgoing momentum under the norm
//! body `T`) must lie in the normal cone for the vertex to be a legitimate
//! bounce. Verification reports that residual per vertex. The two moves,
//! sliding a vertex along a support hyperplane and straightening a corner
//! bounce through a wide planar section of the normal cone, are the local
//! steps that shorten candidate trajectories without leaving the admissible
//! class.

use crate::cones::{normal_cone, widest_section_through};
use crate::linalg::{affine_rank, nullspace, pair, Covector, Vector};
use crate::norm::NormBody;
use crate::polytope::{Halfspace, Polytope};
use crate::tol::{ANG_TOL, BOUNDARY_TOL, LAW_TOL, MERGE_TOL};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("closed polyline needs at least two points")]
    TooFewPoints,
    #[error("point dimension mismatch")]
    DimensionMismatch,
    #[error("all points coincide")]
    AllCoincide,
    #[error("invalid move: {0}")]
    Invalid(String),
}

/// Cyclically closed polyline with at least two vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedPolyline {
    points: Vec<Vector>,
}

impl ClosedPolyline {
    pub fn new(points: Vec<Vector>) -> Result<Self, TrajectoryError> {
        if points.len() < 2 {
            return Err(TrajectoryError::TooFewPoints);
        }
        let d = points[0].dim();
        if points.iter().any(|p| p.dim() != d) {
            return Err(TrajectoryError::DimensionMismatch);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    fn scale(&self) -> f64 {
        1.0 + self
            .points
            .iter()
            .flat_map(|p| p.coords())
            .map(|c| c.abs())
            .fold(0.0, f64::max)
    }

    /// Cyclic length under the norm body; orientation matters when `t` is
    /// asymmetric.
    pub fn length(&self, t: &NormBody) -> f64 {
        let m = self.points.len();
        (0..m)
            .map(|i| t.eval(&(&self.points[(i + 1) % m] - &self.points[i])))
            .sum()
    }

    /// Removes fake vertices: coinciding consecutive points and points
    /// interior to a straight run. Length under any norm body is unchanged.
    pub fn normalized(&self) -> Result<ClosedPolyline, TrajectoryError> {
        let tol = MERGE_TOL * self.scale();
        let mut pts = self.points.clone();
        loop {
            // Merge coinciding consecutive vertices (cyclically).
            let mut merged: Vec<Vector> = Vec::with_capacity(pts.len());
            for p in &pts {
                if merged.last().map_or(true, |q: &Vector| q.dist(p) > tol) {
                    merged.push(p.clone());
                }
            }
            while merged.len() >= 2 && merged[0].dist(merged.last().unwrap()) <= tol {
                merged.pop();
            }
            if merged.len() < 2 {
                return Err(TrajectoryError::AllCoincide);
            }
            // Drop one vertex interior to a straight run, then re-merge.
            let m = merged.len();
            let mut dropped = None;
            for i in 0..m {
                let vin = &merged[i] - &merged[(i + m - 1) % m];
                let vout = &merged[(i + 1) % m] - &merged[i];
                if let (Some(a), Some(b)) = (vin.unit(), vout.unit()) {
                    if a.dot(&b) > 1.0 - 1e-12 {
                        dropped = Some(i);
                        break;
                    }
                }
            }
            match dropped {
                Some(i) => {
                    merged.remove(i);
                    if merged.len() < 2 {
                        return Err(TrajectoryError::AllCoincide);
                    }
                    pts = merged;
                }
                None => {
                    if merged.len() == pts.len() {
                        return ClosedPolyline::new(merged);
                    }
                    pts = merged;
                }
            }
        }
    }

    /// Indices whose cyclic predecessor and successor coincide (the incoming
    /// segment is retraced). Empty for two-point cycles, where the pattern
    /// is the trajectory itself.
    pub fn return_points(&self) -> Vec<usize> {
        let m = self.points.len();
        if m < 3 {
            return Vec::new();
        }
        let tol = MERGE_TOL * self.scale();
        (0..m)
            .filter(|&i| self.points[(i + m - 1) % m].dist(&self.points[(i + 1) % m]) <= tol)
            .collect()
    }
}

/// Verification record for one vertex.
#[derive(Clone, Debug)]
pub struct BounceReport {
    pub index: usize,
    pub point: Vector,
    pub on_boundary: bool,
    pub active_facets: Vec<usize>,
    pub momentum_in: Covector,
    pub momentum_out: Covector,
    /// Unit direction of the momentum jump `p - p'`; `None` when the vertex
    /// passes straight through.
    pub normal: Option<Covector>,
    /// Magnitude of the momentum jump, so `p - p' = lambda * normal`.
    pub lambda: f64,
    /// Euclidean distance from the momentum jump to the normal cone.
    pub law_residual: f64,
    /// Exactly one active facet and a genuine direction change.
    pub classical: bool,
}

#[derive(Clone, Debug)]
pub struct TrajectoryReport {
    pub valid: bool,
    pub classical: bool,
    pub length: f64,
    pub bounce_count: usize,
    pub bounces: Vec<BounceReport>,
    pub failures: Vec<String>,
}

/// Checks the generalized reflection law at every vertex: each point must
/// lie on the boundary and its momentum jump must lie in the normal cone
/// within `law_tol`. Problems are reported, not thrown.
pub fn verify(
    k: &Polytope,
    t: &NormBody,
    q: &ClosedPolyline,
    boundary_tol: f64,
    law_tol: f64,
) -> TrajectoryReport {
    let mut failures: Vec<String> = Vec::new();
    let length = q.length(t);
    let m = q.num_points();
    let mut bounces: Vec<BounceReport> = Vec::new();

    if q.dim() != k.dim() {
        failures.push("trajectory and body dimensions differ".into());
    } else if !t.is_smooth() {
        failures.push(
            "norm body has non-unique momenta; verification needs a smooth strictly convex body"
                .into(),
        );
    } else {
        for i in 0..m {
            let point = q.points()[i].clone();
            let vin = &point - &q.points()[(i + m - 1) % m];
            let vout = &q.points()[(i + 1) % m] - &point;
            if vin.norm() < 1e-13 || vout.norm() < 1e-13 {
                failures.push(format!("zero-length segment at vertex {i}"));
                continue;
            }
            let depth = k.depth(&point);
            let on_boundary = depth.abs() <= boundary_tol;
            if depth < -boundary_tol {
                failures.push(format!(
                    "vertex {i} lies {:.3e} outside the body",
                    -depth
                ));
            } else if depth > boundary_tol {
                failures.push(format!(
                    "vertex {i} lies {:.3e} strictly inside the body",
                    depth
                ));
            }
            let momentum_in = t.momentum(&vin).expect("nonzero segment");
            let momentum_out = t.momentum(&vout).expect("nonzero segment");
            let transfer = &momentum_in - &momentum_out;
            let lambda = transfer.norm();
            let normal = transfer.unit();
            let mut law_residual = 0.0;
            if on_boundary {
                let cone = normal_cone(k, &point, boundary_tol)
                    .expect("on-boundary point has a normal cone");
                if lambda > law_tol {
                    law_residual = cone.distance(&transfer);
                    if law_residual > law_tol * (1.0 + lambda) {
                        failures.push(format!(
                            "vertex {i} violates the reflection law: residual {law_residual:.3e}"
                        ));
                    }
                }
            }
            let active_facets = if on_boundary {
                k.active_facets(&point, boundary_tol).unwrap_or_default()
            } else {
                Vec::new()
            };
            let classical = active_facets.len() == 1 && lambda > law_tol;
            bounces.push(BounceReport {
                index: i,
                point,
                on_boundary,
                active_facets,
                momentum_in,
                momentum_out,
                normal,
                lambda,
                law_residual,
                classical,
            });
        }
    }

    let classical = !bounces.is_empty() && bounces.iter().all(|b| b.classical);
    TrajectoryReport {
        valid: failures.is_empty(),
        classical,
        length,
        bounce_count: m,
        bounces,
        failures,
    }
}

/// Point of `h`'s hyperplane minimizing `|u - r| + |r - w|` in the
/// Euclidean norm. Same-side neighbors unfold by reflecting `w`; neighbors
/// on opposite sides intersect the straight segment with the hyperplane.
fn fermat_point_on_plane(h: &Halfspace, u: &Vector, w: &Vector) -> Vector {
    let n_vec = Vector::new(h.normal.coords().to_vec());
    let eu = h.signed_excess(u);
    let ew = h.signed_excess(w);
    let r = if eu * ew < 0.0 {
        let s = eu / (eu - ew);
        u + &(w - u).scale(s)
    } else if eu.abs() + ew.abs() < 1e-14 {
        (u + w).scale(0.5)
    } else {
        let w_ref = w - &n_vec.scale(2.0 * ew);
        let s = eu.abs() / (eu.abs() + ew.abs());
        u + &(&w_ref - u).scale(s)
    };
    // Snap exactly onto the hyperplane to kill rounding drift.
    &r - &n_vec.scale(h.signed_excess(&r))
}

/// Shortest chain `u -> r1 -> r2 -> w` with `r1` on the hyperplane of `h1`
/// and `r2` on the hyperplane of `h2` (Euclidean). The objective is convex;
/// alternating exact one-plane steps from a few closed-form starts.
fn min_chain_two_planes(
    h1: &Halfspace,
    h2: &Halfspace,
    u: &Vector,
    w: &Vector,
    extra_starts: &[(Vector, Vector)],
) -> (Vector, Vector, f64) {
    let project = |h: &Halfspace, p: &Vector| -> Vector {
        let n_vec = Vector::new(h.normal.coords().to_vec());
        p - &n_vec.scale(h.signed_excess(p))
    };
    let chain = |r1: &Vector, r2: &Vector| u.dist(r1) + r1.dist(r2) + r2.dist(w);
    let mut starts = vec![(project(h1, u), project(h2, w))];
    starts.extend_from_slice(extra_starts);
    let mut best: Option<(Vector, Vector, f64)> = None;
    for (mut r1, mut r2) in starts {
        let mut len = chain(&r1, &r2);
        for _ in 0..500 {
            r1 = fermat_point_on_plane(h1, u, &r2);
            r2 = fermat_point_on_plane(h2, &r1, w);
            let new_len = chain(&r1, &r2);
            let gain = len - new_len;
            len = new_len;
            if gain <= 1e-14 * (1.0 + len) {
                break;
            }
        }
        if best.as_ref().map_or(true, |(_, _, l)| len < *l) {
            best = Some((r1, r2, len));
        }
    }
    best.expect("at least one start")
}

/// Golden-section minimum of a unimodal function on [lo, hi].
fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Minimizer of `||r - a||_T + ||b - r||_T` over `r` in the hyperplane of
/// `h`. Closed form for the Euclidean norm; coordinate descent with
/// golden-section line searches otherwise. Never increases the objective
/// relative to `start` (which is projected onto the hyperplane first).
/// `quick` trims the inner search to a few sweeps, enough for callers that
/// finish with a quadratic polish.
pub(crate) fn slide_point(
    t: &NormBody,
    h: &Halfspace,
    a: &Vector,
    b: &Vector,
    start: &Vector,
    quick: bool,
) -> Vector {
    let n_vec = Vector::new(h.normal.coords().to_vec());
    if matches!(t, NormBody::Euclidean { .. }) {
        return fermat_point_on_plane(h, a, b);
    }

    // General norm body: parametrize the hyperplane and descend coordinates.
    let d = a.dim();
    let row = crate::linalg::Matrix::from_fn(1, d, |_, c| h.normal.coords()[c]);
    let basis = nullspace(&row, 1e-12);
    let origin = start - &n_vec.scale(h.signed_excess(start));
    let mut x = vec![0.0; basis.len()];
    let point_at = |x: &[f64]| -> Vector {
        let mut p = origin.clone();
        for (xi, e) in x.iter().zip(&basis) {
            p = &p + &Vector::new(e.iter().map(|c| c * xi).collect());
        }
        p
    };
    let objective = |x: &[f64]| -> f64 {
        let r = point_at(x);
        t.eval(&(&r - a)) + t.eval(&(b - &r))
    };
    let mut current = objective(&x);
    let radius = 2.0 * (1.0 + a.dist(b) + a.dist(&origin));
    let (sweeps, tol) = if quick { (3, 1e-9) } else { (100, 1e-12) };
    for _sweep in 0..sweeps {
        let before = current;
        for kidx in 0..x.len() {
            let f1 = |s: f64| {
                let mut y = x.clone();
                y[kidx] = s;
                objective(&y)
            };
            // The objective is convex along the line, hence unimodal on any
            // interval; expand until the minimum is bracketed.
            let mut lo = x[kidx] - radius;
            let mut hi = x[kidx] + radius;
            for _ in 0..60 {
                if f1(lo) >= current {
                    break;
                }
                lo -= hi - lo;
            }
            for _ in 0..60 {
                if f1(hi) >= current {
                    break;
                }
                hi += hi - lo;
            }
            let s = golden_min(&f1, lo, hi, tol * (1.0 + x[kidx].abs()));
            let val = f1(s);
            if val < current {
                x[kidx] = s;
                current = val;
            }
        }
        if before - current <= 1e-13 * (1.0 + current) {
            break;
        }
    }
    point_at(&x)
}

/// Replaces vertex `index` by the point of `h`'s hyperplane minimizing the
/// sum of distances to its two cyclic neighbors under `t`.
pub fn slide_move(
    k: &Polytope,
    t: &NormBody,
    index: usize,
    q: &ClosedPolyline,
    h: &Halfspace,
) -> Result<ClosedPolyline, TrajectoryError> {
    let m = q.num_points();
    if index >= m {
        return Err(TrajectoryError::Invalid(format!(
            "vertex index {index} out of range"
        )));
    }
    let scale = q.scale();
    let support = k.support_value(&h.normal);
    if (support - h.offset).abs() > BOUNDARY_TOL * (1.0 + support.abs()) {
        return Err(TrajectoryError::Invalid(
            "hyperplane does not support the body".into(),
        ));
    }
    let a = &q.points()[(index + m - 1) % m];
    let b = &q.points()[(index + 1) % m];
    for (name, p) in [("predecessor", a), ("successor", b)] {
        if h.signed_excess(p) > BOUNDARY_TOL * scale {
            return Err(TrajectoryError::Invalid(format!(
                "{name} is strictly cut off by the hyperplane"
            )));
        }
    }
    let cur = &q.points()[index];
    if a.dist(b) > 1e-12 * scale && affine_rank(&[a.clone(), cur.clone(), b.clone()], 1e-12 * scale) < 2
    {
        return Err(TrajectoryError::Invalid(
            "vertex and its neighbors are collinear".into(),
        ));
    }
    let r = slide_point(t, h, a, b, cur, false);
    let old_local = t.eval(&(cur - a)) + t.eval(&(b - cur));
    let new_local = t.eval(&(&r - a)) + t.eval(&(b - &r));
    debug_assert!(
        new_local <= old_local + 1e-10 * (1.0 + old_local),
        "slide increased the local length: {new_local} > {old_local}"
    );
    let mut pts = q.points().to_vec();
    pts[index] = r;
    ClosedPolyline::new(pts)
}

/// Result of attempting to straighten a corner bounce.
#[derive(Clone, Debug)]
pub enum ShorteningOutcome {
    Applied {
        /// The cycle with the corner vertex replaced by two points.
        polyline: ClosedPolyline,
        /// Support hyperplanes (unit normal, offset) used for the two new
        /// bounces; the old normal is a positive combination of them.
        sides: [(Covector, f64); 2],
        decrease: f64,
    },
    /// No planar section of the normal cone through the bounce normal was
    /// wide enough; inconclusive (not a refutation).
    Unresolved { reason: String, best_width: f64 },
}

/// Straightens a generalized bounce at a non-smooth vertex (Euclidean
/// lengths): picks a planar section of the normal cone through the bounce
/// normal containing an angle wider than a right angle, takes the support
/// hyperplanes of its two side normals, and replaces the corner vertex by
/// the two-point chain of minimal length with one point on each hyperplane
/// (the classic reflect-and-cut unfolding when the reflected segment
/// crosses both hyperplanes in order). Strictly shorter whenever applied;
/// surrounding normals survive because the old bounce normal is a positive
/// combination of the two new ones.
pub fn acute_shortening_move(
    k: &Polytope,
    index: usize,
    q: &ClosedPolyline,
) -> Result<ShorteningOutcome, TrajectoryError> {
    let m = q.num_points();
    if index >= m {
        return Err(TrajectoryError::Invalid(format!(
            "vertex index {index} out of range"
        )));
    }
    let point = &q.points()[index];
    let active = k
        .active_facets(point, BOUNDARY_TOL)
        .map_err(|e| TrajectoryError::Invalid(e.to_string()))?;
    if active.is_empty() {
        return Err(TrajectoryError::Invalid(
            "vertex is interior to the body".into(),
        ));
    }
    if active.len() < 2 {
        return Err(TrajectoryError::Invalid(
            "vertex is a smooth boundary point; the move needs a corner".into(),
        ));
    }
    let a = q.points()[(index + m - 1) % m].clone();
    let b = q.points()[(index + 1) % m].clone();
    let vin = point - &a;
    let vout = &b - point;
    let (Some(u_in), Some(u_out)) = (vin.unit(), vout.unit()) else {
        return Err(TrajectoryError::Invalid("zero-length segment".into()));
    };
    // Euclidean momenta are the unit directions; the jump is the bounce
    // normal, opposite to the angle bisector.
    let x = Covector::new(
        u_in.coords()
            .iter()
            .zip(u_out.coords())
            .map(|(i, o)| i - o)
            .collect(),
    );
    let Some(rho) = x.unit() else {
        return Ok(ShorteningOutcome::Unresolved {
            reason: "straight pass-through, nothing to straighten".into(),
            best_width: 0.0,
        });
    };
    let ncone = normal_cone(k, point, BOUNDARY_TOL).map_err(|e| TrajectoryError::Invalid(e.to_string()))?;
    if !ncone.contains(&x, LAW_TOL) {
        return Err(TrajectoryError::Invalid(
            "the reflection law does not hold at this vertex".into(),
        ));
    }

    let tangent: Vec<Vector> = k
        .vertices()
        .iter()
        .filter(|v| v.dist(point) > 1e-12)
        .map(|v| v - point)
        .collect();
    let (width, rays) = widest_section_through(k, point, &rho, &tangent);
    if width <= PI / 2.0 + ANG_TOL || rays.len() != 2 {
        return Ok(ShorteningOutcome::Unresolved {
            reason: format!(
                "widest planar section of the normal cone is {width:.6} rad, not above a right angle"
            ),
            best_width: width,
        });
    }

    let scale = q.scale();
    let old_local = vin.norm() + vout.norm();
    let mut best: Option<(Vector, Vector, [(Covector, f64); 2], f64)> = None;
    for (fi, si) in [(0usize, 1usize), (1, 0)] {
        let n1 = rays[fi].unit().expect("section rays are unit");
        let n2 = rays[si].unit().expect("section rays are unit");
        let o1 = pair(&n1, point);
        let o2 = pair(&n2, point);
        let Some(h1) = Halfspace::new(n1, o1) else { continue };
        let Some(h2) = Halfspace::new(n2, o2) else { continue };
        // Classic unfolding start: reflect the neighbors and cut the
        // straight segment with the two hyperplanes. When both crossings
        // land ordered inside the segment this start is already optimal;
        // the alternating descent then merely confirms it.
        let n1v = Vector::new(h1.normal.coords().to_vec());
        let n2v = Vector::new(h2.normal.coords().to_vec());
        let a_ref = &a - &n1v.scale(2.0 * h1.signed_excess(&a));
        let b_ref = &b - &n2v.scale(2.0 * h2.signed_excess(&b));
        let dir = &b_ref - &a_ref;
        let unfold = |h: &Halfspace| -> Vector {
            let ea = h.signed_excess(&a_ref);
            let eb = h.signed_excess(&b_ref);
            let t = if (ea - eb).abs() > 1e-13 * scale {
                (ea / (ea - eb)).clamp(0.0, 1.0)
            } else {
                0.5
            };
            let p = &a_ref + &dir.scale(t);
            &p - &Vector::new(h.normal.coords().to_vec()).scale(h.signed_excess(&p))
        };
        let start = (unfold(&h1), unfold(&h2));
        let (q1, q2, new_local) = min_chain_two_planes(&h1, &h2, &a, &b, &[start]);
        let decrease = old_local - new_local;
        if decrease > 1e-12 * scale
            && best.as_ref().map_or(true, |(_, _, _, d)| decrease > *d)
        {
            best = Some((q1, q2, [(h1.normal, o1), (h2.normal, o2)], decrease));
        }
    }

    match best {
        Some((q1, q2, sides, decrease)) => {
            let mut pts = q.points().to_vec();
            pts.splice(index..=index, [q1, q2]);
            Ok(ShorteningOutcome::Applied {
                polyline: ClosedPolyline::new(pts)?,
                sides,
                decrease,
            })
        }
        None => Ok(ShorteningOutcome::Unresolved {
            reason: "no hyperplane assignment produced an ordered strict shortening".into(),
            best_width: width,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn v2(x: f64, y: f64) -> Vector {
        Vector::new(vec![x, y])
    }

    fn unit_square() -> Polytope {
        Polytope::from_vertices(2, vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(1.0, 1.0), v2(0.0, 1.0)])
            .unwrap()
    }

    fn equilateral_triangle() -> Polytope {
        Polytope::from_vertices(
            2,
            vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(0.5, 3.0f64.sqrt() / 2.0)],
        )
        .unwrap()
    }

    fn right_isoceles() -> Polytope {
        Polytope::from_vertices(2, vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn lengths_under_different_norms() {
        let corners =
            ClosedPolyline::new(vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(1.0, 1.0), v2(0.0, 1.0)])
                .unwrap();
        assert!((corners.length(&NormBody::euclidean(2)) - 4.0).abs() <= 1e-12);

        let back_forth = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(1.0, 0.0)]).unwrap();
        assert!((back_forth.length(&NormBody::euclidean(2)) - 2.0).abs() <= 1e-12);

        let shifted =
            NormBody::ellipsoid(Matrix::identity(2, 2), Covector::new(vec![0.5, 0.0])).unwrap();
        // 1.5 one way plus 0.5 back.
        assert!((back_forth.length(&shifted) - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn normalization_examples() {
        let q = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(0.0, 0.0), v2(1.0, 0.0)]).unwrap();
        let n = q.normalized().unwrap();
        assert_eq!(n.num_points(), 2);

        let q = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(0.5, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)])
            .unwrap();
        let n = q.normalized().unwrap();
        assert_eq!(n.points(), &[v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)]);
        assert!((q.length(&NormBody::euclidean(2)) - n.length(&NormBody::euclidean(2))).abs() <= 1e-12);

        let clean =
            ClosedPolyline::new(vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap();
        assert_eq!(clean.normalized().unwrap(), clean);

        let degenerate = ClosedPolyline::new(vec![v2(0.3, 0.3), v2(0.3, 0.3)]).unwrap();
        assert!(matches!(
            degenerate.normalized(),
            Err(TrajectoryError::AllCoincide)
        ));
    }

    #[test]
    fn normalization_preserves_admissibility() {
        use crate::containment::in_admissible_class;
        let k = unit_square();
        // A cycle with a fake vertex on the left wall; still pins the square.
        let q = ClosedPolyline::new(vec![
            v2(0.0, 0.25),
            v2(0.0, 0.5),
            v2(0.0, 0.75),
            v2(1.0, 0.5),
        ])
        .unwrap();
        let n = q.normalized().unwrap();
        assert!(n.num_points() < q.num_points());
        assert_eq!(
            in_admissible_class(&k, q.points()).unwrap(),
            in_admissible_class(&k, n.points()).unwrap()
        );
    }

    #[test]
    fn return_point_detection() {
        let q = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 0.0), v2(-1.0, 0.5)])
            .unwrap();
        assert_eq!(q.return_points(), vec![1, 3]);
        let clean = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap();
        assert!(clean.return_points().is_empty());
        let two = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(1.0, 0.0)]).unwrap();
        assert!(two.return_points().is_empty());
    }

    #[test]
    fn verifies_classical_cycles() {
        let eucl = NormBody::euclidean(2);

        // Orthic cycle of the equilateral triangle: side midpoints.
        let tri = equilateral_triangle();
        let s3 = 3.0f64.sqrt();
        let orthic =
            ClosedPolyline::new(vec![v2(0.5, 0.0), v2(0.75, s3 / 4.0), v2(0.25, s3 / 4.0)])
                .unwrap();
        let rep = verify(&tri, &eucl, &orthic, BOUNDARY_TOL, LAW_TOL);
        assert!(rep.valid, "failures: {:?}", rep.failures);
        assert!(rep.classical);
        assert_eq!(rep.bounce_count, 3);
        assert!((rep.length - 1.5).abs() <= 1e-12);
        for b in &rep.bounces {
            assert!(b.law_residual <= 1e-12);
            assert!(b.lambda > 0.5);
        }

        // Perpendicular two-bounce in the square.
        let sq = unit_square();
        let pong = ClosedPolyline::new(vec![v2(0.5, 0.0), v2(0.5, 1.0)]).unwrap();
        let rep = verify(&sq, &eucl, &pong, BOUNDARY_TOL, LAW_TOL);
        assert!(rep.valid && rep.classical);
        assert!((rep.length - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn verifies_generalized_corner_bounce() {
        let k = right_isoceles();
        let q = ClosedPolyline::new(vec![v2(0.0, 0.0), v2(0.5, 0.5)]).unwrap();
        let rep = verify(&k, &NormBody::euclidean(2), &q, BOUNDARY_TOL, LAW_TOL);
        assert!(rep.valid, "failures: {:?}", rep.failures);
        assert!(!rep.classical, "corner bounce is generalized");
        let corner = &rep.bounces[0];
        assert_eq!(corner.active_facets.len(), 2);
        assert!(!corner.classical);
        let hyp = &rep.bounces[1];
        assert!(hyp.classical);
    }

    #[test]
    fn verify_reports_problems_without_throwing() {
        let k = unit_square();
        let eucl = NormBody::euclidean(2);
        let interior = ClosedPolyline::new(vec![v2(0.3, 0.3), v2(0.7, 0.7)]).unwrap();
        let rep = verify(&k, &eucl, &interior, BOUNDARY_TOL, LAW_TOL);
        assert!(!rep.valid);
        assert!(rep.failures.iter().any(|f| f.contains("inside")));

        let outside = ClosedPolyline::new(vec![v2(-0.5, 0.5), v2(1.0, 0.5)]).unwrap();
        let rep = verify(&k, &eucl, &outside, BOUNDARY_TOL, LAW_TOL);
        assert!(!rep.valid);
        assert!(rep.failures.iter().any(|f| f.contains("outside")));

        // Law violation: oblique segments meeting on the bottom edge without
        // mirror symmetry.
        let skew = ClosedPolyline::new(vec![v2(0.2, 1.0), v2(0.3, 0.0), v2(0.9, 1.0)]).unwrap();
        let rep = verify(&k, &eucl, &skew, BOUNDARY_TOL, LAW_TOL);
        assert!(!rep.valid);
        assert!(rep.failures.iter().any(|f| f.contains("reflection law")));

        let poly_t = NormBody::dual_polytope(vec![
            Covector::new(vec![1.0, 1.0]),
            Covector::new(vec![-1.0, 1.0]),
            Covector::new(vec![-1.0, -1.0]),
            Covector::new(vec![1.0, -1.0]),
        ])
        .unwrap();
        let pong = ClosedPolyline::new(vec![v2(0.5, 0.0), v2(0.5, 1.0)]).unwrap();
        let rep = verify(&k, &poly_t, &pong, BOUNDARY_TOL, LAW_TOL);
        assert!(!rep.valid);
        assert!(rep.failures.iter().any(|f| f.contains("momenta")));
    }

    #[test]
    fn slide_closed_form_example() {
        // Neighbors above the x-axis, vertex on it: the minimizer is the
        // mirror-symmetric point.
        let k = unit_square();
        let h = Halfspace::new(Covector::new(vec![0.0, -1.0]), 0.0).unwrap();
        let q = ClosedPolyline::new(vec![v2(0.0, 1.0), v2(0.7, 0.0), v2(1.0, 1.0)]).unwrap();
        let out = slide_move(&k, &NormBody::euclidean(2), 1, &q, &h).unwrap();
        assert!(out.points()[1].dist(&v2(0.5, 0.0)) <= 1e-12);

        // Sliding the optimum is a fixed point.
        let again = slide_move(&k, &NormBody::euclidean(2), 1, &out, &h).unwrap();
        assert!(again.points()[1].dist(&out.points()[1]) <= 1e-12);
    }

    #[test]
    fn slide_rejects_bad_inputs() {
        let k = unit_square();
        let eucl = NormBody::euclidean(2);
        let q = ClosedPolyline::new(vec![v2(0.0, 1.0), v2(0.7, 0.0), v2(1.0, 1.0)]).unwrap();
        // Not a support hyperplane (cuts through the body).
        let cutting = Halfspace::new(Covector::new(vec![0.0, -1.0]), -0.5).unwrap();
        assert!(slide_move(&k, &eucl, 1, &q, &cutting).is_err());
        // Neighbor strictly cut off: it must lie outside the body, since a
        // support halfspace contains all of K.
        let top = Halfspace::new(Covector::new(vec![0.0, 1.0]), 1.0).unwrap();
        let stray =
            ClosedPolyline::new(vec![v2(0.5, 1.5), v2(0.5, 0.0), v2(0.8, 0.2)]).unwrap();
        assert!(slide_move(&k, &eucl, 1, &stray, &top).is_err());
    }

    #[test]
    fn slide_never_increases_and_decreases_off_optimum() {
        let mut rng = StdRng::seed_from_u64(2024);
        let k = unit_square();
        let eucl = NormBody::euclidean(2);
        let h = Halfspace::new(Covector::new(vec![0.0, -1.0]), 0.0).unwrap();
        for _ in 0..200 {
            let a = v2(rng.gen_range(0.0..1.0), rng.gen_range(0.1..1.0));
            let b = v2(rng.gen_range(0.0..1.0), rng.gen_range(0.1..1.0));
            let qx = rng.gen_range(0.0..1.0);
            let q = ClosedPolyline::new(vec![a.clone(), v2(qx, 0.0), b.clone()]).unwrap();
            let old = q.length(&eucl);
            let out = slide_move(&k, &eucl, 1, &q, &h).unwrap();
            let new = out.length(&eucl);
            assert!(new <= old + 1e-12, "slide increased length");
            // Off-optimum detection via the law residual direction: if the
            // bounce normal is not orthogonal to the hyperplane's tangent,
            // the slide must strictly improve.
            let p_in = (&v2(qx, 0.0) - &a).unit();
            let p_out = (&b - &v2(qx, 0.0)).unit();
            if let (Some(pi), Some(po)) = (p_in, p_out) {
                let jump = &pi - &po; // vector form of p - p'
                let tangential = jump.coords()[0].abs();
                if tangential >= 1e-6 {
                    assert!(old - new > 1e-12, "no decrease despite tangential momentum");
                }
            }
        }
    }

    #[test]
    fn slide_matches_dense_scan_for_ellipsoid_norm() {
        let mut rng = StdRng::seed_from_u64(321);
        let k = unit_square();
        let h = Halfspace::new(Covector::new(vec![0.0, -1.0]), 0.0).unwrap();
        for _ in 0..10 {
            let amat = Matrix::from_fn(2, 2, |_, _| rng.gen_range(-1.0..1.0));
            let m = &amat * amat.transpose() + Matrix::identity(2, 2) * 0.4;
            let c = Covector::new(vec![rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)]);
            let Ok(t) = NormBody::ellipsoid(m, c) else { continue };
            let a = v2(rng.gen_range(0.0..1.0), rng.gen_range(0.2..1.0));
            let b = v2(rng.gen_range(0.0..1.0), rng.gen_range(0.2..1.0));
            let q = ClosedPolyline::new(vec![a.clone(), v2(0.5, 0.0), b.clone()]).unwrap();
            let out = slide_move(&k, &t, 1, &q, &h).unwrap();
            let r = &out.points()[1];
            let f_slide = t.eval(&(r - &a)) + t.eval(&(&b - r));
            // Dense scan of the 1-D hyperplane as the oracle.
            let mut f_best = f64::INFINITY;
            for i in -30_000..=30_000 {
                let p = v2(i as f64 * 1e-4, 0.0);
                f_best = f_best.min(t.eval(&(&p - &a)) + t.eval(&(&b - &p)));
            }
            assert!(
                f_slide <= f_best + 1e-8,
                "golden section missed the scan optimum: {f_slide} vs {f_best}"
            );
        }
    }

    #[test]
    fn straightens_an_acute_corner_bounce() {
        let tri = equilateral_triangle();
        let a = v2(0.4, 0.1);
        let b = v2(0.1, 0.4);
        let q = ClosedPolyline::new(vec![a.clone(), v2(0.0, 0.0), b.clone()]).unwrap();
        let out = acute_shortening_move(&tri, 1, &q).unwrap();
        let ShorteningOutcome::Applied {
            polyline,
            sides,
            decrease,
        } = out
        else {
            panic!("expected the move to apply");
        };
        assert!(decrease > 1e-6, "decrease {decrease}");
        assert_eq!(polyline.num_points(), 4);
        // The two new points lie on the support hyperplanes used, one on
        // each side line of the corner.
        for (pt, (n, o)) in polyline.points()[1..=2].iter().zip(&sides) {
            assert!((pair(n, pt) - o).abs() <= 1e-9);
        }
        assert!(sides[0].0.dist(&sides[1].0) > 0.5, "two distinct side lines");
        // Old bounce normal is a positive combination of the two side
        // normals, so surrounding certificates survive the rewrite.
        let u_in = (&v2(0.0, 0.0) - &a).unit().unwrap();
        let u_out = (&b - &v2(0.0, 0.0)).unit().unwrap();
        let x = Covector::new(
            u_in.coords()
                .iter()
                .zip(u_out.coords())
                .map(|(i, o)| i - o)
                .collect(),
        );
        let m = Matrix::from_fn(2, 2, |r, c| sides[c].0.coords()[r]);
        let rhs = nalgebra::DVector::from_column_slice(x.coords());
        let coeffs = m.lu().solve(&rhs).expect("side normals span the plane");
        assert!(coeffs[0] > 0.0 && coeffs[1] > 0.0);
        // Replaced chain is exactly the reflected straight segment: check
        // the local lengths agree with the claimed decrease.
        let old_local = a.dist(&v2(0.0, 0.0)) + b.dist(&v2(0.0, 0.0));
        let pts = polyline.points();
        let new_local = a.dist(&pts[1]) + pts[1].dist(&pts[2]) + pts[2].dist(&b);
        assert!((old_local - new_local - decrease).abs() <= 1e-12);
    }

    #[test]
    fn right_corner_is_unresolved_and_smooth_point_errors() {
        let sq = unit_square();
        let q = ClosedPolyline::new(vec![v2(0.5, 0.2), v2(0.0, 0.0), v2(0.2, 0.5)]).unwrap();
        match acute_shortening_move(&sq, 1, &q).unwrap() {
            ShorteningOutcome::Unresolved { best_width, .. } => {
                assert!((best_width - PI / 2.0).abs() <= 1e-9);
            }
            other => panic!("expected unresolved, got {other:?}"),
        }

        let smooth = ClosedPolyline::new(vec![v2(0.5, 0.2), v2(0.5, 0.0), v2(0.6, 0.3)]).unwrap();
        assert!(acute_shortening_move(&sq, 1, &smooth).is_err());
    }

    #[test]
    fn shortening_keeps_admissibility_on_corner_cycles() {
        use crate::containment::in_admissible_class;
        // Corner bounce at the right-angle-free equilateral triangle corner,
        // closed far across the body so the tuple pins the triangle.
        let tri = equilateral_triangle();
        let q = ClosedPolyline::new(vec![
            v2(0.3, 0.15),
            v2(0.0, 0.0),
            v2(0.15, 0.3),
            v2(0.75, 3.0f64.sqrt() / 4.0),
        ])
        .unwrap();
        if let ShorteningOutcome::Applied { polyline, .. } =
            acute_shortening_move(&tri, 1, &q).unwrap()
        {
            // The rewritten cycle still cannot be translated inside.
            assert!(in_admissible_class(&tri, polyline.points()).unwrap());
            assert!(polyline.length(&NormBody::euclidean(2)) < q.length(&NormBody::euclidean(2)));
        } else {
            panic!("move should apply at an acute corner");
        }
    }
}
