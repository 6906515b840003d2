//! Fitting point tuples into the open body, and certificates when they
//! cannot be.
//!
//! A tuple is admissible (a candidate trajectory vertex set) exactly when no
//! translate places all its points in the interior of `K`. The fit test is a
//! small LP: maximize the worst facet margin over translations. When the
//! optimum is non-positive, the LP duals hand back a surrounding-normals
//! certificate: supporting facets at the points whose outer normals admit a
//! zero convex combination, which pins the tuple against the boundary in
//! every translate.

use crate::linalg::{pair, Covector, Vector};
use crate::lp::{solve_lp, zero_in_convex_hull, LpProblem, LpStatus};
use crate::polytope::Polytope;
use crate::tol::{BOUNDARY_TOL, STRICT_TOL, WEIGHT_CLEANUP_TOL};

/// One (point, facet) incidence in a surrounding-normals certificate.
#[derive(Clone, Debug)]
pub struct CertEntry {
    /// Index of the pinned point in the tuple.
    pub point_index: usize,
    /// Facet of `K` whose halfspace pins the point.
    pub facet: usize,
    /// Convex weight; the weighted facet normals sum to zero.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct NonFitCertificate {
    pub entries: Vec<CertEntry>,
    /// Translation realizing the best (still failing) placement; each entry's
    /// point sits on or outside its facet hyperplane there.
    pub anchor: Vector,
}

impl NonFitCertificate {
    pub fn normals<'a>(&self, k: &'a Polytope) -> Vec<&'a Covector> {
        self.entries
            .iter()
            .map(|e| &k.halfspaces()[e.facet].normal)
            .collect()
    }

    /// Re-derives every certificate condition from scratch: weights form a
    /// convex combination, the weighted normals vanish, and each pinned
    /// point lies on or outside its supporting hyperplane at the anchor
    /// placement. Together these instantiate the surrounding-normals
    /// argument, so the tuple cannot be translated into the open body.
    pub fn validate(&self, k: &Polytope, points: &[Vector], tol: f64) -> Result<(), String> {
        if self.entries.is_empty() {
            return Err("certificate has no entries".into());
        }
        let d = k.dim();
        let mut weight_sum = 0.0;
        let mut normal_sum = Covector::zeros(d);
        for (idx, e) in self.entries.iter().enumerate() {
            if e.point_index >= points.len() {
                return Err(format!("entry {idx} references a missing point"));
            }
            if e.facet >= k.halfspaces().len() {
                return Err(format!("entry {idx} references a missing facet"));
            }
            if e.weight < -1e-15 {
                return Err(format!("entry {idx} has negative weight"));
            }
            let h = &k.halfspaces()[e.facet];
            let placed = &points[e.point_index] + &self.anchor;
            let excess = h.signed_excess(&placed);
            if excess < -tol * (1.0 + h.offset.abs()) {
                return Err(format!(
                    "entry {idx}: point lies {:.3e} strictly inside facet {} at the anchor",
                    -excess, e.facet
                ));
            }
            weight_sum += e.weight;
            normal_sum = &normal_sum + &h.normal.scale(e.weight);
        }
        if (weight_sum - 1.0).abs() > tol {
            return Err(format!("weights sum to {weight_sum}, not 1"));
        }
        if normal_sum.norm() > tol {
            return Err(format!(
                "weighted normals do not vanish: |sum| = {:.3e}",
                normal_sum.norm()
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum FitResult {
    /// Some translate puts every point strictly inside; `slack` is the best
    /// achievable minimum facet margin.
    Fits { translation: Vector, slack: f64 },
    /// No translate does; the certificate proves it. `slack` is the best
    /// (non-positive up to tolerance) margin still achievable.
    DoesNotFit {
        certificate: NonFitCertificate,
        slack: f64,
    },
}

/// Decides whether the tuple can be translated into the interior of `K`:
/// maximizes the worst facet margin `eps` over translations `t` subject to
/// `<a_j, q_i + t> + eps <= b_j` for all points `i` and facets `j`.
pub fn fits_into_interior(k: &Polytope, points: &[Vector]) -> Result<FitResult, String> {
    assert!(!points.is_empty(), "empty tuple");
    let d = k.dim();
    for p in points {
        assert_eq!(p.dim(), d, "point dimension mismatch");
    }
    let facets = k.halfspaces();
    // Variables: t (free, d coords) then eps (free).
    let mut lp = LpProblem::new(d + 1);
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    lp.maximize(&obj);
    let mut row_meta: Vec<(usize, usize)> = Vec::new();
    for (i, q) in points.iter().enumerate() {
        for (j, h) in facets.iter().enumerate() {
            let mut row = h.normal.coords().to_vec();
            row.push(1.0);
            lp.add_le(&row, h.offset - pair(&h.normal, q));
            row_meta.push((i, j));
        }
    }
    let out = solve_lp(&lp).map_err(|e| e.to_string())?;
    if out.status != LpStatus::Optimal {
        // Feasible for very negative eps and bounded above by the inradius,
        // so anything else is a numerical failure.
        return Err(format!("fit LP ended {:?}", out.status));
    }
    let translation = Vector::new(out.x[..d].to_vec());
    let slack = out.objective;
    if slack > STRICT_TOL {
        return Ok(FitResult::Fits { translation, slack });
    }

    // Dual weights: nonnegative, sum to one (eps column), and the weighted
    // facet normals cancel (t columns). Exactly the surrounding certificate.
    let mut entries = Vec::new();
    for (r, &(i, j)) in row_meta.iter().enumerate() {
        let w = out.dual[r];
        if w > WEIGHT_CLEANUP_TOL {
            entries.push(CertEntry {
                point_index: i,
                facet: j,
                weight: w,
            });
        }
    }
    let total: f64 = entries.iter().map(|e| e.weight).sum();
    if total <= 0.0 {
        return Err("non-fitting tuple produced an empty dual".into());
    }
    for e in entries.iter_mut() {
        e.weight /= total;
    }
    let certificate = NonFitCertificate {
        entries,
        anchor: translation,
    };
    certificate.validate(k, points, 1e-8)?;
    Ok(FitResult::DoesNotFit { certificate, slack })
}

/// Membership in the admissible class: the tuple cannot be translated into
/// the open body. Order-independent (only the point set matters).
pub fn in_admissible_class(k: &Polytope, points: &[Vector]) -> Result<bool, String> {
    Ok(matches!(
        fits_into_interior(k, points)?,
        FitResult::DoesNotFit { .. }
    ))
}

/// Direct certificate construction from a one-facet-per-point assignment,
/// checking the surrounding-normals conditions literally: each point on its
/// facet hyperplane, each halfspace containing `K` (automatic for the body's
/// own facets), and zero in the convex hull of the assigned normals. Proves
/// admissibility without an LP solve; fails naming the violated condition.
pub fn certify_surrounding(
    k: &Polytope,
    points: &[Vector],
    facet_assignment: &[usize],
) -> Result<NonFitCertificate, String> {
    if points.len() != facet_assignment.len() {
        return Err("one facet per point required".into());
    }
    if points.is_empty() {
        return Err("empty tuple".into());
    }
    for (i, (&j, q)) in facet_assignment.iter().zip(points).enumerate() {
        if j >= k.halfspaces().len() {
            return Err(format!("point {i}: facet {j} does not exist"));
        }
        let h = &k.halfspaces()[j];
        let excess = h.signed_excess(q);
        if excess.abs() > BOUNDARY_TOL * (1.0 + h.offset.abs()) {
            return Err(format!(
                "point {i} is {excess:.3e} off the hyperplane of facet {j}"
            ));
        }
    }
    let normals: Vec<Covector> = facet_assignment
        .iter()
        .map(|&j| k.halfspaces()[j].normal.clone())
        .collect();
    let hull = zero_in_convex_hull(&normals);
    if !hull.contains {
        return Err("assigned facet normals do not surround the origin".into());
    }
    let mut entries: Vec<CertEntry> = Vec::new();
    for (i, (&j, &w)) in facet_assignment.iter().zip(&hull.weights).enumerate() {
        if w > WEIGHT_CLEANUP_TOL {
            entries.push(CertEntry {
                point_index: i,
                facet: j,
                weight: w,
            });
        }
    }
    let cert = NonFitCertificate {
        entries,
        anchor: Vector::zeros(k.dim()),
    };
    cert.validate(k, points, 1e-8)?;
    Ok(cert)
}
