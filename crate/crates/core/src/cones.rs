//! Tangent and normal cones of a polytope, and acuteness of its corners.
//!
//! A boundary point's tangent cone splits orthogonally into its lineality
//! space and a pointed part. The point is acute when the pointed part has
//! spherical diameter strictly below a right angle; a body all of whose
//! faces are acute admits only classical (smooth-bounce) shortest closed
//! trajectories. A weaker sufficient condition asks, at every non-smooth
//! boundary point and for every ray in the normal cone, for a planar section
//! of the normal cone through that ray wider than a right angle; this module
//! checks that condition by deterministic ray sampling.

use crate::linalg::{orthonormalize, pair, Covector, Vector};
use crate::lp::nnls;
use crate::polytope::{Polytope, PolytopeError};
use crate::sampling::{Halton, SplitMix64};
use crate::tol::{ANG_TOL, BOUNDARY_TOL};
use std::collections::BTreeSet;
use std::f64::consts::PI;

/// Coordinate access shared by primal and dual tuples, so cones can be
/// generic over the space they live in.
pub trait CoordSpace: Clone + std::fmt::Debug {
    fn dim(&self) -> usize;
    fn coords(&self) -> &[f64];
    fn from_coords(coords: Vec<f64>) -> Self;
}

impl CoordSpace for Vector {
    fn dim(&self) -> usize {
        Vector::dim(self)
    }
    fn coords(&self) -> &[f64] {
        Vector::coords(self)
    }
    fn from_coords(coords: Vec<f64>) -> Self {
        Vector::new(coords)
    }
}

impl CoordSpace for Covector {
    fn dim(&self) -> usize {
        Covector::dim(self)
    }
    fn coords(&self) -> &[f64] {
        Covector::coords(self)
    }
    fn from_coords(coords: Vec<f64>) -> Self {
        Covector::new(coords)
    }
}

fn unit_coords<C: CoordSpace>(x: &C) -> Option<Vec<f64>> {
    let n = x.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
    (n > 1e-12).then(|| x.coords().iter().map(|c| c / n).collect())
}

/// Angle between two direction tuples, in [0, pi].
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|c| c * c).sum::<f64>().sqrt();
    let nb = b.iter().map(|c| c * c).sum::<f64>().sqrt();
    assert!(na > 1e-14 && nb > 1e-14, "angle of a zero direction");
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos()
}

/// Conic hull of finitely many generators, stored unit length.
#[derive(Clone, Debug)]
pub struct Cone<C: CoordSpace> {
    dim: usize,
    generators: Vec<C>,
}

impl<C: CoordSpace> Cone<C> {
    /// Near-zero generators are dropped, near-duplicates merged.
    pub fn from_generators(dim: usize, gens: Vec<C>) -> Self {
        let mut units: Vec<Vec<f64>> = Vec::new();
        for g in &gens {
            assert_eq!(g.dim(), dim, "generator dimension mismatch");
            if let Some(u) = unit_coords(g) {
                let dup = units
                    .iter()
                    .any(|v| v.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() > 1.0 - 1e-12);
                if !dup {
                    units.push(u);
                }
            }
        }
        Self {
            dim,
            generators: units.into_iter().map(C::from_coords).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[C] {
        &self.generators
    }

    /// The trivial cone `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Euclidean distance from `x` to the cone.
    pub fn distance(&self, x: &C) -> f64 {
        assert_eq!(x.dim(), self.dim);
        let cols: Vec<Vec<f64>> = self.generators.iter().map(|g| g.coords().to_vec()).collect();
        let (_, r) = nnls(&cols, x.coords());
        r
    }

    pub fn contains(&self, x: &C, tol: f64) -> bool {
        let scale = 1.0 + x.coords().iter().map(|c| c.abs()).fold(0.0, f64::max);
        self.distance(x) <= tol * scale
    }

    /// Drops generators lying in the conic hull of the remaining ones.
    pub fn minimalized(&self) -> Self {
        let mut keep: Vec<bool> = vec![true; self.generators.len()];
        for i in 0..self.generators.len() {
            let cols: Vec<Vec<f64>> = (0..self.generators.len())
                .filter(|&j| j != i && keep[j])
                .map(|j| self.generators[j].coords().to_vec())
                .collect();
            if cols.is_empty() {
                continue;
            }
            let (_, r) = nnls(&cols, self.generators[i].coords());
            if r <= 1e-9 {
                keep[i] = false;
            }
        }
        Self {
            dim: self.dim,
            generators: self
                .generators
                .iter()
                .zip(&keep)
                .filter_map(|(g, &k)| k.then(|| g.clone()))
                .collect(),
        }
    }

    /// Orthogonal split into lineality space and pointed part.
    pub fn decompose(&self) -> ConeDecomposition<C> {
        // A generator g belongs to the lineality space iff -g is in the cone;
        // those generators span the entire lineality space.
        let cols: Vec<Vec<f64>> = self.generators.iter().map(|g| g.coords().to_vec()).collect();
        let mut lin_gens: Vec<nalgebra::DVector<f64>> = Vec::new();
        for g in &self.generators {
            let neg: Vec<f64> = g.coords().iter().map(|c| -c).collect();
            let (_, r) = nnls(&cols, &neg);
            if r <= 1e-9 {
                lin_gens.push(nalgebra::DVector::from_column_slice(g.coords()));
            }
        }
        let basis = orthonormalize(&lin_gens, 1e-10);

        // Project everything onto the orthocomplement of the lineality space.
        let mut projected: Vec<C> = Vec::new();
        for g in &self.generators {
            let mut w = nalgebra::DVector::from_column_slice(g.coords());
            for b in &basis {
                let c = w.dot(b);
                w -= b * c;
            }
            let len = w.norm();
            if len > 1e-9 {
                projected.push(C::from_coords((w / len).iter().copied().collect()));
            }
        }
        let pointed = Cone::from_generators(self.dim, projected).minimalized();

        let mut max_angle = 0.0f64;
        for (i, a) in pointed.generators.iter().enumerate() {
            for b in &pointed.generators[i + 1..] {
                max_angle = max_angle.max(angle_between(a.coords(), b.coords()));
            }
        }
        let spherical_diameter = if max_angle < PI / 2.0 - ANG_TOL {
            SphericalDiameter::Angle(max_angle)
        } else {
            SphericalDiameter::AtLeastRightAngle
        };

        ConeDecomposition {
            lineality: basis
                .iter()
                .map(|b| C::from_coords(b.iter().copied().collect()))
                .collect(),
            pointed: pointed.generators,
            spherical_diameter,
        }
    }
}

/// Spherical diameter of a pointed cone, exact only below a right angle
/// (which is all the acuteness verdict needs).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphericalDiameter {
    Angle(f64),
    AtLeastRightAngle,
}

#[derive(Clone, Debug)]
pub struct ConeDecomposition<C: CoordSpace> {
    /// Orthonormal basis of the lineality space.
    pub lineality: Vec<C>,
    /// Minimal unit generators of the pointed part, orthogonal to the
    /// lineality space.
    pub pointed: Vec<C>,
    pub spherical_diameter: SphericalDiameter,
}

/// Cone of outer normals at a boundary point (trivial for interior points).
pub fn normal_cone(k: &Polytope, q: &Vector, tol: f64) -> Result<Cone<Covector>, PolytopeError> {
    let active = k.active_facets(q, tol)?;
    let gens = active
        .into_iter()
        .map(|j| k.halfspaces()[j].normal.clone())
        .collect();
    Ok(Cone::from_generators(k.dim(), gens))
}

/// Tangent cone at a point of the body: conic hull of directions toward all
/// vertices. Full space for interior points.
pub fn tangent_cone(k: &Polytope, q: &Vector) -> Result<Cone<Vector>, PolytopeError> {
    if k.depth(q) < -BOUNDARY_TOL {
        return Err(PolytopeError::Degenerate(
            "tangent cone requested outside the body".into(),
        ));
    }
    let gens: Vec<Vector> = k
        .vertices()
        .iter()
        .filter(|v| v.dist(q) > 1e-12)
        .map(|v| v - q)
        .collect();
    Ok(Cone::from_generators(k.dim(), gens).minimalized())
}

/// Acuteness verdict at a single boundary point.
pub fn point_acuteness(
    k: &Polytope,
    q: &Vector,
) -> Result<(bool, SphericalDiameter), PolytopeError> {
    let t = tangent_cone(k, q)?;
    let dec = t.decompose();
    let acute = matches!(dec.spherical_diameter, SphericalDiameter::Angle(_));
    Ok((acute, dec.spherical_diameter))
}

#[derive(Clone, Debug)]
pub struct FaceVerdict {
    /// Facets active at the representative point.
    pub facets: Vec<usize>,
    /// Vertex indices spanning the face.
    pub face_vertices: Vec<usize>,
    pub representative: Vector,
    pub diameter: SphericalDiameter,
    pub acute: bool,
}

#[derive(Clone, Debug)]
pub struct BodyAcuteness {
    pub acute: bool,
    pub faces: Vec<FaceVerdict>,
}

/// Checks acuteness at a representative of every face of codimension >= 2
/// (vertices, edges, and in dimension four the planar faces). Facet
/// interiors are smooth and always acute, so they are not listed.
///
/// The tangent cone is constant on the relative interior of a face, so one
/// representative per face decides the whole face.
pub fn body_acuteness(k: &Polytope) -> BodyAcuteness {
    let d = k.dim();
    let mut faces: Vec<FaceVerdict> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();

    let mut push_face = |vertex_ids: Vec<usize>, rep: Vector, faces: &mut Vec<FaceVerdict>| {
        if !seen.insert(vertex_ids.clone()) {
            return;
        }
        let facets = k
            .active_facets(&rep, BOUNDARY_TOL)
            .expect("face representative lies on the boundary");
        let (acute, diameter) = point_acuteness(k, &rep).expect("representative is on the body");
        faces.push(FaceVerdict {
            facets,
            face_vertices: vertex_ids,
            representative: rep,
            diameter,
            acute,
        });
    };

    for (i, v) in k.vertices().iter().enumerate() {
        push_face(vec![i], v.clone(), &mut faces);
    }

    // Positive-dimensional faces of codimension >= 2 arise as common vertex
    // sets of at least two facets.
    let f = k.halfspaces().len();
    let mut stack: Vec<Vec<usize>> = (0..f).map(|j| vec![j]).collect();
    while let Some(subset) = stack.pop() {
        if subset.len() >= 2 {
            let mut common: Vec<usize> = k.facet_vertices()[subset[0]].clone();
            for &j in &subset[1..] {
                common.retain(|v| k.facet_vertices()[j].contains(v));
            }
            if common.len() >= 2 {
                let mut avg = vec![0.0; d];
                for &vi in &common {
                    for (a, c) in avg.iter_mut().zip(k.vertices()[vi].coords()) {
                        *a += c;
                    }
                }
                let n = common.len() as f64;
                let rep = Vector::new(avg.into_iter().map(|a| a / n).collect());
                common.sort_unstable();
                push_face(common, rep, &mut faces);
            }
        }
        if subset.len() < d {
            let last = *subset.last().unwrap();
            for j in last + 1..f {
                let mut next = subset.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }

    let acute = faces.iter().all(|fv| fv.acute);
    BodyAcuteness { acute, faces }
}

/// Dihedral angles of a simplex: for each facet pair, the interior angle
/// along their common ridge, which is pi minus the angle of the outer
/// normals. Errors unless the body has exactly `dim + 1` facets.
pub fn simplex_dihedral_angles(k: &Polytope) -> Result<Vec<(usize, usize, f64)>, PolytopeError> {
    let f = k.halfspaces().len();
    if f != k.dim() + 1 || k.vertices().len() != k.dim() + 1 {
        return Err(PolytopeError::Degenerate(format!(
            "not a simplex: {f} facets, {} vertices",
            k.vertices().len()
        )));
    }
    let mut out = Vec::new();
    for i in 0..f {
        for j in i + 1..f {
            let a = angle_between(
                k.halfspaces()[i].normal.coords(),
                k.halfspaces()[j].normal.coords(),
            );
            out.push((i, j, PI - a));
        }
    }
    Ok(out)
}

/// Planar section of the normal cone `{u : <u, t> <= 0 for all tangent t}`
/// by the plane spanned by the orthonormal pair `(e1, e2)`: its angular
/// width and the pair of extreme rays attaining it.
pub(crate) struct PlanarSection {
    pub width: f64,
    pub rays: Vec<Covector>,
}

pub(crate) fn section_of_normal_cone(
    e1: &Covector,
    e2: &Covector,
    tangent_gens: &[Vector],
) -> PlanarSection {
    // In-plane constraint rows: u = alpha e1 + beta e2 must satisfy
    // <u, t_k> <= 0, i.e. (alpha, beta) . c_k <= 0.
    let mut rows: Vec<[f64; 2]> = Vec::new();
    for t in tangent_gens {
        let c = [pair(e1, t), pair(e2, t)];
        let n = (c[0] * c[0] + c[1] * c[1]).sqrt();
        let scale = 1.0 + t.norm();
        if n > 1e-11 * scale {
            rows.push([c[0] / n, c[1] / n]);
        }
    }
    let ambient = |u: [f64; 2]| -> Covector { &e1.scale(u[0]) + &e2.scale(u[1]) };
    if rows.is_empty() {
        // The whole plane: opposite rays realize width pi.
        return PlanarSection {
            width: PI,
            rays: vec![e1.clone(), e1.scale(-1.0)],
        };
    }
    // Extreme rays of a planar halfplane intersection lie among the rotated
    // constraint normals.
    let mut candidates: Vec<[f64; 2]> = Vec::new();
    for r in &rows {
        candidates.push([-r[1], r[0]]);
        candidates.push([r[1], -r[0]]);
    }
    let feasible: Vec<[f64; 2]> = candidates
        .into_iter()
        .filter(|u| rows.iter().all(|r| r[0] * u[0] + r[1] * u[1] <= 1e-9))
        .collect();
    let mut width = 0.0f64;
    let mut best: Option<([f64; 2], [f64; 2])> = None;
    for (i, a) in feasible.iter().enumerate() {
        for b in &feasible[i..] {
            let ang = angle_between(a, b);
            if ang >= width {
                width = ang;
                best = Some((*a, *b));
            }
        }
    }
    let rays = match best {
        Some((a, b)) => vec![ambient(a), ambient(b)],
        None => Vec::new(),
    };
    PlanarSection { width, rays }
}

/// Widest planar section of the normal cone at `q` through the normal ray
/// `rho`, over candidate planes spanned by `rho` and the cone data.
/// Returns the width and the extreme rays of the best section.
pub(crate) fn widest_section_through(
    k: &Polytope,
    q: &Vector,
    rho: &Covector,
    tangent_gens: &[Vector],
) -> (f64, Vec<Covector>) {
    let d = k.dim();
    let rho_dv = nalgebra::DVector::from_column_slice(rho.coords());
    let mut planes: Vec<(Covector, Covector)> = Vec::new();
    if d == 2 {
        let e1 = rho.unit().expect("nonzero ray");
        let e2 = Covector::new(vec![-e1.coords()[1], e1.coords()[0]]);
        planes.push((e1, e2));
    } else {
        let gens: Vec<Covector> = normal_cone(k, q, BOUNDARY_TOL)
            .map(|c| c.generators().to_vec())
            .unwrap_or_default();
        // The ray itself pairs with each generator; generator pairs form
        // planes that are kept only when they contain the ray.
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let a = nalgebra::DVector::from_column_slice(gens[i].coords());
                let b = nalgebra::DVector::from_column_slice(gens[j].coords());
                let basis = orthonormalize(&[rho_dv.clone(), a, b], 1e-9);
                if basis.len() == 2 {
                    planes.push((
                        Covector::new(basis[0].iter().copied().collect()),
                        Covector::new(basis[1].iter().copied().collect()),
                    ));
                }
            }
        }
    }
    let mut best_width = 0.0f64;
    let mut best_rays: Vec<Covector> = Vec::new();
    for (e1, e2) in planes {
        let s = section_of_normal_cone(&e1, &e2, tangent_gens);
        if s.width > best_width {
            best_width = s.width;
            best_rays = s.rays;
        }
    }
    (best_width, best_rays)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// Every sampled normal ray at every non-smooth face admits a planar
    /// section of the normal cone wider than a right angle.
    Confirmed,
    /// Some sampled ray had no wide section; the condition may still hold
    /// for other planes, so this is inconclusive, not a refutation.
    Unresolved,
}

#[derive(Clone, Debug)]
pub struct WeakAcutenessProbe {
    pub verdict: ProbeVerdict,
    /// Smallest best-section width seen across all sampled rays.
    pub worst_width: f64,
    /// A failing (boundary point, normal ray) pair when unresolved.
    pub witness: Option<(Vector, Covector)>,
}

/// Samples rays in the normal cone of every non-smooth face and looks for a
/// planar section of the normal cone through each ray wider than a right
/// angle. Deterministic in `seed`.
pub fn weak_acuteness_probe(k: &Polytope, rays_per_face: usize, seed: u64) -> WeakAcutenessProbe {
    let body = body_acuteness(k);
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut rng = SplitMix64::new(seed ^ 0x5eed);

    for face in &body.faces {
        let q = &face.representative;
        let gens: Vec<Covector> = face
            .facets
            .iter()
            .map(|&j| k.halfspaces()[j].normal.clone())
            .collect();
        if gens.len() < 2 {
            continue; // smooth point, nothing to check
        }
        let tangent_gens: Vec<Vector> = k
            .vertices()
            .iter()
            .filter(|v| v.dist(q) > 1e-12)
            .map(|v| v - q)
            .collect();

        // Rays: each generator, the mean, and low-discrepancy mixtures.
        let mut rays: Vec<Covector> = gens.clone();
        let mut mean = Covector::zeros(k.dim());
        for g in &gens {
            mean = &mean + g;
        }
        if let Some(u) = mean.unit() {
            rays.push(u);
        }
        let hdim = gens.len().min(12);
        let mut halton = Halton::new(hdim, seed);
        while rays.len() < rays_per_face.max(gens.len() + 1) {
            let w = halton.next_point();
            let mut r = Covector::zeros(k.dim());
            for (i, g) in gens.iter().enumerate() {
                let wi = if i < hdim { w[i] } else { rng.next_f64() };
                r = &r + &g.scale(wi);
            }
            match r.unit() {
                Some(u) => rays.push(u),
                None => rays.push(gens[0].clone()),
            }
        }

        for rho in &rays {
            let (width, _) = widest_section_through(k, q, rho, &tangent_gens);
            if width < worst {
                worst = width;
                if width <= PI / 2.0 + ANG_TOL {
                    witness = Some((q.clone(), rho.clone()));
                }
            }
        }
    }

    if worst == f64::INFINITY {
        // No non-smooth faces at all (cannot happen for a polytope, but the
        // verdict should still be well-defined).
        return WeakAcutenessProbe {
            verdict: ProbeVerdict::Confirmed,
            worst_width: PI,
            witness: None,
        };
    }
    let verdict = if worst > PI / 2.0 + ANG_TOL {
        ProbeVerdict::Confirmed
    } else {
        ProbeVerdict::Unresolved
    };
    WeakAcutenessProbe {
        verdict,
        worst_width: worst,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polytope {
        Polytope::from_vertices(
            2,
            vec![
                Vector::new(vec![0.0, 0.0]),
                Vector::new(vec![1.0, 0.0]),
                Vector::new(vec![1.0, 1.0]),
                Vector::new(vec![0.0, 1.0]),
            ],
        )
        .unwrap()
    }

    fn equilateral_triangle() -> Polytope {
        Polytope::from_vertices(
            2,
            vec![
                Vector::new(vec![0.0, 0.0]),
                Vector::new(vec![1.0, 0.0]),
                Vector::new(vec![0.5, 3.0f64.sqrt() / 2.0]),
            ],
        )
        .unwrap()
    }

    fn regular_tetrahedron() -> Polytope {
        Polytope::from_vertices(
            3,
            vec![
                Vector::new(vec![0.0, 0.0, 0.0]),
                Vector::new(vec![1.0, 0.0, 0.0]),
                Vector::new(vec![0.5, 3.0f64.sqrt() / 2.0, 0.0]),
                Vector::new(vec![0.5, 3.0f64.sqrt() / 6.0, (2.0f64 / 3.0).sqrt()]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn cone_membership_examples() {
        let c = Cone::from_generators(
            2,
            vec![Vector::new(vec![1.0, 0.0]), Vector::new(vec![1.0, 1.0])],
        );
        assert!(c.contains(&Vector::new(vec![2.0, 1.0]), 1e-9));
        assert!(!c.contains(&Vector::new(vec![-1.0, 0.0]), 1e-9));
        assert!(!c.contains(&Vector::new(vec![0.0, 1.0]), 1e-9));
    }

    #[test]
    fn minimalization_drops_inner_generators() {
        let c = Cone::from_generators(
            2,
            vec![
                Vector::new(vec![1.0, 0.0]),
                Vector::new(vec![0.0, 1.0]),
                Vector::new(vec![1.0, 1.0]),
            ],
        )
        .minimalized();
        assert_eq!(c.generators().len(), 2);
    }

    #[test]
    fn decompose_extracts_lineality() {
        let c = Cone::from_generators(
            3,
            vec![
                Vector::new(vec![1.0, 0.0, 0.0]),
                Vector::new(vec![-1.0, 0.0, 0.0]),
                Vector::new(vec![0.3, 0.0, 1.0]),
            ],
        );
        let dec = c.decompose();
        assert_eq!(dec.lineality.len(), 1);
        assert_eq!(dec.pointed.len(), 1);
        // Pointed part is orthogonal to the lineality space.
        let dot: f64 = dec.lineality[0]
            .coords()
            .iter()
            .zip(dec.pointed[0].coords())
            .map(|(a, b)| a * b)
            .sum();
        assert!(dot.abs() <= 1e-9);
        assert_eq!(dec.spherical_diameter, SphericalDiameter::Angle(0.0));
    }

    #[test]
    fn square_corner_is_right_not_acute() {
        let k = unit_square();
        let corner = Vector::new(vec![1.0, 1.0]);
        let (acute, diam) = point_acuteness(&k, &corner).unwrap();
        assert!(!acute);
        assert_eq!(diam, SphericalDiameter::AtLeastRightAngle);
        let n = normal_cone(&k, &corner, BOUNDARY_TOL).unwrap();
        assert_eq!(n.generators().len(), 2);
        assert!(n.contains(&Covector::new(vec![1.0, 1.0]), 1e-9));
    }

    #[test]
    fn triangle_corner_is_acute() {
        let k = equilateral_triangle();
        let (acute, diam) = point_acuteness(&k, &Vector::new(vec![0.0, 0.0])).unwrap();
        assert!(acute);
        match diam {
            SphericalDiameter::Angle(a) => assert!((a - PI / 3.0).abs() <= 1e-9),
            other => panic!("expected acute angle, got {other:?}"),
        }
    }

    #[test]
    fn body_verdicts() {
        assert!(body_acuteness(&equilateral_triangle()).acute);
        assert!(!body_acuteness(&unit_square()).acute);
        assert!(body_acuteness(&regular_tetrahedron()).acute);

        let cube = Polytope::from_vertices(
            3,
            (0..8)
                .map(|i| {
                    Vector::new(vec![
                        (i & 1) as f64,
                        ((i >> 1) & 1) as f64,
                        ((i >> 2) & 1) as f64,
                    ])
                })
                .collect(),
        )
        .unwrap();
        let rep = body_acuteness(&cube);
        assert!(!rep.acute);
        // 8 vertices and 12 edges all get a verdict.
        assert_eq!(rep.faces.len(), 20);
        assert!(rep.faces.iter().all(|f| !f.acute));
    }

    #[test]
    fn tetrahedron_dihedrals_match_closed_form() {
        // Regular simplex dihedral: arccos(1/3).
        let expected = (1.0f64 / 3.0).acos();
        assert!((expected - 1.230_959_417_340_774_7).abs() <= 1e-15);
        let k = regular_tetrahedron();
        let angles = simplex_dihedral_angles(&k).unwrap();
        assert_eq!(angles.len(), 6);
        for (_, _, a) in angles {
            assert!((a - expected).abs() <= 1e-9);
        }
        assert!(simplex_dihedral_angles(&unit_square()).is_err());
    }

    #[test]
    fn section_width_at_square_corner_is_right_angle() {
        let k = unit_square();
        let q = Vector::new(vec![1.0, 1.0]);
        let tangent: Vec<Vector> = k
            .vertices()
            .iter()
            .filter(|v| v.dist(&q) > 1e-12)
            .map(|v| v - &q)
            .collect();
        let rho = Covector::new(vec![1.0, 1.0]).unit().unwrap();
        let (w, rays) = widest_section_through(&k, &q, &rho, &tangent);
        assert!((w - PI / 2.0).abs() <= 1e-9);
        assert_eq!(rays.len(), 2);
    }

    #[test]
    fn weak_probe_confirms_acute_bodies_and_flags_the_square() {
        let tri = weak_acuteness_probe(&equilateral_triangle(), 8, 7);
        assert_eq!(tri.verdict, ProbeVerdict::Confirmed);
        assert!((tri.worst_width - 2.0 * PI / 3.0).abs() <= 1e-9);

        let tet = weak_acuteness_probe(&regular_tetrahedron(), 16, 7);
        assert_eq!(tet.verdict, ProbeVerdict::Confirmed);

        let sq = weak_acuteness_probe(&unit_square(), 8, 7);
        assert_eq!(sq.verdict, ProbeVerdict::Unresolved);
        assert!((sq.worst_width - PI / 2.0).abs() <= 1e-9);
        assert!(sq.witness.is_some());
    }
}
