//! Convex polytopes in dimensions 2 through 4, kept in both descriptions.
//!
//! A body carries its irredundant facet halfspaces, its vertex list, and the
//! facet-vertex incidence. Constructors accept either description, validate
//! it (bounded, full-dimensional), and derive the other. All normals are
//! stored unit-length so offsets and slacks read as Euclidean distances.

use crate::linalg::{affine_rank, nullspace, solve_square, pair, Covector, Matrix, Vector};
use crate::lp::{solve_lp, zero_in_convex_hull, LpProblem, LpStatus};
#[cfg(test)]
use crate::tol::BOUNDARY_TOL;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("dimension {0} unsupported, need 2 through 4")]
    Dimension(usize),
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("body is empty or lower-dimensional: {0}")]
    NotFullDimensional(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// Closed halfspace `{ x : <normal, x> <= offset }` with a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Covector,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes to unit normal; `None` for a (near-)zero normal.
    pub fn new(normal: Covector, offset: f64) -> Option<Self> {
        let len = normal.norm();
        if len < 1e-12 {
            return None;
        }
        Some(Self {
            normal: normal.scale(1.0 / len),
            offset: offset / len,
        })
    }

    /// Positive outside, negative inside, zero on the boundary hyperplane.
    pub fn signed_excess(&self, q: &Vector) -> f64 {
        pair(&self.normal, q) - self.offset
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vector>,
    /// Per facet: sorted indices of incident vertices.
    facet_vertices: Vec<Vec<usize>>,
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        // Advance the rightmost index that still has room.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + (k - i) < n {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn lex_less(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.coords().iter().zip(b.coords()) {
        match x.partial_cmp(y).unwrap() {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.facet_vertices
    }

    /// Builds from halfspaces, dropping redundant ones.
    pub fn from_halfspaces(
        dim: usize,
        halfspaces: Vec<Halfspace>,
    ) -> Result<Self, PolytopeError> {
        if !(2..=4).contains(&dim) {
            return Err(PolytopeError::Dimension(dim));
        }
        for h in &halfspaces {
            if h.normal.dim() != dim {
                return Err(PolytopeError::Degenerate("halfspace dimension mismatch".into()));
            }
        }
        // Merge parallel duplicates, keeping the tighter offset.
        let mut hs: Vec<Halfspace> = Vec::new();
        for h in halfspaces {
            match hs
                .iter_mut()
                .find(|g| g.normal.dot(&h.normal) > 1.0 - 1e-10)
            {
                Some(g) => g.offset = g.offset.min(h.offset),
                None => hs.push(h),
            }
        }
        if hs.len() < dim + 1 {
            return Err(PolytopeError::Unbounded);
        }

        // Bounded iff the recession cone is trivial iff 0 is interior to the
        // convex hull of the facet normals.
        let normals: Vec<Covector> = hs.iter().map(|h| h.normal.clone()).collect();
        let hull = zero_in_convex_hull(&normals);
        if !hull.interior {
            return Err(PolytopeError::Unbounded);
        }

        // Full-dimensionality via the largest inscribed ball.
        let (r, _) = chebyshev(dim, &hs)?;
        if r <= 1e-9 {
            return Err(PolytopeError::NotFullDimensional(format!(
                "inradius {r:.3e}"
            )));
        }

        let scale = 1.0 + hs.iter().map(|h| h.offset.abs()).fold(0.0, f64::max);

        // Vertex candidates: nonsingular d-subsets of facet hyperplanes whose
        // intersection satisfies every constraint.
        let mut verts: Vec<Vector> = Vec::new();
        for_each_combination(hs.len(), dim, |subset| {
            let a = Matrix::from_fn(dim, dim, |r, c| hs[subset[r]].normal.coords()[c]);
            let b = nalgebra::DVector::from_fn(dim, |r, _| hs[subset[r]].offset);
            if let Some(x) = solve_square(&a, &b) {
                let v = Vector::new(x.iter().copied().collect());
                let inside = hs.iter().all(|h| h.signed_excess(&v) <= 1e-9 * scale);
                if inside && !verts.iter().any(|w| w.dist(&v) <= 1e-9 * scale) {
                    verts.push(v);
                }
            }
        });

        // Prune to facets with enough incident vertices and vertices with a
        // full-rank active set; iterate until stable.
        let inc_tol = 1e-8 * scale;
        loop {
            let incidence: Vec<Vec<usize>> = hs
                .iter()
                .map(|h| {
                    (0..verts.len())
                        .filter(|&i| h.signed_excess(&verts[i]).abs() <= inc_tol)
                        .collect()
                })
                .collect();
            let keep_facets: Vec<bool> = incidence.iter().map(|ix| ix.len() >= dim).collect();
            if keep_facets.iter().any(|&k| !k) {
                hs = hs
                    .into_iter()
                    .zip(&keep_facets)
                    .filter_map(|(h, &k)| k.then_some(h))
                    .collect();
                continue;
            }
            let keep_verts: Vec<bool> = verts
                .iter()
                .map(|v| {
                    let act: Vec<&Halfspace> = hs
                        .iter()
                        .filter(|h| h.signed_excess(v).abs() <= inc_tol)
                        .collect();
                    if act.len() < dim {
                        return false;
                    }
                    let m = Matrix::from_fn(act.len(), dim, |r, c| act[r].normal.coords()[c]);
                    m.rank(1e-8) == dim
                })
                .collect();
            if keep_verts.iter().any(|&k| !k) {
                verts = verts
                    .into_iter()
                    .zip(&keep_verts)
                    .filter_map(|(v, &k)| k.then_some(v))
                    .collect();
                continue;
            }
            break;
        }
        if verts.len() < dim + 1 || hs.len() < dim + 1 {
            return Err(PolytopeError::Degenerate(format!(
                "{} vertices, {} facets after pruning",
                verts.len(),
                hs.len()
            )));
        }

        verts.sort_by(lex_less);
        let facet_vertices: Vec<Vec<usize>> = hs
            .iter()
            .map(|h| {
                (0..verts.len())
                    .filter(|&i| h.signed_excess(&verts[i]).abs() <= inc_tol)
                    .collect()
            })
            .collect();

        Ok(Self {
            dim,
            halfspaces: hs,
            vertices: verts,
            facet_vertices,
        })
    }

    /// Convex hull of the given points; non-extreme points are dropped.
    pub fn from_vertices(dim: usize, points: Vec<Vector>) -> Result<Self, PolytopeError> {
        if !(2..=4).contains(&dim) {
            return Err(PolytopeError::Dimension(dim));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(PolytopeError::Degenerate("point dimension mismatch".into()));
            }
        }
        let scale = 1.0
            + points
                .iter()
                .flat_map(|p| p.coords())
                .map(|c| c.abs())
                .fold(0.0, f64::max);
        let mut pts: Vec<Vector> = Vec::new();
        for p in points {
            if !pts.iter().any(|q| q.dist(&p) <= 1e-9 * scale) {
                pts.push(p);
            }
        }
        if pts.len() < dim + 1 {
            return Err(PolytopeError::NotFullDimensional(format!(
                "{} distinct points",
                pts.len()
            )));
        }
        if affine_rank(&pts, 1e-9 * scale) < dim {
            return Err(PolytopeError::NotFullDimensional(
                "points span a lower-dimensional flat".into(),
            ));
        }

        // Supporting hyperplanes through affinely independent d-subsets.
        let mut hs: Vec<Halfspace> = Vec::new();
        for_each_combination(pts.len(), dim, |subset| {
            let base = &pts[subset[0]];
            let rows = Matrix::from_fn(dim - 1, dim, |r, c| {
                pts[subset[r + 1]].coords()[c] - base.coords()[c]
            });
            let ns = nullspace(&rows, 1e-9 * scale);
            if ns.len() != 1 {
                return; // affinely dependent subset or numerically fuzzy
            }
            let mut n = Covector::new(ns[0].iter().copied().collect());
            // Orient outward; skip if the plane does not support the hull.
            let base_val = pair(&n, base);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in &pts {
                let s = pair(&n, p) - base_val;
                lo = lo.min(s);
                hi = hi.max(s);
            }
            let side_tol = 1e-9 * scale;
            if lo < -side_tol && hi > side_tol {
                return;
            }
            if hi > side_tol {
                n = n.scale(-1.0);
            }
            // Tighten so every point is inside exactly.
            let b = pts.iter().map(|p| pair(&n, p)).fold(f64::NEG_INFINITY, f64::max);
            if let Some(h) = Halfspace::new(n, b) {
                if !hs.iter().any(|g| g.normal.dot(&h.normal) > 1.0 - 1e-10) {
                    hs.push(h);
                }
            }
        });

        let body = Self::from_halfspaces(dim, hs)?;
        for p in &pts {
            if body.depth(p) < -1e-7 * scale {
                return Err(PolytopeError::Degenerate(
                    "hull reconstruction lost an input point".into(),
                ));
            }
        }
        Ok(body)
    }

    /// `h_K(c) = max_{x in K} <c, x>`.
    pub fn support_value(&self, c: &Covector) -> f64 {
        self.vertices
            .iter()
            .map(|v| pair(c, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minimum facet slack: positive strictly inside, negative outside.
    pub fn depth(&self, q: &Vector) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| -h.signed_excess(q))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, q: &Vector, tol: f64) -> bool {
        self.depth(q) >= -tol
    }

    /// Facets whose hyperplane passes through `q` (within `tol`).
    /// Errors if `q` lies outside the body by more than `tol`.
    pub fn active_facets(&self, q: &Vector, tol: f64) -> Result<Vec<usize>, PolytopeError> {
        if self.depth(q) < -tol {
            return Err(PolytopeError::Degenerate(format!(
                "point lies {:.3e} outside the body",
                -self.depth(q)
            )));
        }
        Ok((0..self.halfspaces.len())
            .filter(|&j| self.halfspaces[j].signed_excess(q).abs() <= tol)
            .collect())
    }

    /// True boundary point: inside and on at least one facet hyperplane.
    pub fn on_boundary(&self, q: &Vector, tol: f64) -> bool {
        let d = self.depth(q);
        d >= -tol && d <= tol
    }

    pub fn centroid(&self) -> Vector {
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for (acc, x) in c.iter_mut().zip(v.coords()) {
                *acc += x;
            }
        }
        let n = self.vertices.len() as f64;
        Vector::new(c.into_iter().map(|x| x / n).collect())
    }

    pub fn translate(&self, t: &Vector) -> Self {
        assert_eq!(t.dim(), self.dim);
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                normal: h.normal.clone(),
                offset: h.offset + pair(&h.normal, t),
            })
            .collect();
        let vertices = self.vertices.iter().map(|v| v + t).collect();
        Self {
            dim: self.dim,
            halfspaces,
            vertices,
            facet_vertices: self.facet_vertices.clone(),
        }
    }

    /// Dilation about the origin, `factor > 0`.
    pub fn scale(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                normal: h.normal.clone(),
                offset: h.offset * factor,
            })
            .collect();
        let vertices = self.vertices.iter().map(|v| v.scale(factor)).collect();
        Self {
            dim: self.dim,
            halfspaces,
            vertices,
            facet_vertices: self.facet_vertices.clone(),
        }
    }

    /// Image under an invertible linear map (rebuilt from mapped vertices).
    pub fn linear_map(&self, a: &Matrix) -> Result<Self, PolytopeError> {
        assert_eq!(a.nrows(), self.dim);
        assert_eq!(a.ncols(), self.dim);
        let mapped = self
            .vertices
            .iter()
            .map(|v| {
                let x = a * nalgebra::DVector::from_column_slice(v.coords());
                Vector::new(x.iter().copied().collect())
            })
            .collect();
        Self::from_vertices(self.dim, mapped)
    }

    /// Central symmetrization `K + (-K)`, the difference body.
    pub fn difference_body(&self) -> Result<Self, PolytopeError> {
        let mut pts = Vec::with_capacity(self.vertices.len() * self.vertices.len());
        for v in &self.vertices {
            for w in &self.vertices {
                pts.push(v - w);
            }
        }
        Self::from_vertices(self.dim, pts)
    }

    /// Largest inscribed ball: (radius, center).
    pub fn inradius(&self) -> (f64, Vector) {
        chebyshev(self.dim, &self.halfspaces).expect("validated body has an inscribed ball")
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, v) in self.vertices.iter().enumerate() {
            for w in &self.vertices[i + 1..] {
                d = d.max(v.dist(w));
            }
        }
        d
    }

    /// Planar boundary walk (dimension 2 only): vertices in counterclockwise
    /// order plus, for each edge `(v_i, v_{i+1})`, the index of its facet.
    pub fn boundary_loop(&self) -> (Vec<Vector>, Vec<usize>) {
        assert_eq!(self.dim, 2, "boundary walk is planar only");
        let c = self.centroid();
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        let angle = |i: usize| {
            let v = &self.vertices[i];
            (v.coords()[1] - c.coords()[1]).atan2(v.coords()[0] - c.coords()[0])
        };
        order.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).unwrap());
        let ccw: Vec<Vector> = order.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut edge_facets = Vec::with_capacity(ccw.len());
        for k in 0..order.len() {
            let i = order[k];
            let j = order[(k + 1) % order.len()];
            let f = (0..self.halfspaces.len())
                .find(|&f| {
                    self.facet_vertices[f].contains(&i) && self.facet_vertices[f].contains(&j)
                })
                .expect("consecutive hull vertices share a facet");
            edge_facets.push(f);
        }
        (ccw, edge_facets)
    }
}

/// Largest inscribed ball via LP: maximize r with `<a_i, x> + r <= b_i`.
fn chebyshev(dim: usize, hs: &[Halfspace]) -> Result<(f64, Vector), PolytopeError> {
    let mut lp = LpProblem::new(dim + 1);
    let mut obj = vec![0.0; dim + 1];
    obj[dim] = 1.0;
    lp.maximize(&obj);
    lp.set_lower_bound(dim, 0.0);
    for h in hs {
        let mut row = h.normal.coords().to_vec();
        row.push(1.0);
        lp.add_le(&row, h.offset);
    }
    let out = solve_lp(&lp).map_err(|e| PolytopeError::Degenerate(e.to_string()))?;
    match out.status {
        LpStatus::Optimal => Ok((
            out.objective,
            Vector::new(out.x[..dim].to_vec()),
        )),
        LpStatus::Infeasible => Err(PolytopeError::NotFullDimensional("empty body".into())),
        LpStatus::Unbounded => Err(PolytopeError::Unbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polytope {
        Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::new(Covector::new(vec![1.0, 0.0]), 1.0).unwrap(),
                Halfspace::new(Covector::new(vec![-1.0, 0.0]), 0.0).unwrap(),
                Halfspace::new(Covector::new(vec![0.0, 1.0]), 1.0).unwrap(),
                Halfspace::new(Covector::new(vec![0.0, -1.0]), 0.0).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn square_has_expected_structure() {
        let k = unit_square();
        assert_eq!(k.vertices().len(), 4);
        assert_eq!(k.halfspaces().len(), 4);
        for fv in k.facet_vertices() {
            assert_eq!(fv.len(), 2);
        }
        let (r, c) = k.inradius();
        assert!((r - 0.5).abs() <= 1e-9);
        assert!(c.dist(&Vector::new(vec![0.5, 0.5])) <= 1e-8);
        assert!((k.diameter() - 2.0f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn redundant_halfspace_is_dropped() {
        let mut hs = unit_square().halfspaces().to_vec();
        hs.push(Halfspace::new(Covector::new(vec![1.0, 1.0]), 5.0).unwrap());
        let k = Polytope::from_halfspaces(2, hs).unwrap();
        assert_eq!(k.halfspaces().len(), 4);
    }

    #[test]
    fn unbounded_and_empty_are_rejected() {
        let quadrant = vec![
            Halfspace::new(Covector::new(vec![-1.0, 0.0]), 0.0).unwrap(),
            Halfspace::new(Covector::new(vec![0.0, -1.0]), 0.0).unwrap(),
            Halfspace::new(Covector::new(vec![-1.0, -1.0]), 0.0).unwrap(),
        ];
        assert!(matches!(
            Polytope::from_halfspaces(2, quadrant),
            Err(PolytopeError::Unbounded)
        ));

        let empty = vec![
            Halfspace::new(Covector::new(vec![1.0, 0.0]), -1.0).unwrap(),
            Halfspace::new(Covector::new(vec![-1.0, 0.0]), -1.0).unwrap(),
            Halfspace::new(Covector::new(vec![0.0, 1.0]), 1.0).unwrap(),
            Halfspace::new(Covector::new(vec![0.0, -1.0]), 1.0).unwrap(),
        ];
        assert!(matches!(
            Polytope::from_halfspaces(2, empty),
            Err(PolytopeError::NotFullDimensional(_))
        ));
    }

    #[test]
    fn hull_drops_interior_points() {
        let k = Polytope::from_vertices(
            2,
            vec![
                Vector::new(vec![0.0, 0.0]),
                Vector::new(vec![1.0, 0.0]),
                Vector::new(vec![1.0, 1.0]),
                Vector::new(vec![0.0, 1.0]),
                Vector::new(vec![0.5, 0.5]),
            ],
        )
        .unwrap();
        assert_eq!(k.vertices().len(), 4);
        assert_eq!(k.halfspaces().len(), 4);
    }

    #[test]
    fn cube_and_tetrahedron_structure() {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push(Vector::new(vec![x, y, z]));
                }
            }
        }
        let cube = Polytope::from_vertices(3, pts).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.halfspaces().len(), 6);
        for fv in cube.facet_vertices() {
            assert_eq!(fv.len(), 4);
        }

        let tet = Polytope::from_vertices(
            3,
            vec![
                Vector::new(vec![0.0, 0.0, 0.0]),
                Vector::new(vec![1.0, 0.0, 0.0]),
                Vector::new(vec![0.0, 1.0, 0.0]),
                Vector::new(vec![0.0, 0.0, 1.0]),
            ],
        )
        .unwrap();
        assert_eq!(tet.vertices().len(), 4);
        assert_eq!(tet.halfspaces().len(), 4);
    }

    #[test]
    fn four_dimensional_simplex_builds() {
        let mut pts = vec![Vector::new(vec![0.0; 4])];
        for i in 0..4 {
            let mut c = vec![0.0; 4];
            c[i] = 1.0;
            pts.push(Vector::new(c));
        }
        let s = Polytope::from_vertices(4, pts).unwrap();
        assert_eq!(s.vertices().len(), 5);
        assert_eq!(s.halfspaces().len(), 5);
    }

    #[test]
    fn difference_body_of_triangle_is_hexagon() {
        let t = Polytope::from_vertices(
            2,
            vec![
                Vector::new(vec![0.0, 0.0]),
                Vector::new(vec![1.0, 0.0]),
                Vector::new(vec![0.0, 1.0]),
            ],
        )
        .unwrap();
        let d = t.difference_body().unwrap();
        assert_eq!(d.vertices().len(), 6);
        // Central symmetry: depth of x equals depth of -x on samples.
        let p = Vector::new(vec![0.3, -0.2]);
        assert!((d.depth(&p) - d.depth(&p.scale(-1.0))).abs() <= 1e-9);
    }

    #[test]
    fn support_depth_and_active_facets() {
        let k = unit_square();
        assert!((k.support_value(&Covector::new(vec![1.0, 1.0])) - 2.0).abs() <= 1e-12);
        assert!((k.depth(&Vector::new(vec![0.5, 0.25])) - 0.25).abs() <= 1e-12);
        let corner = Vector::new(vec![1.0, 1.0]);
        let act = k.active_facets(&corner, BOUNDARY_TOL).unwrap();
        assert_eq!(act.len(), 2);
        assert!(k.active_facets(&Vector::new(vec![2.0, 0.0]), BOUNDARY_TOL).is_err());
    }

    #[test]
    fn boundary_loop_is_counterclockwise() {
        let k = unit_square();
        let (ccw, facets) = k.boundary_loop();
        assert_eq!(ccw.len(), 4);
        assert_eq!(facets.len(), 4);
        // Shoelace area positive for counterclockwise order.
        let mut area = 0.0;
        for i in 0..ccw.len() {
            let a = &ccw[i];
            let b = &ccw[(i + 1) % ccw.len()];
            area += a.coords()[0] * b.coords()[1] - b.coords()[0] * a.coords()[1];
        }
        assert!(area > 0.0);
        assert!((area / 2.0 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn round_trip_halfspaces_to_vertices() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let dim = rng.gen_range(2..=3);
            let n = rng.gen_range(dim + 2..=dim + 6);
            let pts: Vec<Vector> = (0..n)
                .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0f64)).collect()))
                .collect();
            let Ok(k) = Polytope::from_vertices(dim, pts.clone()) else {
                continue; // degenerate sample (flat or duplicate-heavy)
            };
            // Every input point is contained; every recovered vertex is an input point.
            for p in &pts {
                assert!(k.depth(p) >= -1e-7, "input point escaped the hull");
            }
            for v in k.vertices() {
                assert!(
                    pts.iter().any(|p| p.dist(v) <= 1e-7),
                    "spurious vertex {v:?}"
                );
            }
        }
    }
}
