//! Norm bodies: convex bodies in the dual space that measure lengths.
//!
//! The length of a displacement `v` is the support value
//! `||v||_T = max { <p, v> : p in T }` where `T` lives in the dual space and
//! contains the origin in its interior. `T` need not be symmetric, so
//! `||v||` and `||-v||` can differ. The momentum of a displacement is the
//! maximizing `p`, unique whenever `T` is smooth and strictly convex; that is
//! what the reflection law is written in terms of.

use crate::linalg::{Covector, Matrix, Vector};
use crate::lp::zero_in_convex_hull;
use nalgebra::Cholesky;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NormError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("quadratic form is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("origin is not interior to the norm body")]
    OriginNotInterior,
    #[error("linear map is singular")]
    SingularMap,
}

#[derive(Clone, Debug)]
pub enum NormBody {
    /// Unit ball in the dual space: lengths are Euclidean.
    Euclidean { dim: usize },
    /// `{ p : (p - center)^T m (p - center) <= 1 }`, smooth and strictly
    /// convex; asymmetric when the center is off the origin.
    Ellipsoid {
        m: Matrix,
        m_inv: Matrix,
        center: Covector,
    },
    /// Convex hull of finitely many momenta; piecewise-linear norm.
    DualPolytope { vertices: Vec<Covector> },
}

impl NormBody {
    pub fn euclidean(dim: usize) -> Self {
        NormBody::Euclidean { dim }
    }

    /// Validates symmetry and positive definiteness of `m`, and that the
    /// origin lies strictly inside the ellipsoid (`center^T m center < 1`).
    pub fn ellipsoid(m: Matrix, center: Covector) -> Result<Self, NormError> {
        let d = center.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(NormError::Dimension(format!(
                "form is {}x{}, center has dimension {d}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = 1.0 + m.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if (&m - m.transpose()).iter().any(|v| v.abs() > 1e-9 * scale) {
            return Err(NormError::NotPositiveDefinite);
        }
        let m = (&m + m.transpose()) * 0.5;
        let chol = Cholesky::new(m.clone()).ok_or(NormError::NotPositiveDefinite)?;
        let m_inv = chol.inverse();
        let c = center.to_dv();
        let quad = (&m * &c).dot(&c);
        if quad >= 1.0 - 1e-12 {
            return Err(NormError::OriginNotInterior);
        }
        Ok(NormBody::Ellipsoid { m, m_inv, center })
    }

    /// Validates that the origin is strictly inside the hull of the vertices.
    pub fn dual_polytope(vertices: Vec<Covector>) -> Result<Self, NormError> {
        if vertices.is_empty() {
            return Err(NormError::OriginNotInterior);
        }
        let d = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != d) {
            return Err(NormError::Dimension("mixed vertex dimensions".into()));
        }
        let hull = zero_in_convex_hull(&vertices);
        if !hull.interior {
            return Err(NormError::OriginNotInterior);
        }
        Ok(NormBody::DualPolytope { vertices })
    }

    pub fn dim(&self) -> usize {
        match self {
            NormBody::Euclidean { dim } => *dim,
            NormBody::Ellipsoid { center, .. } => center.dim(),
            NormBody::DualPolytope { vertices } => vertices[0].dim(),
        }
    }

    /// `||v||_T`, the support value of `T` at `v`. Zero at `v = 0`, positive
    /// elsewhere, positively homogeneous, subadditive.
    pub fn eval(&self, v: &Vector) -> f64 {
        assert_eq!(v.dim(), self.dim(), "dimension mismatch");
        match self {
            NormBody::Euclidean { .. } => v.norm(),
            NormBody::Ellipsoid { m_inv, center, .. } => {
                let x = v.to_dv();
                let quad = (m_inv * &x).dot(&x).max(0.0);
                crate::linalg::pair_dv(center, &x) + quad.sqrt()
            }
            NormBody::DualPolytope { vertices } => {
                let x = v.to_dv();
                vertices
                    .iter()
                    .map(|p| crate::linalg::pair_dv(p, &x))
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// The maximizing momentum `p* in bd T` with `<p*, v> = ||v||`.
    /// `None` when `v = 0` or when the maximizer is not unique (polytopal T).
    pub fn momentum(&self, v: &Vector) -> Option<Covector> {
        assert_eq!(v.dim(), self.dim(), "dimension mismatch");
        if v.norm() < 1e-14 {
            return None;
        }
        match self {
            NormBody::Euclidean { .. } => {
                let u = v.scale(1.0 / v.norm());
                Some(Covector::new(u.coords().to_vec()))
            }
            NormBody::Ellipsoid { m_inv, center, .. } => {
                let x = v.to_dv();
                let w = m_inv * &x;
                let quad = w.dot(&x).max(0.0).sqrt();
                let p = center.to_dv() + w / quad;
                Some(Covector::from_dv(&p))
            }
            NormBody::DualPolytope { .. } => None,
        }
    }

    /// Hessian of `v -> ||v||` at `v`: the derivative of the momentum map.
    /// Positive semidefinite with kernel spanned by `v`. `None` when `v = 0`
    /// or the norm is not differentiable there (polytopal T).
    pub fn curvature(&self, v: &Vector) -> Option<Matrix> {
        assert_eq!(v.dim(), self.dim(), "dimension mismatch");
        let d = self.dim();
        if v.norm() < 1e-14 {
            return None;
        }
        match self {
            NormBody::Euclidean { .. } => {
                let n = v.norm();
                let u = v.to_dv() / n;
                Some((Matrix::identity(d, d) - &u * u.transpose()) / n)
            }
            NormBody::Ellipsoid { m_inv, .. } => {
                let x = v.to_dv();
                let w = m_inv * &x;
                let s = w.dot(&x).max(0.0).sqrt();
                Some(m_inv / s - &w * w.transpose() / (s * s * s))
            }
            NormBody::DualPolytope { .. } => None,
        }
    }

    /// Whether momenta are single-valued (smooth strictly convex body).
    pub fn is_smooth(&self) -> bool {
        !matches!(self, NormBody::DualPolytope { .. })
    }

    /// Whether `||v|| == ||-v||` for all `v`.
    pub fn is_symmetric(&self) -> bool {
        match self {
            NormBody::Euclidean { .. } => true,
            NormBody::Ellipsoid { center, .. } => center.norm() <= 1e-12,
            NormBody::DualPolytope { vertices } => vertices.iter().all(|p| {
                let neg = p.scale(-1.0);
                vertices.iter().any(|q| {
                    q.coords()
                        .iter()
                        .zip(neg.coords())
                        .all(|(a, b)| (a - b).abs() <= 1e-9)
                })
            }),
        }
    }

    /// Image `A^T T` of the body under the adjoint of `a`, the norm body for
    /// which `||v||_{A^T T} = ||A v||_T`. Requires `a` invertible.
    pub fn transform_dual(&self, a: &Matrix) -> Result<NormBody, NormError> {
        let d = self.dim();
        if a.nrows() != d || a.ncols() != d {
            return Err(NormError::Dimension("map size mismatch".into()));
        }
        let a_inv = a.clone().try_inverse().ok_or(NormError::SingularMap)?;
        match self {
            NormBody::Euclidean { .. } => {
                // Unit ball maps to the ellipsoid with form (A^T A)^{-1}.
                let m = &a_inv * a_inv.transpose();
                NormBody::ellipsoid(m, Covector::zeros(d))
            }
            NormBody::Ellipsoid { m, center, .. } => {
                let m2 = &a_inv * m * a_inv.transpose();
                let c2 = a.transpose() * center.to_dv();
                NormBody::ellipsoid(m2, Covector::from_dv(&c2))
            }
            NormBody::DualPolytope { vertices } => {
                let at = a.transpose();
                let mapped = vertices
                    .iter()
                    .map(|p| Covector::from_dv(&(&at * p.to_dv())))
                    .collect();
                NormBody::dual_polytope(mapped)
            }
        }
    }
}
