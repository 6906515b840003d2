//! Vectors, covectors and the pairing between them.
//!
//! Points and displacement directions live in the primal space `V`; facet
//! normals and momenta live in the dual space `V*`. The two carry distinct
//! types so they cannot be mixed by accident; the only bridge is [`pair`].
//! Angles and unit lengths inside a single space use the coordinate Euclidean
//! structure, which is also what the Euclidean norm body refers to.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Dense square matrix used for norm transforms and ellipsoid forms.
pub type Matrix = nalgebra::DMatrix<f64>;

macro_rules! coordinate_space {
    ($name:ident, $doc:expr) => {
        #[doc = $doc]
        #[derive(Clone, PartialEq)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(coords: Vec<f64>) -> Self {
                assert!(!coords.is_empty(), "zero-dimensional coordinates");
                Self(coords)
            }

            pub fn zeros(dim: usize) -> Self {
                Self::new(vec![0.0; dim])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[f64] {
                &self.0
            }

            pub fn get(&self, i: usize) -> f64 {
                self.0[i]
            }

            /// Euclidean length of the coordinate tuple.
            pub fn norm(&self) -> f64 {
                self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
            }

            pub fn scale(&self, s: f64) -> Self {
                Self(self.0.iter().map(|c| c * s).collect())
            }

            /// Unit multiple, or `None` when shorter than `1e-14`.
            pub fn unit(&self) -> Option<Self> {
                let n = self.norm();
                (n > 1e-14).then(|| self.scale(1.0 / n))
            }

            /// Coordinate dot product within this space.
            pub fn dot(&self, other: &Self) -> f64 {
                assert_eq!(self.dim(), other.dim(), "dimension mismatch");
                self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
            }

            pub fn dist(&self, other: &Self) -> f64 {
                (self - other).norm()
            }

            pub(crate) fn to_dv(&self) -> nalgebra::DVector<f64> {
                nalgebra::DVector::from_column_slice(&self.0)
            }

            // Generated for both spaces; one side may only need it in tests.
            #[allow(dead_code)]
            pub(crate) fn from_dv(v: &nalgebra::DVector<f64>) -> Self {
                Self::new(v.iter().copied().collect())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($name), self.0)
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|c| -c).collect())
            }
        }
    };
}

coordinate_space!(Vector, "Element of the primal space `V`: points, directions.");
coordinate_space!(Covector, "Element of the dual space `V*`: normals, momenta.");

/// Canonical pairing `<n, v>` between a covector and a vector.
///
/// Bilinear; panics on dimension mismatch (a programming error, not a data
/// error — file-level inputs are validated before they reach this point).
pub fn pair(n: &Covector, v: &Vector) -> f64 {
    assert_eq!(n.dim(), v.dim(), "dimension mismatch");
    n.coords().iter().zip(v.coords()).map(|(a, b)| a * b).sum()
}

/// Pairing against a raw nalgebra vector (internal glue for matrix algebra).
pub(crate) fn pair_dv(n: &Covector, v: &nalgebra::DVector<f64>) -> f64 {
    assert_eq!(n.dim(), v.len(), "dimension mismatch");
    n.coords().iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// Solves `A x = b` for square `A`; `None` when `A` is singular to working
/// precision.
pub(crate) fn solve_square(a: &Matrix, b: &nalgebra::DVector<f64>) -> Option<nalgebra::DVector<f64>> {
    let lu = a.clone().full_piv_lu();
    let x = lu.solve(b)?;
    // Full-pivot LU "solves" nearly singular systems with huge components;
    // reject those by residual.
    let res = (a * &x - b).norm();
    let scale = 1.0 + b.norm() + x.norm();
    (res <= 1e-8 * scale).then_some(x)
}

/// Orthonormal basis of the null space of `a` (rows are functionals), with
/// singular values below `tol` treated as zero. Wide matrices are padded
/// with zero rows so the thin SVD right factor is the full `n x n` basis.
pub(crate) fn nullspace(a: &Matrix, tol: f64) -> Vec<nalgebra::DVector<f64>> {
    let (m, n) = (a.nrows(), a.ncols());
    let sq = if m >= n {
        a.clone()
    } else {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    };
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let mut basis = Vec::new();
    for i in 0..n {
        if svd.singular_values[i] <= tol {
            basis.push(v_t.row(i).transpose());
        }
    }
    basis
}

/// Gram–Schmidt orthonormalization; vectors that fall below `tol` after
/// projection are dropped. Returns an orthonormal spanning set.
pub(crate) fn orthonormalize(vecs: &[nalgebra::DVector<f64>], tol: f64) -> Vec<nalgebra::DVector<f64>> {
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for b in &basis {
            let c = w.dot(b);
            w -= b * c;
        }
        let n = w.norm();
        if n > tol {
            basis.push(w / n);
        }
    }
    basis
}

/// Affine rank of a point set (dimension of its affine hull).
pub(crate) fn affine_rank(points: &[Vector], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0].to_dv();
    let diffs: Vec<_> = points[1..].iter().map(|p| p.to_dv() - &base).collect();
    orthonormalize(&diffs, tol).len()
}
