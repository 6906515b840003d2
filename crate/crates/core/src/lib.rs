//! Shortest closed billiard trajectories in convex polytopes.
//!
//! A closed polyline is a *generalized billiard trajectory* in a convex body
//! `K` if at every vertex the change of momentum points into the negative
//! normal cone of `K` at that vertex. The shortest such trajectory has length
//!
//! ```text
//! xi(K) = min over m >= 2, over point tuples Q that do not fit into a
//!         translate of the interior of K, of the cyclic length of Q
//! ```
//!
//! and the minimum is attained with at most `d + 1` points. This crate
//! computes `xi` for polytopes under the Euclidean norm and under smooth
//! Minkowski norms given by a shifted ellipsoid support body, produces
//! surrounding-normal certificates for the optimum, verifies and classifies
//! trajectories (classical vs. generalized), decides the acuteness condition
//! that forces classical optima, and exposes the local shortening moves
//! (slide, return-point drop, acute reflection split) as executable
//! operations.
//!
//! Module map: [`linalg`] (vector/covector kernel), [`lp`] (dense simplex and
//! nonnegative least squares), [`polytope`] (H/V representations), [`norm`]
//! (support-body norms and momenta), [`cones`] (normal/tangent cones,
//! acuteness), [`containment`] (fit tests and certificates), [`trajectory`]
//! (verification and local moves), [`solver`] (global solve and the grid
//! oracle), plus serialization ([`problem`], [`report`]) and SVG rendering
//! ([`render`]).

pub mod cones;
pub mod containment;
pub mod fixtures;
pub mod linalg;
pub mod lp;
pub mod norm;
pub mod polytope;
pub mod problem;
pub mod render;
pub mod report;
pub mod sampling;
pub mod solver;
pub mod tol;
pub mod trajectory;

pub use linalg::{pair, Covector, Matrix, Vector};
pub use norm::NormBody;
pub use polytope::{Halfspace, Polytope};
pub use trajectory::ClosedPolyline;
