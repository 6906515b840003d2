//! Central numeric tolerances.
//!
//! Every module reads its notion of "zero", "on the boundary" and "acute"
//! from here, so the thresholds cannot drift apart between the LP kernel,
//! the geometry and the verifier.

/// Feasibility slack for the LP kernel: pivot threshold and allowed
/// constraint residual of reported solutions.
pub const FEAS_TOL: f64 = 1e-9;

/// Strict-interior threshold: a fit LP whose best uniform slack does not
/// exceed this counts as "does not fit".
pub const STRICT_TOL: f64 = 1e-9;

/// Distance below which a point counts as lying on a facet hyperplane, and
/// the default activity tolerance for boundary queries.
pub const BOUNDARY_TOL: f64 = 1e-7;

/// Angular tolerance in radians. Angles within this of a right angle are
/// classified as not acute.
pub const ANG_TOL: f64 = 1e-7;

/// Largest reflection-law residual a verified bounce may carry.
pub const LAW_TOL: f64 = 1e-7;

/// Distance below which consecutive trajectory vertices are treated as
/// coincident (vertex merging, return-point detection).
pub const MERGE_TOL: f64 = 1e-10;

/// Relative length improvement below which cyclic slide minimization stops.
pub const SLIDE_TOL: f64 = 1e-12;

/// Certificate weights below this are dropped before renormalization.
pub const WEIGHT_CLEANUP_TOL: f64 = 1e-12;
