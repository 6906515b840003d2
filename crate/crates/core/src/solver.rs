//! Global shortest-cycle computation over a convex polytope.
//!
//! The shortest closed polyline that cannot be translated into the interior
//! touches supporting hyperplanes of at most d+1 facets, with the facet
//! normals surrounding the origin. Enumerating those facet sequences and
//! minimizing the cycle length on each hyperplane tuple is therefore a
//! complete search: every candidate is admissible by the surrounding
//! argument, and the true optimum's fit certificate decomposes over facets,
//! so its sequence appears in the enumeration.

use crate::containment::{
    certify_surrounding, fits_into_interior, in_admissible_class, FitResult, NonFitCertificate,
};
use crate::linalg::{nullspace, pair, Covector, Matrix, Vector};
use crate::lp::{solve_lp, zero_in_convex_hull, LpProblem, LpStatus};
use crate::norm::NormBody;
use crate::polytope::{Halfspace, Polytope};
use crate::sampling::SplitMix64;
use crate::tol::{BOUNDARY_TOL, LAW_TOL, SLIDE_TOL};
use crate::trajectory::{
    acute_shortening_move, slide_move, slide_point, verify, ClosedPolyline, ShorteningOutcome,
    TrajectoryReport,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{0}")]
    Geometry(String),
    #[error("no facet sequence surrounds the origin")]
    NoSequences,
    #[error("input cycle can be translated into the interior")]
    NotAdmissible,
    #[error("optimum failed verification: {0:?}")]
    VerificationFailed(Vec<String>),
    #[error("structural property violated at the optimum: {0}")]
    StructuralCheck(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Cyclic list of facet indices whose normals surround the origin; stored
/// in its canonical rotation/reversal-minimal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FacetSequence {
    indices: Vec<usize>,
}

impl FacetSequence {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn hyperplanes(&self, k: &Polytope) -> Vec<Halfspace> {
        self.indices
            .iter()
            .map(|&i| k.halfspaces()[i].clone())
            .collect()
    }
}

/// Lexicographic minimum over all rotations of the sequence and of its
/// reversal.
fn canonical_form(seq: &[usize]) -> Vec<usize> {
    let m = seq.len();
    let mut best: Option<Vec<usize>> = None;
    let mut consider = |cand: Vec<usize>| {
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    };
    let reversed: Vec<usize> = seq.iter().rev().copied().collect();
    for r in 0..m {
        let mut fwd = Vec::with_capacity(m);
        let mut rev = Vec::with_capacity(m);
        for i in 0..m {
            fwd.push(seq[(r + i) % m]);
            rev.push(reversed[(r + i) % m]);
        }
        consider(fwd);
        consider(rev);
    }
    best.expect("nonempty sequence")
}

/// All canonical facet sequences of length 2 ..= d+1 without cyclically
/// adjacent repeats whose facet normals' convex hull contains the origin.
pub fn enumerate_sequences(k: &Polytope) -> Vec<FacetSequence> {
    let f = k.halfspaces().len();
    let d = k.dim();
    let mut out: Vec<FacetSequence> = Vec::new();
    for m in 2..=(d + 1) {
        let total = (f as u64).pow(m as u32);
        'tuple: for code in 0..total {
            let mut seq = Vec::with_capacity(m);
            let mut rest = code;
            for _ in 0..m {
                seq.push((rest % f as u64) as usize);
                rest /= f as u64;
            }
            for i in 0..m {
                if seq[i] == seq[(i + 1) % m] {
                    continue 'tuple;
                }
            }
            if canonical_form(&seq) != seq {
                continue;
            }
            let mut facets: Vec<usize> = seq.clone();
            facets.sort_unstable();
            facets.dedup();
            let normals: Vec<Covector> = facets
                .iter()
                .map(|&i| k.halfspaces()[i].normal.clone())
                .collect();
            if zero_in_convex_hull(&normals).contains {
                out.push(FacetSequence { indices: seq });
            }
        }
    }
    out.sort_by(|a, b| (a.len(), &a.indices).cmp(&(b.len(), &b.indices)));
    out
}

#[derive(Clone, Debug)]
pub struct MinCycleOutcome {
    pub points: Vec<Vector>,
    pub length: f64,
    pub converged: bool,
}

fn cycle_length(points: &[Vector], t: &NormBody) -> f64 {
    let m = points.len();
    (0..m)
        .map(|i| t.eval(&(&points[(i + 1) % m] - &points[i])))
        .sum()
}

fn project_onto(h: &Halfspace, p: &Vector) -> Vector {
    let n_vec = Vector::new(h.normal.coords().to_vec());
    p - &n_vec.scale(h.signed_excess(p))
}

/// Fuses consecutive nearly coincident points onto the exact intersection
/// of their two hyperplanes when that does not lengthen the cycle. Returns
/// true when something fused; asymptotic crawls toward a shared corner are
/// finished off exactly this way.
fn snap_pass(points: &mut [Vector], hyperplanes: &[Halfspace], t: &NormBody) -> bool {
    let m = points.len();
    let scale = 1.0 + points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let mut any = false;
    for i in 0..m {
        let j = (i + 1) % m;
        let gap = points[i].dist(&points[j]);
        // Descent toward a two-plane coincidence is sublinear, reaching
        // percent scale within a few hundred sweeps and then crawling; the
        // acceptance check below makes a wide window safe.
        if gap <= 1e-13 * scale || gap > 1e-2 * scale {
            continue;
        }
        let ni = &hyperplanes[i].normal;
        let nj = &hyperplanes[j].normal;
        let c: f64 = ni.coords().iter().zip(nj.coords()).map(|(a, b)| a * b).sum();
        if c.abs() > 1.0 - 1e-9 {
            continue;
        }
        let mid = (&points[i] + &points[j]).scale(0.5);
        let ri = hyperplanes[i].offset - crate::linalg::pair(ni, &mid);
        let rj = hyperplanes[j].offset - crate::linalg::pair(nj, &mid);
        let det = 1.0 - c * c;
        let li = (ri - c * rj) / det;
        let lj = (rj - c * ri) / det;
        let p = &(&mid + &Vector::new(ni.coords().to_vec()).scale(li))
            + &Vector::new(nj.coords().to_vec()).scale(lj);
        let before = cycle_length(points, t);
        let (old_i, old_j) = (points[i].clone(), points[j].clone());
        points[i] = p.clone();
        points[j] = p;
        let after = cycle_length(points, t);
        if after <= before + 1e-11 * (1.0 + before) {
            any = true;
        } else {
            points[i] = old_i;
            points[j] = old_j;
        }
    }
    any
}

/// Newton refinement of the stationarity system on the fixed hyperplanes.
/// Cyclic slides converge linearly and leave reflection residuals around the
/// square root of their gain threshold; a few Newton steps from there reach
/// machine precision. Runs of exactly fused points (a corner or edge contact
/// produced by the snap pass) collapse into one variable on the intersection
/// of their hyperplanes, so degenerate optima such as a width chord bouncing
/// between two opposite edges still polish to full accuracy. Vertices move in
/// orthonormal tangent bases; the step is a pseudo-inverse solve (flat
/// directions, such as a pair bouncing between parallel walls, are dropped,
/// not drifted along), and a step is only kept while the cycle does not
/// lengthen. Cycles with near- but not exactly coincident points stay with
/// the snap pass instead. Returns true once the reduced gradient is at
/// machine scale or every point is pinned to a corner.
fn newton_polish(points: &mut [Vector], hyperplanes: &[Halfspace], t: &NormBody) -> bool {
    let m_full = points.len();
    let d = points[0].dim();
    if m_full < 2 || d < 2 {
        return false;
    }
    let scale = 1.0 + points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let fused = |a: &Vector, b: &Vector| a.dist(b) <= 1e-12 * scale;
    let boundary = (0..m_full).find(|&i| !fused(&points[(i + m_full - 1) % m_full], &points[i]));
    let start = match boundary {
        Some(s) => s,
        None => return false,
    };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..m_full {
        let i = (start + k) % m_full;
        match groups.last_mut() {
            Some(g) if fused(&points[g[0]], &points[i]) => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let m = groups.len();
    if m < 2 {
        return false;
    }
    let bases: Vec<Matrix> = groups
        .iter()
        .map(|g| {
            let rows = Matrix::from_fn(g.len(), d, |r, c| hyperplanes[g[r]].normal.coords()[c]);
            let cols = nullspace(&rows, 1e-9);
            if cols.is_empty() {
                Matrix::zeros(d, 0)
            } else {
                Matrix::from_columns(&cols)
            }
        })
        .collect();
    let mut offs = vec![0usize; m + 1];
    for i in 0..m {
        offs[i + 1] = offs[i] + bases[i].ncols();
    }
    let nvar = offs[m];
    if nvar == 0 {
        return true;
    }
    let mut pos: Vec<Vector> = groups.iter().map(|g| points[g[0]].clone()).collect();
    let mut len = cycle_length(&pos, t);
    let mut stationary = false;
    for _iter in 0..60 {
        let segs: Vec<Vector> = (0..m).map(|j| &pos[(j + 1) % m] - &pos[j]).collect();
        if segs.iter().any(|v| v.norm() < 1e-9 * scale) {
            break;
        }
        let momenta = match segs
            .iter()
            .map(|v| t.momentum(v))
            .collect::<Option<Vec<Covector>>>()
        {
            Some(p) => p,
            None => break,
        };
        let mut grad = nalgebra::DVector::<f64>::zeros(nvar);
        for j in 0..m {
            let b = (j + 1) % m;
            let p = nalgebra::DVector::from_column_slice(momenta[j].coords());
            let into_b = bases[b].transpose() * &p;
            let into_a = bases[j].transpose() * &p;
            for i in 0..bases[b].ncols() {
                grad[offs[b] + i] += into_b[i];
            }
            for i in 0..bases[j].ncols() {
                grad[offs[j] + i] -= into_a[i];
            }
        }
        if grad.amax() <= 1e-12 {
            stationary = true;
            break;
        }
        let mut hess = Matrix::zeros(nvar, nvar);
        let mut curved = true;
        for j in 0..m {
            let b = (j + 1) % m;
            let hj = match t.curvature(&segs[j]) {
                Some(h) => h,
                None => {
                    curved = false;
                    break;
                }
            };
            let aa = bases[j].transpose() * &hj * &bases[j];
            let bb = bases[b].transpose() * &hj * &bases[b];
            let ab = bases[j].transpose() * &hj * &bases[b];
            add_block(&mut hess, offs[j], offs[j], &aa, 1.0);
            add_block(&mut hess, offs[b], offs[b], &bb, 1.0);
            add_block(&mut hess, offs[j], offs[b], &ab, -1.0);
            add_block(&mut hess, offs[b], offs[j], &ab.transpose(), -1.0);
        }
        if !curved {
            break;
        }
        let hess = (&hess + hess.transpose()) * 0.5;
        let eig = hess.symmetric_eigen();
        let lmax = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
        if lmax <= 0.0 {
            break;
        }
        let mut step = nalgebra::DVector::<f64>::zeros(nvar);
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > 1e-8 * lmax {
                let u = eig.eigenvectors.column(i);
                step += u * (-u.dot(&grad) / lambda);
            }
        }
        if step.amax() > 0.5 * scale {
            break;
        }
        let mut advanced = false;
        let mut sigma = 1.0;
        for _half in 0..6 {
            let candidate: Vec<Vector> = (0..m)
                .map(|i| {
                    let delta = &bases[i] * step.rows(offs[i], bases[i].ncols()) * sigma;
                    &pos[i] + &Vector::new(delta.iter().copied().collect())
                })
                .collect();
            let new_len = cycle_length(&candidate, t);
            if new_len <= len + 1e-14 * (1.0 + len) {
                pos = candidate;
                len = new_len;
                advanced = true;
                break;
            }
            sigma *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    for (g, p) in groups.iter().zip(&pos) {
        for &i in g {
            points[i] = p.clone();
        }
    }
    stationary
}

fn add_block(big: &mut Matrix, r0: usize, c0: usize, blk: &Matrix, sign: f64) {
    for i in 0..blk.nrows() {
        for j in 0..blk.ncols() {
            big[(r0 + i, c0 + j)] += sign * blk[(i, j)];
        }
    }
}

/// Minimizes cyclic length with vertex i constrained to hyperplane i, by
/// repeated single-vertex slides from `anchor`-seeded starts.
pub(crate) fn min_cycle_with_anchor(
    hyperplanes: &[Halfspace],
    t: &NormBody,
    anchor: &Vector,
) -> MinCycleOutcome {
    let m = hyperplanes.len();
    assert!(m >= 2, "a cycle needs at least two hyperplanes");
    let d = anchor.dim();
    let scale = 1.0
        + anchor.norm()
        + hyperplanes
            .iter()
            .map(|h| h.offset.abs())
            .fold(0.0, f64::max);
    let mut rng = SplitMix64::new(0x51CE_5EED);
    let mut best: Option<(Vec<Vector>, f64, bool)> = None;
    for start in 0..4 {
        let base = if start == 0 {
            anchor.clone()
        } else {
            let coords = (0..d)
                .map(|_| rng.range(-scale, scale))
                .collect::<Vec<f64>>();
            anchor + &Vector::new(coords)
        };
        let mut pts: Vec<Vector> = hyperplanes.iter().map(|h| project_onto(h, &base)).collect();
        let mut len = cycle_length(&pts, t);
        let mut converged = false;
        // Sweeps near sheared facet pairs contract arbitrarily slowly, so
        // when a Newton polish is available the budget is a short runway
        // into its basin, the slides themselves run in quick mode, and the
        // polish certifies convergence.
        let quick = t.is_smooth();
        let budget = if quick { 400 } else { 100_000 };
        for sweep in 0..budget {
            for i in 0..m {
                let a = pts[(i + m - 1) % m].clone();
                let b = pts[(i + 1) % m].clone();
                pts[i] = slide_point(t, &hyperplanes[i], &a, &b, &pts[i], quick);
            }
            let new_len = cycle_length(&pts, t);
            let gain = len - new_len;
            len = new_len;
            if gain <= SLIDE_TOL * (1.0 + len) {
                converged = true;
                break;
            }
            if sweep % 50 == 49 {
                let polished = newton_polish(&mut pts, hyperplanes, t);
                len = cycle_length(&pts, t);
                if polished {
                    converged = true;
                    break;
                }
            }
        }
        if newton_polish(&mut pts, hyperplanes, t) {
            converged = true;
        }
        len = cycle_length(&pts, t);
        // Finish off creeping coincidences: alternate snap attempts with
        // short sweep bursts. A fuse voids any earlier certificate, and an
        // unconverged cycle keeps its runway going even when nothing fused
        // yet because the window may still be ahead.
        for _round in 0..5 {
            let fused = snap_pass(&mut pts, hyperplanes, t);
            if !fused && converged {
                break;
            }
            if fused {
                converged = false;
            }
            for _sweep in 0..200 {
                for i in 0..m {
                    let a = pts[(i + m - 1) % m].clone();
                    let b = pts[(i + 1) % m].clone();
                    pts[i] = slide_point(t, &hyperplanes[i], &a, &b, &pts[i], quick);
                }
                let new_len = cycle_length(&pts, t);
                let gain = len - new_len;
                len = new_len;
                if gain <= SLIDE_TOL * (1.0 + len) {
                    // Without curvature the polish cannot certify, so the
                    // stalled gain is the only convergence signal there.
                    if !quick {
                        converged = true;
                    }
                    break;
                }
            }
            if newton_polish(&mut pts, hyperplanes, t) {
                converged = true;
            }
            len = cycle_length(&pts, t);
        }
        if best.as_ref().map_or(true, |(_, l, _)| len < *l) {
            best = Some((pts, len, converged));
        }
    }
    let (points, length, converged) = best.expect("at least one start");
    MinCycleOutcome {
        points,
        length,
        converged,
    }
}

/// Public entry seeded from the hyperplane arrangement's least-squares
/// center (the solver seeds from the body centroid instead, which breaks
/// ties toward facet interiors).
pub fn min_cycle_on_hyperplanes(hyperplanes: &[Halfspace], t: &NormBody) -> MinCycleOutcome {
    let d = hyperplanes
        .first()
        .map(|h| h.normal.dim())
        .expect("nonempty hyperplane list");
    let mut gram = Matrix::zeros(d, d);
    let mut rhs = nalgebra::DVector::zeros(d);
    for h in hyperplanes {
        let n = nalgebra::DVector::from_column_slice(h.normal.coords());
        gram += &n * n.transpose();
        rhs += n * h.offset;
    }
    for i in 0..d {
        gram[(i, i)] += 1e-12;
    }
    let anchor = gram
        .lu()
        .solve(&rhs)
        .map(|x| Vector::new(x.iter().copied().collect()))
        .unwrap_or_else(|| Vector::zeros(d));
    min_cycle_with_anchor(hyperplanes, t, &anchor)
}

/// Translates a hyperplane cycle to its deepest position inside the body.
/// The per-sequence minimum can be flat along translations tangent to every
/// sequence hyperplane (a pair between parallel walls slides freely), and
/// the anchor-seeded representative may then leave the body even though an
/// in-body one exists at the same length. Length and hyperplane contacts
/// are translation invariant, so a small LP minimizing the worst facet
/// excess picks the contained representative; when the sequence normals
/// span the space the tangency equalities force a zero translation.
fn recenter_cycle(k: &Polytope, points: &mut [Vector], facet_indices: &[usize]) {
    let d = k.dim();
    // Variables: the translation (d) and the worst signed excess s.
    let mut lp = LpProblem::new(d + 1);
    let mut obj = vec![0.0; d + 1];
    obj[d] = -1.0;
    lp.maximize(&obj);
    for &i in facet_indices {
        let mut row = k.halfspaces()[i].normal.coords().to_vec();
        row.push(0.0);
        lp.add_eq(&row, 0.0);
    }
    for p in points.iter() {
        for h in k.halfspaces() {
            let mut row = h.normal.coords().to_vec();
            row.push(-1.0);
            lp.add_le(&row, h.offset - pair(&h.normal, p));
        }
    }
    match solve_lp(&lp) {
        Ok(out) if out.status == LpStatus::Optimal => {
            let tau = Vector::new(out.x[..d].to_vec());
            for p in points.iter_mut() {
                *p = &*p + &tau;
            }
        }
        _ => {}
    }
}

/// Outcome of the global search: the minimum length, the winning cycle raw
/// (one point per sequence entry, coincidences allowed) and normalized, the
/// verification report, and the surrounding certificate over the winning
/// facets.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub xi: f64,
    pub trajectory: ClosedPolyline,
    pub cycle: ClosedPolyline,
    pub sequence: FacetSequence,
    pub certificate: NonFitCertificate,
    pub report: TrajectoryReport,
    /// Gap to the best strictly different facet sequence; infinite when the
    /// enumeration admits only one. Sequences dominated by a solved pair
    /// contribute that pair's length as a lower bound.
    pub runner_up_gap: f64,
}

/// Minimum of `min_cycle_on_hyperplanes` over all admissible facet
/// sequences, with the winner normalized, verified against the reflection
/// law, and certified. Ties keep the canonically first sequence.
pub fn shortest_trajectory(k: &Polytope, t: &NormBody) -> Result<SolveResult, SolveError> {
    if t.dim() != k.dim() {
        return Err(SolveError::Geometry(
            "body and norm body dimensions differ".into(),
        ));
    }
    if !t.is_smooth() {
        return Err(SolveError::Unsupported(
            "polytopal norm bodies have non-unique momenta; only smooth norms are solved".into(),
        ));
    }
    let sequences = enumerate_sequences(k);
    if sequences.is_empty() {
        return Err(SolveError::NoSequences);
    }
    let anchor = k.centroid();
    let mut best: Option<(usize, MinCycleOutcome)> = None;
    let mut runner_up = f64::INFINITY;
    // Pairs come first in the enumeration. Deleting a vertex from a closed
    // cycle never lengthens it, so a longer sequence containing a solved
    // pair cannot beat that pair; it is skipped and contributes the pair's
    // length to the runner-up gap as a lower bound.
    let mut solved_pairs: Vec<(usize, usize, f64)> = Vec::new();
    for (si, seq) in sequences.iter().enumerate() {
        if seq.len() > 2 {
            let mut bound: Option<f64> = None;
            for &(a, b, l) in &solved_pairs {
                if seq.indices.contains(&a) && seq.indices.contains(&b) {
                    bound = Some(bound.map_or(l, |x: f64| x.max(l)));
                }
            }
            if let Some(bound) = bound {
                runner_up = runner_up.min(bound);
                continue;
            }
        }
        let hyperplanes = seq.hyperplanes(k);
        let mut outcome = min_cycle_with_anchor(&hyperplanes, t, &anchor);
        // A 2-cycle reads the same in both directions, so the reversed
        // solve only matters for longer sequences.
        if !t.is_symmetric() && hyperplanes.len() > 2 {
            let rev: Vec<Halfspace> = hyperplanes.iter().rev().cloned().collect();
            let back = min_cycle_with_anchor(&rev, t, &anchor);
            if back.length < outcome.length {
                outcome = MinCycleOutcome {
                    points: back.points.into_iter().rev().collect(),
                    length: back.length,
                    converged: back.converged,
                };
            }
        }
        if seq.len() == 2 {
            solved_pairs.push((seq.indices[0], seq.indices[1], outcome.length));
        }
        match fits_into_interior(k, &outcome.points).map_err(SolveError::Geometry)? {
            FitResult::DoesNotFit { .. } => {}
            FitResult::Fits { .. } => {
                return Err(SolveError::StructuralCheck(format!(
                    "cycle on the hyperplanes of sequence {:?} escaped the admissible class",
                    seq.indices
                )));
            }
        }
        match &best {
            Some((_, cur)) if outcome.length >= cur.length => {
                runner_up = runner_up.min(outcome.length);
            }
            _ => {
                if let Some((_, cur)) = &best {
                    runner_up = runner_up.min(cur.length);
                }
                best = Some((si, outcome));
            }
        }
    }
    let (si, mut outcome) = best.expect("nonempty sequences");
    let sequence = sequences[si].clone();
    recenter_cycle(k, &mut outcome.points, sequence.indices());
    let cycle = ClosedPolyline::new(outcome.points.clone())
        .map_err(|e| SolveError::Geometry(e.to_string()))?;
    let certificate = certify_surrounding(k, cycle.points(), sequence.indices())
        .map_err(SolveError::StructuralCheck)?;
    let trajectory = cycle
        .normalized()
        .map_err(|e| SolveError::StructuralCheck(format!("degenerate winning cycle: {e}")))?;
    let report = verify(k, t, &trajectory, BOUNDARY_TOL, LAW_TOL);
    if !report.valid {
        return Err(SolveError::VerificationFailed(report.failures));
    }
    let d = k.dim();
    if trajectory.num_points() == d + 1 && !report.classical {
        return Err(SolveError::StructuralCheck(
            "a shortest cycle with d+1 bounces must be classical".into(),
        ));
    }
    if !trajectory.return_points().is_empty() {
        return Err(SolveError::StructuralCheck(
            "a shortest cycle cannot contain a return point".into(),
        ));
    }
    Ok(SolveResult {
        xi: report.length,
        trajectory,
        cycle,
        sequence,
        certificate,
        report,
        runner_up_gap: runner_up - outcome.length,
    })
}

/// Greedy local shortening: return-point elimination, slides along incident
/// facet hyperplanes, and corner straightening, each accepted only when the
/// cycle stays non-translatable into the interior. Length never increases.
pub fn local_improve(
    k: &Polytope,
    t: &NormBody,
    q: &ClosedPolyline,
) -> Result<ClosedPolyline, SolveError> {
    if !in_admissible_class(k, q.points()).map_err(SolveError::Geometry)? {
        return Err(SolveError::NotAdmissible);
    }
    let mut cur = q
        .normalized()
        .map_err(|e| SolveError::Geometry(e.to_string()))?;
    let scale = 1.0 + cur.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let admissible = |c: &ClosedPolyline| -> Result<bool, SolveError> {
        in_admissible_class(k, c.points()).map_err(SolveError::Geometry)
    };
    for _pass in 0..200 {
        let mut acted = false;

        // Spikes retrace a segment; dropping the tip and one flank shortens
        // strictly, kept only if the cycle still pins the body. Some spikes
        // carry the pinning, so every return point is tried, not just one.
        'dropping: loop {
            let m = cur.num_points();
            if m < 4 {
                break;
            }
            for i in cur.return_points() {
                let mut pts = cur.points().to_vec();
                let j = (i + 1) % m;
                if j > i {
                    pts.remove(j);
                    pts.remove(i);
                } else {
                    pts.remove(i);
                    pts.remove(j);
                }
                let Ok(cand) = ClosedPolyline::new(pts) else {
                    continue;
                };
                if cand.length(t) < cur.length(t) - 1e-12 * scale && admissible(&cand)? {
                    cur = cand.normalized().unwrap_or(cand);
                    acted = true;
                    continue 'dropping;
                }
            }
            break;
        }

        // Slide each vertex along every hyperplane it currently touches.
        let mut sliding = true;
        let mut guard = 0;
        while sliding && guard < 50 {
            sliding = false;
            guard += 1;
            for i in 0..cur.num_points() {
                for h in k.halfspaces() {
                    if h.signed_excess(&cur.points()[i]).abs() > BOUNDARY_TOL * scale {
                        continue;
                    }
                    let Ok(cand) = slide_move(k, t, i, &cur, h) else {
                        continue;
                    };
                    if cand.length(t) < cur.length(t) - 1e-12 * scale && admissible(&cand)? {
                        cur = cand;
                        sliding = true;
                        acted = true;
                    }
                }
            }
        }

        // Straighten one generalized corner bounce per pass (Euclidean).
        if matches!(t, NormBody::Euclidean { .. }) {
            for i in 0..cur.num_points() {
                let Ok(out) = acute_shortening_move(k, i, &cur) else {
                    continue;
                };
                if let ShorteningOutcome::Applied {
                    polyline, decrease, ..
                } = out
                {
                    if decrease > 1e-12 * scale && admissible(&polyline)? {
                        cur = polyline.normalized().unwrap_or(polyline);
                        acted = true;
                        break;
                    }
                }
            }
        }

        if let Ok(n) = cur.normalized() {
            cur = n;
        }
        if !acted {
            break;
        }
    }
    Ok(cur)
}

/// Exhaustive planar oracle: boundary points on an arclength grid, all
/// pairs tested against the difference body, all coarse triples tested by
/// the fit program, then pattern-search refinement along the boundary.
#[derive(Clone, Debug)]
pub struct BruteForceXi {
    pub xi: f64,
    pub points: Vec<Vector>,
    /// True when refinement moved a vertex by more than one grid cell,
    /// meaning the requested resolution was too coarse to trust directly.
    pub coarse: bool,
}

struct BoundaryWalk {
    starts: Vec<Vector>,
    dirs: Vec<Vector>,
    lens: Vec<f64>,
    perimeter: f64,
}

impl BoundaryWalk {
    fn new(k: &Polytope) -> Self {
        let (loop_pts, _) = k.boundary_loop();
        let n = loop_pts.len();
        let mut starts = Vec::with_capacity(n);
        let mut dirs = Vec::with_capacity(n);
        let mut lens = Vec::with_capacity(n);
        for i in 0..n {
            let a = loop_pts[i].clone();
            let b = &loop_pts[(i + 1) % n];
            let e = b - &a;
            let l = e.norm();
            dirs.push(e.scale(1.0 / l));
            starts.push(a);
            lens.push(l);
        }
        let perimeter = lens.iter().sum();
        BoundaryWalk {
            starts,
            dirs,
            lens,
            perimeter,
        }
    }

    fn point_at(&self, s: f64) -> Vector {
        let mut rem = s.rem_euclid(self.perimeter);
        for i in 0..self.lens.len() {
            if rem <= self.lens[i] + 1e-12 {
                return &self.starts[i] + &self.dirs[i].scale(rem.min(self.lens[i]));
            }
            rem -= self.lens[i];
        }
        self.starts[0].clone()
    }
}

pub fn brute_force_xi(k: &Polytope, t: &NormBody, grid: f64) -> Result<BruteForceXi, SolveError> {
    if k.dim() != 2 {
        return Err(SolveError::Unsupported(
            "the exhaustive oracle is planar only".into(),
        ));
    }
    if !(grid > 0.0) {
        return Err(SolveError::Geometry("grid step must be positive".into()));
    }
    let walk = BoundaryWalk::new(k);
    let mut params: Vec<f64> = Vec::new();
    let mut acc = 0.0;
    for l in &walk.lens {
        let steps = (l / grid).ceil().max(1.0) as usize;
        for s in 0..steps {
            params.push(acc + l * s as f64 / steps as f64);
        }
        acc += l;
    }
    let pts: Vec<Vector> = params.iter().map(|&s| walk.point_at(s)).collect();
    let n = pts.len();

    let db = k
        .difference_body()
        .map_err(|e| SolveError::Geometry(e.to_string()))?;
    let pair_pinned = |a: &Vector, b: &Vector| db.depth(&(a - b)) <= 1e-12;
    let (inradius, _) = k.inradius();

    let mut best_len = f64::INFINITY;
    let mut best_params: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let len = t.eval(&(&pts[j] - &pts[i])) + t.eval(&(&pts[i] - &pts[j]));
            if len >= best_len {
                continue;
            }
            if pair_pinned(&pts[i], &pts[j]) {
                best_len = len;
                best_params = vec![params[i], params[j]];
            }
        }
    }

    // Triples on a coarser stride; a triple of small spread fits inside the
    // inscribed ball (planar Jung bound), so only spread ones go to the LP.
    let cstep = grid.max(walk.perimeter / 120.0);
    let stride = ((cstep / grid).round() as usize).max(1);
    let coarse: Vec<usize> = (0..n).step_by(stride).collect();
    for (ci, &i) in coarse.iter().enumerate() {
        for (cj, &j) in coarse.iter().enumerate().skip(ci + 1) {
            let dij = pts[i].dist(&pts[j]);
            let lij = t.eval(&(&pts[j] - &pts[i]));
            for &l in coarse.iter().skip(cj + 1) {
                let len = lij + t.eval(&(&pts[l] - &pts[j])) + t.eval(&(&pts[i] - &pts[l]));
                if len >= best_len {
                    continue;
                }
                let diam = dij.max(pts[i].dist(&pts[l])).max(pts[j].dist(&pts[l]));
                if diam / 3.0f64.sqrt() < inradius - 1e-9 {
                    continue;
                }
                let triple = [pts[i].clone(), pts[j].clone(), pts[l].clone()];
                if let FitResult::DoesNotFit { .. } =
                    fits_into_interior(k, &triple).map_err(SolveError::Geometry)?
                {
                    best_len = len;
                    best_params = vec![params[i], params[j], params[l]];
                }
            }
        }
    }

    if best_params.is_empty() {
        return Err(SolveError::Geometry(
            "no pinned cycle found on the boundary grid".into(),
        ));
    }

    // Pattern search along arclength, probes verified by the same pin test.
    let still_pinned = |ps: &[f64]| -> Result<bool, SolveError> {
        let points: Vec<Vector> = ps.iter().map(|&s| walk.point_at(s)).collect();
        if points.len() == 2 {
            Ok(pair_pinned(&points[0], &points[1]))
        } else {
            Ok(matches!(
                fits_into_interior(k, &points).map_err(SolveError::Geometry)?,
                FitResult::DoesNotFit { .. }
            ))
        }
    };
    let length_of = |ps: &[f64]| -> f64 {
        let points: Vec<Vector> = ps.iter().map(|&s| walk.point_at(s)).collect();
        cycle_length(&points, t)
    };
    let initial = best_params.clone();
    let mut delta = if best_params.len() == 2 { grid } else { cstep };
    while delta > grid / 4.0 {
        let mut moved = true;
        while moved {
            moved = false;
            for v in 0..best_params.len() {
                for sign in [-1.0, 1.0] {
                    let mut cand = best_params.clone();
                    cand[v] = (cand[v] + sign * delta).rem_euclid(walk.perimeter);
                    let len = length_of(&cand);
                    if len < best_len - 1e-13 && still_pinned(&cand)? {
                        best_len = len;
                        best_params = cand;
                        moved = true;
                    }
                }
            }
        }
        delta /= 2.0;
    }

    let coarse_flag = best_params
        .iter()
        .zip(&initial)
        .any(|(a, b)| {
            let direct = (a - b).abs();
            direct.min(walk.perimeter - direct) > grid
        });
    Ok(BruteForceXi {
        xi: best_len,
        points: best_params.iter().map(|&s| walk.point_at(s)).collect(),
        coarse: coarse_flag,
    })
}
