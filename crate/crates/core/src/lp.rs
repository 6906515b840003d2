//! Dense linear programming, small and exact enough for certificates.
//!
//! Everything downstream (fit tests, redundancy removal, cone membership)
//! runs on desk-scale instances: at most a few dozen rows, single-digit
//! variable counts. A full-tableau two-phase simplex with Bland's rule is the
//! right tool at that scale: deterministic, cycle-free, and the tableau hands
//! back exact dual values, which become the surrounding-normal certificates.
//!
//! Conventions: `solve_lp` maximizes. Duals are reported per input row. For
//! an `Optimal` outcome they satisfy the usual complementary slackness (this
//! is checked before returning); for an `Infeasible` outcome the dual slot
//! carries a Farkas-type ray certifying the contradiction.

use crate::linalg::{solve_square, Covector, Matrix};
use crate::tol::{FEAS_TOL, WEIGHT_CLEANUP_TOL};
use thiserror::Error;

/// Pivot threshold; entries smaller than this are treated as zero.
const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    lower_bounds: Vec<Option<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Primal solution (meaningful for `Optimal`).
    pub x: Vec<f64>,
    /// Objective value at `x`.
    pub objective: f64,
    /// Per-row duals for `Optimal`; a Farkas-type ray for `Infeasible`.
    pub dual: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            lower_bounds: vec![None; num_vars],
        }
    }

    pub fn maximize(&mut self, objective: &[f64]) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective.to_vec();
        self
    }

    pub fn add_le(&mut self, coeffs: &[f64], rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs.to_vec(), Relation::Le, rhs));
        self
    }

    pub fn add_eq(&mut self, coeffs: &[f64], rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs.to_vec(), Relation::Eq, rhs));
        self
    }

    /// Variables default to free; a lower bound makes `x_j >= lb`.
    pub fn set_lower_bound(&mut self, var: usize, lb: f64) -> &mut Self {
        self.lower_bounds[var] = Some(lb);
        self
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
}

struct Tableau {
    /// rows x (columns + rhs); column layout: structural, slacks, artificials.
    t: Vec<Vec<f64>>,
    obj: Vec<f64>,
    obj_val: f64,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
    /// live[i] == false marks a redundant row removed after phase 1.
    live: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[row][col];
        let inv = 1.0 / piv;
        for v in self.t[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..self.t.len() {
            if i == row || !self.live[i] {
                continue;
            }
            let f = self.t[i][col];
            if f != 0.0 {
                for c in 0..=self.ncols {
                    self.t[i][c] -= f * self.t[row][c];
                }
                self.t[i][col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for c in 0..self.ncols {
                self.obj[c] -= f * self.t[row][c];
            }
            self.obj_val -= f * self.t[row][self.ncols];
            self.obj[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = lowest eligible column with negative reduced
    /// cost; leaving = minimal ratio, ties broken by lowest basis variable.
    fn run(&mut self, allow_artificials: bool, budget: &mut usize) -> Result<bool, LpError> {
        loop {
            let limit = if allow_artificials { self.ncols } else { self.first_artificial };
            let mut entering = None;
            for j in 0..limit {
                if self.obj[j] < -PIVOT_EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(e) = entering else { return Ok(true) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                if !self.live[i] || self.t[i][e] <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.t[i][self.ncols] / self.t[i][e];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - PIVOT_EPS
                            || (ratio < lr + PIVOT_EPS && self.basis[i] < self.basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((l, _)) = leave else { return Ok(false) }; // unbounded direction
            self.pivot(l, e);
            *budget -= 1;
            if *budget == 0 {
                return Err(LpError::NumericalBreakdown("pivot budget exhausted".into()));
            }
        }
    }
}

/// Maximizes `objective . x` subject to the rows and lower bounds of `p`.
pub fn solve_lp(p: &LpProblem) -> Result<LpOutcome, LpError> {
    if p.num_vars == 0 {
        return Err(LpError::Malformed("no variables".into()));
    }
    for (coeffs, _, rhs) in &p.rows {
        if !coeffs.iter().all(|c| c.is_finite()) || !rhs.is_finite() {
            return Err(LpError::Malformed("non-finite row".into()));
        }
    }
    if !p.objective.iter().all(|c| c.is_finite()) {
        return Err(LpError::Malformed("non-finite objective".into()));
    }

    // Column layout per variable: bounded -> one shifted column;
    // free -> a positive and a negative part.
    let mut col_of_var: Vec<(usize, Option<usize>)> = Vec::with_capacity(p.num_vars);
    let mut nstruct = 0;
    for lb in &p.lower_bounds {
        if lb.is_some() {
            col_of_var.push((nstruct, None));
            nstruct += 1;
        } else {
            col_of_var.push((nstruct, Some(nstruct + 1)));
            nstruct += 2;
        }
    }
    let m = p.rows.len();
    let nslack = p.rows.iter().filter(|(_, r, _)| *r == Relation::Le).count();

    // Shift lower-bounded variables to zero and expand free ones.
    let expand = |coeffs: &[f64], row_out: &mut [f64]| {
        for (j, (cpos, cneg)) in col_of_var.iter().enumerate() {
            row_out[*cpos] = coeffs[j];
            if let Some(cn) = cneg {
                row_out[*cn] = -coeffs[j];
            }
        }
    };

    let mut rows_ex: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs_ex: Vec<f64> = Vec::with_capacity(m);
    let mut slack_col: Vec<Option<usize>> = vec![None; m];
    let mut art_col: Vec<Option<usize>> = vec![None; m];
    let mut row_sign: Vec<f64> = vec![1.0; m];

    let mut next_slack = nstruct;
    for (i, (coeffs, rel, rhs)) in p.rows.iter().enumerate() {
        let mut shift = 0.0;
        for (j, lb) in p.lower_bounds.iter().enumerate() {
            if let Some(l) = lb {
                shift += coeffs[j] * l;
            }
        }
        let mut row = vec![0.0; nstruct];
        expand(coeffs, &mut row);
        rows_ex.push(row);
        rhs_ex.push(rhs - shift);
        if *rel == Relation::Le {
            slack_col[i] = Some(next_slack);
            next_slack += 1;
        }
    }
    let first_artificial = nstruct + nslack;
    let mut next_art = first_artificial;
    for i in 0..m {
        if rhs_ex[i] < 0.0 {
            row_sign[i] = -1.0;
            rhs_ex[i] = -rhs_ex[i];
            for v in rows_ex[i].iter_mut() {
                *v = -*v;
            }
        }
        // A negated Le row has slack coefficient -1, so it cannot seed the
        // basis; equalities never can. Both get an artificial column.
        if art_needed(&p.rows[i].1, row_sign[i]) {
            art_col[i] = Some(next_art);
            next_art += 1;
        }
    }
    let ncols = next_art;

    let mut t = vec![vec![0.0; ncols + 1]; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        t[i][..nstruct].copy_from_slice(&rows_ex[i]);
        if let Some(s) = slack_col[i] {
            t[i][s] = row_sign[i];
        }
        if let Some(a) = art_col[i] {
            t[i][a] = 1.0;
            basis[i] = a;
        } else {
            basis[i] = slack_col[i].expect("row without slack needs artificial");
        }
        t[i][ncols] = rhs_ex[i];
    }

    let mut tab = Tableau {
        t,
        obj: vec![0.0; ncols],
        obj_val: 0.0,
        basis,
        ncols,
        first_artificial,
        live: vec![true; m],
    };

    let mut budget = MAX_PIVOTS;

    // Phase 1: maximize -(sum of artificials).
    if next_art > first_artificial {
        for j in 0..ncols {
            let mut r = 0.0;
            for i in 0..m {
                if art_col[i].is_some() {
                    r -= tab.t[i][j];
                }
            }
            if j >= first_artificial {
                r += 1.0; // minus c_j with c_j = -1
            }
            tab.obj[j] = r;
        }
        tab.obj_val = -(0..m).filter(|i| art_col[*i].is_some()).map(|i| tab.t[i][ncols]).sum::<f64>();
        let finished = tab.run(true, &mut budget)?;
        if !finished {
            return Err(LpError::NumericalBreakdown("phase 1 unbounded".into()));
        }
        if tab.obj_val < -FEAS_TOL {
            // Infeasible; phase-1 duals are the Farkas ray.
            let dual = extract_duals(&tab, &slack_col, &art_col, &row_sign, -1.0);
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                x: vec![0.0; p.num_vars],
                objective: 0.0,
                dual,
            });
        }
        // Drive artificials out of the basis; fully dependent rows go dead.
        for i in 0..m {
            if tab.basis[i] >= first_artificial && tab.live[i] {
                let piv = (0..first_artificial).find(|&j| tab.t[i][j].abs() > 1e-9);
                match piv {
                    Some(j) => tab.pivot(i, j),
                    None => tab.live[i] = false,
                }
            }
        }
    }

    // Phase 2: the real objective over the expanded columns.
    let mut c_ex = vec![0.0; ncols];
    let mut const_shift = 0.0;
    for (j, (cpos, cneg)) in col_of_var.iter().enumerate() {
        c_ex[*cpos] = p.objective[j];
        if let Some(cn) = cneg {
            c_ex[*cn] = -p.objective[j];
        }
        if let Some(l) = p.lower_bounds[j] {
            const_shift += p.objective[j] * l;
        }
    }
    for j in 0..ncols {
        let mut z = 0.0;
        for i in 0..m {
            if tab.live[i] {
                z += c_ex[tab.basis[i]] * tab.t[i][j];
            }
        }
        tab.obj[j] = z - c_ex[j];
    }
    tab.obj_val = (0..m)
        .filter(|&i| tab.live[i])
        .map(|i| c_ex[tab.basis[i]] * tab.t[i][tab.ncols])
        .sum();

    let finished = tab.run(false, &mut budget)?;
    if !finished {
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            x: vec![0.0; p.num_vars],
            objective: f64::INFINITY,
            dual: vec![0.0; m],
        });
    }

    // Recover the original variables.
    let mut u = vec![0.0; ncols];
    for i in 0..m {
        if tab.live[i] {
            u[tab.basis[i]] = tab.t[i][ncols];
        }
    }
    let mut x = vec![0.0; p.num_vars];
    for (j, (cpos, cneg)) in col_of_var.iter().enumerate() {
        x[j] = match cneg {
            None => p.lower_bounds[j].unwrap() + u[*cpos],
            Some(cn) => u[*cpos] - u[*cn],
        };
    }
    let objective = tab.obj_val + const_shift;
    let dual = extract_duals(&tab, &slack_col, &art_col, &row_sign, 0.0);

    // Postcondition check: primal feasibility and complementary slackness.
    let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut cs_residual = 0.0f64;
    for (i, (coeffs, rel, rhs)) in p.rows.iter().enumerate() {
        let lhs: f64 = coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
        let slack = rhs - lhs;
        let viol = match rel {
            Relation::Le => (-slack).max(0.0),
            Relation::Eq => slack.abs(),
        };
        if viol > FEAS_TOL * scale * 10.0 {
            return Err(LpError::NumericalBreakdown(format!(
                "primal residual {viol:.3e} on row {i}"
            )));
        }
        cs_residual = cs_residual.max((dual[i] * slack).abs());
    }
    if cs_residual > FEAS_TOL * scale * 10.0 {
        return Err(LpError::NumericalBreakdown(format!(
            "complementary slackness residual {cs_residual:.3e}"
        )));
    }

    Ok(LpOutcome {
        status: LpStatus::Optimal,
        x,
        objective,
        dual,
    })
}

fn art_needed(rel: &Relation, row_sign: f64) -> bool {
    *rel == Relation::Eq || row_sign < 0.0
}

/// Duals per original row, read off the objective row at each row's identity
/// column (slack where present, else artificial). `art_cost` is the phase's
/// cost of artificial columns (0 in phase 2, -1 in phase 1).
fn extract_duals(
    tab: &Tableau,
    slack_col: &[Option<usize>],
    art_col: &[Option<usize>],
    row_sign: &[f64],
    art_cost: f64,
) -> Vec<f64> {
    let m = slack_col.len();
    let mut y = vec![0.0; m];
    for i in 0..m {
        if let Some(s) = slack_col[i] {
            // Column is row_sign * e_i, cost 0: obj[s] = row_sign * y_cur_i,
            // and the original-row dual is row_sign * y_cur_i.
            y[i] = tab.obj[s];
        } else if let Some(a) = art_col[i] {
            // Column is +e_i in the (possibly negated) system.
            y[i] = row_sign[i] * (tab.obj[a] + art_cost);
        }
    }
    y
}

/// Nonnegative least squares: minimizes `|target - sum_j w_j cols_j|` over
/// `w >= 0`. Returns the weights and the residual norm. Lawson–Hanson active
/// set; deterministic.
pub fn nnls(cols: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let n = cols.len();
    let dim = target.len();
    let mut w = vec![0.0; n];
    if n == 0 {
        return (w, target.iter().map(|v| v * v).sum::<f64>().sqrt());
    }
    let scale = 1.0 + target.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let grad_tol = 1e-11 * scale;
    let mut passive = vec![false; n];
    let mut residual: Vec<f64> = target.to_vec();

    let ls_on_passive = |passive: &[bool]| -> Vec<f64> {
        let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        if idx.is_empty() {
            return vec![0.0; n];
        }
        let g = Matrix::from_fn(dim, idx.len(), |r, c| cols[idx[c]][r]);
        let b = nalgebra::DVector::from_fn(dim, |r, _| target[r]);
        let gtg = g.transpose() * &g;
        let gtb = g.transpose() * &b;
        let z = solve_square(&gtg, &gtb).unwrap_or_else(|| {
            let svd = g.svd(true, true);
            svd.solve(&b, 1e-12).unwrap_or_else(|_| nalgebra::DVector::zeros(idx.len()))
        });
        let mut full = vec![0.0; n];
        for (k, &j) in idx.iter().enumerate() {
            full[j] = z[k];
        }
        full
    };

    for _outer in 0..(10 * n + 20) {
        // Most negative gradient among the active (zero) weights.
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if passive[j] {
                continue;
            }
            let g: f64 = cols[j].iter().zip(&residual).map(|(a, b)| a * b).sum();
            if g > grad_tol && best.map_or(true, |(_, bg)| g > bg) {
                best = Some((j, g));
            }
        }
        let Some((enter, _)) = best else { break };
        passive[enter] = true;

        for _inner in 0..(5 * n + 10) {
            let z = ls_on_passive(&passive);
            let neg: Vec<usize> = (0..n).filter(|&j| passive[j] && z[j] <= 1e-13).collect();
            if neg.is_empty() {
                w = z;
                break;
            }
            let mut alpha = 1.0f64;
            for &q in &neg {
                let denom = w[q] - z[q];
                if denom > 1e-300 {
                    alpha = alpha.min(w[q] / denom);
                }
            }
            for j in 0..n {
                if passive[j] {
                    w[j] += alpha * (z[j] - w[j]);
                    if w[j] <= 1e-13 {
                        w[j] = 0.0;
                        passive[j] = false;
                    }
                }
            }
        }

        for r in 0..dim {
            let fit: f64 = (0..n).map(|j| w[j] * cols[j][r]).sum();
            residual[r] = target[r] - fit;
        }
    }
    let rn = residual.iter().map(|v| v * v).sum::<f64>().sqrt();
    (w, rn)
}

#[derive(Clone, Debug)]
pub struct HullResult {
    /// Whether 0 lies in the convex hull of the covectors.
    pub contains: bool,
    /// Convex weights realizing 0 when `contains` (cleaned, summing to 1).
    pub weights: Vec<f64>,
    /// Whether 0 lies in the interior of the hull.
    pub interior: bool,
}

/// Tests `0 in conv{normals}` and whether the containment is interior.
///
/// Membership and weights come from nonnegative least squares on the
/// augmented system `(n_i, 1) w = (0, 1)`. The interior flag uses the polar
/// cone: 0 is interior iff no nonzero `u` has `<n_i, u> <= 0` for all `i`,
/// probed by 2d pinned-coordinate feasibility LPs.
pub fn zero_in_convex_hull(normals: &[Covector]) -> HullResult {
    assert!(!normals.is_empty(), "empty covector set");
    let d = normals[0].dim();
    for n in normals {
        assert_eq!(n.dim(), d, "dimension mismatch");
        assert!(n.norm() > 1e-12, "zero covector");
    }
    let cols: Vec<Vec<f64>> = normals
        .iter()
        .map(|n| {
            let mut c = n.coords().to_vec();
            c.push(1.0);
            c
        })
        .collect();
    let mut target = vec![0.0; d];
    target.push(1.0);
    let (mut w, residual) = nnls(&cols, &target);
    let contains = residual <= 1e-9;
    if !contains {
        return HullResult {
            contains: false,
            weights: Vec::new(),
            interior: false,
        };
    }
    let sum: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= sum;
        if *v < WEIGHT_CLEANUP_TOL {
            *v = 0.0;
        }
    }
    let sum: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= sum;
    }

    let mut interior = true;
    'probe: for j in 0..d {
        for sigma in [-1.0, 1.0] {
            let mut lp = LpProblem::new(d);
            for n in normals {
                lp.add_le(n.coords(), 0.0);
            }
            let mut pin = vec![0.0; d];
            pin[j] = 1.0;
            lp.add_eq(&pin, sigma);
            match solve_lp(&lp) {
                Ok(out) if out.status == LpStatus::Optimal => {
                    interior = false;
                    break 'probe;
                }
                _ => {}
            }
        }
    }
    HullResult {
        contains,
        weights: w,
        interior,
    }
}
