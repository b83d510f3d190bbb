//! Bounded-variable revised simplex with a product-form basis inverse.
//!
//! Rows are scaled to unit infinity norm, equality rows get a singleton crash
//! column or an artificial, and a two-phase method drives the artificials to
//! zero before optimizing the real objective. Nonbasic variables start at zero
//! when their bounds allow, so phase one is skipped for problems where the
//! origin is feasible. Pricing uses `d_j^2 / (1 + ||a_j||^2)` with a Harris
//! ratio test until `3 * (rows + cols)` consecutive iterations make no
//! objective progress, after which Bland's rule takes over.

use super::{LpError, LpProblem, LpSolution, LpStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
    /// Row feasibility tolerance on the scaled rows.
    pub feas_tol: f64,
    /// Reduced-cost optimality tolerance.
    pub opt_tol: f64,
    /// Defaults to `max(20_000, 50 * (rows + cols))` when `None`.
    pub max_iterations: Option<usize>,
    /// Basic values are recomputed from scratch this often.
    pub refresh_every: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-10,
            feas_tol: 1e-8,
            opt_tol: 1e-9,
            max_iterations: None,
            refresh_every: 64,
        }
    }
}

/// Solves `p` with default options.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution, LpError> {
    SimplexSolver::default().solve(p)
}

/// A simplex solver. Holds its options and the iteration count of the last solve.
#[derive(Debug, Default, Clone)]
pub struct SimplexSolver {
    options: SimplexOptions,
    last_iterations: usize,
}

impl SimplexSolver {
    pub fn new(options: SimplexOptions) -> Self {
        Self {
            options,
            last_iterations: 0,
        }
    }

    pub fn options(&self) -> &SimplexOptions {
        &self.options
    }

    pub fn last_iterations(&self) -> usize {
        self.last_iterations
    }

    pub fn solve(&mut self, p: &LpProblem) -> Result<LpSolution, LpError> {
        p.validate()?;
        let prepared = PreparedLp::new(p, self.options.feas_tol);
        self.solve_prepared(&prepared, &p.lower, &p.upper)
    }

    /// Solves a prepared problem under the given variable bounds.
    pub(crate) fn solve_prepared(
        &mut self,
        prepared: &PreparedLp,
        lower: &[f64],
        upper: &[f64],
    ) -> Result<LpSolution, LpError> {
        if lower.iter().zip(upper).any(|(l, u)| l > u) {
            return Ok(LpSolution::infeasible(0));
        }
        if prepared.infeasible_row {
            return Ok(LpSolution::infeasible(0));
        }
        let mut work = Work::new(prepared, lower, upper, self.options);
        let result = work.run();
        self.last_iterations = work.iterations;
        result
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Eq,
    Le,
}

#[derive(Debug, Clone, Default)]
struct SparseCol {
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl SparseCol {
    fn dot(&self, y: &[f64]) -> f64 {
        self.idx
            .iter()
            .zip(&self.val)
            .map(|(&i, &v)| v * y[i as usize])
            .sum()
    }
}

/// Row-scaled column-major copy of an [`LpProblem`], reusable across bound changes.
#[derive(Debug, Clone)]
pub(crate) struct PreparedLp {
    n_struct: usize,
    /// Prepared row index and scale for every original row, `None` for
    /// dropped all-zero rows.
    row_map: Vec<Option<(usize, f64)>>,
    kinds: Vec<RowKind>,
    rhs: Vec<f64>,
    cols: Vec<SparseCol>,
    weights: Vec<f64>,
    cost: Vec<f64>,
    infeasible_row: bool,
}

impl PreparedLp {
    pub(crate) fn new(p: &LpProblem, feas_tol: f64) -> Self {
        let n = p.num_vars();
        let mut kinds = Vec::new();
        let mut rhs = Vec::new();
        let mut cols = vec![SparseCol::default(); n];
        let mut infeasible_row = false;
        let mut row_map = Vec::with_capacity(p.num_constraints());
        let rows = p
            .equalities
            .iter()
            .map(|r| (RowKind::Eq, r))
            .chain(p.inequalities.iter().map(|r| (RowKind::Le, r)));
        for (kind, row) in rows {
            let norm = row.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            if norm == 0.0 {
                let bad = match kind {
                    RowKind::Eq => row.rhs.abs() > feas_tol,
                    RowKind::Le => row.rhs < -feas_tol,
                };
                infeasible_row |= bad;
                row_map.push(None);
                continue;
            }
            let i = kinds.len() as u32;
            row_map.push(Some((kinds.len(), norm)));
            for (j, &c) in row.coeffs.iter().enumerate() {
                if c != 0.0 {
                    cols[j].idx.push(i);
                    cols[j].val.push(c / norm);
                }
            }
            kinds.push(kind);
            rhs.push(row.rhs / norm);
        }
        let weights = cols
            .iter()
            .map(|c| 1.0 + c.val.iter().map(|v| v * v).sum::<f64>())
            .collect();
        Self {
            n_struct: n,
            row_map,
            kinds,
            rhs,
            cols,
            weights,
            cost: p.objective.clone(),
            infeasible_row,
        }
    }

    fn rows(&self) -> usize {
        self.kinds.len()
    }

    /// Largest scaled row residual or bound violation at `x`.
    fn max_violation(&self, x: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
        let mut act = vec![0.0; self.rows()];
        for (col, &v) in self.cols.iter().zip(x) {
            for (&i, &a) in col.idx.iter().zip(&col.val) {
                act[i as usize] += a * v;
            }
        }
        let mut worst = 0.0_f64;
        for (i, kind) in self.kinds.iter().enumerate() {
            let r = act[i] - self.rhs[i];
            worst = worst.max(match kind {
                RowKind::Eq => r.abs(),
                RowKind::Le => r,
            });
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(lower[j] - v).max(v - upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic(usize),
    Lower,
    Upper,
    /// Nonbasic strictly inside its bounds, at zero.
    Free,
}

struct Eta {
    row: usize,
    pivot: f64,
    idx: Vec<u32>,
    val: Vec<f64>,
}

/// Logical columns (slacks and artificials) are unit vectors.
#[derive(Clone, Copy)]
struct UnitCol {
    row: usize,
    coef: f64,
}

struct Work<'a> {
    p: &'a PreparedLp,
    opts: SimplexOptions,
    m: usize,
    units: Vec<UnitCol>,
    first_artificial: usize,
    lb: Vec<f64>,
    ub: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    diag: Vec<f64>,
    etas: Vec<Eta>,
    iterations: usize,
    max_iterations: usize,
}

enum Phase {
    One,
    Two,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Continue,
}

impl<'a> Work<'a> {
    fn new(p: &'a PreparedLp, lower: &[f64], upper: &[f64], opts: SimplexOptions) -> Self {
        let m = p.rows();
        let ns = p.n_struct;
        let mut lb = lower.to_vec();
        let mut ub = upper.to_vec();
        // Nonbasic variables start at zero whenever their bounds allow it.
        let mut x: Vec<f64> = (0..ns)
            .map(|j| {
                if lb[j] <= 0.0 && ub[j] >= 0.0 {
                    0.0
                } else if lb[j].is_finite() {
                    lb[j]
                } else {
                    ub[j]
                }
            })
            .collect();
        let mut state: Vec<State> = (0..ns)
            .map(|j| {
                if x[j] == lb[j] {
                    State::Lower
                } else if x[j] == ub[j] {
                    State::Upper
                } else {
                    State::Free
                }
            })
            .collect();

        let mut resid = p.rhs.clone();
        for (j, col) in p.cols.iter().enumerate() {
            if x[j] != 0.0 {
                for (&i, &a) in col.idx.iter().zip(&col.val) {
                    resid[i as usize] -= a * x[j];
                }
            }
        }

        let mut basis = vec![usize::MAX; m];
        let mut diag = vec![0.0; m];

        // Singleton crash on equality rows.
        for (j, col) in p.cols.iter().enumerate() {
            if col.idx.len() != 1 {
                continue;
            }
            let i = col.idx[0] as usize;
            if p.kinds[i] != RowKind::Eq || basis[i] != usize::MAX {
                continue;
            }
            let a = col.val[0];
            let v = x[j] + resid[i] / a;
            let tol = opts.feas_tol;
            if v >= lb[j] - tol && v <= ub[j] + tol {
                x[j] = v.clamp(lb[j], ub[j]);
                resid[i] = 0.0;
                basis[i] = j;
                diag[i] = a;
                state[j] = State::Basic(i);
            }
        }

        let mut units = Vec::new();
        let mut cost = vec![0.0; ns];
        // Slacks.
        for i in 0..m {
            if p.kinds[i] == RowKind::Le {
                let j = ns + units.len();
                units.push(UnitCol { row: i, coef: 1.0 });
                lb.push(0.0);
                ub.push(f64::INFINITY);
                cost.push(0.0);
                if basis[i] == usize::MAX && resid[i] >= 0.0 {
                    x.push(resid[i]);
                    state.push(State::Basic(i));
                    basis[i] = j;
                    diag[i] = 1.0;
                } else {
                    x.push(0.0);
                    state.push(State::Lower);
                }
            }
        }
        let first_artificial = ns + units.len();
        for i in 0..m {
            if basis[i] != usize::MAX {
                continue;
            }
            let coef = if resid[i] >= 0.0 { 1.0 } else { -1.0 };
            let j = ns + units.len();
            units.push(UnitCol { row: i, coef });
            lb.push(0.0);
            ub.push(f64::INFINITY);
            cost.push(1.0);
            x.push(resid[i].abs());
            state.push(State::Basic(i));
            basis[i] = j;
            diag[i] = coef;
        }

        let total = ns + units.len();
        let max_iterations = opts
            .max_iterations
            .unwrap_or_else(|| (50 * (m + total)).max(20_000));
        Self {
            p,
            opts,
            m,
            units,
            first_artificial,
            lb,
            ub,
            cost,
            x,
            state,
            basis,
            diag,
            etas: Vec::new(),
            iterations: 0,
            max_iterations,
        }
    }

    fn total_cols(&self) -> usize {
        self.p.n_struct + self.units.len()
    }

    /// Static pricing weight `1 + ||a_j||^2`.
    fn weight(&self, j: usize) -> f64 {
        if j < self.p.n_struct {
            self.p.weights[j]
        } else {
            2.0
        }
    }

    fn dot_col(&self, j: usize, y: &[f64]) -> f64 {
        if j < self.p.n_struct {
            self.p.cols[j].dot(y)
        } else {
            let u = self.units[j - self.p.n_struct];
            u.coef * y[u.row]
        }
    }

    fn scatter_col(&self, j: usize, out: &mut [f64], scale: f64) {
        if j < self.p.n_struct {
            let col = &self.p.cols[j];
            for (&i, &a) in col.idx.iter().zip(&col.val) {
                out[i as usize] += scale * a;
            }
        } else {
            let u = self.units[j - self.p.n_struct];
            out[u.row] += scale * u.coef;
        }
    }

    fn ftran(&self, v: &mut [f64]) {
        for (vi, d) in v.iter_mut().zip(&self.diag) {
            *vi /= d;
        }
        for eta in &self.etas {
            let vr = v[eta.row] / eta.pivot;
            if vr != 0.0 {
                for (&i, &w) in eta.idx.iter().zip(&eta.val) {
                    v[i as usize] -= w * vr;
                }
            }
            v[eta.row] = vr;
        }
    }

    fn btran(&self, u: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let s: f64 = eta
                .idx
                .iter()
                .zip(&eta.val)
                .map(|(&i, &w)| u[i as usize] * w)
                .sum();
            u[eta.row] = (u[eta.row] - s) / eta.pivot;
        }
        for (ui, d) in u.iter_mut().zip(&self.diag) {
            *ui /= d;
        }
    }

    /// Recomputes basic values from the nonbasic ones.
    fn refresh(&mut self) {
        let mut r = self.p.rhs.clone();
        for j in 0..self.total_cols() {
            if !matches!(self.state[j], State::Basic(_)) && self.x[j] != 0.0 {
                self.scatter_col(j, &mut r, -self.x[j]);
            }
        }
        self.ftran(&mut r);
        for (i, &b) in self.basis.iter().enumerate() {
            self.x[b] = r[i];
        }
    }

    fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    fn run(&mut self) -> Result<LpSolution, LpError> {
        let initial_infeas = (self.first_artificial..self.total_cols())
            .map(|j| self.x[j])
            .fold(0.0_f64, f64::max);
        if initial_infeas > self.opts.feas_tol {
            self.run_phase(Phase::One)?;
            let infeas = (self.first_artificial..self.total_cols())
                .map(|j| self.x[j])
                .fold(0.0_f64, f64::max);
            if infeas > self.opts.feas_tol {
                return Ok(LpSolution::infeasible(self.iterations));
            }
        }
        for j in self.first_artificial..self.total_cols() {
            self.ub[j] = 0.0;
            self.cost[j] = 0.0;
            if !matches!(self.state[j], State::Basic(_)) {
                self.x[j] = 0.0;
                self.state[j] = State::Lower;
            }
        }
        for j in 0..self.p.n_struct {
            self.cost[j] = self.p.cost[j];
        }
        if let StepOutcome::Unbounded = self.run_phase(Phase::Two)? {
            return Ok(LpSolution::unbounded(self.iterations));
        }

        self.refresh();
        let ns = self.p.n_struct;
        let x: Vec<f64> = self.x[..ns].to_vec();
        let violation = self.p.max_violation(&x, &self.lb[..ns], &self.ub[..ns]);
        if violation > self.opts.feas_tol {
            return Err(LpError::Numerical(format!(
                "final residual {violation:.3e} exceeds feasibility tolerance"
            )));
        }
        let objective = self.p.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        let mut y: Vec<f64> = self.basis.iter().map(|&b| self.cost[b]).collect();
        self.btran(&mut y);
        let duals = self
            .p
            .row_map
            .iter()
            .map(|r| r.map_or(0.0, |(i, norm)| y[i] / norm))
            .collect();
        Ok(LpSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            duals,
            iterations: self.iterations,
        })
    }

    fn run_phase(&mut self, phase: Phase) -> Result<StepOutcome, LpError> {
        if let Phase::One = phase {
            // Phase-one costs were installed at construction.
            for j in 0..self.first_artificial {
                self.cost[j] = 0.0;
            }
        }
        let stall_limit = 3 * (self.m + self.total_cols());
        let mut stall = 0usize;
        let mut bland = false;
        let mut last_obj = self.objective();
        loop {
            if self.iterations >= self.max_iterations {
                return Err(LpError::IterationLimit(self.max_iterations));
            }
            match self.step(bland)? {
                StepOutcome::Continue => {}
                other => { return Ok(other) },
            }
            self.iterations += 1;
            if self.iterations % self.opts.refresh_every == 0 {
                self.refresh();
            }
            let obj = self.objective();
            if obj < last_obj - 1e-12 * (1.0 + last_obj.abs()) {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
                if stall > stall_limit {
                    bland = true;
                }
            }
        }
    }

    fn step(&mut self, bland: bool) -> Result<StepOutcome, LpError> {
        let m = self.m;
        let mut y: Vec<f64> = self.basis.iter().map(|&b| self.cost[b]).collect();
        self.btran(&mut y);

        // Pricing.
        let mut entering: Option<(usize, f64, f64)> = None; // (col, reduced cost, direction)
        let mut best_score = 0.0;
        for j in 0..self.total_cols() {
            let dir_ok = match self.state[j] {
                State::Basic(_) => continue,
                _ if self.lb[j] == self.ub[j] => continue,
                s => s,
            };
            let d = self.cost[j] - self.dot_col(j, &y);
            let sigma = match dir_ok {
                State::Lower if d < -self.opts.opt_tol => 1.0,
                State::Upper if d > self.opts.opt_tol => -1.0,
                State::Free if d.abs() > self.opts.opt_tol => -d.signum(),
                _ => continue,
            };
            if bland {
                entering = Some((j, d, sigma));
                break;
            }
            let score = d * d / self.weight(j);
            if score > best_score {
                best_score = score;
                entering = Some((j, d, sigma));
            }
        }
        let Some((q, _dq, sigma)) = entering else {
            return Ok(StepOutcome::Optimal);
        };

        let mut w = vec![0.0; m];
        self.scatter_col(q, &mut w, 1.0);
        self.ftran(&mut w);

        // Harris ratio test. Basic variable in row i moves by -sigma * w_i per unit step.
        let harris = self.opts.feas_tol * 0.1;
        let room = |i: usize, delta: f64| -> Option<f64> {
            let b = self.basis[i];
            if delta < 0.0 {
                self.lb[b].is_finite().then(|| self.x[b] - self.lb[b])
            } else {
                self.ub[b].is_finite().then(|| self.ub[b] - self.x[b])
            }
        };
        let mut leave: Option<(usize, f64)> = None;
        if bland {
            let mut best = f64::INFINITY;
            for i in 0..m {
                let delta = -sigma * w[i];
                if delta.abs() <= self.opts.pivot_tol {
                    continue;
                }
                if let Some(r) = room(i, delta) {
                    let ratio = r.max(0.0) / delta.abs();
                    let better = match leave {
                        None => true,
                        Some((li, _)) => {
                            ratio < best - 1e-15
                                || (ratio <= best + 1e-15 && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        best = ratio;
                        leave = Some((i, ratio));
                    }
                }
            }
        } else {
            let mut t_max = f64::INFINITY;
            for i in 0..m {
                let delta = -sigma * w[i];
                if delta.abs() <= self.opts.pivot_tol {
                    continue;
                }
                if let Some(r) = room(i, delta) {
                    t_max = t_max.min((r + harris) / delta.abs());
                }
            }
            if t_max.is_finite() {
                let mut best_mag = 0.0;
                for i in 0..m {
                    let delta = -sigma * w[i];
                    if delta.abs() <= self.opts.pivot_tol {
                        continue;
                    }
                    if let Some(r) = room(i, delta) {
                        let ratio = r / delta.abs();
                        if ratio <= t_max && delta.abs() > best_mag {
                            best_mag = delta.abs();
                            leave = Some((i, ratio.max(0.0)));
                        }
                    }
                }
            }
        }

        let range = if sigma > 0.0 {
            self.ub[q] - self.x[q]
        } else {
            self.x[q] - self.lb[q]
        };
        let flip = range.is_finite() && leave.is_none_or(|(_, t)| range <= t);
        if flip {
            let t = range;
            for i in 0..m {
                if w[i] != 0.0 {
                    let b = self.basis[i];
                    self.x[b] -= sigma * t * w[i];
                }
            }
            if sigma > 0.0 {
                self.x[q] = self.ub[q];
                self.state[q] = State::Upper;
            } else {
                self.x[q] = self.lb[q];
                self.state[q] = State::Lower;
            }
            return Ok(StepOutcome::Continue);
        }
        let Some((r, t)) = leave else {
            return Ok(StepOutcome::Unbounded);
        };

        for i in 0..m {
            if w[i] != 0.0 {
                let b = self.basis[i];
                self.x[b] -= sigma * t * w[i];
            }
        }
        self.x[q] += sigma * t;

        let out = self.basis[r];
        let delta = -sigma * w[r];
        if delta < 0.0 {
            self.x[out] = self.lb[out];
            self.state[out] = State::Lower;
        } else {
            self.x[out] = self.ub[out];
            self.state[out] = State::Upper;
        }
        self.basis[r] = q;
        self.state[q] = State::Basic(r);

        let pivot = w[r];
        if pivot.abs() <= self.opts.pivot_tol {
            return Err(LpError::Numerical(format!("pivot {pivot:.3e} below tolerance")));
        }
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (i, &wi) in w.iter().enumerate() {
            if i != r && wi != 0.0 {
                idx.push(i as u32);
                val.push(wi);
            }
        }
        self.etas.push(Eta {
            row: r,
            pivot,
            idx,
            val,
        });
        Ok(StepOutcome::Continue)
    }
}
