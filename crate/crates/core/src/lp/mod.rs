//! Dense linear programming: problem containers, a bounded-variable revised
//! simplex, and a best-first branch-and-bound for binary variables.

mod milp;
mod simplex;

pub use milp::{BranchAndBound, MilpOptions, MilpProblem, solve_milp};
pub use simplex::{SimplexOptions, SimplexSolver, solve_lp};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite coefficient: {0}")]
    NonFinite(String),

    #[error("invalid bounds for variable {var}: [{lower}, {upper}]")]
    InvalidBounds { var: usize, lower: f64, upper: f64 },

    #[error("iteration limit of {0} exceeded")]
    IterationLimit(usize),

    #[error("branch-and-bound node limit of {limit} exceeded")]
    NodeLimit {
        limit: usize,
        /// Best integer-feasible solution found before the limit, if any.
        incumbent: Option<Box<LpSolution>>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// One linear row `coeffs . x (= or <=) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// `min c.x` subject to `E x = f`, `G x <= h`, `lower <= x <= upper`.
///
/// Bounds may be infinite. New variables default to `[0, +inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.equalities.push(Constraint { coeffs, rhs });
        self
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.inequalities.push(Constraint { coeffs, rhs });
        self
    }

    pub fn add_ge(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        let coeffs = coeffs.into_iter().map(|c| -c).collect();
        self.inequalities.push(Constraint { coeffs, rhs: -rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(LpError::Dimension("problem has no variables".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Dimension(format!(
                "{} variables but {} lower / {} upper bounds",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        if let Some(c) = self.objective.iter().find(|c| !c.is_finite()) {
            return Err(LpError::NonFinite(format!("objective coefficient {c}")));
        }
        for (kind, rows) in [("equality", &self.equalities), ("inequality", &self.inequalities)] {
            for (i, row) in rows.iter().enumerate() {
                if row.coeffs.len() != n {
                    return Err(LpError::Dimension(format!(
                        "{kind} row {i} has {} coefficients, expected {n}",
                        row.coeffs.len()
                    )));
                }
                if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(LpError::NonFinite(format!("{kind} row {i}")));
                }
            }
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(LpError::InvalidBounds {
                    var: j,
                    lower: l,
                    upper: u,
                });
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest constraint or bound violation of `x`, with each row scaled to
    /// unit infinity norm.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let scaled = |row: &Constraint| {
            let norm = row.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            let act: f64 = row.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
            if norm > 0.0 {
                (act / norm, row.rhs / norm)
            } else {
                (act, row.rhs)
            }
        };
        let mut worst = 0.0_f64;
        for row in &self.equalities {
            let (act, rhs) = scaled(row);
            worst = worst.max((act - rhs).abs());
        }
        for row in &self.inequalities {
            let (act, rhs) = scaled(row);
            worst = worst.max(act - rhs);
        }
        for (j, v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome. `x` is empty unless the status is optimal; the objective
/// is `+inf` for infeasible and `-inf` for unbounded problems.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint, equalities first, in the sign
    /// convention `c - E^T y_E - G^T y_G` for reduced costs. Empty unless optimal.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub(crate) fn infeasible(iterations: usize) -> Self {
        Self {
            status: LpStatus::Infeasible,
            x: Vec::new(),
            objective: f64::INFINITY,
            duals: Vec::new(),
            iterations,
        }
    }

    pub(crate) fn unbounded(iterations: usize) -> Self {
        Self {
            status: LpStatus::Unbounded,
            x: Vec::new(),
            objective: f64::NEG_INFINITY,
            duals: Vec::new(),
            iterations,
        }
    }
}
