//! Exact μ via a linear program over the range of `A`.
//!
//! With `z = A beta`, minimizing `1^T z = pos - neg` over `||z||_1 <= C` and
//! `z in range(A)` finds the direction with the most negative mass relative to
//! its total, and μ is the flipped ratio at that optimum.

use nalgebra::{DMatrix, DVector};

use crate::data::{standardize, DataMatrix, LabelVector, ParamVector, SignedData, SplitMasses};
use crate::error::{MuError, Result};
use crate::loss::split_masses;
use crate::lp::{LpProblem, LpStatus, SimplexSolver};

/// Relative singular-value cutoff used to decide the rank of `A`.
pub const RANK_TOL: f64 = 1e-10;
/// A side holding at most this fraction of the total mass counts as empty.
pub const SEP_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct MuResult {
    /// At least 1, possibly `f64::INFINITY`.
    pub mu: f64,
    /// Oriented so that `pos >= neg`.
    pub beta_star: ParamVector,
    pub masses: SplitMasses,
    pub budget: f64,
}

impl MuResult {
    pub fn is_finite(&self) -> bool {
        self.mu.is_finite()
    }
}

/// Orthonormal basis of the column space of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeBasis {
    pub q: DMatrix<f64>,
    pub rank: usize,
}

impl RangeBasis {
    /// `I - Q Q^T`.
    pub fn complement_projector(&self) -> DMatrix<f64> {
        let n = self.q.nrows();
        DMatrix::identity(n, n) - &self.q * self.q.transpose()
    }

    /// Orthonormal basis `N` of the orthogonal complement, so that
    /// `(I - QQ^T) z = 0` exactly when `N^T z = 0`.
    pub fn complement_basis(&self) -> DMatrix<f64> {
        let n = self.q.nrows();
        let mut full_t = DMatrix::identity(n, n);
        self.q.clone().qr().q_tr_mul(&mut full_t);
        full_t.rows(self.rank, n - self.rank).transpose()
    }
}

pub fn orthonormal_range_basis(a: &SignedData) -> Result<RangeBasis> {
    let m = a.matrix().as_matrix();
    if a.matrix().is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_TOL * smax)
        .collect();
    let q = DMatrix::from_columns(&keep.iter().map(|&i| u.column(i)).collect::<Vec<_>>());
    Ok(RangeBasis {
        rank: keep.len(),
        q,
    })
}

/// The program over `(z_+, z_-)`: minimize `1^T(z_+ - z_-)` subject to
/// `1^T(z_+ + z_-) <= C`, `(I - QQ^T)(z_+ - z_-) = 0` and `z_+, z_- >= 0`.
///
/// The range condition is written as `n - r` rows `N^T (z_+ - z_-) = 0`
/// rather than the `n` rows of the rank `n - r` projector: the projector
/// rows are linearly dependent and, once rounded, carry noise that row
/// scaling would blow up into spurious constraints.
pub fn build_mu_lp(a: &SignedData, budget: f64) -> Result<LpProblem> {
    check_budget(budget)?;
    let basis = orthonormal_range_basis(a)?;
    Ok(mu_lp_from_basis(&basis, budget))
}

fn mu_lp_from_basis(basis: &RangeBasis, budget: f64) -> LpProblem {
    let n = basis.q.nrows();
    let mut objective = vec![1.0; 2 * n];
    objective[n..].fill(-1.0);
    let mut lp = LpProblem::new(objective);
    lp.add_le(vec![1.0; 2 * n], budget);
    let comp = basis.complement_basis();
    for col in comp.column_iter() {
        let mut row = Vec::with_capacity(2 * n);
        row.extend(col.iter());
        row.extend(col.iter().map(|v| -v));
        lp.add_eq(row, 0.0);
    }
    lp
}

pub fn compute_mu_exact(x: &DataMatrix, y: &LabelVector, budget: f64) -> Result<MuResult> {
    compute_mu_exact_signed(&standardize(x, y)?, budget)
}

/// Exact μ of `A`.
///
/// Solves the dual of [`build_mu_lp`], which has one row per column of `A`:
///
/// ```text
/// max t  s.t.  A^T u + t A^T 1 = 0,  -1 <= u_i <= 1
/// ```
///
/// Its optimum `t*` gives the primal value `-C / t*`, and the row multipliers
/// are a direction `beta` with `A beta` proportional to the primal optimum `z*`.
/// [`compute_mu_exact_primal_signed`] solves the primal program directly.
pub fn compute_mu_exact_signed(a: &SignedData, budget: f64) -> Result<MuResult> {
    check_budget(budget)?;
    if a.matrix().is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    let (n, d) = (a.nrows(), a.ncols());
    let am = a.matrix().as_matrix();
    let ones_image: DVector<f64> = am.transpose() * DVector::from_element(n, 1.0);

    let mut objective = vec![0.0; n + 1];
    objective[n] = -1.0;
    let mut lp = LpProblem::new(objective);
    for i in 0..n {
        lp.set_bounds(i, -1.0, 1.0);
    }
    for j in 0..d {
        let mut row: Vec<f64> = am.column(j).iter().copied().collect();
        row.push(ones_image[j]);
        lp.add_eq(row, 0.0);
    }
    let sol = SimplexSolver::default().solve(&lp)?;
    match sol.status {
        // t can grow without limit only when A^T 1 = 0, i.e. every direction
        // has equal positive and negative mass.
        LpStatus::Unbounded => return balanced_result(a, budget),
        LpStatus::Infeasible => return Err(MuError::LpStatus(sol.status)),
        LpStatus::Optimal => {}
    }
    let t = sol.x[n];
    let beta = DVector::from_column_slice(&sol.duals[..d]);
    if beta.amax() == 0.0 {
        return balanced_result(a, budget);
    }
    let primal_value = -budget / t;
    finish(a, ParamVector::from_vector(beta)?, primal_value, budget)
}

/// Exact μ by solving [`build_mu_lp`] as stated. Quadratic in `n` per pivot,
/// so only suited to small inputs.
pub fn compute_mu_exact_primal_signed(a: &SignedData, budget: f64) -> Result<MuResult> {
    let lp = build_mu_lp(a, budget)?;
    let n = a.nrows();
    let sol = SimplexSolver::default().solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(MuError::LpStatus(sol.status));
    }
    let z: DVector<f64> = DVector::from_iterator(n, (0..n).map(|i| sol.x[i] - sol.x[n + i]));
    if z.amax() <= 1e-12 * budget {
        return balanced_result(a, budget);
    }
    let am = a.matrix().as_matrix();
    let svd = am.clone().svd(true, true);
    let tol = RANK_TOL * svd.singular_values.max();
    let beta = svd
        .solve(&z, tol)
        .map_err(|e| MuError::InvalidInput(format!("least-squares recovery failed: {e}")))?;
    finish(a, ParamVector::from_vector(beta)?, sol.objective, budget)
}

fn check_budget(budget: f64) -> Result<()> {
    if budget > 0.0 && budget.is_finite() {
        Ok(())
    } else {
        Err(MuError::InvalidInput(format!("budget must be positive, got {budget}")))
    }
}

/// μ = 1 with the top right singular vector as witness.
fn balanced_result(a: &SignedData, budget: f64) -> Result<MuResult> {
    let v = a
        .matrix()
        .as_matrix()
        .clone()
        .svd(false, true)
        .v_t
        .expect("right singular vectors requested");
    let beta = ParamVector::from_vector(v.row(0).transpose())?;
    let masses = split_masses(a.apply(&beta)?.as_slice());
    Ok(MuResult {
        mu: 1.0,
        beta_star: beta,
        masses,
        budget,
    })
}

/// Orients the witness and reads μ off its masses.
fn finish(a: &SignedData, mut beta: ParamVector, lp_value: f64, budget: f64) -> Result<MuResult> {
    let mut masses = split_masses(a.apply(&beta)?.as_slice());
    if masses.neg > masses.pos {
        beta = beta.scaled(-1.0);
        masses = masses.flipped();
    }
    let separable =
        masses.neg <= SEP_TOL * masses.total() || lp_value <= -budget + OPT_TOL * budget;
    let mu = if separable {
        f64::INFINITY
    } else {
        masses.pos / masses.neg
    };
    Ok(MuResult {
        mu,
        beta_star: beta,
        masses,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed(rows: &[&[f64]]) -> SignedData {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        SignedData::from_signed(DataMatrix::from_rows(&rows).unwrap())
    }

    #[test]
    fn basis_of_identity_and_vector() {
        let b = orthonormal_range_basis(&signed(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]])).unwrap();
        assert_eq!(b.rank, 3);
        assert!((&b.q * b.q.transpose() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-12);

        let b = orthonormal_range_basis(&signed(&[&[1.0], &[2.0]])).unwrap();
        assert_eq!(b.rank, 1);
        let s5 = 5.0_f64.sqrt();
        assert!((b.q[(0, 0)].abs() - 1.0 / s5).abs() < 1e-12);
        assert!((b.q[(1, 0)].abs() - 2.0 / s5).abs() < 1e-12);
        assert!(b.q[(0, 0)] * b.q[(1, 0)] > 0.0);
    }

    #[test]
    fn zero_matrix_rejected() {
        assert!(matches!(
            orthonormal_range_basis(&signed(&[&[0.0, 0.0]])),
            Err(MuError::ZeroMatrix)
        ));
    }

    #[test]
    fn lp_shape() {
        let lp = build_mu_lp(&signed(&[&[1.0], &[-1.0]]), 1.0).unwrap();
        assert_eq!(lp.num_vars(), 4);
        assert_eq!(lp.inequalities[0].coeffs, vec![1.0; 4]);
        assert_eq!(lp.inequalities[0].rhs, 1.0);
        assert!(lp.max_violation(&[0.0; 4]) == 0.0);
    }

    #[test]
    fn small_instances() {
        let x = DataMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let y = LabelVector::from_signs(&[1, -1]).unwrap();
        assert!((compute_mu_exact(&x, &y, 1.0).unwrap().mu - 1.0).abs() < 1e-12);

        let x = DataMatrix::from_rows(&[vec![2.0], vec![1.0]]).unwrap();
        assert!((compute_mu_exact(&x, &y, 1.0).unwrap().mu - 2.0).abs() < 1e-12);

        let x = DataMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        let y = LabelVector::from_signs(&[1, 1]).unwrap();
        assert_eq!(compute_mu_exact(&x, &y, 1.0).unwrap().mu, f64::INFINITY);
    }

    #[test]
    fn primal_and_dual_agree() {
        let a = signed(&[&[1.0, 2.0], &[-3.0, 1.0], &[0.5, -1.0], &[2.0, 2.0], &[-1.0, 0.0]]);
        let dual = compute_mu_exact_signed(&a, 1.0).unwrap();
        let primal = compute_mu_exact_primal_signed(&a, 1.0).unwrap();
        assert!((dual.mu - primal.mu).abs() < 1e-9 * dual.mu, "{} {}", dual.mu, primal.mu);
    }

    #[test]
    fn triangle_of_directions() {
        // Every vector in the range sums to zero, so both masses always agree.
        let a = signed(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -1.0]]);
        let r = compute_mu_exact_signed(&a, 1.0).unwrap();
        assert!((r.mu - 1.0).abs() < 1e-9);
        let m = split_masses(a.apply(&r.beta_star).unwrap().as_slice());
        assert!((m.pos / m.neg - r.mu).abs() < 1e-9);
    }
}
