//! Spectral low-rank approximations and the additive logistic-loss bound
//! `|L(beta; X) - L(beta; X~)| <= sqrt(n) ||X - X~||_2 ||beta||_2`.
//!
//! Losses here use all labels `-1`, i.e. `L = sum_i log(1 + exp(x_i^T beta))`.

use nalgebra::DMatrix;

use crate::data::{DataMatrix, ParamVector};
use crate::error::{MuError, Result};
use crate::loss::logistic_loss_negative_labels;

#[derive(Debug, Clone, PartialEq)]
pub struct LowRankApprox {
    pub x_tilde: DataMatrix,
    pub rank: usize,
    /// `||X - X~||_2`.
    pub spectral_error: f64,
    /// All singular values of `X`, descending.
    pub singular_values: Vec<f64>,
}

fn singular_values_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values_desc(m).first().copied().unwrap_or(0.0)
}

/// Best rank-`r` approximation in spectral norm.
pub fn truncated_svd(x: &DataMatrix, r: usize) -> Result<LowRankApprox> {
    let xm = x.as_matrix();
    let k = xm.nrows().min(xm.ncols());
    if r > k {
        return Err(MuError::InvalidInput(format!("rank {r} exceeds min(n, d) = {k}")));
    }
    let svd = xm.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut approx = DMatrix::zeros(xm.nrows(), xm.ncols());
    for &i in &order[..r] {
        approx += svd.singular_values[i] * u.column(i) * vt.row(i);
    }
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let spectral_error = singular_values.get(r).copied().unwrap_or(0.0);
    Ok(LowRankApprox {
        x_tilde: DataMatrix::new(approx)?,
        rank: r,
        spectral_error,
        singular_values,
    })
}

fn check_shapes(x: &DataMatrix, x_tilde: &DataMatrix, beta: &ParamVector) -> Result<()> {
    if x.nrows() != x_tilde.nrows() || x.ncols() != x_tilde.ncols() {
        return Err(MuError::Dimension(format!(
            "{}x{} against {}x{}",
            x.nrows(),
            x.ncols(),
            x_tilde.nrows(),
            x_tilde.ncols()
        )));
    }
    if beta.len() != x.ncols() {
        return Err(MuError::Dimension(format!("beta has {} entries, d = {}", beta.len(), x.ncols())));
    }
    Ok(())
}

/// `sqrt(n) ||X - X~||_2 ||beta||_2`.
pub fn additive_bound(x: &DataMatrix, x_tilde: &DataMatrix, beta: &ParamVector) -> Result<f64> {
    check_shapes(x, x_tilde, beta)?;
    let diff = x.as_matrix() - x_tilde.as_matrix();
    Ok((x.nrows() as f64).sqrt() * spectral_norm(&diff) * beta.norm_l2())
}

/// Measured `|L(beta; X) - L(beta; X~)|`.
pub fn loss_gap(x: &DataMatrix, x_tilde: &DataMatrix, beta: &ParamVector) -> Result<f64> {
    check_shapes(x, x_tilde, beta)?;
    Ok((logistic_loss_negative_labels(x, beta)? - logistic_loss_negative_labels(x_tilde, beta)?).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightnessInstance {
    pub x: DataMatrix,
    pub x_tilde: DataMatrix,
    pub beta: ParamVector,
    pub s: f64,
}

impl TightnessInstance {
    /// `|Delta L| / (s n)`. The bound equals `s n` here since
    /// `||X - X~||_2 = s` and `||1_n||_2 = sqrt(n)`. `None` when `s = 0`.
    pub fn ratio(&self) -> Result<Option<f64>> {
        let gap = loss_gap(&self.x, &self.x_tilde, &self.beta)?;
        let denom = self.s * self.x.nrows() as f64;
        Ok((denom > 0.0).then(|| gap / denom))
    }
}

/// `X = x I_n`, `X~ = (x + s) I_n`, `beta = 1_n`.
pub fn tightness_instance(n: usize, x: f64, s: f64) -> Result<TightnessInstance> {
    if n == 0 {
        return Err(MuError::InvalidInput("n must be positive".into()));
    }
    if !(s >= 0.0 && s.is_finite() && x.is_finite()) {
        return Err(MuError::InvalidInput(format!("need finite x and s >= 0, got x={x}, s={s}")));
    }
    Ok(TightnessInstance {
        x: DataMatrix::new(DMatrix::identity(n, n) * x)?,
        x_tilde: DataMatrix::new(DMatrix::identity(n, n) * (x + s))?,
        beta: ParamVector::new(vec![1.0; n])?,
        s,
    })
}
