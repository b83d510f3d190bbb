//! Lower-bound instances and the checks that go with them: the logistic to
//! ReLU rescaling, the weighted hypercube, near-orthogonal sign matrices, the
//! INDEX encoding with its bit queries, and block-diagonal composition.
//!
//! In the INDEX encoding `log` is base 2, so `k' = log^4(n/2)` is an integer
//! for `n` a power of two. The near-orthogonal default threshold uses the
//! natural log.

use nalgebra::DMatrix;
use rand::Rng;

use crate::data::{DataMatrix, LabelVector, ParamVector};
use crate::error::{MuError, Result};
use crate::loss::{logistic_loss_negative_labels, relu_loss};
use crate::rng::{self, Stream};

pub const MAX_HYPERCUBE_K: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionConfig {
    pub t: f64,
    pub n: usize,
    pub epsilon: f64,
    pub r_min: f64,
}

impl ReductionConfig {
    /// `t = n / (epsilon * r_min)`.
    pub fn new(n: usize, epsilon: f64, r_min: f64) -> Result<Self> {
        if !(epsilon > 0.0 && r_min > 0.0) {
            return Err(MuError::InvalidInput(format!(
                "epsilon and r_min must be positive, got {epsilon} and {r_min}"
            )));
        }
        Ok(Self {
            t: n as f64 / (epsilon * r_min),
            n,
            epsilon,
            r_min,
        })
    }

    /// A fixed scale; `epsilon` is then the implied `n / (t r_min)` with `r_min = 1`.
    pub fn with_scale(n: usize, t: f64) -> Self {
        Self {
            t,
            n,
            epsilon: n as f64 / t,
            r_min: 1.0,
        }
    }

    /// `n / t`.
    pub fn error_bound(&self) -> f64 {
        self.n as f64 / self.t
    }
}

/// `L(t beta) / t`, given the logistic loss already evaluated at `t beta`.
pub fn relu_from_logistic(logistic_value_at_t_beta: f64, cfg: &ReductionConfig) -> Result<f64> {
    if !(cfg.t > 0.0) {
        return Err(MuError::InvalidInput(format!("scale t must be positive, got {}", cfg.t)));
    }
    Ok(logistic_value_at_t_beta / cfg.t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionCheck {
    pub approx: f64,
    pub relu: f64,
    pub error: f64,
    pub bound: f64,
}

impl ReductionCheck {
    pub fn holds(&self) -> bool {
        self.error <= self.bound
    }
}

/// Evaluates both sides of `|L(t beta)/t - R(beta)| <= n/t` with all labels `-1`.
pub fn check_reduction(x: &DataMatrix, beta: &ParamVector, t: f64) -> Result<ReductionCheck> {
    let cfg = ReductionConfig::with_scale(x.nrows(), t);
    let approx = relu_from_logistic(logistic_loss_negative_labels(x, &beta.scaled(t))?, &cfg)?;
    let relu = relu_loss(x, beta)?;
    Ok(ReductionCheck {
        approx,
        relu,
        error: (approx - relu).abs(),
        bound: cfg.error_bound(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeInstance {
    pub k: usize,
    /// Row `p` is `weights[p]` times the sign vector whose entry `j` is
    /// `-1` exactly when bit `j` of `p` is set.
    pub x: DataMatrix,
    pub weights: Vec<f64>,
    pub y: LabelVector,
}

/// All `2^k` sign vectors, each scaled by a weight uniform in `[2 sqrt k, 8 sqrt k]`.
pub fn gen_weighted_hypercube(k: usize, seed: u64) -> Result<HypercubeInstance> {
    if k == 0 || k > MAX_HYPERCUBE_K {
        return Err(MuError::SizeGuard(format!("hypercube dimension {k} not in 1..={MAX_HYPERCUBE_K}")));
    }
    let rows = 1usize << k;
    let root = (k as f64).sqrt();
    let mut rng = rng::stream(seed, Stream::Weights);
    let weights: Vec<f64> = (0..rows).map(|_| rng.gen_range(2.0 * root..=8.0 * root)).collect();
    let mut data = Vec::with_capacity(rows * k);
    for (p, w) in weights.iter().enumerate() {
        data.extend((0..k).map(|j| if p >> j & 1 == 1 { -w } else { *w }));
    }
    Ok(HypercubeInstance {
        k,
        x: DataMatrix::from_row_slice(rows, k, &data)?,
        weights,
        y: LabelVector::constant(rows, -1.0)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearOrthogonalMatrix {
    /// `n x k`, entries `+-1`.
    pub m: DMatrix<f64>,
    pub tau: f64,
    /// Measured `max_{i != j} |<M_i, M_j>|`.
    pub max_inner: f64,
    /// Samples drawn, including the accepted one.
    pub attempts: usize,
}

/// `4 sqrt(k ln n)`.
pub fn default_tau(n: usize, k: usize) -> f64 {
    4.0 * (k as f64 * (n as f64).ln()).sqrt()
}

pub fn max_offdiag_inner(m: &DMatrix<f64>) -> f64 {
    let gram = m * m.transpose();
    let mut worst = 0.0_f64;
    for i in 0..gram.nrows() {
        for j in (i + 1)..gram.ncols() {
            worst = worst.max(gram[(i, j)].abs());
        }
    }
    worst
}

/// Rejection-samples `+-1` matrices until every pair of distinct rows has
/// `|<M_i, M_j>| <= tau`.
pub fn gen_near_orthogonal(n: usize, k: usize, tau: f64, seed: u64, max_retries: usize) -> Result<NearOrthogonalMatrix> {
    if n < 2 || k < 1 {
        return Err(MuError::InvalidInput(format!("need n >= 2 and k >= 1, got n={n}, k={k}")));
    }
    let mut rng = rng::stream(seed, Stream::Signs);
    let mut best = f64::INFINITY;
    for attempt in 1..=max_retries.max(1) {
        let m = DMatrix::from_fn(n, k, |_, _| rng::rademacher(&mut rng));
        let worst = max_offdiag_inner(&m);
        if worst <= tau {
            return Ok(NearOrthogonalMatrix {
                m,
                tau,
                max_inner: worst,
                attempts: attempt,
            });
        }
        best = best.min(worst);
    }
    Err(MuError::RetriesExhausted {
        retries: max_retries.max(1),
        best,
        threshold: tau,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexInstance {
    pub n: usize,
    pub k_prime: usize,
    pub bits: Vec<bool>,
    /// Row `i` of `M`, halved when `bits[i]` is false.
    pub m_tilde: DMatrix<f64>,
    pub mu_weight: f64,
    /// `[M~, 1; -mu M~, -mu 1]`; row `i` pairs with row `n/2 + i`.
    pub x: DataMatrix,
}

pub fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

/// `log^2 n / (2^6 n)`.
pub fn default_mu_weight(n: usize) -> f64 {
    log2(n).powi(2) / (64.0 * n as f64)
}

/// `log^4(n/2)` columns, the size the encoding is designed for.
pub fn design_k_prime(n: usize) -> usize {
    log2(n / 2).powi(4).round() as usize
}

/// `(3/4) log^4(n/2)`.
pub fn decision_threshold(n: usize) -> f64 {
    0.75 * log2(n / 2).powi(4)
}

pub fn build_index_encoding(bits: &[bool], mu_weight: f64, m: &NearOrthogonalMatrix) -> Result<IndexInstance> {
    let half = bits.len();
    let n = 2 * half;
    if half == 0 || !n.is_power_of_two() {
        return Err(MuError::InvalidInput(format!("n = {n} must be a positive power of two")));
    }
    if m.m.nrows() != half {
        return Err(MuError::Dimension(format!("M has {} rows, need n/2 = {half}", m.m.nrows())));
    }
    if !(mu_weight > 0.0 && mu_weight.is_finite()) {
        return Err(MuError::InvalidInput(format!("mu_weight must be positive, got {mu_weight}")));
    }
    let k = m.m.ncols();
    let mut m_tilde = m.m.clone();
    for (i, &b) in bits.iter().enumerate() {
        if !b {
            m_tilde.row_mut(i).scale_mut(0.5);
        }
    }
    let mut x = DMatrix::zeros(n, k + 1);
    x.view_mut((0, 0), (half, k)).copy_from(&m_tilde);
    x.view_mut((half, 0), (half, k)).copy_from(&(-mu_weight * &m_tilde));
    for i in 0..half {
        x[(i, k)] = 1.0;
        x[(half + i, k)] = -mu_weight;
    }
    Ok(IndexInstance {
        n,
        k_prime: k,
        bits: bits.to_vec(),
        m_tilde,
        mu_weight,
        x: DataMatrix::new(x)?,
    })
}

/// Random bits from the `Bits` stream.
pub fn random_bits(count: usize, seed: u64) -> Vec<bool> {
    let mut rng = rng::stream(seed, Stream::Bits);
    (0..count).map(|_| rng.gen::<bool>()).collect()
}

impl IndexInstance {
    /// `[M~_i, -4 log^2 n]`.
    pub fn query_vector(&self, i: usize) -> Result<ParamVector> {
        if i >= self.n / 2 {
            return Err(MuError::InvalidInput(format!("bit index {i} out of range 0..{}", self.n / 2)));
        }
        let mut v: Vec<f64> = self.m_tilde.row(i).iter().copied().collect();
        v.push(-4.0 * log2(self.n).powi(2));
        ParamVector::new(v)
    }

    pub fn relu_at_query(&self, i: usize) -> Result<f64> {
        relu_loss(&self.x, &self.query_vector(i)?)
    }
}

/// Bit `i` from a ReLU oracle, using threshold `(3/4) log^4(n/2)`.
pub fn query_bit(inst: &IndexInstance, i: usize, relu_oracle: impl FnMut(&ParamVector) -> f64) -> Result<bool> {
    query_bit_with_threshold(inst, i, decision_threshold(inst.n), relu_oracle)
}

pub fn query_bit_with_threshold(
    inst: &IndexInstance,
    i: usize,
    threshold: f64,
    mut relu_oracle: impl FnMut(&ParamVector) -> f64,
) -> Result<bool> {
    let beta = inst.query_vector(i)?;
    Ok(relu_oracle(&beta) > threshold)
}

/// Largest `X_j beta` over rows `j != i` for the query of bit `i`, split by
/// the three cases of the argument: other top rows, other bottom rows, and
/// the paired bottom row `n/2 + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseReport {
    pub top_rows: f64,
    pub bottom_rows: f64,
    pub paired_row: f64,
    /// `8 mu log^2 n`.
    pub limit: f64,
}

impl CaseReport {
    pub fn holds(&self) -> bool {
        self.top_rows < self.limit && self.bottom_rows < self.limit && self.paired_row < self.limit
    }
}

pub fn case_analysis(inst: &IndexInstance, i: usize) -> Result<CaseReport> {
    let beta = inst.query_vector(i)?;
    let z = inst.x.mul_vec(&beta)?;
    let half = inst.n / 2;
    let max_over = |rows: &mut dyn Iterator<Item = usize>| rows.map(|j| z[j]).fold(f64::NEG_INFINITY, f64::max);
    Ok(CaseReport {
        top_rows: max_over(&mut (0..half).filter(|&j| j != i)),
        bottom_rows: max_over(&mut (half..inst.n).filter(|&j| j != half + i)),
        paired_row: z[half + i],
        limit: 8.0 * inst.mu_weight * log2(inst.n).powi(2),
    })
}

/// Stacks the parts block-diagonally and concatenates their labels.
pub fn block_diagonal(parts: &[(DataMatrix, LabelVector)]) -> Result<(DataMatrix, LabelVector)> {
    if parts.is_empty() {
        return Err(MuError::InvalidInput("no blocks".into()));
    }
    for (x, y) in parts {
        if x.nrows() != y.len() {
            return Err(MuError::Dimension(format!("block has {} rows and {} labels", x.nrows(), y.len())));
        }
    }
    let n: usize = parts.iter().map(|(x, _)| x.nrows()).sum();
    let d: usize = parts.iter().map(|(x, _)| x.ncols()).sum();
    let mut out = DMatrix::zeros(n, d);
    let mut labels = Vec::with_capacity(n);
    let (mut r, mut c) = (0, 0);
    for (x, y) in parts {
        out.view_mut((r, c), (x.nrows(), x.ncols())).copy_from(x.as_matrix());
        labels.extend_from_slice(y.as_slice());
        r += x.nrows();
        c += x.ncols();
    }
    Ok((DataMatrix::new(out)?, LabelVector::new(labels)?))
}

/// Places `beta` in the coordinates of block `j`, zero elsewhere.
pub fn embed_block(block_cols: &[usize], j: usize, beta: &ParamVector) -> Result<ParamVector> {
    if j >= block_cols.len() || block_cols[j] != beta.len() {
        return Err(MuError::Dimension(format!("block {j} does not take {} coordinates", beta.len())));
    }
    let offset: usize = block_cols[..j].iter().sum();
    let mut v = vec![0.0; block_cols.iter().sum()];
    v[offset..offset + beta.len()].copy_from_slice(beta.as_slice());
    ParamVector::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_scalar() {
        let x = DataMatrix::from_rows(&[vec![1.0]]).unwrap();
        let c = check_reduction(&x, &ParamVector::new(vec![1.0]).unwrap(), 50.0).unwrap();
        assert!(c.holds() && c.error <= 1e-15);
        let z = check_reduction(&x, &ParamVector::new(vec![0.0]).unwrap(), 50.0).unwrap();
        assert!((z.error - 2f64.ln() / 50.0).abs() < 1e-15);
        assert!(relu_from_logistic(1.0, &ReductionConfig::with_scale(1, 0.0)).is_err());
    }

    #[test]
    fn hypercube_layout() {
        let h = gen_weighted_hypercube(2, 0).unwrap();
        assert_eq!(h.x.nrows(), 4);
        let mut patterns: Vec<Vec<i32>> = (0..4)
            .map(|p| h.x.row(p).iter().map(|v| v.signum() as i32).collect())
            .collect();
        patterns.sort();
        patterns.dedup();
        assert_eq!(patterns.len(), 4);
        for (p, w) in h.weights.iter().enumerate() {
            assert!(*w >= 2.0 * 2f64.sqrt() && *w <= 8.0 * 2f64.sqrt());
            assert!(h.x.row(p).iter().all(|v| (v.abs() - w).abs() < 1e-15));
        }
        assert!(gen_weighted_hypercube(15, 0).is_err());
    }

    #[test]
    fn near_orthogonal_edges() {
        assert!(matches!(
            gen_near_orthogonal(2, 1, 0.0, 0, 3),
            Err(MuError::RetriesExhausted { retries: 3, .. })
        ));
        let m = gen_near_orthogonal(4, 64, default_tau(4, 64), 1, 3).unwrap();
        assert!(m.max_inner <= m.tau);
        assert!((default_tau(4, 64) - 37.677).abs() < 1e-3);
    }

    #[test]
    fn encoding_identities() {
        let m = gen_near_orthogonal(8, 16, 16.0, 2, 1).unwrap();
        let ones = build_index_encoding(&[true; 8], 0.1, &m).unwrap();
        assert_eq!(ones.m_tilde, m.m);
        let bits = random_bits(8, 4);
        let inst = build_index_encoding(&bits, 0.1, &m).unwrap();
        assert_eq!((inst.x.nrows(), inst.x.ncols()), (16, 17));
        for i in 0..8 {
            let top = inst.x.row(i);
            let bottom = inst.x.row(8 + i);
            assert!(top.iter().zip(&bottom).all(|(t, b)| (b + 0.1 * t).abs() < 1e-15));
        }
        assert!(build_index_encoding(&[true; 3], 0.1, &m).is_err());
    }

    #[test]
    fn blocks() {
        let a = (DataMatrix::from_rows(&[vec![2.0]]).unwrap(), LabelVector::constant(1, 1.0).unwrap());
        let b = (DataMatrix::from_rows(&[vec![5.0]]).unwrap(), LabelVector::constant(1, -1.0).unwrap());
        let (x, y) = block_diagonal(&[a, b]).unwrap();
        assert_eq!(x.as_matrix(), &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 5.0]));
        assert_eq!(y.as_slice(), &[1.0, -1.0]);
        let e = embed_block(&[1, 1], 1, &ParamVector::new(vec![3.0]).unwrap()).unwrap();
        assert_eq!(e.as_slice(), &[0.0, 3.0]);
    }
}
