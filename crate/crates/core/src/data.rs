//! Dense data containers shared by every other module.
//!
//! All types validate on construction and are immutable afterwards.

use nalgebra::{DMatrix, DVector};

use crate::error::{MuError, Result};

/// Dense `n x d` real matrix with `n, d >= 1` and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(DMatrix<f64>);

impl DataMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(MuError::InvalidInput(format!(
                "matrix must be non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if let Some(v) = m.iter().find(|v| !v.is_finite()) {
            return Err(MuError::InvalidInput(format!("non-finite matrix entry {v}")));
        }
        Ok(Self(m))
    }

    /// Builds from row-major data.
    pub fn from_row_slice(nrows: usize, ncols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(MuError::Dimension(format!(
                "{} values for a {nrows}x{ncols} matrix",
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(nrows, ncols, data))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(MuError::Dimension("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(rows.len(), d, &flat)
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.0.row(i).iter().copied().collect()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// `X * beta`.
    pub fn mul_vec(&self, beta: &ParamVector) -> Result<DVector<f64>> {
        if beta.len() != self.ncols() {
            return Err(MuError::Dimension(format!(
                "parameter of length {} against {} columns",
                beta.len(),
                self.ncols()
            )));
        }
        Ok(&self.0 * beta.as_vector())
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for i in 0..self.nrows() {
            out.extend(self.0.row(i).iter());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == 0.0)
    }
}

/// Labels in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVector(Vec<f64>);

impl LabelVector {
    pub fn new(labels: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(MuError::InvalidInput("empty label vector".into()));
        }
        if let Some(v) = labels.iter().find(|v| **v != 1.0 && **v != -1.0) {
            return Err(MuError::InvalidInput(format!("label {v} is not +1 or -1")));
        }
        Ok(Self(labels))
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        Self::new(signs.iter().map(|&s| f64::from(s)).collect())
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn positives(&self) -> usize {
        self.0.iter().filter(|v| **v > 0.0).count()
    }
}

/// The matrix `A = D_y X`: row `i` is `y_i` times row `i` of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedData {
    a: DataMatrix,
}

impl SignedData {
    /// Wraps a matrix that is already in signed form (labels all `+1`).
    pub fn from_signed(a: DataMatrix) -> Self {
        Self { a }
    }

    pub fn matrix(&self) -> &DataMatrix {
        &self.a
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    /// `A beta`.
    pub fn apply(&self, beta: &ParamVector) -> Result<DVector<f64>> {
        self.a.mul_vec(beta)
    }

    /// `-A`, the all-labels-negative loss form.
    pub fn negated(&self) -> DataMatrix {
        DataMatrix(-self.a.as_matrix())
    }
}

/// Forms `A = D_y X`.
pub fn standardize(x: &DataMatrix, y: &LabelVector) -> Result<SignedData> {
    if x.nrows() != y.len() {
        return Err(MuError::Dimension(format!(
            "{} rows against {} labels",
            x.nrows(),
            y.len()
        )));
    }
    let mut a = x.as_matrix().clone();
    for (i, &yi) in y.as_slice().iter().enumerate() {
        if yi < 0.0 {
            a.row_mut(i).neg_mut();
        }
    }
    Ok(SignedData { a: DataMatrix(a) })
}

/// Finite parameter vector `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(DVector<f64>);

impl ParamVector {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.is_empty() {
            return Err(MuError::InvalidInput("empty parameter vector".into()));
        }
        if let Some(x) = v.iter().find(|x| !x.is_finite()) {
            return Err(MuError::InvalidInput(format!("non-finite parameter {x}")));
        }
        Ok(Self(DVector::from_vec(v)))
    }

    pub fn from_vector(v: DVector<f64>) -> Result<Self> {
        Self::new(v.iter().copied().collect())
    }

    pub fn zeros(d: usize) -> Self {
        Self(DVector::zeros(d))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(&self.0 * c)
    }

    pub fn norm_l1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.0.norm()
    }
}

/// ℓ1 mass of the positive and the negative entries of a vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitMasses {
    pub pos: f64,
    pub neg: f64,
}

impl SplitMasses {
    pub fn total(&self) -> f64 {
        self.pos + self.neg
    }

    /// The same masses for the negated vector.
    pub fn flipped(&self) -> Self {
        Self {
            pos: self.neg,
            neg: self.pos,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardize_flips_negative_rows() {
        let x = DataMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let y = LabelVector::from_signs(&[1, -1]).unwrap();
        let a = standardize(&x, &y).unwrap();
        assert_eq!(a.matrix().to_row_major(), vec![1.0, -1.0]);
    }

    #[test]
    fn standardize_with_positive_labels_is_identity() {
        let x = DataMatrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 0.5]]).unwrap();
        let ones = LabelVector::constant(2, 1.0).unwrap();
        let a = standardize(&x, &ones).unwrap();
        assert_eq!(a.matrix(), &x);

        let y = LabelVector::from_signs(&[-1, 1]).unwrap();
        let once = standardize(&x, &y).unwrap();
        let twice = standardize(once.matrix(), &ones).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn standardize_rejects_mismatch() {
        let x = DataMatrix::from_rows(&[vec![1.0]]).unwrap();
        let y = LabelVector::from_signs(&[1, 1]).unwrap();
        assert!(matches!(standardize(&x, &y), Err(MuError::Dimension(_))));
    }

    #[test]
    fn constructors_validate() {
        assert!(LabelVector::new(vec![1.0, 0.0]).is_err());
        assert!(DataMatrix::from_rows(&[vec![f64::NAN]]).is_err());
        assert!(DataMatrix::from_rows(&[]).is_err());
        assert!(ParamVector::new(vec![f64::INFINITY]).is_err());
    }
}
