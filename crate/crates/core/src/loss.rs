//! Logistic and ReLU losses and the positive/negative mass ratio.

use crate::data::{DataMatrix, LabelVector, ParamVector, SignedData, SplitMasses};
use crate::error::{MuError, Result};

/// Above this argument `log(1 + e^z)` is evaluated as `z + log(1 + e^-z)`.
const SHIFT_THRESHOLD: f64 = 30.0;

/// Overflow-safe `log(1 + e^z)`.
pub fn log1p_exp(z: f64) -> f64 {
    if z > SHIFT_THRESHOLD {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `sum_i log(1 + exp(-y_i x_i^T beta))`.
pub fn logistic_loss(x: &DataMatrix, y: &LabelVector, beta: &ParamVector) -> Result<f64> {
    if x.nrows() != y.len() {
        return Err(MuError::Dimension(format!(
            "{} rows against {} labels",
            x.nrows(),
            y.len()
        )));
    }
    let margins = x.mul_vec(beta)?;
    Ok(margins
        .iter()
        .zip(y.as_slice())
        .map(|(m, yi)| log1p_exp(-yi * m))
        .sum())
}

/// Logistic loss with every label equal to `-1`: `sum_i log(1 + exp(x_i^T beta))`.
pub fn logistic_loss_negative_labels(x: &DataMatrix, beta: &ParamVector) -> Result<f64> {
    Ok(x.mul_vec(beta)?.iter().map(|m| log1p_exp(*m)).sum())
}

/// `sum_i max(x_i^T beta, 0)`.
pub fn relu_loss(x: &DataMatrix, beta: &ParamVector) -> Result<f64> {
    Ok(x.mul_vec(beta)?.iter().map(|m| m.max(0.0)).sum())
}

pub fn split_masses(v: &[f64]) -> SplitMasses {
    let mut masses = SplitMasses { pos: 0.0, neg: 0.0 };
    for &x in v {
        if x > 0.0 {
            masses.pos += x;
        } else {
            masses.neg -= x;
        }
    }
    masses
}

/// Ratio of positive to negative mass of a split.
///
/// `Some(f64::INFINITY)` when only positive mass is present, `None` when both
/// masses vanish.
pub fn mass_ratio(m: SplitMasses) -> Option<f64> {
    match (m.pos > 0.0, m.neg > 0.0) {
        (_, true) => Some(m.pos / m.neg),
        (true, false) => Some(f64::INFINITY),
        (false, false) => None,
    }
}

/// `||(A beta)^+||_1 / ||(A beta)^-||_1`.
///
/// Returns `None` when `A beta = 0` (the ratio is undefined there) and
/// `Some(f64::INFINITY)` when the negative mass vanishes.
pub fn mu_ratio(a: &SignedData, beta: &ParamVector) -> Result<Option<f64>> {
    if beta.is_zero() {
        return Err(MuError::ZeroDirection);
    }
    let z = a.apply(beta)?;
    Ok(mass_ratio(split_masses(z.as_slice())))
}

/// The larger of `pos/neg` and `neg/pos`, i.e. the ratio after choosing the
/// better of `beta` and `-beta`.
pub fn oriented_ratio(m: SplitMasses) -> Option<f64> {
    let forward = mass_ratio(m)?;
    Some(if forward >= 1.0 { forward } else { 1.0 / forward })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DataMatrix {
        DataMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn beta(v: &[f64]) -> ParamVector {
        ParamVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn logistic_at_zero_is_n_log2() {
        let x = mat(&[&[1.0, 2.0], &[-3.0, 0.5], &[0.0, 1.0]]);
        let y = LabelVector::from_signs(&[1, -1, 1]).unwrap();
        let l = logistic_loss(&x, &y, &ParamVector::zeros(2)).unwrap();
        assert!((l - 3.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn logistic_scalar_values() {
        // Reference values from 40-digit evaluation.
        let y_neg = LabelVector::from_signs(&[-1]).unwrap();
        let l = logistic_loss(&mat(&[&[1.0]]), &y_neg, &beta(&[1.0])).unwrap();
        assert!((l - 1.313_261_687_518_222_8).abs() < 1e-15);

        let y_pos = LabelVector::from_signs(&[1]).unwrap();
        let l = logistic_loss(&mat(&[&[10.0]]), &y_pos, &beta(&[1.0])).unwrap();
        assert!((l / 4.539_889_921_686_464_7e-5 - 1.0).abs() < 1e-12);

        let l = logistic_loss(&mat(&[&[1000.0]]), &y_neg, &beta(&[1.0])).unwrap();
        assert_eq!(l, 1000.0);
        let l = logistic_loss(&mat(&[&[1000.0]]), &y_pos, &beta(&[1.0])).unwrap();
        assert!(l.is_finite() && l >= 0.0 && l < 1e-300);
    }

    #[test]
    fn log1p_exp_across_threshold() {
        assert!((log1p_exp(35.0) / 35.000_000_000_000_000_630_5 - 1.0).abs() < 1e-15);
        assert!((log1p_exp(-35.0) / 6.305_116_760_146_987e-16 - 1.0).abs() < 1e-12);
        assert!((log1p_exp(30.5) / 30.500_000_000_000_056_76 - 1.0).abs() < 1e-15);
        assert!(log1p_exp(1e6).is_finite());
    }

    #[test]
    fn relu_examples() {
        assert_eq!(relu_loss(&mat(&[&[1.0, 2.0]]), &ParamVector::zeros(2)).unwrap(), 0.0);
        let eye = mat(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(relu_loss(&eye, &beta(&[1.0, -1.0])).unwrap(), 1.0);
        assert_eq!(relu_loss(&mat(&[&[2.0], &[-3.0]]), &beta(&[1.0])).unwrap(), 2.0);
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_masses(&[1.0, -2.0, 0.0]), SplitMasses { pos: 1.0, neg: 2.0 });
        assert_eq!(split_masses(&[0.0, 0.0]), SplitMasses { pos: 0.0, neg: 0.0 });
    }

    #[test]
    fn mu_ratio_examples() {
        let a = |rows: &[&[f64]]| SignedData::from_signed(mat(rows));
        assert_eq!(mu_ratio(&a(&[&[1.0], &[-1.0]]), &beta(&[1.0])).unwrap(), Some(1.0));
        assert_eq!(mu_ratio(&a(&[&[2.0], &[-1.0]]), &beta(&[1.0])).unwrap(), Some(2.0));
        assert_eq!(
            mu_ratio(&a(&[&[1.0], &[2.0]]), &beta(&[1.0])).unwrap(),
            Some(f64::INFINITY)
        );
        assert_eq!(mu_ratio(&a(&[&[1.0, 0.0]]), &beta(&[0.0, 1.0])).unwrap(), None);
        assert!(matches!(
            mu_ratio(&a(&[&[1.0]]), &ParamVector::zeros(1)),
            Err(MuError::ZeroDirection)
        ));
    }
}
