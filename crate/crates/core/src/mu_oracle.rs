//! Brute-force μ for tiny instances, used to cross-check the LP.
//!
//! The ratio is maximized where `d - 1` independent rows of `A beta` vanish, so
//! the null directions of every small row subset cover the optimum. Coordinate
//! axes and seeded random probes are added as extra candidates.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::data::{standardize, DataMatrix, LabelVector, ParamVector, SignedData, SplitMasses};
use crate::error::{MuError, Result};
use crate::loss::split_masses;
use crate::mu_exact::{MuResult, SEP_TOL};
use crate::rng::{self, Stream};

pub const MAX_ROWS: usize = 12;
pub const MAX_COLS: usize = 4;
pub const RANDOM_PROBES: usize = 10_000;
const PROBE_SEED: u64 = 0x6d75;

pub fn mu_bruteforce(x: &DataMatrix, y: &LabelVector) -> Result<MuResult> {
    mu_bruteforce_signed(&standardize(x, y)?)
}

pub fn mu_bruteforce_signed(a: &SignedData) -> Result<MuResult> {
    let (n, d) = (a.nrows(), a.ncols());
    if n > MAX_ROWS || d > MAX_COLS {
        return Err(MuError::SizeGuard(format!(
            "brute force needs n <= {MAX_ROWS} and d <= {MAX_COLS}, got {n}x{d}"
        )));
    }
    if a.matrix().is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    let am = a.matrix().as_matrix();
    let scale = am.amax();

    let mut best: Option<(f64, DVector<f64>, SplitMasses)> = None;
    let mut consider = |beta: DVector<f64>| {
        let z = am * &beta;
        let masses = split_masses(z.as_slice());
        if masses.total() <= 1e-12 * scale * beta.amax() {
            return;
        }
        let (beta, masses) = if masses.neg > masses.pos {
            (-beta, masses.flipped())
        } else {
            (beta, masses)
        };
        let ratio = if masses.neg <= SEP_TOL * masses.total() {
            f64::INFINITY
        } else {
            masses.pos / masses.neg
        };
        if best.as_ref().is_none_or(|(r, _, _)| ratio > *r) {
            best = Some((ratio, beta, masses));
        }
    };

    for size in 0..d {
        for rows in (0..n).combinations(size) {
            let null = null_space(am, &rows, d);
            for v in null.column_iter() {
                consider(v.into_owned());
            }
            if null.ncols() > 1 {
                // When the rest of A sees this subspace through a single
                // direction, that direction is the only informative one.
                let image = am * &null;
                let g = SymmetricEigen::new(image.transpose() * &image);
                let (imax, _) = g.eigenvalues.argmax();
                consider(&null * g.eigenvectors.column(imax));
            }
        }
    }
    for j in 0..d {
        consider(DVector::from_fn(d, |i, _| if i == j { 1.0 } else { 0.0 }));
    }
    let mut rng = rng::stream(PROBE_SEED, Stream::Probe);
    for _ in 0..RANDOM_PROBES {
        consider(DVector::from_vec(rng::unit_sphere(&mut rng, d)));
    }

    let (mu, beta, masses) = best.ok_or(MuError::ZeroMatrix)?;
    Ok(MuResult {
        mu,
        beta_star: ParamVector::from_vector(beta)?,
        masses,
        budget: 1.0,
    })
}

/// Orthonormal basis of `{beta : A_S beta = 0}` for the row subset `S`.
fn null_space(a: &DMatrix<f64>, rows: &[usize], d: usize) -> DMatrix<f64> {
    if rows.is_empty() {
        return DMatrix::identity(d, d);
    }
    let sub = a.select_rows(rows);
    let gram = sub.transpose() * &sub;
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let cols: Vec<_> = (0..d)
        .filter(|&i| eig.eigenvalues[i].abs() <= 1e-12 * top)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed(rows: &[&[f64]]) -> SignedData {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        SignedData::from_signed(DataMatrix::from_rows(&rows).unwrap())
    }

    #[test]
    fn tiny_cases() {
        assert!((mu_bruteforce_signed(&signed(&[&[1.0], &[-1.0]])).unwrap().mu - 1.0).abs() < 1e-12);
        assert_eq!(
            mu_bruteforce_signed(&signed(&[&[1.0, 0.5], &[2.0, 1.0]])).unwrap().mu,
            f64::INFINITY
        );
    }

    #[test]
    fn vertex_direction_found() {
        // z = (b1, b2, -b1 - 3 b2); b = (3, -1) zeroes the last row and gives
        // masses 3 and 1.
        let r = mu_bruteforce_signed(&signed(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, -3.0]])).unwrap();
        assert!((r.mu - 3.0).abs() < 1e-12, "{}", r.mu);
    }

    #[test]
    fn size_guard() {
        let rows: Vec<Vec<f64>> = (0..13).map(|i| vec![i as f64 - 6.0]).collect();
        let a = SignedData::from_signed(DataMatrix::from_rows(&rows).unwrap());
        assert!(matches!(mu_bruteforce_signed(&a), Err(MuError::SizeGuard(_))));
    }
}
