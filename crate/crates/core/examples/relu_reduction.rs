//! Scaled logistic loss approaching the ReLU loss as the scale grows.

use mukit::constructions::check_reduction;
use mukit::data::{DataMatrix, ParamVector};
use mukit::error::Result;

pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let x = DataMatrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 0.5], vec![-1.0, 3.0], vec![2.0, 1.0]])?;
    let beta = ParamVector::new(vec![0.6, -0.4])?;
    let mut out = Vec::new();
    for t in [1.0, 10.0, 100.0, 1e3, 1e4] {
        let c = check_reduction(&x, &beta, t)?;
        println!("t={t:>7}: L(t beta)/t = {:.8}  R = {:.8}  error {:.2e} <= {:.2e}", c.approx, c.relu, c.error, c.bound);
        out.push((t, c.error, c.bound));
    }
    Ok(out)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
