//! Exact μ of a noisy synthetic data set, and of a separable one.

use mukit::data::{DataMatrix, LabelVector};
use mukit::datagen::{gen_synthetic, SyntheticSpec};
use mukit::error::Result;
use mukit::mu_exact::compute_mu_exact;

pub fn run_example() -> Result<(f64, f64)> {
    let (x, y, beta) = gen_synthetic(&SyntheticSpec::new(500, 5, 42))?;
    let noisy = compute_mu_exact(&x, &y, 1.0)?;
    println!("n=500 d=5: mu = {:.4}", noisy.mu);
    println!("  planted beta  {:?}", beta.as_slice());
    println!("  worst-case beta {:?}", noisy.beta_star.as_slice());

    // Labels equal to the sign of the first feature: separable.
    let x_sep = DataMatrix::from_rows(&[vec![1.0, 0.3], vec![2.0, -1.0], vec![-1.0, 0.5], vec![-0.5, -0.2]])?;
    let y_sep = LabelVector::new(vec![1.0, 1.0, -1.0, -1.0])?;
    let sep = compute_mu_exact(&x_sep, &y_sep, 1.0)?;
    println!("separable toy: mu = {}", sep.mu);
    Ok((noisy.mu, sep.mu))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
