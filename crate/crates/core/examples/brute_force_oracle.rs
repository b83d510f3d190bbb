//! Cross-check of the LP against brute-force enumeration on a tiny instance.

use mukit::data::{DataMatrix, LabelVector};
use mukit::error::Result;
use mukit::mu_exact::compute_mu_exact;
use mukit::mu_oracle::mu_bruteforce;

pub fn run_example() -> Result<(f64, f64)> {
    let x = DataMatrix::from_rows(&[
        vec![1.0, 2.0],
        vec![-3.0, 1.0],
        vec![2.0, -2.0],
        vec![0.0, 4.0],
        vec![-1.0, -1.0],
    ])?;
    let y = LabelVector::new(vec![1.0, -1.0, 1.0, -1.0, 1.0])?;
    let lp = compute_mu_exact(&x, &y, 1.0)?.mu;
    let bf = mu_bruteforce(&x, &y)?.mu;
    println!("linear program: {lp:.12}");
    println!("brute force:    {bf:.12}");
    Ok((lp, bf))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
