//! Least negative mass over the l1 sphere three ways: branch-and-bound on
//! the big-M program, orthant enumeration and sign descent.

use mukit::data::DataMatrix;
use mukit::error::Result;
use mukit::mu_sketch::{min_neg_mass_descent, min_neg_mass_orthants, solve_min_neg_mass};
use mukit::rng::{self, Stream};

pub fn run_example() -> Result<[f64; 3]> {
    let mut g = rng::stream(5, Stream::Matrix);
    let data: Vec<f64> = (0..30 * 4).map(|_| rng::gaussian(&mut g)).collect();
    let u = DataMatrix::from_row_slice(30, 4, &data)?;

    let milp = solve_min_neg_mass(&u, 10_000)?;
    let orth = min_neg_mass_orthants(&u)?;
    let desc = min_neg_mass_descent(&u, 4, 5)?;
    println!("branch and bound: t = {:.10} ({} nodes)", milp.t, milp.nodes);
    println!("orthants:         t = {:.10} ({} LPs)", orth.t, orth.nodes);
    println!("descent:          t = {:.10} ({} LPs, not certified)", desc.t, desc.nodes);
    Ok([milp.t, orth.t, desc.t])
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
