//! Direct use of the bounded simplex solver.
//!
//! max 3a + 2b  s.t.  a + b <= 4,  a + 3b <= 6,  0 <= a <= 3,  b >= 0.

use mukit::lp::{solve_lp, LpError, LpProblem};

pub fn run_example() -> Result<(f64, Vec<f64>), LpError> {
    let mut lp = LpProblem::new(vec![-3.0, -2.0]);
    lp.add_le(vec![1.0, 1.0], 4.0).add_le(vec![1.0, 3.0], 6.0).set_bounds(0, 0.0, 3.0);
    let sol = solve_lp(&lp)?;
    println!("status {:?} after {} iterations", sol.status, sol.iterations);
    println!("x = {:?}, max = {}", sol.x, -sol.objective);
    println!("row duals {:?}", sol.duals);
    Ok((-sol.objective, sol.x))
}

fn main() -> Result<(), LpError> {
    run_example().map(|_| ())
}
