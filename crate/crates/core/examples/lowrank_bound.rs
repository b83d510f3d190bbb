//! Logistic loss under a truncated SVD, against the additive bound, plus the
//! scaled-identity instance where the bound is attained.

use mukit::data::ParamVector;
use mukit::datagen::{gen_synthetic, SyntheticSpec};
use mukit::error::Result;
use mukit::lowrank::{additive_bound, loss_gap, tightness_instance, truncated_svd};

pub fn run_example() -> Result<Vec<(usize, f64, f64)>> {
    let (x, _, _) = gen_synthetic(&SyntheticSpec::new(200, 8, 9))?;
    let beta = ParamVector::new(vec![0.5, -1.0, 0.25, 0.0, 1.5, -0.5, 0.75, 1.0])?;
    let mut rows = Vec::new();
    for r in [0, 2, 4, 6, 8] {
        let a = truncated_svd(&x, r)?;
        let gap = loss_gap(&x, &a.x_tilde, &beta)?;
        let bound = additive_bound(&x, &a.x_tilde, &beta)?;
        println!("rank {r}: ||X - X~||_2 = {:8.4}  gap {gap:10.4}  bound {bound:10.4}", a.spectral_error);
        rows.push((r, gap, bound));
    }
    for n in [1, 4, 16] {
        let t = tightness_instance(n, 30.0, 0.5)?;
        println!("scaled identity n={n}: gap / bound = {:.9}", t.ratio()?.unwrap_or(0.0));
    }
    Ok(rows)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
