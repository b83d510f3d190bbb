//! Weighted hypercube instance: small μ but large ReLU loss in every direction.

use mukit::constructions::gen_weighted_hypercube;
use mukit::data::{standardize, ParamVector};
use mukit::error::Result;
use mukit::loss::relu_loss;
use mukit::mu_exact::compute_mu_exact_signed;
use mukit::rng::{self, Stream};

pub fn run_example() -> Result<Vec<(usize, f64, f64)>> {
    let mut out = Vec::new();
    for k in [2, 3, 4] {
        let h = gen_weighted_hypercube(k, 1)?;
        let mu = compute_mu_exact_signed(&standardize(&h.x, &h.y)?, 1.0)?.mu;
        let mut probe = rng::stream(1, Stream::Probe);
        let mut min_ratio = f64::INFINITY;
        for _ in 0..500 {
            let b = ParamVector::new(rng::unit_sphere(&mut probe, k))?;
            min_ratio = min_ratio.min(relu_loss(&h.x, &b)? / b.norm_l1());
        }
        println!("k={k}: {} rows, mu = {mu:.4}, min R/|beta|_1 = {min_ratio:.4}", h.x.nrows());
        out.push((k, mu, min_ratio));
    }
    Ok(out)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
