//! Lower and upper μ bounds from a Cauchy sketch, next to the exact value.

use mukit::datagen::{gen_synthetic, SyntheticSpec};
use mukit::error::Result;
use mukit::mu_exact::compute_mu_exact;
use mukit::mu_sketch::{approx_mu_bounds, MuBounds, SketchConfig};

pub fn run_example() -> Result<(f64, Vec<MuBounds>)> {
    let (x, y, _) = gen_synthetic(&SyntheticSpec::new(1000, 6, 3))?;
    let exact = compute_mu_exact(&x, &y, 1.0)?.mu;
    println!("exact mu {exact:.3}");
    let mut all = Vec::new();
    for n_prime in [64, 128] {
        let b = approx_mu_bounds(&x, &y, &SketchConfig::new(n_prime, 0.1, 11))?;
        println!(
            "n'={n_prime:4}: lower {:10.3} upper {:10.3} (t={:.4}, certified {})",
            b.lower, b.upper, b.t, b.certified
        );
        all.push(b);
    }
    Ok((exact, all))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
