//! Storing a bit string in a data set and reading bits back through the
//! ReLU loss, with an exact and a noisy oracle.

use mukit::constructions::{decision_threshold, query_bit};
use mukit::error::Result;
use mukit::loss::relu_loss;
use mukit::verify::{index_instance, perturbed_relu_oracle};

pub fn run_example() -> Result<usize> {
    let n = 128;
    let inst = index_instance(n, 4)?;
    println!("n={n}: {}x{} matrix, mu weight {:.5}, threshold {:.1}", inst.x.nrows(), inst.x.ncols(), inst.mu_weight, decision_threshold(n));
    let mut noisy = perturbed_relu_oracle(&inst.x, 4);
    let mut correct = 0;
    for i in 0..16 {
        let exact = query_bit(&inst, i, |b| relu_loss(&inst.x, b).unwrap_or(f64::NAN))?;
        let perturbed = query_bit(&inst, i, &mut noisy)?;
        println!(
            "bit {i:2}: planted {} loss {:9.2} exact {} perturbed {}",
            u8::from(inst.bits[i]),
            inst.relu_at_query(i)?,
            u8::from(exact),
            u8::from(perturbed)
        );
        correct += usize::from(exact == inst.bits[i] && perturbed == inst.bits[i]);
    }
    println!("{correct}/16 bits recovered by both oracles");
    Ok(correct)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
