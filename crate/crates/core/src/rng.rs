//! Seeded random streams.
//!
//! Every generator is ChaCha8 keyed by the user seed, with a distinct stream
//! id per purpose so that, say, drawing more noise never shifts the matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Matrix = 1,
    Beta = 2,
    Noise = 3,
    Subsample = 4,
    Sketch = 5,
    Weights = 6,
    Signs = 7,
    Probe = 8,
    Bits = 9,
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

/// Standard normal draw by the Marsaglia polar method.
///
/// Only one of the two values produced per accepted pair is used, so a draw
/// consumes a data-independent number of uniforms per rejection round.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Standard Cauchy draw as a ratio of independent normals.
pub fn cauchy<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let num = gaussian(rng);
        let den = gaussian(rng);
        if den != 0.0 {
            return num / den;
        }
    }
}

/// Uniform point on the unit sphere in `R^d`.
pub fn unit_sphere<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn rademacher<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}
