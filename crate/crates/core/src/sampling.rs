//! Counter-based randomness: sample `i` of a run with seed `s` always draws
//! from the same ChaCha stream, whatever thread evaluates it.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Unit vector with i.i.d. complex Gaussian entries.
pub fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                )
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
