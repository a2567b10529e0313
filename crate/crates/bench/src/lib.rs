//! Fixtures shared by the benchmarks.

use evpos::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense real matrix with entries uniform in `[-1, 1]`, shifted so its
/// diagonal dominates.
pub fn random_matrix(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_real_fn(n, |i, j| {
        let x: f64 = rng.random_range(-1.0..1.0);
        if i == j { x - n as f64 } else { x }
    })
    .expect("finite entries")
}
