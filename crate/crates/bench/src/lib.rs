//! Shared data generators for the benchmark suite.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// T×d standard-normal matrix from a fixed seed.
pub fn gaussian_matrix(t: usize, d: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Array2::zeros((t, d));
    for i in 0..t {
        for j in 0..d {
            values[[i, j]] = StandardNormal.sample(&mut rng);
        }
    }
    values
}

/// AR(1) pair where y drives x one step later; mirrors the shape of the
/// direction-recovery acceptance data.
pub fn coupled_pair(t: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<f64> = (0..t).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut x = Vec::with_capacity(t);
    x.push(StandardNormal.sample(&mut rng));
    for i in 1..t {
        let noise: f64 = StandardNormal.sample(&mut rng);
        x.push(0.5 * x[i - 1] + 0.5 * y[i - 1] + 0.1 * noise);
    }
    (x, y)
}
