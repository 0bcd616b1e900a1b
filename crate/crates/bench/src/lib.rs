//! Instance generators shared by the criterion benchmarks.

use equiwide::DissimilarityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform points in the unit square, Euclidean distances.
pub fn random_plane(n: usize, seed: u64) -> DissimilarityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    DissimilarityMatrix::from_fn(n, |i, j| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        (dx * dx + dy * dy).sqrt()
    })
    .expect("finite distances")
}

/// Random walks of length `len` for DTW benchmarks.
pub fn random_walks(n: usize, len: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut x = 0.0;
            (0..len)
                .map(|_| {
                    x += rng.gen_range(-1.0..1.0);
                    x
                })
                .collect()
        })
        .collect()
}
