//! Input generators shared by the benchmarks.

use permanent::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform `[-1, 1]` entries, deterministic in `seed`.
pub fn random_f64(m: usize, n: usize, seed: u64) -> Matrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..=1.0)).expect("non-empty shape")
}

/// Entries in `0..=9`, deterministic in `seed`.
pub fn random_i64(m: usize, n: usize, seed: u64) -> Matrix<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(m, n, |_, _| rng.gen_range(0..=9)).expect("non-empty shape")
}

/// Benchmark shapes: squares plus quarter, half and three-quarter row counts.
pub fn shapes(ns: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in ns {
        for k in 1..=4 {
            let m = (n * k).div_ceil(4).max(1);
            if !out.contains(&(m, n)) {
                out.push((m, n));
            }
        }
    }
    out
}
