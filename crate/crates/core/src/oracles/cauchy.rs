use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lu::{condition_number_1, determinant};
use super::OracleError;
use crate::matrix::Matrix;

/// Number of draws used by the test suites.
pub const DEFAULT_CAUCHY_ATTEMPTS: usize = 1_000;
/// Number of draws in the full benchmark protocol.
pub const FULL_CAUCHY_ATTEMPTS: usize = 100_000;

/// A Cauchy matrix `C_ij = 1 / (x_i + y_j)` with `x_i` in `[0.25, 0.75]` and
/// `y_j` in `[-0.75, -0.25]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchySpec {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// 1-norm condition number of the matrix.
    pub condition: f64,
}

impl CauchySpec {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), y.len(), "x and y must have the same length");
        assert!(
            x.iter().all(|xi| y.iter().all(|yj| xi + yj != 0.0)),
            "x_i + y_j must be non-zero"
        );
        let mut spec = CauchySpec {
            x,
            y,
            condition: f64::INFINITY,
        };
        spec.condition = condition_number_1(&spec.matrix());
        spec
    }

    pub fn order(&self) -> usize {
        self.x.len()
    }

    pub fn matrix(&self) -> Matrix<f64> {
        let n = self.order();
        Matrix::from_fn(n, n, |i, j| 1.0 / (self.x[i] + self.y[j])).expect("n >= 1")
    }
}

/// Draws `attempts` random specs and keeps the best conditioned one.
/// Deterministic for a given `seed`.
pub fn sample_cauchy(n: usize, attempts: usize, seed: u64) -> CauchySpec {
    assert!(n >= 1 && attempts >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<CauchySpec> = None;
    for _ in 0..attempts {
        let spec = loop {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.25..=0.75)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.75..=-0.25)).collect();
            if x.iter().all(|xi| y.iter().all(|yj| xi + yj != 0.0)) {
                break CauchySpec::new(x, y);
            }
        };
        if best.as_ref().map_or(true, |b| spec.condition < b.condition) {
            best = Some(spec);
        }
    }
    best.expect("attempts >= 1")
}

/// Borchardt's identity: `per(C) = det(C o C) / det(C)` for a Cauchy matrix,
/// where `C o C` is the elementwise square.
pub fn borchardt_permanent(spec: &CauchySpec) -> Result<f64, OracleError> {
    let c = spec.matrix();
    let squared = c.map(|v| v * v);
    Ok(determinant(&squared)? / determinant(&c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{combinatoric, ryser_square};

    #[test]
    fn one_by_one() {
        let spec = CauchySpec::new(vec![0.5], vec![-0.25]);
        assert_eq!(borchardt_permanent(&spec).unwrap(), 4.0);
    }

    #[test]
    fn single_attempt_is_the_single_draw() {
        let a = sample_cauchy(3, 1, 42);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.25..=0.75)).collect();
        let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.75..=-0.25)).collect();
        assert_eq!(a.x, x);
        assert_eq!(a.y, y);
    }

    #[test]
    fn best_draw_has_minimal_condition() {
        let best = sample_cauchy(4, 50, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(0.25..=0.75)).collect();
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.75..=-0.25)).collect();
            let c = CauchySpec::new(x, y).condition;
            assert!(best.condition <= c);
        }
        assert_eq!(sample_cauchy(4, 50, 7), best);
        for v in &best.x {
            assert!((0.25..=0.75).contains(v));
        }
        for v in &best.y {
            assert!((-0.75..=-0.25).contains(v));
        }
    }

    #[test]
    fn borchardt_matches_enumeration() {
        for seed in 0..5 {
            let spec = sample_cauchy(2, 10, seed);
            let want = combinatoric(&spec.matrix()).unwrap().value;
            let got = borchardt_permanent(&spec).unwrap();
            assert!((got - want).abs() <= 1e-10 * want.abs(), "{got} vs {want}");
        }
        let spec = sample_cauchy(10, 200, 11);
        let want = ryser_square(&spec.matrix()).unwrap().value;
        let got = borchardt_permanent(&spec).unwrap();
        assert!((got - want).abs() <= 1e-6 * want.abs(), "{got} vs {want}");
    }
}
