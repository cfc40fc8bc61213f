use std::hint::black_box;
use std::time::Instant;

use rand::Rng;

use crate::algorithms::{compute, AlgorithmId, Variant};
use crate::combinatorics::falling_factorial_f64;
use crate::matrix::{ElementKind, Matrix};

/// One timed grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSample {
    pub algorithm: AlgorithmId,
    pub m: usize,
    pub n: usize,
    pub ratio: f64,
    /// Median over trials of the mean per-call wall time, in seconds.
    pub median_seconds: f64,
    pub trials: usize,
    pub kind: ElementKind,
}

#[derive(Debug, Clone)]
pub struct TimingConfig {
    /// Timed trials per cell (at least 3), after one untimed warm-up.
    pub trials: usize,
    /// Each trial repeats the call on the same matrix until at least this much
    /// time has passed, so sub-microsecond kernels are measurable.
    pub min_trial_seconds: f64,
    /// Enumeration is skipped above this many columns...
    pub combinatoric_max_cols: usize,
    /// ...or when it would visit more than this many m-permutations.
    pub combinatoric_max_steps: f64,
    /// No algorithm is timed above this many columns.
    pub max_cols: usize,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            trials: 5,
            min_trial_seconds: 2e-3,
            combinatoric_max_cols: 14,
            combinatoric_max_steps: 5e7,
            max_cols: 30,
        }
    }
}

impl TimingConfig {
    pub fn feasible(&self, algorithm: AlgorithmId, m: usize, n: usize) -> bool {
        let (m, n) = (m.min(n), m.max(n));
        if n > self.max_cols || m == 0 {
            return false;
        }
        match algorithm {
            AlgorithmId::Combinatoric => {
                n <= self.combinatoric_max_cols
                    && falling_factorial_f64(n as u64, m as u64) <= self.combinatoric_max_steps
            }
            _ => true,
        }
    }
}

pub fn random_matrix<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Matrix<f64> {
    Matrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..=1.0)).expect("non-empty shape")
}

/// Times `algorithm` on fresh random `m x n` matrices with entries in
/// `[-1, 1]`. Returns `None` when the cell is outside the feasibility budget.
pub fn time_algorithm<R: Rng + ?Sized>(
    algorithm: AlgorithmId,
    m: usize,
    n: usize,
    config: &TimingConfig,
    rng: &mut R,
) -> Option<BenchmarkSample> {
    if !config.feasible(algorithm, m, n) {
        return None;
    }
    let trials = config.trials.max(3);
    let run = |a: &Matrix<f64>| {
        let p = compute(black_box(a), algorithm, Variant::Auto).expect("feasible cell");
        black_box(p.value);
    };

    // warm-up, also used to size the batches
    let a = random_matrix(m, n, rng);
    let start = Instant::now();
    run(&a);
    let once = start.elapsed().as_secs_f64().max(1e-9);
    let reps = ((config.min_trial_seconds / once).ceil() as usize).clamp(1, 1_000_000);

    let mut per_call: Vec<f64> = (0..trials)
        .map(|_| {
            let a = random_matrix(m, n, rng);
            let start = Instant::now();
            for _ in 0..reps {
                run(&a);
            }
            (start.elapsed().as_secs_f64() / reps as f64).max(1e-12)
        })
        .collect();
    per_call.sort_by(f64::total_cmp);
    let median = if trials % 2 == 1 {
        per_call[trials / 2]
    } else {
        0.5 * (per_call[trials / 2 - 1] + per_call[trials / 2])
    };
    Some(BenchmarkSample {
        algorithm,
        m,
        n,
        ratio: m as f64 / n as f64,
        median_seconds: median,
        trials,
        kind: ElementKind::Float64,
    })
}
