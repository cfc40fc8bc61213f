//! Matrices with analytically known permanents and the digits-lost metric
//! used to score numerical precision against them.

mod cauchy;
pub mod lu;
mod precision;

use thiserror::Error;

use crate::combinatorics::falling_factorial;
use crate::matrix::{Element, Matrix, Value};

pub use cauchy::{borchardt_permanent, sample_cauchy, CauchySpec, DEFAULT_CAUCHY_ATTEMPTS, FULL_CAUCHY_ATTEMPTS};
pub use precision::{
    digits_lost, run_precision_suite, write_precision_csv, Family, PrecisionConfig, PrecisionRecord,
    DIGITS_LOST_FLOOR, MACHEPS, PRECISION_CSV_HEADER,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("matrix is numerically singular (pivot {pivot:e} at step {step})")]
    Singular { step: usize, pivot: f64 },
    #[error("digits lost is undefined when the true value is zero")]
    ZeroTruth,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// `per` of the all-ones `m x n` matrix (`m <= n`): `n! / (n - m)!`.
pub fn ones_permanent(m: usize, n: usize) -> Value {
    debug_assert!(m <= n);
    falling_factorial(n as u64, m as u64)
}

pub fn ones_matrix<T: Element>(m: usize, n: usize) -> Matrix<T> {
    Matrix::new(m, n, vec![T::one(); m * n]).expect("non-empty shape")
}

/// `per` of the padded identity: always 1.
pub fn identity_permanent(m: usize, n: usize) -> Value {
    debug_assert!(m <= n);
    Value::Int(1)
}

/// `m x n` matrix with ones on the leading diagonal and zeros elsewhere; the
/// columns past `m` are all zero.
pub fn identity_matrix<T: Element>(m: usize, n: usize) -> Matrix<T> {
    Matrix::from_fn(m, n, |i, j| if i == j { T::one() } else { T::zero() }).expect("non-empty shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{combinatoric, ryser_rectangular};

    #[test]
    fn ones_values() {
        assert_eq!(ones_permanent(3, 3), Value::Int(6));
        assert_eq!(ones_permanent(2, 4), Value::Int(12));
        assert_eq!(ones_permanent(1, 1), Value::Int(1));
    }

    #[test]
    fn ones_matches_enumeration() {
        for n in 1..=9 {
            for m in 1..=n {
                let p = combinatoric(&ones_matrix::<i64>(m, n)).unwrap();
                assert_eq!(Value::Int(p.value), ones_permanent(m, n), "{m}x{n}");
            }
        }
    }

    #[test]
    fn padded_identity() {
        assert_eq!(identity_permanent(4, 4), Value::Int(1));
        let a = identity_matrix::<i64>(2, 5);
        for i in 0..2 {
            for j in 2..5 {
                assert_eq!(a.get(i, j), 0);
            }
        }
        for n in 1..=16 {
            for m in 1..=n {
                let a = identity_matrix::<f64>(m, n);
                assert_eq!(ryser_rectangular(&a).unwrap().value, 1.0, "{m}x{n}");
            }
        }
    }
}
