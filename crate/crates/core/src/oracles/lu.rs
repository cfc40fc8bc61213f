//! Partial-pivot LU factorization for determinants and 1-norm condition
//! numbers of small dense matrices.

use super::OracleError;
use crate::matrix::Matrix;

/// Pivots smaller than this multiple of `eps * ||A||_inf` count as zero.
const SINGULAR_FACTOR: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    // packed L (unit diagonal, below) and U (on and above), row-major
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn factor(a: &Matrix<f64>) -> Result<Self, OracleError> {
        if !a.is_square() {
            return Err(OracleError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let norm = (0..n)
            .map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let tol = SINGULAR_FACTOR * f64::EPSILON * norm;
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap();
            let pivot = lu[p * n + k];
            if !(pivot.abs() > tol) {
                return Err(OracleError::Singular { step: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Ok(Lu { n, lu, perm, swaps })
    }

    pub fn determinant(&self) -> f64 {
        let diag: f64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.swaps % 2 == 1 {
            -diag
        } else {
            diag
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// `||A^-1||_1`, from the explicit inverse one column at a time.
    pub fn inverse_norm1(&self) -> f64 {
        let n = self.n;
        let mut e = vec![0.0; n];
        let mut best: f64 = 0.0;
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e);
            best = best.max(col.iter().map(|v| v.abs()).sum());
        }
        best
    }
}

pub fn determinant(a: &Matrix<f64>) -> Result<f64, OracleError> {
    Lu::factor(a).map(|lu| lu.determinant())
}

/// `kappa_1(A) = ||A||_1 ||A^-1||_1`; infinite for singular matrices.
pub fn condition_number_1(a: &Matrix<f64>) -> f64 {
    let Ok(lu) = Lu::factor(a) else {
        return f64::INFINITY;
    };
    let norm1 = (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a.get(i, j).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    norm1 * lu.inverse_norm1()
}
