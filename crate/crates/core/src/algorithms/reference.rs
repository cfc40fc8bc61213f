//! Straightforward transcriptions of the textbook algorithms, without the
//! incremental updates used by the fast kernels. Kept as structural oracles:
//! each one recomputes every row or column sum from scratch.

use crate::combinatorics::{binomial, falling_factorial_f64, CombinationCursor, SjtPermutationCursor};
use crate::error::{PermanentError, Result};
use crate::matrix::{Element, Matrix, Permanent};

use super::{normalize, AlgorithmId, DEFAULT_STEP_BUDGET};

/// Largest column count the reference implementations accept.
pub const REFERENCE_MAX_COLS: usize = 20;

/// Computes the permanent with the reference form of `algorithm`. Tall
/// inputs are transposed; square inputs use the square forms.
pub fn permanent_reference<T: Element>(a: &Matrix<T>, algorithm: AlgorithmId) -> Result<Permanent<T>> {
    let a = a.normalized();
    if a.cols() > REFERENCE_MAX_COLS {
        return Err(PermanentError::SizeGuard {
            cols: a.cols(),
            limit: REFERENCE_MAX_COLS,
        });
    }
    match algorithm {
        AlgorithmId::Combinatoric => by_definition(&a),
        AlgorithmId::Ryser if a.is_square() => Ok(ryser_square(&a)),
        AlgorithmId::Ryser => ryser_rectangular(&a),
        AlgorithmId::Glynn if a.is_square() => glynn_square(&a),
        AlgorithmId::Glynn => glynn_rectangular(&a),
    }
}

/// Sum over m-permutations, built as every m-subset of columns times every
/// ordering of that subset (orderings in minimal-change order).
fn by_definition<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    let (m, n) = (a.rows(), a.cols());
    let steps = falling_factorial_f64(n as u64, m as u64);
    if steps > DEFAULT_STEP_BUDGET {
        return Err(PermanentError::BudgetExceeded {
            steps,
            budget: DEFAULT_STEP_BUDGET,
        });
    }
    let mut ov = false;
    let mut total = T::zero();
    let mut subsets = CombinationCursor::new(n, m);
    while let Some(cols) = subsets.current() {
        let mut orders = SjtPermutationCursor::new(m);
        while let Some(perm) = orders.current() {
            let mut prod = T::one();
            for (i, &p) in perm.iter().enumerate() {
                prod = prod.mul(a.get(i, cols[p]), &mut ov);
            }
            total = total.add(prod, &mut ov);
            orders.advance()?;
        }
        subsets.advance()?;
    }
    Ok(Permanent {
        value: total,
        overflowed: ov,
    })
}

/// Inclusion-exclusion over all `2^m` column subsets encoded as bitmasks.
fn ryser_square<T: Element>(a: &Matrix<T>) -> Permanent<T> {
    let m = a.rows();
    let mut ov = false;
    let mut out = T::zero();
    let c: u64 = 1 << m;
    for k in 0..c {
        let mut rowsumprod = T::one();
        for i in 0..m {
            let mut rowsum = T::zero();
            for j in 0..m {
                if k & (1 << j) != 0 {
                    rowsum = rowsum.add(a.get(i, j), &mut ov);
                }
            }
            rowsumprod = rowsumprod.mul(rowsum, &mut ov);
        }
        out = if k.count_ones() % 2 == 1 {
            out.sub(rowsumprod, &mut ov)
        } else {
            out.add(rowsumprod, &mut ov)
        };
    }
    if m % 2 == 1 {
        out = out.neg(&mut ov);
    }
    Permanent { value: out, overflowed: ov }
}

/// For each subset size `m - k`, every combination of columns weighted by
/// `(-1)^k C(n - m + k, k)`.
fn ryser_rectangular<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut ov = false;
    let mut sign = T::one();
    let mut out = T::zero();
    for k in 0..m {
        let bin = T::from_i64(binomial((n - m + k) as u64, k as u64)?);
        let mut permsum = T::zero();
        let mut combos = CombinationCursor::new(n, m - k);
        while let Some(comb) = combos.current() {
            let mut colprod = T::one();
            for i in 0..m {
                let mut matsum = T::zero();
                for &j in comb {
                    matsum = matsum.add(a.get(i, j), &mut ov);
                }
                colprod = colprod.mul(matsum, &mut ov);
            }
            let term = colprod.mul(sign, &mut ov).mul(bin, &mut ov);
            permsum = permsum.add(term, &mut ov);
            combos.advance()?;
        }
        out = out.add(permsum, &mut ov);
        sign = sign.neg(&mut ov);
    }
    Ok(Permanent { value: out, overflowed: ov })
}

fn glynn_square<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    glynn_with_padding(a)
}

fn glynn_rectangular<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    glynn_with_padding(a)
}

/// Glynn's sum with a sign array over all `n` positions (entries `m..n`
/// standing for rows of ones) and a focus-pointer array choosing which sign to
/// flip next. Every term recomputes all column sums.
fn glynn_with_padding<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut ov = false;
    let mut delta = vec![T::one(); n];
    let mut perm: Vec<usize> = (0..n).collect();

    let term = |delta: &[T], ov: &mut bool| {
        let mut prod = T::one();
        for j in 0..n {
            let mut sum = T::zero();
            for i in 0..m {
                sum = sum.add(a.get(i, j).mul(delta[i], ov), ov);
            }
            for &d in &delta[m..n] {
                sum = sum.add(d, ov);
            }
            prod = prod.mul(sum, ov);
        }
        prod
    };

    let mut out = term(&delta, &mut ov);
    let bound = n - 1;
    let mut pos = 0;
    let mut sign = T::one();
    while pos != bound {
        sign = sign.neg(&mut ov);
        delta[bound - pos] = delta[bound - pos].neg(&mut ov);
        let prod = term(&delta, &mut ov);
        out = out.add(sign.mul(prod, &mut ov), &mut ov);

        perm[0] = 0;
        perm[pos] = perm[pos + 1];
        pos += 1;
        perm[pos] = pos;
        pos = perm[0];
    }
    let pad = (n - m) as u64;
    normalize(
        out,
        ov,
        |v| v.exact_div(1u64 << bound)?.div_factorial(pad),
        || format!("2^{bound} * {pad}!"),
    )
}
