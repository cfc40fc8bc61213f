use crate::combinatorics::GrayCursor;
use crate::error::Result;
use crate::matrix::{Element, Matrix, Permanent};

use super::normalize;

/// Glynn's formula for `m <= n`. Rows `m..n` are virtual rows of ones, so a
/// column sum is `sum_{i<m} d_i a_ij + sum_{k>=m} d_k`. The sign vector `d`
/// keeps `d_0 = +1` and walks the remaining `n - 1` positions in Gray order;
/// each flip moves every column sum by `2 a_fj` (or by 2 for a padding row).
/// The accumulated sum equals `2^(n-1) (n-m)! per(A)`.
pub(crate) fn kernel<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m <= n);
    let mut ov = false;
    let pad = T::from_i64((n - m) as i64);
    let two = T::from_i64(2);

    let doubled: Vec<T> = a.as_slice().iter().map(|&x| x.mul(two, &mut ov)).collect();
    let mut colsums: Vec<T> = (0..n)
        .map(|j| (0..m).fold(pad, |s, i| s.add(a.get(i, j), &mut ov)))
        .collect();

    let product = |sums: &[T], ov: &mut bool| {
        let mut p = sums[0];
        for &s in &sums[1..] {
            p = p.mul(s, ov);
        }
        p
    };

    let mut total = product(&colsums, &mut ov);
    let mut negative = false;
    let mut gray = GrayCursor::new(n);
    while let Some(flip) = gray.next_flip() {
        let now_minus = gray.mask() & (1 << flip) != 0;
        if flip < m {
            let row = &doubled[flip * n..(flip + 1) * n];
            if now_minus {
                for (s, &d) in colsums.iter_mut().zip(row) {
                    *s = s.sub(d, &mut ov);
                }
            } else {
                for (s, &d) in colsums.iter_mut().zip(row) {
                    *s = s.add(d, &mut ov);
                }
            }
        } else if now_minus {
            for s in colsums.iter_mut() {
                *s = s.sub(two, &mut ov);
            }
        } else {
            for s in colsums.iter_mut() {
                *s = s.add(two, &mut ov);
            }
        }
        negative = !negative;
        let p = product(&colsums, &mut ov);
        total = if negative { total.sub(p, &mut ov) } else { total.add(p, &mut ov) };
    }

    let scale = 1u64 << (n - 1);
    let pad_len = (n - m) as u64;
    normalize(
        total,
        ov,
        |v| v.exact_div(scale)?.div_factorial(pad_len),
        || format!("2^{} * {}!", n - 1, pad_len),
    )
}
