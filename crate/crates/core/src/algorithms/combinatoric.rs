use crate::combinatorics::falling_factorial_f64;
use crate::error::{PermanentError, Result};
use crate::matrix::{Element, Matrix, Permanent};

/// Default cap on the number of m-permutations the combinatoric kernel will
/// enumerate. A 14x14 input (about 8.7e10) fits; 15x15 does not.
pub const DEFAULT_STEP_BUDGET: f64 = 1e11;

pub(crate) fn kernel<T: Element>(a: &Matrix<T>, budget: f64) -> Result<Permanent<T>> {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m <= n);
    let steps = falling_factorial_f64(n as u64, m as u64);
    if steps > budget {
        return Err(PermanentError::BudgetExceeded { steps, budget });
    }
    let mut walk = Walk {
        a,
        used: 0,
        used_high: vec![false; n.saturating_sub(64)],
        overflowed: false,
    };
    let value = walk.descend(0, T::one());
    Ok(Permanent {
        value,
        overflowed: walk.overflowed,
    })
}

struct Walk<'a, T> {
    a: &'a Matrix<T>,
    // columns 0..64 as bits, the rest (if any) as flags
    used: u64,
    used_high: Vec<bool>,
    overflowed: bool,
}

impl<T: Element> Walk<'_, T> {
    #[inline]
    fn is_used(&self, j: usize) -> bool {
        if j < 64 {
            self.used >> j & 1 == 1
        } else {
            self.used_high[j - 64]
        }
    }

    #[inline]
    fn toggle(&mut self, j: usize) {
        if j < 64 {
            self.used ^= 1 << j;
        } else {
            self.used_high[j - 64] ^= true;
        }
    }

    /// Sum over assignments of rows `row..` to unused columns, each product
    /// scaled by `prefix`.
    fn descend(&mut self, row: usize, prefix: T) -> T {
        let entries = self.a.row(row);
        if row + 1 == self.a.rows() {
            // last row: the remaining choices just sum
            let mut s = T::zero();
            for (j, &x) in entries.iter().enumerate() {
                if !self.is_used(j) {
                    s = s.add(x, &mut self.overflowed);
                }
            }
            return prefix.mul(s, &mut self.overflowed);
        }
        let mut acc = T::zero();
        for j in 0..entries.len() {
            if self.is_used(j) {
                continue;
            }
            let p = prefix.mul(entries[j], &mut self.overflowed);
            self.toggle(j);
            let sub = self.descend(row + 1, p);
            self.toggle(j);
            acc = acc.add(sub, &mut self.overflowed);
        }
        acc
    }
}
