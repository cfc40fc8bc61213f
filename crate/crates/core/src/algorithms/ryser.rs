use crate::combinatorics::{binomial, GrayCursor};
use crate::error::Result;
use crate::matrix::{Element, Matrix, Permanent};

/// Square Ryser: `(-1)^n * sum_S (-1)^|S| prod_i rowsum_S(i)` over all column
/// subsets `S`, visited in Gray order so each step adds or removes a single
/// column from the running row sums.
pub(crate) fn square_kernel<T: Element>(a: &Matrix<T>) -> Permanent<T> {
    let n = a.cols();
    debug_assert_eq!(a.rows(), n);
    let columns = a.transpose();
    let mut ov = false;
    let mut rowsums = vec![T::zero(); n];
    let mut total = T::zero();
    let mut odd = false;

    // position 0 of the cursor is a dummy, positions 1..=n are the columns
    let mut gray = GrayCursor::new(n + 1);
    while let Some(flip) = gray.next_flip() {
        let col = columns.row(flip - 1);
        if gray.mask() & (1 << flip) != 0 {
            for (s, &x) in rowsums.iter_mut().zip(col) {
                *s = s.add(x, &mut ov);
            }
        } else {
            for (s, &x) in rowsums.iter_mut().zip(col) {
                *s = s.sub(x, &mut ov);
            }
        }
        odd = !odd;
        let mut prod = rowsums[0];
        for &s in &rowsums[1..] {
            prod = prod.mul(s, &mut ov);
        }
        total = if odd { total.sub(prod, &mut ov) } else { total.add(prod, &mut ov) };
    }
    if n % 2 == 1 {
        total = total.neg(&mut ov);
    }
    Permanent {
        value: total,
        overflowed: ov,
    }
}

/// Rectangular Ryser (`m <= n`): every column subset of size `s <= m`
/// contributes `(-1)^(m-s) * C(n-s, m-s) * prod_i rowsum_S(i)`. Subsets are
/// walked depth-first in lexicographic order, each child extending its
/// parent's row sums by one column. Products are accumulated per subset size
/// and weighted once at the end.
pub(crate) fn rectangular_kernel<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m <= n);
    let mut walk = SubsetWalk {
        columns: a.transpose(),
        m,
        n,
        sums: vec![T::zero(); (m + 1) * m],
        by_size: vec![T::zero(); m + 1],
        overflowed: false,
    };
    walk.descend(0, 0);
    let mut ov = walk.overflowed;
    let mut total = T::zero();
    for s in 1..=m {
        let b = T::from_i64(binomial((n - s) as u64, (m - s) as u64)?);
        let term = b.mul(walk.by_size[s], &mut ov);
        total = if (m - s) % 2 == 1 { total.sub(term, &mut ov) } else { total.add(term, &mut ov) };
    }
    Ok(Permanent {
        value: total,
        overflowed: ov,
    })
}

struct SubsetWalk<T> {
    columns: Matrix<T>,
    m: usize,
    n: usize,
    // row sums for the subset at each depth, `m` entries per level
    sums: Vec<T>,
    // sum of row-sum products over subsets of each size
    by_size: Vec<T>,
    overflowed: bool,
}

impl<T: Element> SubsetWalk<T> {
    fn descend(&mut self, depth: usize, start: usize) {
        let m = self.m;
        let mut acc = T::zero();
        if depth + 1 == m {
            // leaves: no child sums to keep
            let ov = &mut self.overflowed;
            let parent = &self.sums[depth * m..(depth + 1) * m];
            for c in start..self.n {
                let col = self.columns.row(c);
                let mut prod = parent[0].add(col[0], ov);
                for i in 1..m {
                    prod = prod.mul(parent[i].add(col[i], ov), ov);
                }
                acc = acc.add(prod, ov);
            }
        } else {
            for c in start..self.n {
                let (parent, child) = self.sums.split_at_mut((depth + 1) * m);
                let parent = &parent[depth * m..];
                let child = &mut child[..m];
                let col = self.columns.row(c);
                let ov = &mut self.overflowed;
                let mut prod = T::one();
                for i in 0..m {
                    let s = parent[i].add(col[i], ov);
                    child[i] = s;
                    prod = prod.mul(s, ov);
                }
                acc = acc.add(prod, ov);
                self.descend(depth + 1, c + 1);
            }
        }
        self.by_size[depth + 1] = self.by_size[depth + 1].add(acc, &mut self.overflowed);
    }
}
