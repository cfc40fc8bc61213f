//! Enumeration primitives used by the kernels: lexicographic k-combinations,
//! Steinhaus-Johnson-Trotter permutations, a loopless reflected Gray code and
//! exact binomial/factorial helpers.
//!
//! Cursors hold explicit state and are advanced in place, so a traversal of
//! `2^n` elements never materializes them.

use crate::error::{PermanentError, Result};
use crate::matrix::Value;

/// Lexicographic k-combinations of `{0, .., n-1}`.
#[derive(Debug, Clone)]
pub struct CombinationCursor {
    n: usize,
    k: usize,
    current: Vec<usize>,
    exhausted: bool,
}

impl CombinationCursor {
    /// Starts at `[0, 1, .., k-1]`. With `k > n` there is nothing to visit and
    /// the cursor starts exhausted; `k = 0` yields the empty combination once.
    pub fn new(n: usize, k: usize) -> Self {
        CombinationCursor {
            n,
            k,
            current: (0..k).collect(),
            exhausted: k > n,
        }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn current(&self) -> Option<&[usize]> {
        (!self.exhausted).then_some(self.current.as_slice())
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Moves to the next combination. Returns `Ok(false)` when the traversal
    /// just ended and an error when called on an exhausted cursor.
    pub fn advance(&mut self) -> Result<bool> {
        if self.exhausted {
            return Err(PermanentError::CursorExhausted);
        }
        let (n, k) = (self.n, self.k);
        // rightmost slot that can still move right
        let Some(i) = (0..k).rev().find(|&i| self.current[i] < n - k + i) else {
            self.exhausted = true;
            return Ok(false);
        };
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Ok(true)
    }
}

/// Permutations of `{0, .., n-1}` in minimal-change order: each step swaps
/// one adjacent pair.
#[derive(Debug, Clone)]
pub struct SjtPermutationCursor {
    perm: Vec<usize>,
    // true = pointing left
    left: Vec<bool>,
    last_swap: Option<usize>,
    exhausted: bool,
}

impl SjtPermutationCursor {
    pub fn new(n: usize) -> Self {
        SjtPermutationCursor {
            perm: (0..n).collect(),
            left: vec![true; n],
            last_swap: None,
            exhausted: false,
        }
    }

    pub fn current(&self) -> Option<&[usize]> {
        (!self.exhausted).then_some(self.perm.as_slice())
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Position `i` such that the last step swapped entries `i` and `i + 1`.
    pub fn last_swap(&self) -> Option<usize> {
        self.last_swap
    }

    pub fn advance(&mut self) -> Result<bool> {
        if self.exhausted {
            return Err(PermanentError::CursorExhausted);
        }
        let n = self.perm.len();
        let mut mobile: Option<usize> = None;
        for i in 0..n {
            let v = self.perm[i];
            let neighbour = if self.left[v] {
                i.checked_sub(1)
            } else {
                Some(i + 1).filter(|&j| j < n)
            };
            if let Some(j) = neighbour {
                if self.perm[j] < v && mobile.map_or(true, |m| self.perm[m] < v) {
                    mobile = Some(i);
                }
            }
        }
        let Some(i) = mobile else {
            self.exhausted = true;
            self.last_swap = None;
            return Ok(false);
        };
        let v = self.perm[i];
        let j = if self.left[v] { i - 1 } else { i + 1 };
        self.perm.swap(i, j);
        self.last_swap = Some(i.min(j));
        for w in v + 1..n {
            self.left[w] = !self.left[w];
        }
        Ok(true)
    }
}

/// Reflected Gray code over a sign vector of `len` positions whose first
/// position is held fixed, so `2^(len-1)` vectors are visited.
///
/// Stepping is loopless: a focus-pointer array picks the position to flip in
/// O(1). Starting from all `+1`, the flipped positions for `len = 3` are
/// `2, 1, 2`.
#[derive(Debug, Clone)]
pub struct GrayCursor {
    focus: Vec<usize>,
    pos: usize,
    bound: usize,
    mask: u64,
    step: u64,
    last_flip: Option<usize>,
}

impl GrayCursor {
    /// `len` must be in `1..=64`.
    pub fn new(len: usize) -> Self {
        assert!((1..=64).contains(&len), "gray cursor length {len} out of range");
        GrayCursor {
            focus: (0..len).collect(),
            pos: 0,
            bound: len - 1,
            mask: 0,
            step: 0,
            last_flip: None,
        }
    }

    /// Number of vectors in a full traversal, including the initial one.
    pub fn len(&self) -> u64 {
        1u64 << self.bound
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bit `i` set means position `i` currently carries `-1`.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn last_flip(&self) -> Option<usize> {
        self.last_flip
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos == self.bound
    }

    /// Flips one position and returns it, or `None` once all vectors have
    /// been visited. Position 0 is never returned.
    #[inline]
    pub fn next_flip(&mut self) -> Option<usize> {
        let pos = self.pos;
        if pos == self.bound {
            return None;
        }
        let flip = self.bound - pos;
        self.mask ^= 1 << flip;
        self.focus[0] = 0;
        self.focus[pos] = self.focus[pos + 1];
        self.focus[pos + 1] = pos + 1;
        self.pos = self.focus[0];
        self.step += 1;
        self.last_flip = Some(flip);
        Some(flip)
    }
}

/// Exact binomial coefficient; errors when the result exceeds `i64`.
pub fn binomial(n: u64, k: u64) -> Result<i64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or_else(|| overflow(n, k))?
            / u128::from(i + 1);
        if acc > i64::MAX as u128 {
            return Err(overflow(n, k));
        }
    }
    Ok(acc as i64)
}

fn overflow(n: u64, k: u64) -> PermanentError {
    PermanentError::Overflow {
        what: format!("binomial({n}, {k})"),
    }
}

/// `n!`: exact as [`Value::Int`] through `20!`, [`Value::Float`] beyond.
pub fn factorial(n: u64) -> Value {
    match exact_product(1..=n) {
        Some(v) if v <= i64::MAX as u128 => Value::Int(v as i64),
        _ => Value::Float(factorial_f64(n)),
    }
}

/// `n!` rounded to the nearest `f64` (exact product while it fits `u128`).
pub fn factorial_f64(n: u64) -> f64 {
    falling_factorial_f64(n, n)
}

/// `n! / (n - m)!`, the number of m-permutations of n items. Exact as
/// [`Value::Int`] when it fits `i64`.
pub fn falling_factorial(n: u64, m: u64) -> Value {
    if m > n {
        return Value::Int(0);
    }
    match exact_product(n - m + 1..=n) {
        Some(v) if v <= i64::MAX as u128 => Value::Int(v as i64),
        _ => Value::Float(falling_factorial_f64(n, m)),
    }
}

pub fn falling_factorial_f64(n: u64, m: u64) -> f64 {
    if m > n {
        return 0.0;
    }
    let mut exact: u128 = 1;
    let mut k = n - m + 1;
    while k <= n {
        match exact.checked_mul(u128::from(k)) {
            Some(v) => exact = v,
            None => break,
        }
        k += 1;
    }
    let mut out = exact as f64;
    while k <= n {
        out *= k as f64;
        k += 1;
    }
    out
}

fn exact_product(range: std::ops::RangeInclusive<u64>) -> Option<u128> {
    range.into_iter().try_fold(1u128, |acc, k| acc.checked_mul(u128::from(k)))
}
