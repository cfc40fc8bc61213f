//! Dense row-major matrices and the element types the kernels run over.
//!
//! Kernels are generic over [`Element`]. Integer arithmetic is performed with
//! overflow detection: every operation reports into a flag instead of
//! panicking or silently wrapping unnoticed, so callers can decide what an
//! overflowed result is worth.

use std::fmt;

use num_complex::Complex64;

use crate::error::{PermanentError, Result};

/// The closed set of element types a matrix may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Int64,
    Float64,
    ComplexFloat64,
}

impl ElementKind {
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Int64 => "int64",
            ElementKind::Float64 => "float64",
            ElementKind::ComplexFloat64 => "complex128",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arithmetic needed by the permanent kernels.
///
/// The `overflow` argument is sticky: implementations set it when the exact
/// result is not representable and never clear it. Floating-point types never
/// set it.
pub trait Element: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {
    const KIND: ElementKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    fn add(self, rhs: Self, overflow: &mut bool) -> Self;
    fn sub(self, rhs: Self, overflow: &mut bool) -> Self;
    fn mul(self, rhs: Self, overflow: &mut bool) -> Self;
    fn neg(self, overflow: &mut bool) -> Self;

    /// Divides by a positive integer. Integer types return `None` when the
    /// division leaves a remainder.
    fn exact_div(self, divisor: u64) -> Option<Self>;

    /// Divides by `k!`. Floating types divide once by the (possibly rounded)
    /// factorial; integer types divide step by step and return `None` on the
    /// first remainder.
    fn div_factorial(self, k: u64) -> Option<Self>;

    fn into_value(self) -> Value;
}

impl Element for i64 {
    const KIND: ElementKind = ElementKind::Int64;

    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn one() -> Self {
        1
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        v
    }
    #[inline]
    fn add(self, rhs: Self, overflow: &mut bool) -> Self {
        let (v, o) = self.overflowing_add(rhs);
        *overflow |= o;
        v
    }
    #[inline]
    fn sub(self, rhs: Self, overflow: &mut bool) -> Self {
        let (v, o) = self.overflowing_sub(rhs);
        *overflow |= o;
        v
    }
    #[inline]
    fn mul(self, rhs: Self, overflow: &mut bool) -> Self {
        let (v, o) = self.overflowing_mul(rhs);
        *overflow |= o;
        v
    }
    #[inline]
    fn neg(self, overflow: &mut bool) -> Self {
        let (v, o) = self.overflowing_neg();
        *overflow |= o;
        v
    }
    fn exact_div(self, divisor: u64) -> Option<Self> {
        let d = i64::try_from(divisor).ok()?;
        (self % d == 0).then(|| self / d)
    }
    fn div_factorial(self, k: u64) -> Option<Self> {
        (2..=k).try_fold(self, |acc, d| acc.exact_div(d))
    }
    fn into_value(self) -> Value {
        Value::Int(self)
    }
}

impl Element for f64 {
    const KIND: ElementKind = ElementKind::Float64;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    #[inline]
    fn add(self, rhs: Self, _: &mut bool) -> Self {
        self + rhs
    }
    #[inline]
    fn sub(self, rhs: Self, _: &mut bool) -> Self {
        self - rhs
    }
    #[inline]
    fn mul(self, rhs: Self, _: &mut bool) -> Self {
        self * rhs
    }
    #[inline]
    fn neg(self, _: &mut bool) -> Self {
        -self
    }
    fn exact_div(self, divisor: u64) -> Option<Self> {
        Some(self / divisor as f64)
    }
    fn div_factorial(self, k: u64) -> Option<Self> {
        Some(self / crate::combinatorics::factorial_f64(k))
    }
    fn into_value(self) -> Value {
        Value::Float(self)
    }
}

impl Element for Complex64 {
    const KIND: ElementKind = ElementKind::ComplexFloat64;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    #[inline]
    fn add(self, rhs: Self, _: &mut bool) -> Self {
        self + rhs
    }
    #[inline]
    fn sub(self, rhs: Self, _: &mut bool) -> Self {
        self - rhs
    }
    #[inline]
    fn mul(self, rhs: Self, _: &mut bool) -> Self {
        self * rhs
    }
    #[inline]
    fn neg(self, _: &mut bool) -> Self {
        -self
    }
    fn exact_div(self, divisor: u64) -> Option<Self> {
        Some(self / divisor as f64)
    }
    fn div_factorial(self, k: u64) -> Option<Self> {
        Some(self / crate::combinatorics::factorial_f64(k))
    }
    fn into_value(self) -> Value {
        Value::Complex(self)
    }
}

/// A single scalar of any supported kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Complex(Complex64),
}

impl Value {
    pub fn kind(&self) -> ElementKind {
        match self {
            Value::Int(_) => ElementKind::Int64,
            Value::Float(_) => ElementKind::Float64,
            Value::Complex(_) => ElementKind::ComplexFloat64,
        }
    }

    /// Real part as `f64`; integers are converted with rounding.
    pub fn to_f64(&self) -> f64 {
        match *self {
            Value::Int(v) => v as f64,
            Value::Float(v) => v,
            Value::Complex(c) => c.re,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:e}"),
            Value::Complex(c) => {
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "{:e}{sign}{:e}i", c.re, c.im.abs())
            }
        }
    }
}

/// Permanent of a typed matrix together with its overflow status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Permanent<T> {
    pub value: T,
    /// Set when an integer intermediate left the 64-bit signed range; the
    /// value is then not trustworthy.
    pub overflowed: bool,
}

impl<T: Element> Permanent<T> {
    pub fn into_result(self) -> PermanentResult {
        PermanentResult {
            value: self.value.into_value(),
            overflowed: self.overflowed,
        }
    }
}

/// Kind-erased permanent, as produced for a [`DynMatrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermanentResult {
    pub value: Value,
    pub overflowed: bool,
}

/// Row-major `rows x cols` matrix with at least one row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(PermanentError::EmptyMatrix { rows, cols });
        }
        let expected = rows
            .checked_mul(cols)
            .ok_or(PermanentError::EmptyMatrix { rows, cols })?;
        if data.len() != expected {
            return Err(PermanentError::ShapeMismatch {
                rows,
                cols,
                expected,
                got: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            data.extend_from_slice(r.as_ref());
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Returns `self` when `rows <= cols`, otherwise its transpose. The
    /// permanent of a tall matrix is defined as that of its transpose.
    pub fn normalized(&self) -> std::borrow::Cow<'_, Matrix<T>>
    where
        T: Clone,
    {
        if self.rows > self.cols {
            std::borrow::Cow::Owned(self.transpose())
        } else {
            std::borrow::Cow::Borrowed(self)
        }
    }
}

/// A matrix whose element kind is only known at runtime (CLI input, bindings).
#[derive(Debug, Clone, PartialEq)]
pub enum DynMatrix {
    Int(Matrix<i64>),
    Float(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

impl DynMatrix {
    /// Builds a matrix from scalars that must all share one kind.
    pub fn from_values(rows: usize, cols: usize, values: Vec<Value>) -> Result<Self> {
        let Some(first) = values.first().map(Value::kind) else {
            return Matrix::<i64>::new(rows, cols, Vec::new()).map(DynMatrix::Int);
        };
        if let Some(other) = values.iter().map(Value::kind).find(|k| *k != first) {
            return Err(PermanentError::MixedKinds { first, other });
        }
        match first {
            ElementKind::Int64 => Matrix::new(
                rows,
                cols,
                values
                    .into_iter()
                    .map(|v| match v {
                        Value::Int(x) => x,
                        _ => unreachable!(),
                    })
                    .collect(),
            )
            .map(DynMatrix::Int),
            ElementKind::Float64 => Matrix::new(rows, cols, values.iter().map(Value::to_f64).collect())
                .map(DynMatrix::Float),
            ElementKind::ComplexFloat64 => Matrix::new(
                rows,
                cols,
                values
                    .into_iter()
                    .map(|v| match v {
                        Value::Complex(c) => c,
                        _ => unreachable!(),
                    })
                    .collect(),
            )
            .map(DynMatrix::Complex),
        }
    }

    pub fn kind(&self) -> ElementKind {
        match self {
            DynMatrix::Int(_) => ElementKind::Int64,
            DynMatrix::Float(_) => ElementKind::Float64,
            DynMatrix::Complex(_) => ElementKind::ComplexFloat64,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            DynMatrix::Int(a) => (a.rows(), a.cols()),
            DynMatrix::Float(a) => (a.rows(), a.cols()),
            DynMatrix::Complex(a) => (a.rows(), a.cols()),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Value {
        match self {
            DynMatrix::Int(a) => Value::Int(a.get(i, j)),
            DynMatrix::Float(a) => Value::Float(a.get(i, j)),
            DynMatrix::Complex(a) => Value::Complex(a.get(i, j)),
        }
    }

    pub fn transpose(&self) -> DynMatrix {
        match self {
            DynMatrix::Int(a) => DynMatrix::Int(a.transpose()),
            DynMatrix::Float(a) => DynMatrix::Float(a.transpose()),
            DynMatrix::Complex(a) => DynMatrix::Complex(a.transpose()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_indexing() {
        let a = Matrix::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(a.get(0, 1), 2);
        assert_eq!(a.get(1, 0), 3);
        assert_eq!(a.row(1), &[3, 4]);

        let b = Matrix::new(1, 3, vec![5, 6, 7]).unwrap();
        assert_eq!((b.rows(), b.cols()), (1, 3));
    }

    #[test]
    fn length_mismatch_is_a_shape_error() {
        let err = Matrix::new(2, 2, vec![1, 2, 3]).unwrap_err();
        assert_eq!(
            err,
            PermanentError::ShapeMismatch {
                rows: 2,
                cols: 2,
                expected: 4,
                got: 3
            }
        );
    }

    #[test]
    fn empty_dimensions_rejected() {
        assert!(matches!(
            Matrix::<f64>::new(0, 3, vec![]),
            Err(PermanentError::EmptyMatrix { .. })
        ));
        assert!(matches!(
            Matrix::<f64>::from_rows::<Vec<f64>>(&[]),
            Err(PermanentError::EmptyMatrix { .. })
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_rows(&[vec![1, 2], vec![3]]).unwrap_err();
        assert!(matches!(err, PermanentError::ShapeMismatch { .. }));
    }

    #[test]
    fn mixed_kinds_is_a_type_error() {
        let err = DynMatrix::from_values(1, 2, vec![Value::Int(1), Value::Float(2.0)]).unwrap_err();
        assert_eq!(
            err,
            PermanentError::MixedKinds {
                first: ElementKind::Int64,
                other: ElementKind::Float64
            }
        );
    }

    #[test]
    fn transpose_examples() {
        let a = Matrix::from_rows(&[[1, 2, 3], [4, 5, 6]]).unwrap();
        let t = a.transpose();
        assert_eq!(t, Matrix::from_rows(&[[1, 4], [2, 5], [3, 6]]).unwrap());

        let x = Matrix::new(1, 1, vec![7.5]).unwrap();
        assert_eq!(x.transpose(), x);
    }

    #[test]
    fn integer_overflow_is_sticky() {
        let mut ov = false;
        let v = i64::MAX.add(1, &mut ov);
        assert!(ov);
        assert_eq!(v, i64::MIN);
        let _ = 1_i64.add(1, &mut ov);
        assert!(ov);

        let mut ov = false;
        let _ = 1e300_f64.mul(1e300, &mut ov);
        assert!(!ov);
    }

    #[test]
    fn exact_integer_division() {
        assert_eq!(12_i64.exact_div(4), Some(3));
        assert_eq!(13_i64.exact_div(4), None);
        assert_eq!(240_i64.div_factorial(5), Some(2));
        assert_eq!(241_i64.div_factorial(5), None);
        assert_eq!(5_i64.exact_div(u64::MAX), None);
    }

    #[test]
    fn value_display() {
        assert_eq!(Value::Int(450).to_string(), "450");
        assert_eq!(Value::Float(450.0).to_string(), "4.5e2");
        assert_eq!(Value::Complex(Complex64::new(1.0, -2.0)).to_string(), "1e0-2e0i");
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn transpose_is_an_involution(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
                let a = Matrix::from_fn(rows, cols, |i, j| (seed.wrapping_mul(31 + i as u64 * 7 + j as u64) % 97) as i64).unwrap();
                prop_assert_eq!(a.transpose().transpose(), a.clone());
                let t = a.transpose();
                for i in 0..rows {
                    for j in 0..cols {
                        prop_assert_eq!(t.get(j, i), a.get(i, j));
                    }
                }
            }

            #[test]
            fn row_major_round_trip(data in proptest::collection::vec(-100i64..100, 1..30)) {
                let n = data.len();
                let a = Matrix::new(1, n, data.clone()).unwrap();
                let read: Vec<i64> = (0..n).map(|j| a.get(0, j)).collect();
                prop_assert_eq!(read, data);
            }
        }
    }
}
