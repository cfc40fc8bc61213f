//! Exact permanent algorithms.
//!
//! Every public entry point accepts any shape: tall matrices (`rows > cols`)
//! are replaced by their transpose first, so the kernels only ever see
//! `rows <= cols`. The `_square` and `_rectangular` variants additionally
//! check that the (normalized) matrix has the shape they are specialised for.

mod combinatoric;
mod glynn;
pub mod reference;
mod ryser;

use std::fmt;
use std::str::FromStr;

use crate::error::{PermanentError, Result};
use crate::matrix::{Element, Matrix, Permanent};

pub use combinatoric::DEFAULT_STEP_BUDGET;

/// The three exact algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmId {
    Combinatoric,
    Ryser,
    Glynn,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 3] = [AlgorithmId::Combinatoric, AlgorithmId::Ryser, AlgorithmId::Glynn];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Combinatoric => "combinatoric",
            AlgorithmId::Ryser => "ryser",
            AlgorithmId::Glynn => "glynn",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseMethodError(pub String);

impl fmt::Display for ParseMethodError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown algorithm `{}` (expected combinatoric, ryser, glynn or opt, optionally with a _square or _rectangular suffix)",
            self.0
        )
    }
}

impl std::error::Error for ParseMethodError {}

impl FromStr for AlgorithmId {
    type Err = ParseMethodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "combinatoric" => Ok(AlgorithmId::Combinatoric),
            "ryser" => Ok(AlgorithmId::Ryser),
            "glynn" => Ok(AlgorithmId::Glynn),
            _ => Err(ParseMethodError(s.to_owned())),
        }
    }
}

/// Which shape-specialised kernel a caller asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Auto,
    Square,
    Rectangular,
}

/// A user-facing function name: an algorithm (or `opt`) plus a variant,
/// e.g. `glynn_square` or `opt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Method {
    /// `None` selects the tuned dispatcher.
    pub algorithm: Option<AlgorithmId>,
    pub variant: Variant,
}

impl Method {
    pub const OPT: Method = Method {
        algorithm: None,
        variant: Variant::Auto,
    };

    pub fn fixed(algorithm: AlgorithmId) -> Self {
        Method {
            algorithm: Some(algorithm),
            variant: Variant::Auto,
        }
    }
}

impl FromStr for Method {
    type Err = ParseMethodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, variant) = if let Some(b) = s.strip_suffix("_square") {
            (b, Variant::Square)
        } else if let Some(b) = s.strip_suffix("_rectangular") {
            (b, Variant::Rectangular)
        } else {
            (s, Variant::Auto)
        };
        let algorithm = match base {
            "opt" => None,
            other => Some(other.parse().map_err(|_| ParseMethodError(s.to_owned()))?),
        };
        Ok(Method { algorithm, variant })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.algorithm.map_or("opt", AlgorithmId::name))?;
        match self.variant {
            Variant::Auto => Ok(()),
            Variant::Square => f.write_str("_square"),
            Variant::Rectangular => f.write_str("_rectangular"),
        }
    }
}

/// Checks that a normalized matrix fits the requested variant of `algorithm`.
pub(crate) fn check_variant<T: Copy>(a: &Matrix<T>, algorithm: AlgorithmId, variant: Variant) -> Result<()> {
    let (rows, cols) = (a.rows(), a.cols());
    let bad = |requirement| {
        Err(PermanentError::WrongShape {
            algorithm: algorithm.name(),
            requirement,
            rows,
            cols,
        })
    };
    match variant {
        Variant::Auto => Ok(()),
        Variant::Square if rows != cols => bad("a square matrix"),
        // Glynn's rectangular form pads with ones rows, so it needs at least one
        Variant::Rectangular if algorithm == AlgorithmId::Glynn && rows == cols => {
            bad("a non-square matrix")
        }
        _ => Ok(()),
    }
}

/// Runs `algorithm` in the given variant. Tall inputs are transposed first.
pub fn compute<T: Element>(a: &Matrix<T>, algorithm: AlgorithmId, variant: Variant) -> Result<Permanent<T>> {
    let a = a.normalized();
    check_variant(&a, algorithm, variant)?;
    match algorithm {
        AlgorithmId::Combinatoric => combinatoric::kernel(&a, DEFAULT_STEP_BUDGET),
        AlgorithmId::Ryser if a.is_square() => Ok(ryser::square_kernel(&a)),
        AlgorithmId::Ryser => ryser::rectangular_kernel(&a),
        AlgorithmId::Glynn => glynn::kernel(&a),
    }
}

/// Sum over all m-permutations of the columns. Refuses inputs whose
/// enumeration exceeds [`DEFAULT_STEP_BUDGET`].
pub fn combinatoric<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Combinatoric, Variant::Auto)
}

/// [`combinatoric`] with an explicit limit on the number of m-permutations.
pub fn combinatoric_with_budget<T: Element>(a: &Matrix<T>, budget: f64) -> Result<Permanent<T>> {
    combinatoric::kernel(&a.normalized(), budget)
}

pub fn combinatoric_square<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Combinatoric, Variant::Square)
}

pub fn combinatoric_rectangular<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Combinatoric, Variant::Rectangular)
}

/// Ryser's inclusion-exclusion formula: a Gray-code walk over all column
/// subsets for square inputs, a walk over subsets of at most `rows` columns
/// for rectangular ones.
pub fn ryser<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Ryser, Variant::Auto)
}

pub fn ryser_square<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Ryser, Variant::Square)
}

/// The rectangular Ryser formula. Also accepts square matrices, for which it
/// reduces to the square formula.
pub fn ryser_rectangular<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    let a = a.normalized();
    ryser::rectangular_kernel(&a)
}

/// Glynn's polarization formula over a Gray-code walk of sign vectors;
/// rectangular inputs are treated as if padded with rows of ones.
pub fn glynn<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Glynn, Variant::Auto)
}

pub fn glynn_square<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Glynn, Variant::Square)
}

pub fn glynn_rectangular<T: Element>(a: &Matrix<T>) -> Result<Permanent<T>> {
    compute(a, AlgorithmId::Glynn, Variant::Rectangular)
}

/// Applies the final integer division of a kernel. For integers the division
/// must be exact unless the accumulation already overflowed.
pub(crate) fn normalize<T: Element>(
    value: T,
    overflowed: bool,
    divide: impl FnOnce(T) -> Option<T>,
    describe: impl FnOnce() -> String,
) -> Result<Permanent<T>> {
    match divide(value) {
        Some(v) => Ok(Permanent { value: v, overflowed }),
        None if overflowed => Ok(Permanent { value, overflowed }),
        None => Err(PermanentError::InexactDivision {
            value: match value.into_value() {
                crate::matrix::Value::Int(v) => v,
                _ => 0,
            },
            divisor: describe(),
        }),
    }
}

#[cfg(test)]
mod tests;
