//! Exact permanents of rectangular matrices.
//!
//! Three algorithms are provided (direct enumeration, Ryser's
//! inclusion-exclusion formula and Glynn's polarization formula), each with
//! square and rectangular forms, plus an `opt` dispatcher that picks the
//! fastest one from machine-tuned parameters.
//!
//! ```
//! use permanent::{opt, Matrix, TuningParams};
//!
//! let a = Matrix::from_rows(&[[1i64, 2, 3], [4, 5, 6], [7, 8, 9]]).unwrap();
//! let p = opt(&a, &TuningParams::default()).unwrap();
//! assert_eq!(p.value, 450);
//! ```
//!
//! The [`tuner`] module benchmarks the algorithms and fits the dispatch
//! parameters; [`oracles`] holds analytic ground truths and the
//! digits-lost precision metric.

pub mod algorithms;
pub mod combinatorics;
pub mod dispatch;
pub mod error;
pub mod matrix;
pub mod oracles;
pub mod params;
pub mod tuner;

pub use algorithms::reference::permanent_reference;
pub use algorithms::{
    combinatoric, combinatoric_rectangular, combinatoric_square, compute, glynn, glynn_rectangular,
    glynn_square, ryser, ryser_rectangular, ryser_square, AlgorithmId, Method, Variant,
};
pub use dispatch::{opt, permanent, select_algorithm, Options};
pub use error::{PermanentError, Result};
pub use matrix::{DynMatrix, Element, ElementKind, Matrix, Permanent, PermanentResult, Value};
pub use params::{ParamsError, TuningParams, TuningSource};
