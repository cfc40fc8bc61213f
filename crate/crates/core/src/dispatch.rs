//! The `opt` entry point: choose an algorithm from the matrix shape and the
//! tuning parameters, then run it.

use crate::algorithms::{check_variant, compute, AlgorithmId, Method, Variant};
use crate::error::Result;
use crate::matrix::{DynMatrix, Element, Matrix, Permanent, PermanentResult};
use crate::params::TuningParams;

/// Picks an algorithm for an `m x n` matrix with `m <= n`.
///
/// Up to `p8` columns the choice is between enumeration and Glynn (squares of
/// order at most `p4` always enumerate); beyond that it is between Glynn and
/// Ryser. Hyperplane tests are strict, so a point exactly on a plane takes
/// the second option.
pub fn select_algorithm(m: usize, n: usize, params: &TuningParams) -> AlgorithmId {
    debug_assert!(m <= n);
    let r = m as f64 / n as f64;
    let nf = n as f64;
    if nf <= params.p8 {
        if m == n && nf <= params.p4 {
            return AlgorithmId::Combinatoric;
        }
        let h1 = params.p1 * r + params.p2 * nf + params.p3;
        if h1 > 0.0 {
            AlgorithmId::Combinatoric
        } else {
            AlgorithmId::Glynn
        }
    } else {
        let h2 = params.p5 * r + params.p6 * nf + params.p7;
        if h2 > 0.0 {
            AlgorithmId::Glynn
        } else {
            AlgorithmId::Ryser
        }
    }
}

/// Computes the permanent with the algorithm [`select_algorithm`] picks.
pub fn opt<T: Element>(a: &Matrix<T>, params: &TuningParams) -> Result<Permanent<T>> {
    opt_with_choice(a, params).map(|(p, _)| p)
}

/// Like [`opt`], also reporting which algorithm ran.
pub fn opt_with_choice<T: Element>(a: &Matrix<T>, params: &TuningParams) -> Result<(Permanent<T>, AlgorithmId)> {
    let a = a.normalized();
    let alg = select_algorithm(a.rows(), a.cols(), params);
    Ok((compute(&a, alg, Variant::Auto)?, alg))
}

/// Settings for [`permanent`].
#[derive(Debug, Clone)]
pub struct Options {
    pub method: Method,
    pub params: TuningParams,
    /// For integer inputs: return an exact `Int64` (`true`) or compute in
    /// double precision (`false`).
    pub integer_output: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            method: Method::OPT,
            params: TuningParams::default(),
            integer_output: true,
        }
    }
}

/// A kind-erased permanent and the algorithm that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub result: PermanentResult,
    pub algorithm: AlgorithmId,
}

/// Computes the permanent of a runtime-typed matrix.
pub fn permanent(a: &DynMatrix, options: &Options) -> Result<Outcome> {
    match a {
        DynMatrix::Int(m) if options.integer_output => run(m, options),
        DynMatrix::Int(m) => run(&m.map(|&x| x as f64), options),
        DynMatrix::Float(m) => run(m, options),
        DynMatrix::Complex(m) => run(m, options),
    }
}

fn run<T: Element>(a: &Matrix<T>, options: &Options) -> Result<Outcome> {
    let a = a.normalized();
    let Method { algorithm, variant } = options.method;
    let algorithm = algorithm.unwrap_or_else(|| select_algorithm(a.rows(), a.cols(), &options.params));
    check_variant(&a, algorithm, variant)?;
    let p = compute(&a, algorithm, variant)?;
    Ok(Outcome {
        result: p.into_result(),
        algorithm,
    })
}
