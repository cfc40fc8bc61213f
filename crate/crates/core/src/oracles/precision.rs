use std::fmt;
use std::io::{self, Write};
use std::ops::RangeInclusive;

use super::{borchardt_permanent, identity_matrix, ones_matrix, ones_permanent, sample_cauchy, OracleError};
use crate::algorithms::{compute, AlgorithmId, Variant};
use crate::combinatorics::falling_factorial_f64;
use crate::matrix::{Element, ElementKind, Matrix, Value};

pub const MACHEPS: f64 = f64::EPSILON;

/// Reported when no digits were lost (exact agreement or an error below
/// one unit of roundoff).
pub const DIGITS_LOST_FLOOR: f64 = 0.0;

pub const PRECISION_CSV_HEADER: &str = "family,algorithm,m,n,kind,digits_lost,overflow";

/// `log10(|evaluated - truth| / |truth|) - log10(eps)`, clamped below at
/// [`DIGITS_LOST_FLOOR`].
pub fn digits_lost(evaluated: f64, truth: f64) -> Result<f64, OracleError> {
    if truth == 0.0 {
        return Err(OracleError::ZeroTruth);
    }
    if evaluated == truth {
        return Ok(DIGITS_LOST_FLOOR);
    }
    let rel = (evaluated - truth).abs() / truth.abs();
    Ok((rel.log10() - MACHEPS.log10()).max(DIGITS_LOST_FLOOR))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Ones,
    Identity,
    Cauchy,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Ones, Family::Identity, Family::Cauchy];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ones => "ones",
            Family::Identity => "identity",
            Family::Cauchy => "cauchy",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionRecord {
    pub family: Family,
    pub algorithm: AlgorithmId,
    pub m: usize,
    pub n: usize,
    pub kind: ElementKind,
    /// `None` exactly when `overflow` is set.
    pub digits_lost: Option<f64>,
    pub overflow: bool,
}

#[derive(Debug, Clone)]
pub struct PrecisionConfig {
    pub families: Vec<Family>,
    pub algorithms: Vec<AlgorithmId>,
    pub n_range: RangeInclusive<usize>,
    pub kinds: Vec<ElementKind>,
    /// Row/column ratios for the ones and identity families; `m = round(r n)`
    /// clamped to `1..=n`. Cauchy matrices are always square.
    pub ratios: Vec<f64>,
    pub cauchy_attempts: usize,
    pub seed: u64,
    /// Enumeration is only run for `n` up to this many columns...
    pub combinatoric_max_cols: usize,
    /// ...and only when it needs at most this many m-permutations.
    pub combinatoric_max_steps: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            families: Family::ALL.to_vec(),
            algorithms: AlgorithmId::ALL.to_vec(),
            n_range: 1..=20,
            kinds: vec![ElementKind::Float64, ElementKind::Int64],
            ratios: vec![0.25, 0.5, 0.75, 1.0],
            cauchy_attempts: super::DEFAULT_CAUCHY_ATTEMPTS,
            seed: 0,
            combinatoric_max_cols: 14,
            combinatoric_max_steps: 1e9,
        }
    }
}

impl PrecisionConfig {
    fn shapes(&self, family: Family, n: usize) -> Vec<usize> {
        if family == Family::Cauchy {
            return vec![n];
        }
        let mut ms: Vec<usize> = self
            .ratios
            .iter()
            .map(|r| ((r * n as f64).round() as usize).clamp(1, n))
            .collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    fn runs(&self, algorithm: AlgorithmId, m: usize, n: usize) -> bool {
        algorithm != AlgorithmId::Combinatoric
            || (n <= self.combinatoric_max_cols
                && falling_factorial_f64(n as u64, m as u64) <= self.combinatoric_max_steps)
    }
}

/// Scores every (family, algorithm, shape, kind) cell against its analytic
/// value. Records are ordered by family, algorithm, n, m, kind. Cauchy
/// matrices are only evaluated in double precision; a Cauchy sample whose
/// determinant is numerically singular is skipped.
pub fn run_precision_suite(config: &PrecisionConfig) -> Vec<PrecisionRecord> {
    let mut families = config.families.clone();
    families.sort();
    families.dedup();
    let mut algorithms = config.algorithms.clone();
    algorithms.sort();
    algorithms.dedup();
    let mut kinds = config.kinds.clone();
    kinds.sort();
    kinds.dedup();

    let mut cauchy = Vec::new();
    if families.contains(&Family::Cauchy) {
        for n in config.n_range.clone() {
            let spec = sample_cauchy(n, config.cauchy_attempts.max(1), config.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            if let Ok(truth) = borchardt_permanent(&spec) {
                cauchy.push((n, spec.matrix(), truth));
            }
        }
    }

    let mut out = Vec::new();
    for &family in &families {
        for &algorithm in &algorithms {
            for n in config.n_range.clone() {
                for m in config.shapes(family, n) {
                    if !config.runs(algorithm, m, n) {
                        continue;
                    }
                    for &kind in &kinds {
                        let record = match family {
                            Family::Ones => score_kind(kind, algorithm, |k| match k {
                                ElementKind::Int64 => Some(Cell::Int(ones_matrix(m, n))),
                                _ => Some(Cell::Float(ones_matrix(m, n))),
                            }, ones_permanent(m, n)),
                            Family::Identity => score_kind(kind, algorithm, |k| match k {
                                ElementKind::Int64 => Some(Cell::Int(identity_matrix(m, n))),
                                _ => Some(Cell::Float(identity_matrix(m, n))),
                            }, Value::Int(1)),
                            Family::Cauchy => {
                                if kind != ElementKind::Float64 {
                                    continue;
                                }
                                let Some((_, c, truth)) = cauchy.iter().find(|(cn, _, _)| *cn == n) else {
                                    continue;
                                };
                                score_kind(kind, algorithm, |_| Some(Cell::Float(c.clone())), Value::Float(*truth))
                            }
                        };
                        if let Some((digits_lost, overflow)) = record {
                            out.push(PrecisionRecord {
                                family,
                                algorithm,
                                m,
                                n,
                                kind,
                                digits_lost,
                                overflow,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

enum Cell {
    Int(Matrix<i64>),
    Float(Matrix<f64>),
}

fn score_kind(
    kind: ElementKind,
    algorithm: AlgorithmId,
    build: impl FnOnce(ElementKind) -> Option<Cell>,
    truth: Value,
) -> Option<(Option<f64>, bool)> {
    if kind == ElementKind::ComplexFloat64 {
        return None;
    }
    let evaluated = match build(kind)? {
        Cell::Int(a) => evaluate(&a, algorithm)?,
        Cell::Float(a) => evaluate(&a, algorithm)?,
    };
    let (value, overflowed) = evaluated;
    if overflowed {
        return Some((None, true));
    }
    let d = match (value, truth) {
        (Value::Int(v), Value::Int(t)) if v == t => DIGITS_LOST_FLOOR,
        (v, t) => digits_lost(v.to_f64(), t.to_f64()).ok()?,
    };
    Some((Some(d), false))
}

fn evaluate<T: Element>(a: &Matrix<T>, algorithm: AlgorithmId) -> Option<(Value, bool)> {
    let p = compute(a, algorithm, Variant::Auto).ok()?;
    Some((p.value.into_value(), p.overflowed))
}

pub fn write_precision_csv<W: Write>(mut w: W, records: &[PrecisionRecord]) -> io::Result<()> {
    writeln!(w, "{PRECISION_CSV_HEADER}")?;
    for r in records {
        let d = r.digits_lost.map(|d| format!("{d:.6}")).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.family, r.algorithm, r.m, r.n, r.kind, d, r.overflow
        )?;
    }
    Ok(())
}
