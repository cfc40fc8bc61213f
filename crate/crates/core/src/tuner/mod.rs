//! Machine-specific calibration of the dispatch parameters.
//!
//! The pipeline times every algorithm over a grid of shapes, labels each
//! shape by its fastest algorithm, fits one separating plane per regime in
//! `(r, n)` space and writes the eight parameters to a tuning file.

mod grid;
mod svm;
mod timing;

use std::ops::RangeInclusive;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use grid::{
    detect_small_square_cutoff, grid_shapes, label_points, read_bench_csv, run_grid, write_bench_csv, LabeledPoint,
    BENCH_CSV_HEADER,
};
pub use svm::{max_margin_plane, max_margin_plane_through, SeparatingPlane, SvmFit, TrainingPoint};
pub use timing::{random_matrix, time_algorithm, BenchmarkSample, TimingConfig};

use crate::algorithms::AlgorithmId;
use crate::dispatch::select_algorithm;
use crate::params::{host_descriptor, ParamsError, TuningParams, TuningSource};

#[derive(Debug, Error)]
pub enum TuneError {
    #[error("a training set has no points of one class")]
    MissingClass,
    #[error("plane orientation is ambiguous: no training point lies strictly on either side")]
    AmbiguousOrientation,
    #[error("the timing grid produced no labelled points")]
    EmptyGrid,
    #[error(transparent)]
    Params(#[from] ParamsError),
}

#[derive(Debug, Clone)]
pub struct TuneConfig {
    pub n_range: RangeInclusive<usize>,
    pub ratios: Vec<f64>,
    pub timing: TimingConfig,
    pub seed: u64,
    /// Points whose two contenders are within this factor of each other are
    /// left out of the plane fits.
    pub min_margin_ratio: f64,
    /// When set, both planes are forced through this `(n, r)` point.
    pub anchor: Option<(f64, f64)>,
}

impl Default for TuneConfig {
    fn default() -> Self {
        TuneConfig {
            n_range: 2..=24,
            ratios: (1..=8).map(|k| k as f64 / 8.0).collect(),
            timing: TimingConfig::default(),
            seed: 0x5eed,
            min_margin_ratio: 1.05,
            anchor: None,
        }
    }
}

/// Hard-margin fit of `a` (positive side) against `b`, using each point's
/// pair-restricted winner. Near-ties below `min_margin_ratio` are dropped.
pub fn fit_hard_margin_svm(
    points: &[LabeledPoint],
    a: AlgorithmId,
    b: AlgorithmId,
    min_margin_ratio: f64,
) -> Result<SvmFit, TuneError> {
    max_margin_plane(&training_points(points, a, b, min_margin_ratio))
}

fn training_points(points: &[LabeledPoint], a: AlgorithmId, b: AlgorithmId, min_margin_ratio: f64) -> Vec<TrainingPoint> {
    points
        .iter()
        .filter_map(|p| {
            let (winner, ratio) = p.pair_label(a, b)?;
            (ratio >= min_margin_ratio).then_some(TrainingPoint {
                r: p.r,
                n: p.n as f64,
                positive: winner == a,
            })
        })
        .collect()
}

/// Flips `plane` if needed so that most `a` points evaluate positive.
fn orient(plane: SeparatingPlane, points: &[LabeledPoint], a: AlgorithmId, b: AlgorithmId) -> Result<SeparatingPlane, TuneError> {
    let (mut agree, mut disagree) = (0usize, 0usize);
    for p in points {
        let Some((winner, _)) = p.pair_label(a, b) else { continue };
        let v = plane.eval(p.r, p.n as f64);
        if v == 0.0 {
            continue;
        }
        if (v > 0.0) == (winner == a) {
            agree += 1;
        } else {
            disagree += 1;
        }
    }
    match (agree, disagree) {
        (0, 0) => Err(TuneError::AmbiguousOrientation),
        (x, y) if x >= y => Ok(plane),
        _ => Ok(plane.flipped()),
    }
}

/// Packs two fitted planes into parameters. `plane1` is oriented so that
/// enumeration is positive and `plane2` so that Glynn is positive.
pub fn assemble_params(
    points: &[LabeledPoint],
    plane1: SeparatingPlane,
    plane2: SeparatingPlane,
    p4: usize,
    p8: usize,
) -> Result<TuningParams, TuneError> {
    let small: Vec<LabeledPoint> = points.iter().filter(|p| p.n <= p8).cloned().collect();
    let large: Vec<LabeledPoint> = points.iter().filter(|p| p.n > p8).cloned().collect();
    let h1 = orient(plane1, if small.is_empty() { points } else { &small }, AlgorithmId::Combinatoric, AlgorithmId::Glynn)?;
    let h2 = orient(plane2, if large.is_empty() { points } else { &large }, AlgorithmId::Glynn, AlgorithmId::Ryser)?;
    let params = TuningParams {
        p1: h1.weight_r,
        p2: h1.weight_n,
        p3: h1.bias,
        p4: p4.min(p8) as f64,
        p5: h2.weight_r,
        p6: h2.weight_n,
        p7: h2.bias,
        p8: p8 as f64,
        source: TuningSource::MachineTuned,
        created_at: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        host: host_descriptor(),
    };
    params.validate()?;
    Ok(params)
}

/// Where the two planes cross, as `(n, r)`; `None` for parallel planes.
pub fn plane_intersection(params: &TuningParams) -> Option<(f64, f64)> {
    let det = params.p1 * params.p6 - params.p2 * params.p5;
    if det.abs() < 1e-12 * (params.p1.abs() + params.p2.abs()) * (params.p5.abs() + params.p6.abs()) {
        return None;
    }
    let r = (-params.p3 * params.p6 + params.p7 * params.p2) / det;
    let n = (-params.p1 * params.p7 + params.p5 * params.p3) / det;
    Some((n, r))
}

#[derive(Debug, Clone)]
pub struct Derived {
    pub params: TuningParams,
    pub plane1: SvmFit,
    pub plane2: SvmFit,
    pub intersection: Option<(f64, f64)>,
}

/// Training sets: enumeration against Glynn over the cells where
/// enumeration was timed (minus the hard-coded squares), Glynn against
/// Ryser over the whole grid.
fn training_sets(points: &[LabeledPoint], p4: usize, config: &TuneConfig) -> (Vec<LabeledPoint>, Vec<LabeledPoint>) {
    let small = points
        .iter()
        .filter(|p| p.n <= config.timing.combinatoric_max_cols && !(p.is_square() && p.n <= p4))
        .cloned()
        .collect();
    (small, points.to_vec())
}

fn p8_bounds(points: &[LabeledPoint], p4: usize, config: &TuneConfig) -> (usize, usize) {
    let n_max = points.iter().map(|p| p.n).max().unwrap_or(2);
    let hi = config.timing.combinatoric_max_cols.min(n_max.saturating_sub(1)).max(2);
    (p4.max(2).min(hi), hi)
}

fn finish(
    points: &[LabeledPoint],
    plane1: SvmFit,
    plane2: SvmFit,
    p4: usize,
    p8_of: impl FnOnce(Option<(f64, f64)>) -> usize,
) -> Result<Derived, TuneError> {
    // p8 only matters for orientation bookkeeping, so a provisional value works
    let provisional = assemble_params(points, plane1.plane, plane2.plane, p4, p4.max(2))?;
    let intersection = plane_intersection(&provisional);
    let params = assemble_params(points, plane1.plane, plane2.plane, p4, p8_of(intersection))?;
    Ok(Derived {
        intersection: plane_intersection(&params),
        params,
        plane1,
        plane2,
    })
}

/// Fits both planes and sets `p8` to the rounded `n` of their intersection,
/// kept within `[max(p4, 2), combinatoric_max_cols]`.
pub fn derive_params(points: &[LabeledPoint], p4: usize, config: &TuneConfig) -> Result<Derived, TuneError> {
    if points.is_empty() {
        return Err(TuneError::EmptyGrid);
    }
    let (small, all) = training_sets(points, p4, config);
    let plane1 = fit_hard_margin_svm(&small, AlgorithmId::Combinatoric, AlgorithmId::Glynn, config.min_margin_ratio)?;
    let plane2 = fit_hard_margin_svm(&all, AlgorithmId::Glynn, AlgorithmId::Ryser, config.min_margin_ratio)?;
    let (lo, hi) = p8_bounds(points, p4, config);
    finish(points, plane1, plane2, p4, |x| {
        x.filter(|(n, _)| n.is_finite())
            .map_or(hi, |(n, _)| (n.round().max(0.0) as usize).clamp(lo, hi))
    })
}

/// Like [`derive_params`] with both planes forced through `anchor = (n, r)`,
/// so `p8` is the rounded anchor column.
pub fn derive_anchored_params(
    points: &[LabeledPoint],
    p4: usize,
    anchor: (f64, f64),
    config: &TuneConfig,
) -> Result<Derived, TuneError> {
    if points.is_empty() {
        return Err(TuneError::EmptyGrid);
    }
    let (small, all) = training_sets(points, p4, config);
    let through = |pts: &[LabeledPoint], a: AlgorithmId, b: AlgorithmId| {
        max_margin_plane_through(&training_points(pts, a, b, config.min_margin_ratio), (anchor.1, anchor.0))
    };
    let plane1 = through(&small, AlgorithmId::Combinatoric, AlgorithmId::Glynn)?;
    let plane2 = through(&all, AlgorithmId::Glynn, AlgorithmId::Ryser)?;
    let (lo, _) = p8_bounds(points, p4, config);
    finish(points, plane1, plane2, p4, |_| (anchor.0.round().max(0.0) as usize).max(lo))
}

#[derive(Debug, Clone)]
pub struct TuneReport {
    pub samples: Vec<BenchmarkSample>,
    pub points: Vec<LabeledPoint>,
    pub p4: usize,
    pub derived: Derived,
}

impl TuneReport {
    pub fn params(&self) -> &TuningParams {
        &self.derived.params
    }
}

/// Runs the full pipeline: grid timing, labelling, `p4` scan and plane fits.
pub fn tune(config: &TuneConfig, progress: impl FnMut(&BenchmarkSample)) -> Result<TuneReport, TuneError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let shapes = grid_shapes(config.n_range.clone(), &config.ratios);
    let samples = run_grid(&shapes, &config.timing, &mut rng, progress);
    fit_samples(samples, config)
}

/// The fitting half of [`tune`], for previously recorded timings.
pub fn fit_samples(samples: Vec<BenchmarkSample>, config: &TuneConfig) -> Result<TuneReport, TuneError> {
    let points = label_points(&samples);
    let p4 = detect_small_square_cutoff(&points);
    let derived = match config.anchor {
        Some(anchor) => derive_anchored_params(&points, p4, anchor, config)?,
        None => derive_params(&points, p4, config)?,
    };
    Ok(TuneReport {
        samples,
        points,
        p4,
        derived,
    })
}

pub fn emit_tuning_file(params: &TuningParams, path: impl AsRef<Path>) -> Result<(), TuneError> {
    params.save(path)?;
    Ok(())
}

/// Dispatch check on one shape: what `opt` picked against what was fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub m: usize,
    pub n: usize,
    pub selected: AlgorithmId,
    pub fastest: AlgorithmId,
    pub selected_seconds: f64,
    pub fastest_seconds: f64,
}

impl ProbeResult {
    pub fn slowdown(&self) -> f64 {
        self.selected_seconds / self.fastest_seconds
    }
}

/// Re-times every feasible algorithm on each shape and compares the fastest
/// with the dispatcher's choice.
pub fn probe_dispatch(
    params: &TuningParams,
    shapes: &[(usize, usize)],
    timing: &TimingConfig,
    seed: u64,
) -> Vec<ProbeResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shapes
        .iter()
        .filter_map(|&(m, n)| {
            let (m, n) = (m.min(n), m.max(n));
            let selected = select_algorithm(m, n, params);
            let times: Vec<(AlgorithmId, f64)> = AlgorithmId::ALL
                .iter()
                .filter_map(|&a| time_algorithm(a, m, n, timing, &mut rng).map(|s| (a, s.median_seconds)))
                .collect();
            let &(fastest, fastest_seconds) = times.iter().min_by(|x, y| x.1.total_cmp(&y.1))?;
            let selected_seconds = times
                .iter()
                .find(|(a, _)| *a == selected)
                .map_or(f64::INFINITY, |&(_, t)| t);
            Some(ProbeResult {
                m,
                n,
                selected,
                fastest,
                selected_seconds,
                fastest_seconds,
            })
        })
        .collect()
}
