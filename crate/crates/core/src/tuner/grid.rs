use std::io::{self, Write};
use std::ops::RangeInclusive;

use rand::Rng;

use super::timing::{time_algorithm, BenchmarkSample, TimingConfig};
use crate::algorithms::AlgorithmId;

pub const BENCH_CSV_HEADER: &str = "algorithm,m,n,ratio,median_seconds,trials";

/// Grid shapes: for every `n` and ratio, `m = round(r n)` clamped to `1..=n`,
/// deduplicated, ordered by `n` then `m`.
pub fn grid_shapes(n_range: RangeInclusive<usize>, ratios: &[f64]) -> Vec<(usize, usize)> {
    let mut shapes: Vec<(usize, usize)> = n_range
        .flat_map(|n| {
            ratios
                .iter()
                .map(move |r| (((r * n as f64).round() as usize).clamp(1, n), n))
        })
        .collect();
    shapes.sort_by_key(|&(m, n)| (n, m));
    shapes.dedup();
    shapes
}

/// Times every feasible algorithm on every shape.
pub fn run_grid<R: Rng + ?Sized>(
    shapes: &[(usize, usize)],
    timing: &TimingConfig,
    rng: &mut R,
    mut progress: impl FnMut(&BenchmarkSample),
) -> Vec<BenchmarkSample> {
    let mut out = Vec::new();
    for &(m, n) in shapes {
        for alg in AlgorithmId::ALL {
            if let Some(s) = time_algorithm(alg, m, n, timing, rng) {
                progress(&s);
                out.push(s);
            }
        }
    }
    out
}

/// One grid cell with per-algorithm medians; infeasible algorithms have no
/// time and count as infinitely slow.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub m: usize,
    pub n: usize,
    pub r: f64,
    /// Indexed by [`AlgorithmId::index`].
    pub times: [Option<f64>; 3],
    /// Fastest algorithm.
    pub label: AlgorithmId,
    /// Runner-up time over winner time; infinite with a single contender.
    pub margin_ratio: f64,
}

impl LabeledPoint {
    /// A point whose only known fact is its winner.
    pub fn with_label(m: usize, n: usize, label: AlgorithmId) -> Self {
        let mut times = [None; 3];
        times[label.index()] = Some(1.0);
        LabeledPoint {
            m,
            n,
            r: m as f64 / n as f64,
            times,
            label,
            margin_ratio: f64::INFINITY,
        }
    }

    fn from_times(m: usize, n: usize, times: [Option<f64>; 3]) -> Option<Self> {
        let mut timed: Vec<(AlgorithmId, f64)> = AlgorithmId::ALL
            .iter()
            .filter_map(|&a| times[a.index()].map(|t| (a, t)))
            .collect();
        timed.sort_by(|x, y| x.1.total_cmp(&y.1));
        let &(label, best) = timed.first()?;
        let margin_ratio = timed.get(1).map_or(f64::INFINITY, |&(_, t)| t / best);
        Some(LabeledPoint {
            m,
            n,
            r: m as f64 / n as f64,
            times,
            label,
            margin_ratio,
        })
    }

    /// Winner between `a` and `b` only, with the slower-to-faster time ratio.
    pub fn pair_label(&self, a: AlgorithmId, b: AlgorithmId) -> Option<(AlgorithmId, f64)> {
        match (self.times[a.index()], self.times[b.index()]) {
            (None, None) => None,
            (Some(_), None) => Some((a, f64::INFINITY)),
            (None, Some(_)) => Some((b, f64::INFINITY)),
            (Some(ta), Some(tb)) if ta <= tb => Some((a, tb / ta)),
            (Some(ta), Some(tb)) => Some((b, ta / tb)),
        }
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }
}

/// Groups samples by shape; the result follows `n` then `m`.
pub fn label_points(samples: &[BenchmarkSample]) -> Vec<LabeledPoint> {
    let mut shapes: Vec<(usize, usize)> = samples.iter().map(|s| (s.m, s.n)).collect();
    shapes.sort_by_key(|&(m, n)| (n, m));
    shapes.dedup();
    shapes
        .into_iter()
        .filter_map(|(m, n)| {
            let mut times = [None; 3];
            for s in samples.iter().filter(|s| s.m == m && s.n == n) {
                times[s.algorithm.index()] = Some(s.median_seconds);
            }
            LabeledPoint::from_times(m, n, times)
        })
        .collect()
}

/// Largest `n` such that enumeration is fastest on every square grid point
/// up to `n`; `1` when it already loses on the smallest square.
pub fn detect_small_square_cutoff(points: &[LabeledPoint]) -> usize {
    let mut squares: Vec<&LabeledPoint> = points.iter().filter(|p| p.is_square()).collect();
    squares.sort_by_key(|p| p.n);
    let mut cutoff = 1;
    for p in squares {
        if p.label != AlgorithmId::Combinatoric {
            break;
        }
        cutoff = p.n;
    }
    cutoff
}

/// Writes samples sorted by algorithm name, then `n`, then `m`.
pub fn write_bench_csv<W: Write>(mut w: W, samples: &[BenchmarkSample]) -> io::Result<()> {
    let mut sorted: Vec<&BenchmarkSample> = samples.iter().collect();
    sorted.sort_by(|a, b| {
        (a.algorithm.name(), a.n, a.m).cmp(&(b.algorithm.name(), b.n, b.m))
    });
    writeln!(w, "{BENCH_CSV_HEADER}")?;
    for s in sorted {
        writeln!(
            w,
            "{},{},{},{:?},{:e},{}",
            s.algorithm, s.m, s.n, s.ratio, s.median_seconds, s.trials
        )?;
    }
    Ok(())
}

/// Parses the output of [`write_bench_csv`].
pub fn read_bench_csv(text: &str) -> Result<Vec<BenchmarkSample>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(BENCH_CSV_HEADER) {
        return Err(format!("expected header {BENCH_CSV_HEADER:?}"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || format!("line {}: malformed record {line:?}", i + 2);
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 6 {
                return Err(bad());
            }
            Ok(BenchmarkSample {
                algorithm: f[0].parse().map_err(|_| bad())?,
                m: f[1].parse().map_err(|_| bad())?,
                n: f[2].parse().map_err(|_| bad())?,
                ratio: f[3].parse().map_err(|_| bad())?,
                median_seconds: f[4].parse().map_err(|_| bad())?,
                trials: f[5].parse().map_err(|_| bad())?,
                kind: crate::matrix::ElementKind::Float64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ElementKind;

    fn sample(algorithm: AlgorithmId, m: usize, n: usize, t: f64) -> BenchmarkSample {
        BenchmarkSample {
            algorithm,
            m,
            n,
            ratio: m as f64 / n as f64,
            median_seconds: t,
            trials: 5,
            kind: ElementKind::Float64,
        }
    }

    #[test]
    fn shapes_are_deduplicated() {
        let eighths: Vec<f64> = (1..=8).map(|k| k as f64 / 8.0).collect();
        let s = grid_shapes(2..=3, &eighths);
        assert_eq!(s, vec![(1, 2), (2, 2), (1, 3), (2, 3), (3, 3)]);
        let s = grid_shapes(8..=8, &eighths);
        assert_eq!(s.len(), 8);
    }

    #[test]
    fn labels_and_margins() {
        let samples = [
            sample(AlgorithmId::Combinatoric, 2, 4, 1.0),
            sample(AlgorithmId::Glynn, 2, 4, 3.0),
            sample(AlgorithmId::Ryser, 2, 4, 2.0),
            sample(AlgorithmId::Glynn, 9, 20, 5.0),
        ];
        let pts = label_points(&samples);
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].label, AlgorithmId::Combinatoric);
        assert_eq!(pts[0].margin_ratio, 2.0);
        assert_eq!(pts[1].label, AlgorithmId::Glynn);
        assert_eq!(pts[1].margin_ratio, f64::INFINITY);
        assert_eq!(
            pts[0].pair_label(AlgorithmId::Glynn, AlgorithmId::Ryser),
            Some((AlgorithmId::Ryser, 1.5))
        );
        assert_eq!(
            pts[1].pair_label(AlgorithmId::Combinatoric, AlgorithmId::Glynn),
            Some((AlgorithmId::Glynn, f64::INFINITY))
        );
        assert_eq!(pts[1].pair_label(AlgorithmId::Combinatoric, AlgorithmId::Ryser), None);
    }

    #[test]
    fn small_square_cutoff() {
        use AlgorithmId::*;
        let pts = |labels: &[(usize, AlgorithmId)]| -> Vec<LabeledPoint> {
            labels.iter().map(|&(n, a)| LabeledPoint::with_label(n, n, a)).collect()
        };
        assert_eq!(detect_small_square_cutoff(&pts(&[(2, Combinatoric), (3, Combinatoric), (4, Glynn)])), 3);
        assert_eq!(detect_small_square_cutoff(&pts(&[(2, Glynn), (3, Combinatoric)])), 1);
        assert_eq!(detect_small_square_cutoff(&pts(&[(5, Combinatoric), (2, Combinatoric), (6, Ryser), (7, Combinatoric)])), 5);
        let mut mixed = pts(&[(2, Combinatoric), (3, Combinatoric)]);
        mixed.push(LabeledPoint::with_label(1, 3, Ryser));
        assert_eq!(detect_small_square_cutoff(&mixed), 3);
    }

    #[test]
    fn bench_csv_order() {
        let samples = [
            sample(AlgorithmId::Ryser, 2, 4, 1e-6),
            sample(AlgorithmId::Glynn, 4, 4, 2e-6),
            sample(AlgorithmId::Combinatoric, 3, 4, 3e-6),
            sample(AlgorithmId::Combinatoric, 1, 4, 4e-6),
            sample(AlgorithmId::Combinatoric, 2, 2, 5e-6),
        ];
        let mut buf = Vec::new();
        write_bench_csv(&mut buf, &samples).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], BENCH_CSV_HEADER);
        assert_eq!(lines[1], "combinatoric,2,2,1.0,5e-6,5");
        assert_eq!(lines[2], "combinatoric,1,4,0.25,4e-6,5");
        assert_eq!(lines[3], "combinatoric,3,4,0.75,3e-6,5");
        assert_eq!(lines[4], "glynn,4,4,1.0,2e-6,5");
        assert_eq!(lines[5], "ryser,2,4,0.5,1e-6,5");
        let mut back = read_bench_csv(&text).unwrap();
        back.sort_by_key(|s| (s.n, s.m));
        let mut want = samples.to_vec();
        want.sort_by_key(|s| (s.n, s.m));
        assert_eq!(back, want);
        assert!(read_bench_csv("algorithm,m\n").is_err());
    }
}
