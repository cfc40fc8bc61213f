//! Exact two-feature hard-margin linear SVM.
//!
//! In two dimensions the maximum-margin plane is fixed by at most three
//! support vectors: either one point per class (the plane is their
//! perpendicular bisector) or two points of one class and one of the other
//! (the margin lines run parallel to the pair). Enumerating those candidates,
//! ordered by `||w||`, and keeping the first that satisfies every constraint
//! gives the exact optimum for the small training sets the tuner produces.

use super::TuneError;

/// A training point with features `(r, n)` and a class label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingPoint {
    pub r: f64,
    pub n: f64,
    /// `true` for the class that must land on the positive side.
    pub positive: bool,
}

/// The plane `w_r * r + w_n * n + bias = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatingPlane {
    pub weight_r: f64,
    pub weight_n: f64,
    pub bias: f64,
}

impl SeparatingPlane {
    #[inline]
    pub fn eval(&self, r: f64, n: f64) -> f64 {
        self.weight_r * r + self.weight_n * n + self.bias
    }

    pub fn norm(&self) -> f64 {
        self.weight_r.hypot(self.weight_n)
    }

    /// Distance from the plane to the closest training point, for a
    /// canonical hard-margin solution.
    pub fn geometric_margin(&self) -> f64 {
        1.0 / self.norm()
    }

    pub fn flipped(&self) -> SeparatingPlane {
        SeparatingPlane {
            weight_r: -self.weight_r,
            weight_n: -self.weight_n,
            bias: -self.bias,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmFit {
    pub plane: SeparatingPlane,
    /// `false` when no separating line exists and the plane is the
    /// minimum-misclassification fallback.
    pub separable: bool,
    pub misclassified: usize,
}

const FEASIBILITY_TOL: f64 = 1e-9;

/// Fits the maximum-margin plane with the positive class on the positive
/// side. Falls back to a minimum-misclassification line when the classes
/// cannot be separated.
pub fn max_margin_plane(points: &[TrainingPoint]) -> Result<SvmFit, TuneError> {
    let mut pts: Vec<TrainingPoint> = Vec::with_capacity(points.len());
    for p in points {
        if !pts.contains(p) {
            pts.push(*p);
        }
    }
    let pos: Vec<[f64; 2]> = pts.iter().filter(|p| p.positive).map(|p| [p.r, p.n]).collect();
    let neg: Vec<[f64; 2]> = pts.iter().filter(|p| !p.positive).map(|p| [p.r, p.n]).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(TuneError::MissingClass);
    }

    let mut candidates: Vec<SeparatingPlane> = Vec::new();
    for a in &pos {
        for b in &neg {
            if let Some(p) = bisector(*a, *b) {
                candidates.push(p);
            }
        }
    }
    for (same, other, sign) in [(&pos, &neg, 1.0), (&neg, &pos, -1.0)] {
        for i in 0..same.len() {
            for j in i + 1..same.len() {
                for k in other {
                    if let Some(p) = parallel_support(same[i], same[j], *k, sign) {
                        candidates.push(p);
                    }
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let feasible = |p: &SeparatingPlane| {
        pos.iter().all(|x| p.eval(x[0], x[1]) >= 1.0 - FEASIBILITY_TOL)
            && neg.iter().all(|x| p.eval(x[0], x[1]) <= -1.0 + FEASIBILITY_TOL)
    };
    if let Some(plane) = candidates.into_iter().find(feasible) {
        return Ok(SvmFit {
            plane,
            separable: true,
            misclassified: 0,
        });
    }
    Ok(min_misclassification(&pos, &neg))
}

/// Maximum-margin plane constrained to pass through `anchor = (r, n)`.
///
/// Lines through a fixed point form a one-parameter family; the margin as a
/// function of the normal's angle is a lower envelope of sinusoids, so its
/// maximum sits either at one point's own peak or where two points tie.
/// Those angles are enumerated exactly. Without a separating line through
/// the anchor, the minimum-misclassification line through it is returned.
pub fn max_margin_plane_through(points: &[TrainingPoint], anchor: (f64, f64)) -> Result<SvmFit, TuneError> {
    let (r0, n0) = anchor;
    let mut signed: Vec<[f64; 2]> = Vec::new();
    for p in points {
        let y = if p.positive { 1.0 } else { -1.0 };
        let d = [y * (p.r - r0), y * (p.n - n0)];
        if !signed.contains(&d) {
            signed.push(d);
        }
    }
    if !points.iter().any(|p| p.positive) || points.iter().all(|p| p.positive) {
        return Err(TuneError::MissingClass);
    }
    let margin = |u: [f64; 2]| signed.iter().map(|d| u[0] * d[0] + u[1] * d[1]).fold(f64::INFINITY, f64::min);
    let unit = |v: [f64; 2]| {
        let h = v[0].hypot(v[1]);
        (h > 0.0).then(|| [v[0] / h, v[1] / h])
    };
    let mut candidates: Vec<[f64; 2]> = signed.iter().filter_map(|&d| unit(d)).collect();
    for i in 0..signed.len() {
        for j in i + 1..signed.len() {
            let e = [signed[i][0] - signed[j][0], signed[i][1] - signed[j][1]];
            if let Some(u) = unit([-e[1], e[0]]) {
                candidates.push(u);
                candidates.push([-u[0], -u[1]]);
            }
        }
    }
    let best = candidates
        .into_iter()
        .map(|u| (margin(u), u))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((gamma, u)) = best.filter(|(g, _)| *g > 0.0) {
        let w = [u[0] / gamma, u[1] / gamma];
        return Ok(SvmFit {
            plane: SeparatingPlane {
                weight_r: w[0],
                weight_n: w[1],
                bias: -(w[0] * r0 + w[1] * n0),
            },
            separable: true,
            misclassified: 0,
        });
    }

    let span = |k: usize| {
        let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let v = if k == 0 { p.r } else { p.n };
            (lo.min(v), hi.max(v))
        });
        (hi - lo).max(1e-9)
    };
    let (sr, sn) = (span(0), span(1));
    const STEPS: usize = 36_000;
    let mut fallback: Option<(usize, f64, [f64; 2])> = None;
    for step in 0..STEPS {
        let theta = std::f64::consts::TAU * step as f64 / STEPS as f64;
        let w = [theta.cos() / sr, theta.sin() / sn];
        let errors = signed.iter().filter(|d| w[0] * d[0] + w[1] * d[1] <= 0.0).count();
        let score = margin(w);
        let better = match &fallback {
            None => true,
            Some((e, s, _)) => errors < *e || (errors == *e && score > *s),
        };
        if better {
            fallback = Some((errors, score, w));
        }
    }
    let (misclassified, _, w) = fallback.expect("non-empty sweep");
    Ok(SvmFit {
        plane: SeparatingPlane {
            weight_r: w[0],
            weight_n: w[1],
            bias: -(w[0] * r0 + w[1] * n0),
        },
        separable: false,
        misclassified,
    })
}

/// Perpendicular bisector of `a` (positive) and `b`, scaled so both sit on
/// the margin.
fn bisector(a: [f64; 2], b: [f64; 2]) -> Option<SeparatingPlane> {
    let d = [a[0] - b[0], a[1] - b[1]];
    let dd = d[0] * d[0] + d[1] * d[1];
    if dd == 0.0 {
        return None;
    }
    let w = [2.0 * d[0] / dd, 2.0 * d[1] / dd];
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    Some(SeparatingPlane {
        weight_r: w[0],
        weight_n: w[1],
        bias: -(w[0] * mid[0] + w[1] * mid[1]),
    })
}

/// Plane whose margin line through `p` and `q` (same class, label `sign`)
/// is parallel to `q - p`, with `k` on the opposite margin line.
fn parallel_support(p: [f64; 2], q: [f64; 2], k: [f64; 2], sign: f64) -> Option<SeparatingPlane> {
    let u = [-(q[1] - p[1]), q[0] - p[0]];
    if u[0] == 0.0 && u[1] == 0.0 {
        return None;
    }
    let denom = u[0] * (p[0] - k[0]) + u[1] * (p[1] - k[1]);
    if denom.abs() < 1e-12 {
        return None;
    }
    let alpha = 2.0 * sign / denom;
    let w = [alpha * u[0], alpha * u[1]];
    Some(SeparatingPlane {
        weight_r: w[0],
        weight_n: w[1],
        bias: sign - (w[0] * p[0] + w[1] * p[1]),
    })
}

/// Sweeps line directions (features rescaled to comparable ranges) and the
/// best threshold for each; ties prefer the widest gap.
fn min_misclassification(pos: &[[f64; 2]], neg: &[[f64; 2]]) -> SvmFit {
    let all = || pos.iter().chain(neg.iter());
    let span = |k: usize| {
        let (lo, hi) = all().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x[k]), hi.max(x[k])));
        (hi - lo).max(1e-9)
    };
    let (sr, sn) = (span(0), span(1));

    let mut best: Option<(usize, f64, SeparatingPlane)> = None;
    const STEPS: usize = 3600;
    for step in 0..STEPS {
        let theta = std::f64::consts::TAU * step as f64 / STEPS as f64;
        // direction in scaled space, mapped back to raw weights
        let w = [theta.cos() / sr, theta.sin() / sn];
        let mut proj: Vec<(f64, bool)> = pos
            .iter()
            .map(|x| (w[0] * x[0] + w[1] * x[1], true))
            .chain(neg.iter().map(|x| (w[0] * x[0] + w[1] * x[1], false)))
            .collect();
        proj.sort_by(|a, b| a.0.total_cmp(&b.0));
        // threshold between proj[i-1] and proj[i]: below -> negative
        let mut errors = neg.len();
        for i in 0..=proj.len() {
            if i > 0 {
                errors += if proj[i - 1].1 { 1 } else { 0 };
                errors -= if proj[i - 1].1 { 0 } else { 1 };
            }
            let lo = if i == 0 { proj[0].0 - 1.0 } else { proj[i - 1].0 };
            let hi = if i == proj.len() { proj[i - 1].0 + 1.0 } else { proj[i].0 };
            let gap = hi - lo;
            let better = match &best {
                None => true,
                Some((e, g, _)) => errors < *e || (errors == *e && gap > *g),
            };
            if better {
                let plane = SeparatingPlane {
                    weight_r: w[0],
                    weight_n: w[1],
                    bias: -(lo + hi) / 2.0,
                };
                best = Some((errors, gap, plane));
            }
        }
    }
    let (misclassified, _, plane) = best.expect("non-empty sweep");
    SvmFit {
        plane,
        separable: false,
        misclassified,
    }
}
