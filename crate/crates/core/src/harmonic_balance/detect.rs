use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{Branch, BranchPoint, HbProblem, PointTag};
use crate::continuation::solve_on_chord;
use crate::phase::{angle_diff, equivalent_phase_lags};

const PHASE_TOL: f64 = 1e-8;
const CHORD_ITER: usize = 20;
const MAX_REFINE: usize = 80;
const GOLDEN_ITER: usize = 48;
/// Below this amplitude the phase of a harmonic carries no information.
const MIN_AMPLITUDE: f64 = 1e-8;

/// Scalar tracked along a branch when looking for extrema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Measure {
    Amplitude(usize),
    MaxDisplacement,
    Omega,
}

impl Measure {
    fn eval(self, p: &BranchPoint) -> f64 {
        match self {
            Measure::Amplitude(k) => p.amplitude(k),
            Measure::MaxDisplacement => p.max_displacement,
            Measure::Omega => p.omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub point: BranchPoint,
    pub value: f64,
    pub maximum: bool,
}

fn pairs(branch: &Branch) -> Vec<(usize, usize)> {
    let n = branch.points.len();
    let mut out: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    if branch.closed && n > 2 {
        out.push((n - 1, 0));
    }
    out
}

/// Locate the point between `a` and `b` where the phase of harmonic `k`
/// equals `target`, by Illinois regula falsi on the chord parameter.
pub fn refine_crossing(
    problem: &HbProblem,
    a: &BranchPoint,
    b: &BranchPoint,
    k: usize,
    target: f64,
) -> Option<BranchPoint> {
    let ya = a.state(problem);
    let yb = b.state(problem);
    let at = |s: f64| -> Option<(DVector<f64>, f64)> {
        let y = solve_on_chord(problem, &ya, &yb, s, CHORD_ITER)?;
        let p = problem.to_solution(&y.rows(0, problem.dim()).into_owned(), y[problem.dim()]);
        Some((y, angle_diff(p.phase(k), target)))
    };
    let (mut s0, mut f0) = (0.0, angle_diff(a.phase(k), target));
    let (mut s1, mut f1) = (1.0, angle_diff(b.phase(k), target));
    if f0.abs() < PHASE_TOL {
        return Some(a.clone());
    }
    if f1.abs() < PHASE_TOL {
        return Some(b.clone());
    }
    for _ in 0..MAX_REFINE {
        let s = (s0 * f1 - s1 * f0) / (f1 - f0);
        let (y, fs) = at(s)?;
        if fs.abs() < PHASE_TOL || (s1 - s0).abs() < 1e-14 {
            return Some(BranchPoint::from_state(problem, &y));
        }
        if fs * f1 < 0.0 {
            (s0, f0) = (s1, f1);
        } else {
            f0 *= 0.5;
        }
        (s1, f1) = (s, fs);
    }
    None
}

/// Points where the phase of harmonic `k` crosses a member of the
/// equivalent resonant set, refined to `|dphi| < 1e-8`.
pub fn detect_phase_resonance(problem: &HbProblem, branch: &Branch) -> Vec<BranchPoint> {
    let k = problem.k();
    let targets = equivalent_phase_lags(problem.resonance);
    let mut out = Vec::new();
    for (i, j) in pairs(branch) {
        let (a, b) = (&branch.points[i], &branch.points[j]);
        if a.amplitude(k) < MIN_AMPLITUDE || b.amplitude(k) < MIN_AMPLITUDE {
            continue;
        }
        for &t in &targets {
            let da = angle_diff(a.phase(k), t);
            let db = angle_diff(b.phase(k), t);
            let brackets = (da <= 0.0 && db > 0.0) || (da >= 0.0 && db < 0.0);
            if !brackets || da.abs() > FRAC_PI_2 || db.abs() > FRAC_PI_2 {
                continue;
            }
            if let Some(mut p) = refine_crossing(problem, a, b, k, t) {
                p.tags.push(PointTag::PhaseResonance(k as u32));
                out.push(p);
            }
        }
    }
    out
}

fn golden(
    problem: &HbProblem,
    ya: &DVector<f64>,
    yb: &DVector<f64>,
    measure: Measure,
    sign: f64,
) -> Option<BranchPoint> {
    let g = |s: f64| -> Option<(BranchPoint, f64)> {
        let y = solve_on_chord(problem, ya, yb, s, CHORD_ITER)?;
        let p = BranchPoint::from_state(problem, &y);
        let v = sign * measure.eval(&p);
        Some((p, v))
    };
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut p1 = g(x1)?;
    let mut p2 = g(x2)?;
    for _ in 0..GOLDEN_ITER {
        if p1.1 > p2.1 {
            hi = x2;
            (x2, p2) = (x1, p1);
            x1 = hi - r * (hi - lo);
            p1 = g(x1)?;
        } else {
            lo = x1;
            (x1, p1) = (x2, p2);
            x2 = lo + r * (hi - lo);
            p2 = g(x2)?;
        }
    }
    Some(if p1.1 > p2.1 { p1.0 } else { p2.0 })
}

/// Interior local maxima and minima of `measure`, each refined by a golden
/// search on the chord spanning its two neighbours.
pub fn find_extrema(problem: &HbProblem, branch: &Branch, measure: Measure) -> Vec<Extremum> {
    let n = branch.points.len();
    let v: Vec<f64> = branch.points.iter().map(|p| measure.eval(p)).collect();
    let mut out = Vec::new();
    let range: Vec<usize> = if branch.closed { (0..n).collect() } else { (1..n.saturating_sub(1)).collect() };
    for i in range {
        let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
        let is_max = v[i] >= v[im] && v[i] > v[ip];
        let is_min = v[i] <= v[im] && v[i] < v[ip];
        if !(is_max || is_min) {
            continue;
        }
        let sign = if is_max { 1.0 } else { -1.0 };
        let ya = branch.points[im].state(problem);
        let yb = branch.points[ip].state(problem);
        let point = golden(problem, &ya, &yb, measure, sign)
            .filter(|p| sign * measure.eval(p) >= sign * v[i])
            .unwrap_or_else(|| branch.points[i].clone());
        out.push(Extremum {
            value: measure.eval(&point),
            point,
            maximum: is_max,
        });
    }
    out
}
