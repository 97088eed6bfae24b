//! Pseudo-arclength continuation of `F(y) = 0`, `F: R^{n+1} -> R^n`, with the
//! continuation parameter stored in the last component of `y`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub trait Curve {
    /// `F(y)`, length `n`.
    fn residual(&self, y: &DVector<f64>) -> DVector<f64>;
    /// `dF/dy`, shape `n x (n+1)`.
    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64>;
    /// Convergence threshold on `|F|_inf`.
    fn tolerance(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub initial: f64,
    pub min: f64,
    pub max: f64,
    pub max_points: usize,
    pub max_corrector_iter: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            initial: 0.01,
            min: 1e-7,
            max: 0.05,
            max_points: 5000,
            max_corrector_iter: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub y: DVector<f64>,
    pub tangent: DVector<f64>,
    /// The parameter component of the tangent changed sign since the previous point.
    pub fold: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    Rejected,
    Closed,
    StepTooSmall,
    MaxPoints,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub points: Vec<CurvePoint>,
    pub closed: bool,
    pub reason: StopReason,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.amax()
}

/// Null vector of `J` from a square SVD (a zero row is appended).
pub fn null_vector(j: &DMatrix<f64>) -> DVector<f64> {
    let n = j.ncols();
    let mut sq = DMatrix::zeros(n, n);
    sq.view_mut((0, 0), (j.nrows(), n)).copy_from(j);
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    v_t.row(imin).transpose().normalize()
}

/// Unit tangent at `y`, oriented along `prev` when given.
pub fn tangent(curve: &impl Curve, y: &DVector<f64>, prev: Option<&DVector<f64>>) -> DVector<f64> {
    let j = curve.jacobian(y);
    let n = j.nrows();
    if let Some(p) = prev {
        let mut a = j.clone().insert_row(n, 0.0);
        a.row_mut(n).copy_from(&p.transpose());
        let mut rhs = DVector::zeros(n + 1);
        rhs[n] = 1.0;
        if let Some(t) = a.lu().solve(&rhs) {
            if t.iter().all(|v| v.is_finite()) && t.norm() > 0.0 {
                return t.normalize();
            }
        }
        let t = null_vector(&j);
        return if t.dot(p) < 0.0 { -t } else { t };
    }
    null_vector(&j)
}

/// Newton on `[F(y); normal . (y - anchor)] = 0` starting from `start`.
/// Returns the corrected point and the iteration count.
pub fn correct(
    curve: &impl Curve,
    start: &DVector<f64>,
    anchor: &DVector<f64>,
    normal: &DVector<f64>,
    max_iter: usize,
) -> Option<(DVector<f64>, usize)> {
    let tol = curve.tolerance();
    let mut y = start.clone();
    for it in 0..=max_iter {
        let f = curve.residual(&y);
        let g = normal.dot(&(&y - anchor));
        if !f.iter().all(|v| v.is_finite()) {
            return None;
        }
        if inf_norm(&f) < tol && g.abs() < 1e3 * f64::EPSILON * (1.0 + y.norm()) {
            return Some((y, it));
        }
        if it == max_iter {
            break;
        }
        let j = curve.jacobian(&y);
        let n = j.nrows();
        let mut a = j.insert_row(n, 0.0);
        a.row_mut(n).copy_from(&normal.transpose());
        let rhs = f.push(g);
        let dy = a.lu().solve(&rhs)?;
        y -= dy;
    }
    None
}

/// Point on the curve near the chord `a + s (b - a)`, constrained to the
/// hyperplane through that chord point orthogonal to the chord.
pub fn solve_on_chord(
    curve: &impl Curve,
    a: &DVector<f64>,
    b: &DVector<f64>,
    s: f64,
    max_iter: usize,
) -> Option<DVector<f64>> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return Some(a.clone());
    }
    let anchor = a + &d * s;
    correct(curve, &anchor, &anchor, &(d / len), max_iter).map(|(y, _)| y)
}

fn dist_to_segment(p: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let d = b - a;
    let l2 = d.norm_squared();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).dot(&d) / l2).clamp(0.0, 1.0);
    (p - (a + d * s)).norm()
}

/// Trace the curve from the solution `y0`, initially moving so that the
/// parameter component has the sign of `direction`. `accept` is called on
/// every new point; returning `false` stops after that point is stored.
pub fn trace(
    curve: &impl Curve,
    y0: &DVector<f64>,
    direction: f64,
    ctrl: &StepControl,
    mut accept: impl FnMut(&DVector<f64>) -> bool,
) -> Trace {
    let np = y0.len() - 1;
    let mut t = tangent(curve, y0, None);
    if t[np] * direction < 0.0 {
        t = -t;
    }
    let mut points = vec![CurvePoint {
        y: y0.clone(),
        tangent: t.clone(),
        fold: false,
    }];
    let mut ds = ctrl.initial.clamp(ctrl.min, ctrl.max);
    let mut travelled = 0.0;
    loop {
        if points.len() >= ctrl.max_points {
            return Trace { points, closed: false, reason: StopReason::MaxPoints };
        }
        let last = points.last().unwrap();
        let (y, t) = (last.y.clone(), last.tangent.clone());
        let pred = &y + &t * ds;
        let step = correct(curve, &pred, &pred, &t, ctrl.max_corrector_iter).and_then(|(yc, it)| {
            let tn = tangent(curve, &yc, Some(&t));
            let jump = (&yc - &y).norm();
            let smooth = tn.dot(&t) > 0.7 && jump < 2.0 * ds;
            (smooth || ds <= 2.0 * ctrl.min).then_some((yc, tn, it))
        });
        let Some((yc, tn, it)) = step else {
            ds *= 0.5;
            if ds < ctrl.min {
                return Trace { points, closed: false, reason: StopReason::StepTooSmall };
            }
            continue;
        };
        travelled += (&yc - &y).norm();
        let fold = tn[np].signum() != t[np].signum() && t[np] != 0.0;
        if points.len() > 4
            && travelled > 4.0 * ds
            && dist_to_segment(y0, &y, &yc) < 0.5 * (&yc - &y).norm().max(ctrl.min)
        {
            return Trace { points, closed: true, reason: StopReason::Closed };
        }
        let keep_going = accept(&yc);
        points.push(CurvePoint { y: yc, tangent: tn, fold });
        if !keep_going {
            return Trace { points, closed: false, reason: StopReason::Rejected };
        }
        if it < 4 {
            ds = (ds * 1.5).min(ctrl.max);
        }
    }
}

/// Trace both ways from `y0` and join into one ordered list of increasing
/// initial parameter. A closed loop is returned from the forward pass alone.
pub fn trace_both(
    curve: &impl Curve,
    y0: &DVector<f64>,
    ctrl: &StepControl,
    mut accept: impl FnMut(&DVector<f64>) -> bool,
) -> Trace {
    let fwd = trace(curve, y0, 1.0, ctrl, &mut accept);
    if fwd.closed {
        return fwd;
    }
    let bwd = trace(curve, y0, -1.0, ctrl, &mut accept);
    let mut points: Vec<CurvePoint> = bwd
        .points
        .into_iter()
        .skip(1)
        .rev()
        .map(|mut p| {
            p.tangent = -p.tangent;
            p
        })
        .collect();
    // fold flags mark the later point of a pair; shift them after reversal
    let n = points.len();
    let flags: Vec<bool> = points.iter().map(|p| p.fold).collect();
    for i in 0..n {
        points[i].fold = if i + 1 < n { flags[i + 1] } else { false };
    }
    let mut fwd_points = fwd.points;
    if n > 0 {
        let np = y0.len() - 1;
        fwd_points[0].fold = points[n - 1].tangent[np].signum() != fwd_points[0].tangent[np].signum();
    }
    points.extend(fwd_points);
    Trace {
        points,
        closed: false,
        reason: fwd.reason,
    }
}
