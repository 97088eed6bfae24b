//! Phase-lag conventions and the resonant phase-lag rule.

use std::f64::consts::{PI, TAU};

use crate::model::ResonanceId;

/// Wrap to `[0, 2pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Signed difference `a - b` wrapped to `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Phase lag characterizing both amplitude and phase resonance of `k:nu`
/// for a hardening oscillator.
pub fn resonant_phase_lag(res: ResonanceId) -> f64 {
    if res.both_odd() {
        PI / 2.0
    } else {
        3.0 * PI / (4.0 * res.nu() as f64)
    }
}

/// Spacing between physically equivalent phase lags of harmonic `k`.
///
/// Shifting time by one forcing period moves the phase by `2 pi k/nu`; the
/// map `x(t) -> -x(t + T/2)` adds `pi (k + nu)/nu`. The generated subgroup
/// has spacing `2pi/nu` when `k + nu` is even and `pi/nu` otherwise.
pub fn equivalence_spacing(res: ResonanceId) -> f64 {
    if res.both_odd() {
        TAU / res.nu() as f64
    } else {
        PI / res.nu() as f64
    }
}

/// All resonant phase lags in `[0, 2pi)` equivalent to [`resonant_phase_lag`].
pub fn equivalent_phase_lags(res: ResonanceId) -> Vec<f64> {
    let base = resonant_phase_lag(res);
    let step = equivalence_spacing(res);
    let n = (TAU / step).round() as usize;
    let mut out: Vec<f64> = (0..n).map(|i| wrap_angle(base + i as f64 * step)).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Reduce `phi` onto `[0, spacing)` relative to the canonical lag; two
/// phases describe the same response iff their reductions agree.
pub fn reduce_phase(res: ResonanceId, phi: f64) -> f64 {
    (phi - resonant_phase_lag(res)).rem_euclid(equivalence_spacing(res))
}

/// Smallest absolute distance from `phi` to the equivalent set.
pub fn distance_to_resonant_set(res: ResonanceId, phi: f64) -> f64 {
    let s = equivalence_spacing(res);
    let d = reduce_phase(res, phi);
    d.min(s - d)
}

/// Signed offset of `phi` from the nearest member of the equivalent set.
pub fn offset_from_resonant_set(res: ResonanceId, phi: f64) -> f64 {
    let s = equivalence_spacing(res);
    let d = reduce_phase(res, phi);
    if d > 0.5 * s {
        d - s
    } else {
        d
    }
}
