//! Closed-form amplitude and phase resonances, loci and existence conditions.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    gamma_capital, OscillatorConfig, ResonanceId, ResonanceKind, ResonancePoint,
};
use crate::phase::resonant_phase_lag;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimaryResonanceResult {
    pub omega_a: f64,
    pub omega_p: f64,
    pub amp_a: f64,
    pub amp_p: f64,
    pub phi_a: f64,
    pub delta_omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSign {
    Plus,
    Minus,
}

impl RootSign {
    fn sign(self) -> f64 {
        match self {
            RootSign::Plus => 1.0,
            RootSign::Minus => -1.0,
        }
    }
}

/// A point of a resonance locus parametrized by frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub omega_p: f64,
    pub forcing_gamma_bar: f64,
    pub amplitude: f64,
    pub root_sign: RootSign,
}

/// The frequency loci available in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Locus {
    Sub13Phase,
    Sub13Amplitude,
    Sub12Phase,
}

struct Params {
    w0: f64,
    zeta: f64,
    alpha: f64,
}

impl Params {
    fn of(cfg: &OscillatorConfig) -> Self {
        Self {
            w0: cfg.omega0(),
            zeta: cfg.zeta_bar(),
            alpha: cfg.alpha(),
        }
    }

    fn damped(cfg: &OscillatorConfig) -> Result<Self> {
        let p = Self::of(cfg);
        if p.zeta <= 0.0 {
            return Err(Error::ZeroDamping);
        }
        Ok(p)
    }

    fn hardening(cfg: &OscillatorConfig) -> Result<Self> {
        let p = Self::damped(cfg)?;
        if p.alpha <= 0.0 {
            return Err(Error::NotHardening);
        }
        Ok(p)
    }

    /// `3 alpha gamma^2 / (4 zeta^2 w0^6)`
    fn x(&self, g: f64) -> f64 {
        3.0 * self.alpha * g * g / (4.0 * self.zeta.powi(2) * self.w0.powi(6))
    }
}

pub fn linear_amplitude_resonance(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::damped(cfg)?;
    let z2 = p.zeta * p.zeta;
    if z2 >= 0.5 {
        return Err(Error::OverdampedPeak);
    }
    let g = cfg.gamma_bar(f);
    let s = (1.0 - 2.0 * z2).sqrt();
    Ok(ResonancePoint {
        omega: p.w0 * s,
        amplitude: g / (2.0 * p.zeta * p.w0 * p.w0 * (1.0 - z2).sqrt()),
        phase_lag: s.atan2(p.zeta),
        kind: ResonanceKind::AmplitudeResonance,
        harmonic_index: 1,
    })
}

pub fn linear_phase_resonance(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::damped(cfg)?;
    Ok(ResonancePoint {
        omega: p.w0,
        amplitude: cfg.gamma_bar(f) / (2.0 * p.zeta * p.w0 * p.w0),
        phase_lag: FRAC_PI_2,
        kind: ResonanceKind::PhaseResonance,
        harmonic_index: 1,
    })
}

// (1 - zeta^2)^2 + X under the root of the amplitude-resonance expressions
fn amp_root(p: &Params, x: f64) -> f64 {
    let z2 = p.zeta * p.zeta;
    ((1.0 - z2).powi(2) + x).sqrt()
}

pub fn primary_amplitude_resonance(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::damped(cfg)?;
    let g = cfg.gamma_bar(f);
    let z2 = p.zeta * p.zeta;
    let s = amp_root(&p, p.x(g));
    let inner = 1.0 - 3.0 * z2 + s;
    // (z^2 - 1) + s rewritten as X / (s + 1 - z^2) to keep the alpha -> 0 limit exact
    let amp = g / (p.zeta * p.w0 * p.w0) / (2.0 * (s + 1.0 - z2)).sqrt();
    Ok(ResonancePoint {
        omega: p.w0 * FRAC_1_SQRT_2 * inner.sqrt(),
        amplitude: amp,
        phase_lag: inner.sqrt().atan2(std::f64::consts::SQRT_2 * p.zeta),
        kind: ResonanceKind::AmplitudeResonance,
        harmonic_index: 1,
    })
}

pub fn primary_phase_resonance(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::damped(cfg)?;
    let g = cfg.gamma_bar(f);
    let q = (1.0 + p.x(g)).sqrt();
    Ok(ResonancePoint {
        omega: p.w0 * FRAC_1_SQRT_2 * (1.0 + q).sqrt(),
        amplitude: g / (p.zeta * p.w0 * p.w0) / (2.0 * (q + 1.0)).sqrt(),
        phase_lag: FRAC_PI_2,
        kind: ResonanceKind::PhaseResonance,
        harmonic_index: 1,
    })
}

/// `omega_p - omega_a`, evaluated without cancellation.
pub fn primary_resonance_gap(cfg: &OscillatorConfig, f: f64) -> Result<f64> {
    let p = Params::damped(cfg)?;
    let g = cfg.gamma_bar(f);
    let z2 = p.zeta * p.zeta;
    let x = p.x(g);
    let q = (1.0 + x).sqrt();
    let s = amp_root(&p, x);
    let a = 1.0 + q;
    let b = 1.0 - 3.0 * z2 + s;
    let a_minus_b = 3.0 * z2 + (2.0 * z2 - z2 * z2) / (q + s);
    Ok(p.w0 * FRAC_1_SQRT_2 * a_minus_b / (a.sqrt() + b.sqrt()))
}

pub fn primary_resonance(cfg: &OscillatorConfig, f: f64) -> Result<PrimaryResonanceResult> {
    let a = primary_amplitude_resonance(cfg, f)?;
    let p = primary_phase_resonance(cfg, f)?;
    Ok(PrimaryResonanceResult {
        omega_a: a.omega,
        omega_p: p.omega,
        amp_a: a.amplitude,
        amp_p: p.amplitude,
        phi_a: a.phase_lag,
        delta_omega: primary_resonance_gap(cfg, f)?,
    })
}

/// Multiple-scales prediction, where amplitude and phase resonance coincide.
pub fn multiple_scales_primary(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::damped(cfg)?;
    let g = cfg.gamma_bar(f);
    Ok(ResonancePoint {
        omega: p.w0 + 3.0 * p.alpha * g * g / (32.0 * p.zeta.powi(2) * p.w0.powi(5)),
        amplitude: g / (2.0 * p.zeta * p.w0 * p.w0),
        phase_lag: FRAC_PI_2,
        kind: ResonanceKind::PhaseResonance,
        harmonic_index: 1,
    })
}

/// Static response at `omega0/3`, held constant across the 3:1 window.
pub fn gamma_star(cfg: &OscillatorConfig, f: f64) -> f64 {
    9.0 * cfg.gamma_bar(f) / (8.0 * cfg.omega0().powi(2))
}

fn positive_quadratic_root(c1: f64, c2: f64, c3: f64) -> Result<f64> {
    let disc = c2 * c2 - 4.0 * c1 * c3;
    if disc < 0.0 {
        return Err(Error::NoResonance);
    }
    let u = (-c2 + disc.sqrt()) / (2.0 * c1);
    if u <= 0.0 {
        return Err(Error::NoResonance);
    }
    Ok(u.sqrt())
}

/// Coefficients of the quadratic in `omega_p^2` for the 3:1 quadrature point.
pub fn super31_phase_coefficients(cfg: &OscillatorConfig, f: f64) -> Result<[f64; 3]> {
    let p = Params::hardening(cfg)?;
    let gs = gamma_star(cfg, f);
    Ok([
        1728.0 / p.alpha,
        -144.0 * (2.0 * gs * gs + 4.0 * p.w0 * p.w0 / (3.0 * p.alpha)),
        -p.alpha.powi(2) * gs.powi(6) / (4.0 * p.zeta.powi(2) * p.w0.powi(2)),
    ])
}

pub fn super31_phase_resonance(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::hardening(cfg)?;
    let [c1, c2, c3] = super31_phase_coefficients(cfg, f)?;
    let wp = positive_quadratic_root(c1, c2, c3)?;
    let gs = gamma_star(cfg, f);
    Ok(ResonancePoint {
        omega: wp,
        amplitude: p.alpha * gs.powi(3) / (24.0 * p.zeta * p.w0 * wp),
        phase_lag: FRAC_PI_2,
        kind: ResonanceKind::PhaseResonance,
        harmonic_index: 3,
    })
}

pub fn super31_amplitude_coefficients(cfg: &OscillatorConfig, f: f64) -> Result<[f64; 3]> {
    let p = Params::hardening(cfg)?;
    let gs2 = gamma_star(cfg, f).powi(2);
    let (z2, w02, a) = (p.zeta * p.zeta, p.w0 * p.w0, p.alpha);
    Ok([
        1728.0 / a,
        -144.0 * (2.0 * gs2 + 4.0 * w02 / (3.0 * a) - 3.0 * z2 / (4.0 * a)),
        (2.0 * z2 * w02 / (3.0 * a) - 2.0 * gs2 - 4.0 * w02 / (3.0 * a)) * z2 * w02
            - a * a * gs2.powi(3) / (4.0 * z2 * w02),
    ])
}

pub fn super31_amplitude_resonance(cfg: &OscillatorConfig, f: f64) -> Result<ResonancePoint> {
    let p = Params::hardening(cfg)?;
    let [c1, c2, c3] = super31_amplitude_coefficients(cfg, f)?;
    let wa = positive_quadratic_root(c1, c2, c3)?;
    let gs = gamma_star(cfg, f);
    let zw = p.zeta * p.w0;
    Ok(ResonancePoint {
        omega: wa,
        amplitude: p.alpha * gs.powi(3) / (2.0 * zw * (zw * zw + 144.0 * wa * wa).sqrt()),
        phase_lag: (12.0 * wa).atan2(zw),
        kind: ResonanceKind::AmplitudeResonance,
        harmonic_index: 3,
    })
}

fn locus_pair(
    cfg: &OscillatorConfig,
    omega: f64,
    outer: f64,
    disc: f64,
    scale: f64,
    amplitude: impl Fn(f64) -> f64,
) -> Result<[LocusPoint; 2]> {
    if disc < 0.0 || outer <= 0.0 {
        return Err(Error::BelowFoldPoint { omega });
    }
    let w0sq = cfg.omega0().powi(2);
    let mk = |sign: RootSign| {
        let g2 = (outer + sign.sign() * disc.sqrt()).max(0.0) / scale;
        let gamma = (w0sq - omega * omega).abs() * g2.sqrt();
        LocusPoint {
            omega_p: omega,
            forcing_gamma_bar: gamma,
            amplitude: amplitude(gamma),
            root_sign: sign,
        }
    };
    Ok([mk(RootSign::Minus), mk(RootSign::Plus)])
}

fn abs_gamma_capital(cfg: &OscillatorConfig, omega: f64, gamma: f64) -> f64 {
    gamma_capital(omega, cfg, gamma).map_or(f64::NAN, f64::abs)
}

/// Quadrature (`phi = pi/2`) locus of the 1:3 resonance: `[minus, plus]`.
pub fn sub13_phase_locus(cfg: &OscillatorConfig, omega_p: f64) -> Result<[LocusPoint; 2]> {
    let p = Params::hardening(cfg)?;
    let res = ResonanceId::new(1, 3)?;
    let big_w = res.detuning(omega_p, cfg);
    let disc = big_w * big_w - 32.0 / 9.0 * (p.zeta * p.w0 * omega_p).powi(2);
    locus_pair(cfg, omega_p, big_w, disc, 3.0 * p.alpha, |g| {
        8.0 * p.zeta * p.w0 * omega_p / (9.0 * p.alpha * abs_gamma_capital(cfg, omega_p, g))
    })
}

/// Amplitude-resonance locus of the 1:3 resonance: `[minus, plus]`.
pub fn sub13_amplitude_locus(cfg: &OscillatorConfig, omega_a: f64) -> Result<[LocusPoint; 2]> {
    let p = Params::hardening(cfg)?;
    let res = ResonanceId::new(1, 3)?;
    let big_w = res.detuning(omega_a, cfg);
    let zw = p.zeta * p.w0;
    let s = 1521.0 * zw * zw + 16.0 * omega_a * omega_a;
    let outer = 2.0 * big_w + 13.0 * zw * zw;
    let disc = outer * outer - 8.0 / 9.0 * zw * zw * s;
    locus_pair(cfg, omega_a, outer, disc, 6.0 * p.alpha, |g| {
        2.0 * zw * s.sqrt() / (9.0 * p.alpha * abs_gamma_capital(cfg, omega_a, g))
    })
}

/// Phase lag of the 1:3 amplitude resonance nearest to `pi/2`.
pub fn sub13_amplitude_phase(cfg: &OscillatorConfig, omega_a: f64) -> f64 {
    let x = 4.0 * omega_a / (39.0 * cfg.zeta_bar() * cfg.omega0());
    (PI + x.atan()) / 3.0
}

/// Phase-resonance locus of the 1:2 resonance: `[minus, plus]`.
pub fn sub12_phase_locus(cfg: &OscillatorConfig, omega_p: f64) -> Result<[LocusPoint; 2]> {
    let p = Params::hardening(cfg)?;
    let res = ResonanceId::new(1, 2)?;
    let big_w = res.detuning(omega_p, cfg);
    let disc = big_w * big_w - 12.0 / 11.0 * p.zeta * p.w0 * omega_p.powi(3);
    locus_pair(cfg, omega_p, big_w, disc, 3.0 * p.alpha, |g| {
        let gc = abs_gamma_capital(cfg, omega_p, g);
        (8.0 * p.zeta * p.w0 * omega_p.powi(3) / (33.0 * (p.alpha * gc).powi(2))).sqrt()
    })
}

pub fn locus_at(locus: Locus, cfg: &OscillatorConfig, omega: f64) -> Result<[LocusPoint; 2]> {
    match locus {
        Locus::Sub13Phase => sub13_phase_locus(cfg, omega),
        Locus::Sub13Amplitude => sub13_amplitude_locus(cfg, omega),
        Locus::Sub12Phase => sub12_phase_locus(cfg, omega),
    }
}

/// Frequencies in `omega_range` at which a locus branch carries forcing `f`,
/// sorted by frequency.
pub fn locus_points_at_forcing(
    locus: Locus,
    cfg: &OscillatorConfig,
    f: f64,
    omega_range: (f64, f64),
    n_scan: usize,
) -> Vec<LocusPoint> {
    let target = cfg.gamma_bar(f);
    let (lo, hi) = omega_range;
    let n = n_scan.max(2);
    let gamma_of = |w: f64, idx: usize| {
        locus_at(locus, cfg, w)
            .ok()
            .map(|pair| pair[idx].forcing_gamma_bar - target)
    };
    let mut out = Vec::new();
    for idx in 0..2 {
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=n {
            let w = lo + (hi - lo) * i as f64 / n as f64;
            let cur = gamma_of(w, idx).map(|d| (w, d));
            if let (Some((wa, da)), Some((wb, db))) = (prev, cur) {
                if da == 0.0 || da.signum() != db.signum() {
                    let (mut a, mut b, mut fa) = (wa, wb, da);
                    for _ in 0..200 {
                        let m = 0.5 * (a + b);
                        let Some(fm) = gamma_of(m, idx) else { break };
                        if fm.signum() == fa.signum() {
                            a = m;
                            fa = fm;
                        } else {
                            b = m;
                        }
                        if b - a < 1e-14 * b {
                            break;
                        }
                    }
                    if let Ok(pair) = locus_at(locus, cfg, 0.5 * (a + b)) {
                        out.push(pair[idx]);
                    }
                }
            }
            prev = cur;
        }
    }
    out.sort_by(|a, b| a.omega_p.total_cmp(&b.omega_p));
    out
}

/// The two sides of the 1:2 existence inequality,
/// `4 Omega/(3 alpha)` and `2 Gamma^2 + 8 zeta w0 w^3/(33 alpha^2 Gamma^2)`.
pub fn sub12_inequality(cfg: &OscillatorConfig, f: f64, omega: f64) -> Result<(f64, f64)> {
    let p = Params::hardening(cfg)?;
    let res = ResonanceId::new(1, 2)?;
    let gc = gamma_capital(omega, cfg, cfg.gamma_bar(f))?;
    let lhs = 4.0 * res.detuning(omega, cfg) / (3.0 * p.alpha);
    let g2 = gc * gc;
    let rhs = 2.0 * g2 + 8.0 * p.zeta * p.w0 * omega.powi(3) / (33.0 * p.alpha.powi(2) * g2);
    Ok((lhs, rhs))
}

fn scan_window(
    range: (f64, f64),
    n: usize,
    holds: impl Fn(f64) -> bool,
) -> Option<(f64, f64)> {
    let (lo, hi) = range;
    let at = |i: usize| lo + (hi - lo) * i as f64 / n as f64;
    let refine = |mut a: f64, mut b: f64, a_holds: bool| {
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if holds(m) == a_holds {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let mut best: Option<(f64, f64)> = None;
    let mut start: Option<f64> = None;
    let mut prev = holds(at(0));
    if prev {
        start = Some(lo);
    }
    for i in 1..=n {
        let cur = holds(at(i));
        if cur && !prev {
            start = Some(refine(at(i - 1), at(i), false));
        }
        if !cur && prev {
            let end = refine(at(i - 1), at(i), true);
            let s = start.take().unwrap();
            if best.is_none_or(|(a, b)| end - s > b - a) {
                best = Some((s, end));
            }
        }
        prev = cur;
    }
    if let Some(s) = start {
        if best.is_none_or(|(a, b)| hi - s > b - a) {
            best = Some((s, hi));
        }
    }
    best
}

/// Widest frequency window in `omega_range` where the 1:2 response exists.
/// Amplitude resonance sits at the upper end.
pub fn sub12_existence_window(
    cfg: &OscillatorConfig,
    f: f64,
    omega_range: (f64, f64),
) -> Result<Option<(f64, f64)>> {
    Params::hardening(cfg)?;
    Ok(scan_window(omega_range, 4000, |w| {
        sub12_inequality(cfg, f, w).is_ok_and(|(l, r)| l >= r)
    }))
}

/// The 5:1 existence inequality at one frequency.
pub fn super51_existence(cfg: &OscillatorConfig, f: f64, omega: f64) -> Result<bool> {
    let p = Params::hardening(cfg)?;
    let g = cfg.gamma_bar(f);
    if g == 0.0 {
        return Ok(false);
    }
    let res = ResonanceId::new(5, 1)?;
    let gc = gamma_capital(omega, cfg, g)?;
    let mid = 4.0 * res.detuning(omega, cfg) / (3.0 * p.alpha);
    let lower = 2.0 * gc * gc;
    let bound = 3.0 * p.alpha.powi(2) * gc.powi(5) / (2560.0 * p.zeta * p.w0 * omega.powi(3));
    Ok(lower <= mid && mid <= bound * bound + lower)
}

pub fn super51_existence_window(
    cfg: &OscillatorConfig,
    f: f64,
    omega_range: (f64, f64),
) -> Result<Option<(f64, f64)>> {
    Params::hardening(cfg)?;
    Ok(scan_window(omega_range, 4000, |w| {
        super51_existence(cfg, f, w).unwrap_or(false)
    }))
}

/// One closed-form record per family; `None` where the quantity is undefined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRecord {
    pub omega_a: Option<f64>,
    pub omega_p: Option<f64>,
    pub amp_a: Option<f64>,
    pub amp_p: Option<f64>,
    pub phi_a: Option<f64>,
    pub phi_p: Option<f64>,
    pub delta_omega: Option<f64>,
}

fn highest_locus_point(
    locus: Locus,
    cfg: &OscillatorConfig,
    f: f64,
    res: ResonanceId,
) -> Option<LocusPoint> {
    let w0 = res.nominal_frequency(cfg.omega0());
    locus_points_at_forcing(locus, cfg, f, (w0 * 1.000001, 5.0 * w0), 20000)
        .into_iter()
        .last()
}

pub fn closed_form_summary(
    res: ResonanceId,
    cfg: &OscillatorConfig,
    f: f64,
) -> Result<ClosedFormRecord> {
    let mut rec = ClosedFormRecord {
        phi_p: Some(resonant_phase_lag(res)),
        ..Default::default()
    };
    let diff = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(p, a)| p - a);
    match (res.k(), res.nu()) {
        (1, 1) => {
            let r = primary_resonance(cfg, f)?;
            rec = ClosedFormRecord {
                omega_a: Some(r.omega_a),
                omega_p: Some(r.omega_p),
                amp_a: Some(r.amp_a),
                amp_p: Some(r.amp_p),
                phi_a: Some(r.phi_a),
                phi_p: Some(FRAC_PI_2),
                delta_omega: Some(r.delta_omega),
            };
        }
        (3, 1) => {
            let a = super31_amplitude_resonance(cfg, f)?;
            let p = super31_phase_resonance(cfg, f)?;
            rec.omega_a = Some(a.omega);
            rec.amp_a = Some(a.amplitude);
            rec.phi_a = Some(a.phase_lag);
            rec.omega_p = Some(p.omega);
            rec.amp_p = Some(p.amplitude);
            rec.delta_omega = Some(p.omega - a.omega);
        }
        (1, 3) => {
            if let Some(p) = highest_locus_point(Locus::Sub13Phase, cfg, f, res) {
                rec.omega_p = Some(p.omega_p);
                rec.amp_p = Some(p.amplitude);
            }
            if let Some(a) = highest_locus_point(Locus::Sub13Amplitude, cfg, f, res) {
                rec.omega_a = Some(a.omega_p);
                rec.amp_a = Some(a.amplitude);
                rec.phi_a = Some(sub13_amplitude_phase(cfg, a.omega_p));
            }
            rec.delta_omega = diff(rec.omega_p, rec.omega_a);
        }
        (1, 2) => {
            if let Some(p) = highest_locus_point(Locus::Sub12Phase, cfg, f, res) {
                rec.omega_p = Some(p.omega_p);
                rec.amp_p = Some(p.amplitude);
            }
            let w0 = res.nominal_frequency(cfg.omega0());
            if let Some((_, sup)) = sub12_existence_window(cfg, f, (w0 * 1.000001, 5.0 * w0))? {
                rec.omega_a = Some(sup);
                rec.amp_a = crate::slow_flow::r0_approximation(res, sup, cfg, f)
                    .ok()
                    .map(|r| r.r0);
                rec.phi_a = rec.phi_p;
            }
            rec.delta_omega = diff(rec.omega_p, rec.omega_a);
        }
        _ => {}
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OscillatorConfig {
        OscillatorConfig::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn linear_resonances() {
        let a = linear_amplitude_resonance(&cfg(), 0.01).unwrap();
        assert!((a.omega - 0.9999749997).abs() < 1e-9);
        assert!((a.amplitude - 1.0000125002).abs() < 1e-9);
        assert!((a.phase_lag - 1.5657962435).abs() < 1e-9);
        let p = linear_phase_resonance(&cfg(), 0.01).unwrap();
        assert_eq!((p.omega, p.phase_lag), (1.0, FRAC_PI_2));
        assert!((p.amplitude - 1.0).abs() < 1e-14);
        assert!((linear_phase_resonance(&cfg(), 0.005).unwrap().amplitude - 0.5).abs() < 1e-14);
        assert_eq!(linear_amplitude_resonance(&cfg(), 0.0).unwrap().amplitude, 0.0);
        let heavy = OscillatorConfig::new(1.0, 1.6, 1.0, 1.0).unwrap();
        assert_eq!(linear_amplitude_resonance(&heavy, 0.01), Err(Error::OverdampedPeak));
        let undamped = OscillatorConfig::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(linear_phase_resonance(&undamped, 0.01), Err(Error::ZeroDamping));
    }

    #[test]
    fn primary_values() {
        let a = primary_amplitude_resonance(&cfg(), 0.01).unwrap();
        assert!((a.omega - 1.2247270104).abs() < 1e-9);
        assert!((a.amplitude - 0.8165016841).abs() < 1e-9);
        assert!((a.phase_lag - 1.5667138070).abs() < 1e-9);
        let b = primary_amplitude_resonance(&cfg(), 0.005).unwrap();
        assert!((b.omega - 1.0776784672).abs() < 1e-9);
        assert!((b.amplitude - 0.4639552833).abs() < 1e-9);
        let p = primary_phase_resonance(&cfg(), 0.01).unwrap();
        assert!((p.omega - 1.5f64.sqrt()).abs() < 1e-12);
        assert!((p.amplitude - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let self_consistent = 0.01 / (2.0 * 0.005 * p.omega);
        assert!(rel(p.amplitude, self_consistent) < 1e-12);
        let gap = primary_resonance_gap(&cfg(), 0.01).unwrap();
        assert!((gap - 1.786097e-5).abs() < 1e-10);
        assert!((gap - (p.omega - a.omega)).abs() < 1e-12);
    }

    #[test]
    fn primary_limits() {
        let p = primary_phase_resonance(&cfg(), 0.0).unwrap();
        assert!((p.omega - 1.0).abs() < 1e-15 && p.amplitude == 0.0);
        let lin = linear_amplitude_resonance(&cfg(), 0.01).unwrap();
        let gap0 = primary_resonance_gap(&cfg(), 0.0).unwrap();
        assert!((gap0 - (1.0 - lin.omega)).abs() < 1e-15);
        let weak = OscillatorConfig::new(1.0, 0.01, 1.0, 1e-9).unwrap();
        let a = primary_amplitude_resonance(&weak, 0.01).unwrap();
        assert!(rel(a.amplitude, lin.amplitude) < 1e-8);
        assert!(rel(a.omega, lin.omega) < 1e-8);
    }

    #[test]
    fn multiple_scales() {
        let m = multiple_scales_primary(&cfg(), 0.01).unwrap();
        assert!((m.omega - 1.375).abs() < 1e-12);
        assert!((m.amplitude - 1.0).abs() < 1e-12);
        let p = primary_phase_resonance(&cfg(), 0.01).unwrap();
        assert!(((m.omega - p.omega) - 0.1502551).abs() < 1e-6);
    }

    #[test]
    fn superharmonic_31() {
        let [c1, c2, c3] = super31_phase_coefficients(&cfg(), 0.2).unwrap();
        assert_eq!(c1, 1728.0);
        assert!((c2 + 206.58).abs() < 1e-9);
        assert!((c3 + 1.29746337890625).abs() < 1e-12);
        let p = super31_phase_resonance(&cfg(), 0.2).unwrap();
        assert!((p.omega - 0.3543021644).abs() < 1e-9);
        assert!((p.amplitude - 0.2679122075).abs() < 1e-9);
        let a = super31_amplitude_resonance(&cfg(), 0.2).unwrap();
        assert!((a.omega - 0.3543002824).abs() < 1e-9);
        assert!((a.amplitude - 0.2679134454).abs() < 1e-9);
        assert!(rel(a.amplitude, p.amplitude) < 1e-4);
        assert!((a.phase_lag - FRAC_PI_2).abs() < 1.2e-3);
        let low = super31_phase_resonance(&cfg(), 0.1).unwrap();
        assert!(low.omega < p.omega && low.amplitude < p.amplitude);
        let zero = super31_phase_resonance(&cfg(), 0.0).unwrap();
        assert!((zero.omega - 1.0 / 3.0).abs() < 1e-12 && zero.amplitude == 0.0);
    }

    #[test]
    fn sub13_loci() {
        let [m, p] = sub13_phase_locus(&cfg(), 3.2).unwrap();
        assert!((m.forcing_gamma_bar - 0.3084832760).abs() < 1e-9);
        assert!((m.amplitude - 0.4259982422).abs() < 1e-9);
        assert!((p.forcing_gamma_bar - 2.7833305113).abs() < 1e-9);
        assert!((p.amplitude - 0.0472144191).abs() < 1e-9);
        assert_eq!((m.root_sign, p.root_sign), (RootSign::Minus, RootSign::Plus));
        assert!(matches!(
            sub13_phase_locus(&cfg(), 3.001),
            Err(Error::BelowFoldPoint { .. })
        ));
        let [am, _] = sub13_amplitude_locus(&cfg(), 3.2).unwrap();
        let ratio_formula = (1521.0 * 0.005f64.powi(2) + 16.0 * 3.2 * 3.2).sqrt() / (4.0 * 3.2);
        assert!((ratio_formula - 1.0001160).abs() < 1e-7);
        assert!(am.amplitude > 0.0);
        let phi = sub13_amplitude_phase(&cfg(), 3.2);
        assert!((phi - FRAC_PI_2).abs() < 0.006);
    }

    #[test]
    fn sub12_locus_and_window() {
        let [m, p] = sub12_phase_locus(&cfg(), 2.4).unwrap();
        assert!((m.forcing_gamma_bar - 0.8523945761).abs() < 1e-9);
        assert!((m.amplitude - 0.7228632790).abs() < 1e-9);
        assert!((p.forcing_gamma_bar - 2.4330336660).abs() < 1e-9);
        assert!((p.amplitude - 0.2532495735).abs() < 1e-9);
        assert!(matches!(
            sub12_phase_locus(&cfg(), 2.2),
            Err(Error::BelowFoldPoint { .. })
        ));
        let (l, r) = sub12_inequality(&cfg(), 1.0, 2.4).unwrap();
        assert!((l - 0.5866666667).abs() < 1e-9);
        assert!((r - 0.4679301).abs() < 1e-6);
        assert_eq!(sub12_existence_window(&cfg(), 0.8, (2.01, 6.0)).unwrap(), None);
        let (a, b) = sub12_existence_window(&cfg(), 1.0, (2.01, 6.0)).unwrap().unwrap();
        assert!((a - 2.2448).abs() < 1e-3 && (b - 2.7946).abs() < 1e-3);
        let (c, d) = sub12_existence_window(&cfg(), 3.0, (2.01, 6.0)).unwrap().unwrap();
        assert!(d - c > b - a);
    }

    #[test]
    fn super51_window() {
        assert!(!super51_existence(&cfg(), 0.0, 0.21).unwrap());
        assert_eq!(super51_existence_window(&cfg(), 0.1, (0.201, 0.3)).unwrap(), None);
        let (a, b) = super51_existence_window(&cfg(), 0.3, (0.201, 0.3)).unwrap().unwrap();
        assert!((a - 0.21432).abs() < 1e-4 && (b - 0.214694).abs() < 1e-4);
        assert!(super51_existence(&cfg(), 0.3, 0.2145).unwrap());
        assert!(!super51_existence(&cfg(), 0.3, 0.22).unwrap());
    }

    #[test]
    fn summary_records() {
        let p = ResonanceId::PRIMARY;
        let r = closed_form_summary(p, &cfg(), 0.01).unwrap();
        assert!(r.delta_omega.unwrap() > 0.0);
        let s = closed_form_summary(ResonanceId::new(1, 3).unwrap(), &cfg(), 0.6).unwrap();
        let wp = s.omega_p.unwrap();
        let [m, _] = sub13_phase_locus(&cfg(), wp).unwrap();
        assert!((m.forcing_gamma_bar - 0.6).abs() < 1e-9);
        let t = closed_form_summary(ResonanceId::new(5, 1).unwrap(), &cfg(), 0.3).unwrap();
        assert_eq!(t.omega_p, None);
        assert_eq!(t.phi_p, Some(FRAC_PI_2));
    }
}
