//! Direct time integration of the forced oscillator, used as an independent
//! check on the averaged and harmonic-balance solutions.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicSolution;
use crate::harmonic_balance::BranchPoint;
use crate::model::{gamma_capital, Forcing, OscillatorConfig, ResonanceId};
use crate::phase::angle_diff;
use crate::slow_flow::SteadyState;

pub const MIN_STEPS_PER_PERIOD: usize = 200;
const MIN_TAIL_PERIODS: usize = 8;
const SETTLE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub forcing: Forcing,
    pub t0: f64,
    pub time_step: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.time_step * i as f64
    }

    pub fn last_state(&self) -> (f64, f64) {
        (*self.x.last().unwrap(), *self.v.last().unwrap())
    }
}

struct Rhs {
    c: f64,
    w0sq: f64,
    alpha: f64,
    gamma: f64,
    omega: f64,
}

impl Rhs {
    fn new(cfg: &OscillatorConfig, forcing: &Forcing) -> Self {
        Self {
            c: 2.0 * cfg.zeta_bar() * cfg.omega0(),
            w0sq: cfg.omega0().powi(2),
            alpha: cfg.alpha(),
            gamma: forcing.gamma_bar(cfg),
            omega: forcing.omega,
        }
    }

    fn accel(&self, t: f64, x: f64, v: f64) -> f64 {
        self.gamma * (self.omega * t).sin() - self.c * v - self.w0sq * x - self.alpha * x * x * x
    }

    fn step(&self, t: f64, x: f64, v: f64, h: f64) -> (f64, f64) {
        let k1x = v;
        let k1v = self.accel(t, x, v);
        let k2x = v + 0.5 * h * k1v;
        let k2v = self.accel(t + 0.5 * h, x + 0.5 * h * k1x, k2x);
        let k3x = v + 0.5 * h * k2v;
        let k3v = self.accel(t + 0.5 * h, x + 0.5 * h * k2x, k3x);
        let k4x = v + h * k3v;
        let k4v = self.accel(t + h, x + h * k3x, k4x);
        (
            x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }
}

fn check_steps(steps_per_period: usize) -> Result<()> {
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::InvalidParameter(format!(
            "steps_per_period {steps_per_period} < {MIN_STEPS_PER_PERIOD}"
        )));
    }
    Ok(())
}

/// Advance `(x, v)` from `t0` over `n_periods` forcing periods without
/// storing samples.
pub fn advance(
    cfg: &OscillatorConfig,
    forcing: &Forcing,
    t0: f64,
    state: (f64, f64),
    n_periods: usize,
    steps_per_period: usize,
) -> Result<(f64, f64)> {
    check_steps(steps_per_period)?;
    let rhs = Rhs::new(cfg, forcing);
    let h = forcing.period() / steps_per_period as f64;
    let (mut x, mut v) = state;
    for n in 0..n_periods * steps_per_period {
        let t = t0 + h * n as f64;
        (x, v) = rhs.step(t, x, v, h);
        if !(x.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite { t: t + h });
        }
    }
    Ok((x, v))
}

/// Fixed-step RK4 trajectory starting at `t0`.
pub fn integrate_from(
    cfg: &OscillatorConfig,
    forcing: &Forcing,
    t0: f64,
    x0: f64,
    v0: f64,
    n_periods: usize,
    steps_per_period: usize,
) -> Result<Trajectory> {
    check_steps(steps_per_period)?;
    let rhs = Rhs::new(cfg, forcing);
    let h = forcing.period() / steps_per_period as f64;
    let n = n_periods * steps_per_period;
    let mut xs = Vec::with_capacity(n + 1);
    let mut vs = Vec::with_capacity(n + 1);
    let (mut x, mut v) = (x0, v0);
    xs.push(x);
    vs.push(v);
    for i in 0..n {
        let t = t0 + h * i as f64;
        (x, v) = rhs.step(t, x, v, h);
        if !(x.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite { t: t + h });
        }
        xs.push(x);
        vs.push(v);
    }
    Ok(Trajectory {
        forcing: *forcing,
        t0,
        time_step: h,
        x: xs,
        v: vs,
    })
}

pub fn integrate(
    cfg: &OscillatorConfig,
    forcing: &Forcing,
    x0: f64,
    v0: f64,
    n_periods: usize,
    steps_per_period: usize,
) -> Result<Trajectory> {
    integrate_from(cfg, forcing, 0.0, x0, v0, n_periods, steps_per_period)
}

/// `w0^2 x^2/2 + alpha x^4/4 + v^2/2`.
pub fn energy(cfg: &OscillatorConfig, x: f64, v: f64) -> f64 {
    0.5 * cfg.omega0().powi(2) * x * x + 0.25 * cfg.alpha() * x.powi(4) + 0.5 * v * v
}

/// Forcing periods covering `500/zeta` radians of forcing phase.
pub fn transient_periods(cfg: &OscillatorConfig) -> usize {
    (500.0 / (cfg.zeta_bar().max(1e-6) * TAU)).ceil() as usize
}

fn samples_per_base(traj: &Trajectory, base_freq: f64) -> Result<usize> {
    let m = TAU / base_freq / traj.time_step;
    let mr = m.round();
    if mr < 1.0 || (m - mr).abs() > 1e-6 * m {
        return Err(Error::InsufficientData(
            "base period is not a whole number of steps".into(),
        ));
    }
    Ok(mr as usize)
}

fn project(traj: &Trajectory, start: usize, len: usize, base_freq: f64, n_harm: usize) -> HarmonicSolution {
    let mut sol = HarmonicSolution::zeros(base_freq, n_harm);
    let mut a0 = 0.0;
    let mut acc = vec![(0.0, 0.0); n_harm];
    for i in start..start + len {
        let x = traj.x[i];
        // phase measured from the sample index keeps the sum exactly periodic
        let th = base_freq * traj.time(i);
        a0 += x;
        for (j, a) in acc.iter_mut().enumerate() {
            let (s, c) = ((j + 1) as f64 * th).sin_cos();
            a.0 += x * c;
            a.1 += x * s;
        }
    }
    let scale = 2.0 / len as f64;
    sol.a0 = a0 / len as f64;
    for (j, a) in acc.into_iter().enumerate() {
        sol.coeffs[j] = (a.0 * scale, a.1 * scale);
    }
    sol
}

fn rms(xs: &[f64]) -> f64 {
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Fourier projection over the largest whole number of base periods at the
/// end of the trajectory.
pub fn steady_harmonics(traj: &Trajectory, base_freq: f64, n_harm: usize) -> Result<HarmonicSolution> {
    let m = samples_per_base(traj, base_freq)?;
    let periods = (traj.len() - 1) / m;
    if periods < MIN_TAIL_PERIODS {
        return Err(Error::InsufficientData(format!(
            "{periods} base periods, need {MIN_TAIL_PERIODS}"
        )));
    }
    let end = traj.len() - 1;
    let last = rms(&traj.x[end - m..end]);
    let prev = rms(&traj.x[end - 2 * m..end - m]);
    let rel = (last - prev).abs() / last.max(prev).max(f64::MIN_POSITIVE);
    if rel > SETTLE_TOL && last.max(prev) > 1e-12 {
        return Err(Error::NotSettled { rel_change: rel });
    }
    Ok(project(traj, end - periods * m, periods * m, base_freq, n_harm))
}

/// RMS of the equation residual of `sol` over one response period.
pub fn ode_residual_rms(sol: &HarmonicSolution, cfg: &OscillatorConfig, forcing: &Forcing) -> f64 {
    let m = 64 * sol.n_harmonics().max(8);
    let period = sol.period();
    let c = 2.0 * cfg.zeta_bar() * cfg.omega0();
    let w0sq = cfg.omega0().powi(2);
    let g = forcing.gamma_bar(cfg);
    let res: Vec<f64> = (0..m)
        .map(|i| {
            let t = period * i as f64 / m as f64;
            let x = sol.eval(t);
            sol.eval_acceleration(t) + c * sol.eval_velocity(t) + w0sq * x + cfg.alpha() * x.powi(3)
                - g * (forcing.omega * t).sin()
        })
        .collect();
    rms(&res)
}

/// Terminal-state errors with steps `h` and `h/2` against an `h/4` reference;
/// their ratio is close to 16 for a fourth-order scheme.
pub fn convergence_ratio(
    cfg: &OscillatorConfig,
    forcing: &Forcing,
    state: (f64, f64),
    n_periods: usize,
    steps_per_period: usize,
) -> Result<f64> {
    let run = |s| advance(cfg, forcing, 0.0, state, n_periods, s);
    let coarse = run(steps_per_period)?;
    let half = run(2 * steps_per_period)?;
    let fine = run(4 * steps_per_period)?;
    let err = |a: (f64, f64)| (a.0 - fine.0).hypot(a.1 - fine.1);
    Ok(err(coarse) / err(half))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative amplitude error per significant harmonic.
    pub amplitude: f64,
    /// Phase error (rad) per significant harmonic.
    pub phase: f64,
    pub steps_per_period: usize,
    /// Forcing periods integrated before extraction; `None` uses [`transient_periods`].
    pub transient_periods: Option<usize>,
    pub tail_periods: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            amplitude: 0.01,
            phase: 0.05,
            steps_per_period: MIN_STEPS_PER_PERIOD,
            transient_periods: None,
            tail_periods: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Match,
    Mismatch,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicError {
    pub harmonic: usize,
    pub expected: f64,
    pub simulated: f64,
    pub amplitude_error: f64,
    pub phase_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub omega: f64,
    pub harmonics: Vec<HarmonicError>,
    pub ode_residual_rms: f64,
    pub verdict: Verdict,
    pub predicted_stable: Option<bool>,
    /// The verdict agrees with the predicted stability.
    pub consistent: bool,
    pub simulated: Option<HarmonicSolution>,
}

impl VerificationReport {
    pub fn max_amplitude_error(&self) -> f64 {
        self.harmonics.iter().map(|h| h.amplitude_error).fold(0.0, f64::max)
    }

    pub fn max_phase_error(&self) -> f64 {
        self.harmonics.iter().map(|h| h.phase_error.abs()).fold(0.0, f64::max)
    }
}

/// A point to verify: a harmonic-balance point or an averaged steady state.
#[derive(Debug, Clone, Copy)]
pub enum PointRef<'a> {
    Branch(&'a BranchPoint),
    SlowFlow(&'a SteadyState, ResonanceId),
}

/// Periodic response implied by an averaged steady state: harmonic `k` of
/// `omega/nu` from `(r, phi)`, plus the forced term at harmonic `nu`.
pub fn reconstruct_slow_flow(
    state: &SteadyState,
    res: ResonanceId,
    cfg: &OscillatorConfig,
    f: f64,
    n_harmonics: usize,
) -> HarmonicSolution {
    let (k, nu) = (res.k() as usize, res.nu() as usize);
    let n = n_harmonics.max(k).max(nu);
    let mut sol = HarmonicSolution::zeros(state.omega / nu as f64, n);
    sol.set_polar(k, state.state.r, state.state.phi);
    if k != nu {
        if let Ok(g) = gamma_capital(state.omega, cfg, cfg.gamma_bar(f)) {
            sol.coeffs[nu - 1].1 += g;
        }
    }
    sol
}

fn compare(expected: &HarmonicSolution, simulated: &HarmonicSolution) -> Vec<HarmonicError> {
    let n = expected.n_harmonics();
    let peak = (1..=n).map(|j| expected.amplitude(j)).fold(0.0, f64::max);
    (1..=n)
        .filter(|&j| expected.amplitude(j) > 1e-2 * peak && peak > 0.0)
        .map(|j| {
            let (a, b) = (expected.amplitude(j), simulated.amplitude(j));
            HarmonicError {
                harmonic: j,
                expected: a,
                simulated: b,
                amplitude_error: (b - a).abs() / a,
                phase_error: angle_diff(simulated.phase(j), expected.phase(j)),
            }
        })
        .collect()
}

/// Integrate from the point's own periodic state and check that the
/// response keeps its harmonic signature.
pub fn verify_point(point: PointRef<'_>, cfg: &OscillatorConfig, f: f64, tol: &Tolerances) -> VerificationReport {
    let (expected, omega, stable) = match point {
        PointRef::Branch(p) => (p.solution.clone(), p.omega, p.stable),
        PointRef::SlowFlow(s, res) => (reconstruct_slow_flow(s, res, cfg, f, 2 * res.nu() as usize + 1), s.omega, s.stable),
    };
    let nu = (omega / expected.base_freq).round().max(1.0) as usize;
    let forcing = Forcing { amplitude: f, omega };
    let ode_residual_rms = ode_residual_rms(&expected, cfg, &forcing);
    let n_trans = tol.transient_periods.unwrap_or_else(|| transient_periods(cfg));
    let n_trans = n_trans.div_ceil(nu) * nu;
    let simulated = advance(
        cfg,
        &forcing,
        0.0,
        (expected.eval(0.0), expected.eval_velocity(0.0)),
        n_trans,
        tol.steps_per_period,
    )
    .and_then(|(x, v)| {
        let t0 = n_trans as f64 * forcing.period();
        let tail = tol.tail_periods.max(MIN_TAIL_PERIODS) * nu;
        let traj = integrate_from(cfg, &forcing, t0, x, v, tail, tol.steps_per_period)?;
        let m = samples_per_base(&traj, expected.base_freq)?;
        let len = (traj.len() - 1) / m * m;
        Ok(project(&traj, traj.len() - 1 - len, len, expected.base_freq, expected.n_harmonics()))
    })
    .ok();
    let harmonics = simulated
        .as_ref()
        .map(|s| compare(&expected, s))
        .unwrap_or_default();
    let held = simulated.is_some()
        && !harmonics.is_empty()
        && harmonics
            .iter()
            .all(|h| h.amplitude_error < tol.amplitude && h.phase_error.abs() < tol.phase);
    let verdict = match (held, stable) {
        (true, _) => Verdict::Match,
        (false, Some(false)) => Verdict::Unreachable,
        (false, _) => Verdict::Mismatch,
    };
    let consistent = match verdict {
        Verdict::Match => stable != Some(false),
        Verdict::Unreachable => true,
        Verdict::Mismatch => false,
    };
    VerificationReport {
        omega,
        harmonics,
        ode_residual_rms,
        verdict,
        predicted_stable: stable,
        consistent,
        simulated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn conservative_energy_drift() {
        let cfg = OscillatorConfig::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let forcing = Forcing::new(0.0, 1.0).unwrap();
        let traj = integrate(&cfg, &forcing, 0.1, 0.0, 100, 2000).unwrap();
        let e0 = energy(&cfg, 0.1, 0.0);
        let (x, v) = traj.last_state();
        assert!(((energy(&cfg, x, v) - e0) / e0).abs() < 1e-10);
    }

    #[test]
    fn fourth_order_convergence() {
        let cfg = OscillatorConfig::default();
        let forcing = Forcing::new(0.01, 1.2).unwrap();
        let ratio = convergence_ratio(&cfg, &forcing, (0.5, 0.0), 20, 200).unwrap();
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn extracts_synthesized_tone() {
        let w = 1.3;
        let h = TAU / w / 256.0;
        let x: Vec<f64> = (0..=256 * 10).map(|i| (w * h * i as f64 - PI / 3.0).sin()).collect();
        let traj = Trajectory {
            forcing: Forcing::new(0.0, w).unwrap(),
            t0: 0.0,
            time_step: h,
            v: vec![0.0; x.len()],
            x,
        };
        let sol = steady_harmonics(&traj, w, 3).unwrap();
        assert!((sol.amplitude(1) - 1.0).abs() < 1e-10);
        assert!((sol.phase(1) - PI / 3.0).abs() < 1e-10);
        assert!(sol.amplitude(2) < 1e-10);
    }

    #[test]
    fn linear_steady_state() {
        let cfg = OscillatorConfig::new(1.0, 0.01, 1.0, 0.0).unwrap();
        let w = 0.5;
        let forcing = Forcing::new(0.01, w).unwrap();
        let n = transient_periods(&cfg);
        let (x, v) = advance(&cfg, &forcing, 0.0, (0.0, 0.0), n, 200).unwrap();
        let t0 = n as f64 * forcing.period();
        let traj = integrate_from(&cfg, &forcing, t0, x, v, 10, 200).unwrap();
        let sol = steady_harmonics(&traj, w, 3).unwrap();
        let re = 1.0 - w * w;
        let im = 0.01 * w;
        assert!((sol.amplitude(1) - 0.01 / re.hypot(im)).abs() < 1e-9);
        assert!((sol.phase(1) - im.atan2(re)).abs() < 1e-6);
    }

    #[test]
    fn rejects_short_tail_and_coarse_steps() {
        let cfg = OscillatorConfig::default();
        let forcing = Forcing::new(0.01, 1.0).unwrap();
        assert!(integrate(&cfg, &forcing, 0.0, 0.0, 1, 100).is_err());
        let traj = integrate(&cfg, &forcing, 0.0, 0.0, 4, 200).unwrap();
        assert!(matches!(steady_harmonics(&traj, 1.0, 3), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn unsettled_transient_is_reported() {
        let cfg = OscillatorConfig::default();
        let forcing = Forcing::new(0.01, 1.2).unwrap();
        let traj = integrate(&cfg, &forcing, 0.0, 0.0, 20, 200).unwrap();
        assert!(matches!(steady_harmonics(&traj, 1.2, 3), Err(Error::NotSettled { .. })));
    }
}
