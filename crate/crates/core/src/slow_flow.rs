//! Averaged amplitude/phase equations for each resonance family, their
//! steady states, branches and stability.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::continuation::{self, Curve, StepControl};
use crate::error::{Error, Result};
use crate::model::{gamma_capital, OscillatorConfig, ResonanceId, SlowFlowState};
use crate::phase::{angle_diff, equivalence_spacing, equivalent_phase_lags, reduce_phase, wrap_angle};
use crate::rational::{self, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Primary,
    Super31,
    Sub13,
    Sub12,
    Sub15,
    Sub14,
    Super51,
    Super21,
    Ultra23,
    Ultra32,
}

impl Family {
    pub fn of(res: ResonanceId) -> Result<Self> {
        Ok(match (res.k(), res.nu()) {
            (1, 1) => Family::Primary,
            (3, 1) => Family::Super31,
            (1, 3) => Family::Sub13,
            (1, 2) => Family::Sub12,
            (1, 5) => Family::Sub15,
            (1, 4) => Family::Sub14,
            (5, 1) => Family::Super51,
            (2, 1) => Family::Super21,
            (2, 3) => Family::Ultra23,
            (3, 2) => Family::Ultra32,
            _ => return Err(Error::UnsupportedFamily(res.to_string())),
        })
    }

    /// Coefficient of the first steady-state relation of the
    /// residual-only families.
    pub fn constant(self) -> Option<Ratio> {
        Some(match self {
            Family::Sub15 => rational::C_1_5,
            Family::Sub14 => rational::C_1_4,
            Family::Super51 => rational::C_5_1,
            Family::Super21 => rational::C_2_1,
            Family::Ultra23 => rational::C_2_3,
            Family::Ultra32 => rational::C_3_2,
            Family::Sub12 => rational::C_1_2,
            _ => return None,
        })
    }
}

/// Averaged system of one `k:nu` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlowFlowSystem {
    pub resonance: ResonanceId,
    pub family: Family,
}

/// Frequency-dependent quantities shared by every right-hand side.
#[derive(Debug, Clone, Copy)]
struct Ctx {
    w: f64,
    w0: f64,
    zeta: f64,
    alpha: f64,
    gamma: f64,
    big_gamma: f64,
    big_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub state: SlowFlowState,
    pub omega: f64,
    pub residual_norm: f64,
    /// `None` for families given only as steady-state relations.
    pub stable: Option<bool>,
    pub eigenvalues: Option<[Complex<f64>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowFlowBranch {
    pub resonance: ResonanceId,
    pub forcing: f64,
    pub points: Vec<SteadyState>,
    pub closed: bool,
}

/// `r0` and the sign-carrying derivative `dr0/domega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R0Approximation {
    pub r0: f64,
    pub derivative: f64,
}

pub const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 8;
const SEED_SCALES: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
const SEED_PHASES: usize = 16;
const MERGE_TOL: f64 = 1e-6;
/// Accepted relative distance from `r0` for 1:2 roots of the full
/// second-order system; roots further away belong to the truncation.
pub const SUB12_BAND: f64 = 0.25;

impl SlowFlowSystem {
    pub fn new(resonance: ResonanceId) -> Result<Self> {
        Ok(Self {
            resonance,
            family: Family::of(resonance)?,
        })
    }

    /// Averaging order behind the family's equations.
    pub fn order(&self) -> u32 {
        match self.family {
            Family::Primary | Family::Super31 | Family::Sub13 => 1,
            Family::Sub12 | Family::Super21 => 2,
            Family::Sub15 | Family::Super51 => 3,
            Family::Sub14 | Family::Ultra23 | Family::Ultra32 => 4,
        }
    }

    /// Whether a full flow (and thus a stability verdict) is available.
    pub fn has_flow(&self) -> bool {
        matches!(
            self.family,
            Family::Primary | Family::Super31 | Family::Sub13 | Family::Sub12
        )
    }

    /// The 2:1 relations do not predict the even superharmonic response.
    pub fn predictive(&self) -> bool {
        self.family != Family::Super21
    }

    /// Default frequency window `[0.5, 2] nu omega0 / k`.
    pub fn validity_window(&self, cfg: &OscillatorConfig) -> (f64, f64) {
        let w = self.resonance.nominal_frequency(cfg.omega0());
        (0.5 * w, 2.0 * w)
    }

    fn ctx(&self, omega: f64, cfg: &OscillatorConfig, f: f64) -> Result<Ctx> {
        let gamma = cfg.gamma_bar(f);
        let big_gamma = if self.family == Family::Primary {
            0.0
        } else {
            gamma_capital(omega, cfg, gamma)?
        };
        Ok(Ctx {
            w: omega,
            w0: cfg.omega0(),
            zeta: cfg.zeta_bar(),
            alpha: cfg.alpha(),
            gamma,
            big_gamma,
            big_w: self.resonance.detuning(omega, cfg),
        })
    }

    /// `(dr/dt, r dphi/dt)` for the families with a full flow.
    fn flow(&self, r: f64, phi: f64, c: &Ctx) -> Option<(f64, f64)> {
        let Ctx { w, w0, zeta, alpha, gamma, big_gamma: g, big_w } = *c;
        let zw = zeta * w0;
        // 3 r^2 + 6 Gamma^2 - 4 Omega / alpha, times alpha
        let e2 = alpha * (3.0 * r * r + 6.0 * g * g) - 4.0 * big_w;
        Some(match self.family {
            Family::Primary => (
                -zw * r + gamma / (2.0 * w) * phi.sin(),
                -((3.0 * alpha * r * r - 4.0 * big_w) / 8.0 * r - gamma / 2.0 * phi.cos()) / w,
            ),
            Family::Super31 => {
                let c3 = alpha * g.powi(3) / (24.0 * w);
                (
                    -(zw * r - c3 * phi.sin()),
                    -(e2 / (24.0 * w) * r - c3 * phi.cos()),
                )
            }
            Family::Sub13 => {
                let c = 9.0 * alpha * g / (8.0 * w);
                (
                    -(zw * r - c * r * r * (3.0 * phi).sin()),
                    -r * (3.0 * e2 / (8.0 * w) - c * r * (3.0 * phi).cos()),
                )
            }
            Family::Sub12 => {
                let c = rational::C_1_2.value() * (alpha * g).powi(2) / w.powi(3);
                let r2 = r * r;
                let big_r = r12(r2, w, big_w, alpha, g);
                (
                    -0.5 * (2.0 * zw * r + c * r * r2 * (4.0 * phi).sin()),
                    r * (-e2 / (4.0 * w) + 0.5 * (big_r - c * r2 * (4.0 * phi).cos())),
                )
            }
            _ => return None,
        })
    }

    /// The two steady-state relations of the residual-only families, each
    /// written as `lhs - rhs`.
    fn relations(&self, r: f64, phi: f64, c: &Ctx) -> (f64, f64) {
        let Ctx { w, w0, zeta, alpha, big_gamma: g, big_w, .. } = *c;
        let zw = zeta * w0;
        let k = self.family.constant().map_or(0.0, |q| q.value());
        let e1 = match self.family {
            Family::Sub15 => 2.0 * zw + k * alpha.powi(2) * g / w.powi(3) * r.powi(3) * (5.0 * phi).sin(),
            Family::Sub14 => zw + k * alpha.powi(4) * g * g / w.powi(6) * r.powi(6) * (8.0 * phi).sin(),
            Family::Super51 => 2.0 * zw * r - k * alpha.powi(2) * g.powi(5) / w.powi(3) * phi.sin(),
            Family::Super21 => 2.0 * zw + k * alpha.powi(2) * g.powi(4) / w.powi(3) * (2.0 * phi).sin(),
            Family::Ultra23 => 24.0 * zw + k * alpha.powi(4) * g.powi(4) / w.powi(7) * r.powi(4) * (6.0 * phi).sin(),
            Family::Ultra32 => 24.0 * zw + k * alpha.powi(4) * g.powi(6) / w.powi(7) * r * r * (4.0 * phi).sin(),
            _ => unreachable!("flow families use their rates"),
        };
        let e2 = 3.0 * r * r + 6.0 * g * g - 4.0 * big_w / alpha;
        (e1, e2)
    }

    /// Steady-state residual; zero at a steady state and at the unforced
    /// trivial state. Flow families return `(dr/dt, r dphi/dt)`, the others
    /// their two relations scaled by `r`.
    pub fn residual(
        &self,
        state: &SlowFlowState,
        omega: f64,
        cfg: &OscillatorConfig,
        f: f64,
    ) -> Result<(f64, f64)> {
        let c = self.ctx(omega, cfg, f)?;
        Ok(self.public_residual(state.r, state.phi, &c))
    }

    fn public_residual(&self, r: f64, phi: f64, c: &Ctx) -> (f64, f64) {
        match self.flow(r, phi, c) {
            Some(v) => v,
            None => {
                let (e1, e2) = self.relations(r, phi, c);
                (r * e1, r * e2)
            }
        }
    }

    /// Residual with the trivial root divided out, used for root finding.
    fn reduced(&self, r: f64, phi: f64, c: &Ctx) -> (f64, f64) {
        match (self.family, self.flow(r, phi, c)) {
            (Family::Primary | Family::Super31, Some((a, b))) => (a, b / r),
            (_, Some((a, b))) => (a / r, b / r),
            (_, None) => self.relations(r, phi, c),
        }
    }

    fn reduced_jacobian(&self, r: f64, phi: f64, c: &Ctx) -> [[f64; 2]; 2] {
        let hr = 1e-7 * r.abs().max(1.0);
        let hp = 1e-7;
        let (a1, b1) = self.reduced(r + hr, phi, c);
        let (a0, b0) = self.reduced(r - hr, phi, c);
        let (a3, b3) = self.reduced(r, phi + hp, c);
        let (a2, b2) = self.reduced(r, phi - hp, c);
        [
            [(a1 - a0) / (2.0 * hr), (a3 - a2) / (2.0 * hp)],
            [(b1 - b0) / (2.0 * hr), (b3 - b2) / (2.0 * hp)],
        ]
    }

    /// Eigenvalues of the flow Jacobian at a steady state, computed in
    /// Cartesian slow coordinates `(r cos phi, r sin phi)` by central
    /// differences. `None` for residual-only families.
    pub fn stability_eigenvalues(
        &self,
        state: &SlowFlowState,
        omega: f64,
        cfg: &OscillatorConfig,
        f: f64,
    ) -> Result<Option<[Complex<f64>; 2]>> {
        let c = self.ctx(omega, cfg, f)?;
        Ok(self.eigen(state.r, state.phi, &c))
    }

    fn eigen(&self, r: f64, phi: f64, c: &Ctx) -> Option<[Complex<f64>; 2]> {
        self.flow(0.0, 0.0, c)?;
        let field = |p: f64, q: f64| {
            let (rr, ph) = (p.hypot(q), q.atan2(p));
            let (dr, rdphi) = self.flow(rr, ph, c).unwrap();
            let (s, co) = ph.sin_cos();
            (dr * co - rdphi * s, dr * s + rdphi * co)
        };
        let (p, q) = (r * phi.cos(), r * phi.sin());
        let h = 1e-7f64.max(1e-7 * r.abs());
        let (f1, g1) = field(p + h, q);
        let (f0, g0) = field(p - h, q);
        let (f3, g3) = field(p, q + h);
        let (f2, g2) = field(p, q - h);
        let j = [
            [(f1 - f0) / (2.0 * h), (f3 - f2) / (2.0 * h)],
            [(g1 - g0) / (2.0 * h), (g3 - g2) / (2.0 * h)],
        ];
        let tr = j[0][0] + j[1][1];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let disc = Complex::new(tr * tr / 4.0 - det, 0.0).sqrt();
        let half = Complex::new(tr / 2.0, 0.0);
        Some([half + disc, half - disc])
    }

    /// Seed amplitude scales: `r0` when defined, else the linear response.
    fn seed_scale(&self, c: &Ctx) -> f64 {
        let arg = 4.0 * c.big_w / (3.0 * c.alpha) - 2.0 * c.big_gamma.powi(2);
        if c.alpha > 0.0 && arg > 0.0 {
            arg.sqrt()
        } else {
            let lin = (c.w0 * c.w0 - c.w * c.w).hypot(2.0 * c.zeta * c.w0 * c.w);
            (c.gamma / lin).max(c.big_gamma.abs()).max(1e-6)
        }
    }

    fn newton(&self, mut r: f64, mut phi: f64, c: &Ctx) -> Option<(f64, f64, f64)> {
        let norm = |(a, b): (f64, f64)| a.hypot(b);
        let mut res = self.reduced(r, phi, c);
        for _ in 0..NEWTON_MAX_ITER {
            let n0 = norm(res);
            if !n0.is_finite() {
                return None;
            }
            if n0 < NEWTON_TOL {
                return Some((r, phi, n0));
            }
            let j = self.reduced_jacobian(r, phi, c);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let dr = (j[1][1] * res.0 - j[0][1] * res.1) / det;
            let dp = (j[0][0] * res.1 - j[1][0] * res.0) / det;
            let mut lam = 1.0;
            let mut accepted = false;
            for _ in 0..=MAX_HALVINGS {
                let (rn, pn) = (r - lam * dr, phi - lam * dp);
                if rn > 0.0 {
                    let rs = self.reduced(rn, pn, c);
                    if norm(rs) < n0 {
                        (r, phi, res) = (rn, pn, rs);
                        accepted = true;
                        break;
                    }
                }
                lam *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        let n = norm(res);
        (n < NEWTON_TOL).then_some((r, phi, n))
    }

    fn admissible(&self, r: f64, c: &Ctx, scale: f64) -> bool {
        if !(r > 1e-9) || r > 1e3 * scale.max(1.0) {
            return false;
        }
        if self.family == Family::Sub12 {
            let arg = 4.0 * c.big_w / (3.0 * c.alpha) - 2.0 * c.big_gamma.powi(2);
            if arg <= 0.0 {
                return false;
            }
            let r0 = arg.sqrt();
            return (r - r0).abs() <= SUB12_BAND * r0;
        }
        true
    }

    fn steady(&self, r: f64, phi: f64, c: &Ctx, residual_norm: f64) -> SteadyState {
        let eigenvalues = self.eigen(r, phi, c);
        SteadyState {
            state: SlowFlowState { r, phi: wrap_angle(phi) },
            omega: c.w,
            residual_norm,
            stable: eigenvalues.map(|e| e.iter().all(|l| l.re < 0.0)),
            eigenvalues,
        }
    }

    /// All distinct steady states at `omega`, found by damped Newton from a
    /// grid of amplitudes and phases. Roots that differ by an equivalent
    /// phase shift are merged.
    pub fn find_steady_states(
        &self,
        omega: f64,
        cfg: &OscillatorConfig,
        f: f64,
    ) -> Result<Vec<SteadyState>> {
        let c = self.ctx(omega, cfg, f)?;
        let scale = self.seed_scale(&c);
        let spacing = equivalence_spacing(self.resonance);
        let mut roots: Vec<SteadyState> = Vec::new();
        for m in SEED_SCALES {
            for i in 0..SEED_PHASES {
                let phi = TAU * i as f64 / SEED_PHASES as f64;
                let Some((r, p, n)) = self.newton(m * scale, phi, &c) else { continue };
                if !self.admissible(r, &c, scale) {
                    continue;
                }
                let red = reduce_phase(self.resonance, p);
                let dup = roots.iter().any(|s| {
                    let d = (reduce_phase(self.resonance, s.state.phi) - red).abs();
                    (s.state.r - r).abs() < MERGE_TOL * r.max(1.0)
                        && d.min(spacing - d) < MERGE_TOL
                });
                if !dup {
                    roots.push(self.steady(r, p, &c, n));
                }
            }
        }
        roots.sort_by(|a, b| a.state.r.total_cmp(&b.state.r));
        Ok(roots)
    }

    /// Continue steady states in `(r, phi, omega)` across folds within
    /// `[omega_min, omega_max]`. The first frequency (scanning upwards, with
    /// closed-form locus frequencies tried first for isolated families) that
    /// has a steady state seeds the branch.
    pub fn sweep_branch(
        &self,
        omega_min: f64,
        omega_max: f64,
        cfg: &OscillatorConfig,
        f: f64,
        ctrl: &StepControl,
    ) -> Result<SlowFlowBranch> {
        if !(omega_min < omega_max) {
            return Err(Error::InvalidParameter("omega_min must be < omega_max".into()));
        }
        let mut candidates = self.locus_seed_frequencies(cfg, f, (omega_min, omega_max));
        let n_scan = 400;
        candidates.extend((0..=n_scan).map(|i| {
            omega_min + (omega_max - omega_min) * i as f64 / n_scan as f64
        }));
        let seed = candidates.into_iter().find_map(|w| {
            let roots = self.find_steady_states(w, cfg, f).ok()?;
            roots.into_iter().max_by(|a, b| a.state.r.total_cmp(&b.state.r))
        });
        let seed = seed.ok_or(Error::SeedNotFound)?;
        self.continue_from(&seed, omega_min, omega_max, cfg, f, ctrl)
    }

    /// Continue the branch through a known steady state.
    pub fn continue_from(
        &self,
        seed: &SteadyState,
        omega_min: f64,
        omega_max: f64,
        cfg: &OscillatorConfig,
        f: f64,
        ctrl: &StepControl,
    ) -> Result<SlowFlowBranch> {
        let curve = SlowFlowCurve { sys: *self, cfg: *cfg, f };
        let y0 = DVector::from_vec(vec![seed.state.r, seed.state.phi, seed.omega]);
        let trace = continuation::trace_both(&curve, &y0, ctrl, |y| {
            let ok_r = y[0] > 1e-8 && y[0] < 1e3;
            let in_band = self
                .ctx(y[2], cfg, f)
                .is_ok_and(|c| self.admissible(y[0], &c, self.seed_scale(&c)));
            ok_r && in_band && y[2] >= omega_min && y[2] <= omega_max
        });
        let mut points = Vec::with_capacity(trace.points.len());
        for p in &trace.points {
            let (r, phi, w) = (p.y[0], p.y[1], p.y[2]);
            let Ok(c) = self.ctx(w, cfg, f) else { continue };
            let (a, b) = self.reduced(r, phi, &c);
            points.push(self.steady(r, phi, &c, a.hypot(b)));
        }
        Ok(SlowFlowBranch {
            resonance: self.resonance,
            forcing: f,
            points,
            closed: trace.closed,
        })
    }

    /// Points of `branch` whose phase equals a member of the equivalent
    /// resonant set, refined on the chord between bracketing points.
    pub fn phase_resonances(
        &self,
        branch: &SlowFlowBranch,
        cfg: &OscillatorConfig,
        f: f64,
    ) -> Vec<SteadyState> {
        let curve = SlowFlowCurve { sys: *self, cfg: *cfg, f };
        let n = branch.points.len();
        let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        if branch.closed && n > 2 {
            pairs.push((n - 1, 0));
        }
        let mut out = Vec::new();
        for (i, j) in pairs {
            let (a, b) = (&branch.points[i], &branch.points[j]);
            for t in equivalent_phase_lags(self.resonance) {
                let (da, db) = (angle_diff(a.state.phi, t), angle_diff(b.state.phi, t));
                let brackets = (da <= 0.0 && db > 0.0) || (da >= 0.0 && db < 0.0);
                if !brackets || da.abs() > FRAC_PI_2 || db.abs() > FRAC_PI_2 {
                    continue;
                }
                let ya = DVector::from_vec(vec![a.state.r, t + da, a.omega]);
                let yb = DVector::from_vec(vec![b.state.r, t + db, b.omega]);
                if let Some(y) = refine_on_chord(&curve, &ya, &yb, |y| y[1] - t) {
                    if let Ok(c) = self.ctx(y[2], cfg, f) {
                        let (p, q) = self.reduced(y[0], y[1], &c);
                        out.push(self.steady(y[0], y[1], &c, p.hypot(q)));
                    }
                }
            }
        }
        out
    }

    fn locus_seed_frequencies(
        &self,
        cfg: &OscillatorConfig,
        f: f64,
        range: (f64, f64),
    ) -> Vec<f64> {
        use crate::closed_form::{locus_points_at_forcing, Locus};
        let locus = match self.family {
            Family::Sub13 => Locus::Sub13Phase,
            Family::Sub12 => Locus::Sub12Phase,
            _ => return Vec::new(),
        };
        locus_points_at_forcing(locus, cfg, f, range, 2000)
            .into_iter()
            .map(|p| p.omega_p)
            .collect()
    }
}

struct SlowFlowCurve {
    sys: SlowFlowSystem,
    cfg: OscillatorConfig,
    f: f64,
}

impl Curve for SlowFlowCurve {
    fn residual(&self, y: &DVector<f64>) -> DVector<f64> {
        match self.sys.ctx(y[2], &self.cfg, self.f) {
            Ok(c) => {
                let (a, b) = self.sys.reduced(y[0], y[1], &c);
                DVector::from_vec(vec![a, b])
            }
            Err(_) => DVector::from_element(2, f64::NAN),
        }
    }

    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(2, 3);
        for k in 0..3 {
            let h = 1e-7 * y[k].abs().max(1.0);
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[k] += h;
            ym[k] -= h;
            let d = (self.residual(&yp) - self.residual(&ym)) / (2.0 * h);
            j.set_column(k, &d);
        }
        j
    }

    fn tolerance(&self) -> f64 {
        NEWTON_TOL
    }
}

/// Illinois regula falsi for `g = 0` along the curve between `ya` and `yb`.
fn refine_on_chord(
    curve: &impl Curve,
    ya: &DVector<f64>,
    yb: &DVector<f64>,
    g: impl Fn(&DVector<f64>) -> f64,
) -> Option<DVector<f64>> {
    let (mut s0, mut f0) = (0.0, g(ya));
    let (mut s1, mut f1) = (1.0, g(yb));
    if f0 == 0.0 {
        return Some(ya.clone());
    }
    for _ in 0..80 {
        let s = (s0 * f1 - s1 * f0) / (f1 - f0);
        let y = continuation::solve_on_chord(curve, ya, yb, s, 20)?;
        let fs = g(&y);
        if fs.abs() < 1e-10 || (s1 - s0).abs() < 1e-14 {
            return Some(y);
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

/// `r0 = sqrt(4 Omega/(3 alpha) - 2 Gamma^2)` and its frequency derivative.
pub fn r0_approximation(
    res: ResonanceId,
    omega: f64,
    cfg: &OscillatorConfig,
    f: f64,
) -> Result<R0Approximation> {
    let alpha = cfg.alpha();
    if alpha <= 0.0 {
        return Err(Error::NotHardening);
    }
    let gamma = cfg.gamma_bar(f);
    let (g2, dg2) = if res == ResonanceId::PRIMARY {
        (0.0, 0.0)
    } else {
        let gc = gamma_capital(omega, cfg, gamma)?;
        let den = cfg.omega0().powi(2) - omega * omega;
        (gc * gc, gamma * gamma / den.powi(3))
    };
    let arg = 4.0 * res.detuning(omega, cfg) / (3.0 * alpha) - 2.0 * g2;
    if arg < 0.0 {
        return Err(Error::NotExist { omega });
    }
    let r0 = arg.sqrt();
    let ratio = (res.k() as f64 / res.nu() as f64).powi(2);
    Ok(R0Approximation {
        r0,
        derivative: 4.0 * omega / r0 * (ratio / (3.0 * alpha) - dg2),
    })
}

/// Second-order remainder of the 1:2 phase equation.
fn r12(r2: f64, w: f64, big_w: f64, alpha: f64, g: f64) -> f64 {
    let w3 = w.powi(3);
    let g2 = g * g;
    let k1 = 2.0 * big_w * big_w / w3
        - 6.0 * alpha * g2 * big_w / w3
        - rational::C_1_2_R.value() * alpha * alpha * g2 / w3;
    let k2 = 6.0 * alpha * big_w / w3 + rational::C_1_2.value() * alpha * alpha * g2 / w3;
    let k3 = rational::C_1_2_R6.value() * alpha * alpha / w3;
    k1 * r2 - k2 * r2 * r2 + k3 * r2 * r2 * r2
}
