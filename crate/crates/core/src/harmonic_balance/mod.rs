//! Multi-harmonic balance of the Duffing equation at base frequency
//! `omega/nu`, with arclength continuation and phase-resonance detection.

pub mod aft;
mod branch;
mod detect;
mod seeding;
mod stability;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::continuation::Curve;
use crate::error::{Error, Result};
use crate::harmonic::HarmonicSolution;
use crate::model::{OscillatorConfig, ResonanceId};

pub use aft::Aft;
pub use branch::{continue_branch, Branch, BranchPoint, PointTag};
pub use detect::{detect_phase_resonance, find_extrema, refine_crossing, Extremum, Measure};
pub use seeding::{
    find_isolated_seed, linear_seed, seed_branch, slow_flow_seed, symmetry_broken, trace_family,
};
pub use stability::{floquet_multipliers, stability_hill};

pub const DEFAULT_HARMONICS: usize = 15;
pub const DEFAULT_SAMPLES: usize = 128;
const NEWTON_MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 12;

/// Harmonic-balance discretization of one forced response family.
#[derive(Debug, Clone)]
pub struct HbProblem {
    pub cfg: OscillatorConfig,
    /// Forcing amplitude `f` (N).
    pub forcing: f64,
    pub resonance: ResonanceId,
    aft: Aft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HbSettings {
    pub n_harmonics: usize,
    pub time_samples: usize,
}

impl Default for HbSettings {
    fn default() -> Self {
        Self {
            n_harmonics: DEFAULT_HARMONICS,
            time_samples: DEFAULT_SAMPLES,
        }
    }
}

impl HbProblem {
    /// Requires `N >= max(k nu, 9)` and `M >= 4N + 1`.
    pub fn new(
        cfg: OscillatorConfig,
        forcing: f64,
        resonance: ResonanceId,
        n_harmonics: usize,
        time_samples: usize,
    ) -> Result<Self> {
        cfg.validate()?;
        if !(forcing >= 0.0) {
            return Err(Error::InvalidParameter("forcing amplitude must be >= 0".into()));
        }
        let min_n = ((resonance.k() * resonance.nu()) as usize).max(9);
        if n_harmonics < min_n {
            return Err(Error::InvalidParameter(format!(
                "{n_harmonics} harmonics cannot resolve {resonance}; need at least {min_n}"
            )));
        }
        if time_samples < 4 * n_harmonics + 1 {
            return Err(Error::InvalidParameter(format!(
                "{time_samples} samples alias the cubic of {n_harmonics} harmonics"
            )));
        }
        Ok(Self {
            cfg,
            forcing,
            resonance,
            aft: Aft::new(n_harmonics, time_samples),
        })
    }

    pub fn with_settings(
        cfg: OscillatorConfig,
        forcing: f64,
        resonance: ResonanceId,
        settings: HbSettings,
    ) -> Result<Self> {
        Self::new(cfg, forcing, resonance, settings.n_harmonics, settings.time_samples)
    }

    pub fn n_harmonics(&self) -> usize {
        self.aft.n_harmonics()
    }

    pub fn time_samples(&self) -> usize {
        self.aft.samples()
    }

    pub fn dim(&self) -> usize {
        2 * self.n_harmonics() + 1
    }

    pub fn nu(&self) -> usize {
        self.resonance.nu() as usize
    }

    pub fn k(&self) -> usize {
        self.resonance.k() as usize
    }

    pub fn gamma_bar(&self) -> f64 {
        self.cfg.gamma_bar(self.forcing)
    }

    pub fn base_freq(&self, omega: f64) -> f64 {
        omega / self.nu() as f64
    }

    /// Convergence threshold on the residual infinity norm.
    pub fn tolerance(&self) -> f64 {
        1e-10 * self.gamma_bar().max(1.0)
    }

    pub fn aft(&self) -> &Aft {
        &self.aft
    }

    /// Linear part `d/dq` and its frequency derivative.
    fn linear(&self, omega: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let w0 = self.cfg.omega0();
        let zw2 = 2.0 * self.cfg.zeta_bar() * w0;
        let nu = self.nu() as f64;
        let wb = omega / nu;
        let mut l = DMatrix::zeros(n, n);
        let mut dl = DMatrix::zeros(n, n);
        l[(0, 0)] = w0 * w0;
        for j in 1..=self.n_harmonics() {
            let (c, s) = (2 * j - 1, 2 * j);
            let jf = j as f64;
            let kk = w0 * w0 - (jf * wb).powi(2);
            let d = zw2 * jf * wb;
            l[(c, c)] = kk;
            l[(c, s)] = d;
            l[(s, s)] = kk;
            l[(s, c)] = -d;
            let dk = -2.0 * jf * jf * wb / nu;
            let dd = zw2 * jf / nu;
            dl[(c, c)] = dk;
            dl[(c, s)] = dd;
            dl[(s, s)] = dk;
            dl[(s, c)] = -dd;
        }
        (l, dl)
    }

    pub fn residual(&self, q: &DVector<f64>, omega: f64) -> DVector<f64> {
        let (l, _) = self.linear(omega);
        let mut r = l * q + self.aft.cubic(q) * self.cfg.alpha();
        r[2 * self.nu()] -= self.gamma_bar();
        r
    }

    pub fn jacobian_q(&self, q: &DVector<f64>, omega: f64) -> DMatrix<f64> {
        let (l, _) = self.linear(omega);
        l + self.aft.cubic_jacobian(q) * self.cfg.alpha()
    }

    pub fn jacobian_omega(&self, q: &DVector<f64>, omega: f64) -> DVector<f64> {
        let (_, dl) = self.linear(omega);
        dl * q
    }

    pub fn to_vector(&self, sol: &HarmonicSolution) -> DVector<f64> {
        let mut q = DVector::zeros(self.dim());
        q[0] = sol.a0;
        for (i, &(c, s)) in sol.coeffs.iter().take(self.n_harmonics()).enumerate() {
            q[2 * i + 1] = c;
            q[2 * i + 2] = s;
        }
        q
    }

    pub fn to_solution(&self, q: &DVector<f64>, omega: f64) -> HarmonicSolution {
        HarmonicSolution::from_flat(self.base_freq(omega), q.as_slice())
    }

    /// Damped Newton on the residual at fixed `omega`.
    pub fn solve_vector(&self, q0: &DVector<f64>, omega: f64) -> Result<DVector<f64>> {
        let tol = self.tolerance();
        let mut q = q0.clone();
        let mut r = self.residual(&q, omega);
        let mut nr = r.norm();
        for _ in 0..NEWTON_MAX_ITER {
            if !nr.is_finite() {
                break;
            }
            if r.amax() < tol {
                return Ok(q);
            }
            let Some(dq) = self.jacobian_q(&q, omega).lu().solve(&r) else { break };
            let mut lam = 1.0;
            let mut next = None;
            for _ in 0..MAX_HALVINGS {
                let qn = &q - &dq * lam;
                let rn = self.residual(&qn, omega);
                let nn = rn.norm();
                if nn < nr {
                    next = Some((qn, rn, nn));
                    break;
                }
                lam *= 0.5;
            }
            // a stalled line search still takes the smallest step
            let (qn, rn, nn) = next.unwrap_or_else(|| {
                let qn = &q - &dq * lam;
                let rn = self.residual(&qn, omega);
                let nn = rn.norm();
                (qn, rn, nn)
            });
            (q, r, nr) = (qn, rn, nn);
        }
        if r.amax() < tol {
            Ok(q)
        } else {
            Err(Error::NoConvergence { residual: r.amax() })
        }
    }
}

/// Harmonic residual of `x'' + 2 zeta w0 x' + w0^2 x + alpha x^3 - gamma sin(w t)`
/// in the layout of [`HarmonicSolution::to_flat`].
pub fn hb_residual(problem: &HbProblem, coeffs: &HarmonicSolution, omega: f64) -> Vec<f64> {
    problem
        .residual(&problem.to_vector(coeffs), omega)
        .as_slice()
        .to_vec()
}

/// Converge a periodic solution at `omega` from `initial_guess`.
pub fn hb_solve(
    problem: &HbProblem,
    omega: f64,
    initial_guess: &HarmonicSolution,
) -> Result<HarmonicSolution> {
    let q = problem.solve_vector(&problem.to_vector(initial_guess), omega)?;
    Ok(problem.to_solution(&q, omega))
}

impl Curve for HbProblem {
    fn residual(&self, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        HbProblem::residual(self, &y.rows(0, n).into_owned(), y[n])
    }

    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim();
        let q = y.rows(0, n).into_owned();
        let w = y[n];
        let mut j = DMatrix::zeros(n, n + 1);
        j.view_mut((0, 0), (n, n)).copy_from(&self.jacobian_q(&q, w));
        j.set_column(n, &self.jacobian_omega(&q, w));
        j
    }

    fn tolerance(&self) -> f64 {
        HbProblem::tolerance(self)
    }
}

pub(crate) fn join(q: &DVector<f64>, omega: f64) -> DVector<f64> {
    q.clone().push(omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(alpha: f64, f: f64, res: ResonanceId) -> HbProblem {
        let cfg = OscillatorConfig::new(1.0, 0.01, 1.0, alpha).unwrap();
        HbProblem::new(cfg, f, res, 15, 128).unwrap()
    }

    #[test]
    fn rejects_coarse_discretization() {
        let cfg = OscillatorConfig::default();
        assert!(HbProblem::new(cfg, 0.1, ResonanceId::PRIMARY, 8, 128).is_err());
        assert!(HbProblem::new(cfg, 0.1, ResonanceId::PRIMARY, 15, 60).is_err());
        assert!(HbProblem::new(cfg, 0.1, ResonanceId::new(3, 4).unwrap(), 10, 128).is_err());
    }

    #[test]
    fn zero_forcing_zero_residual() {
        let p = problem(1.0, 0.0, ResonanceId::PRIMARY);
        let z = HarmonicSolution::zeros(1.0, 15);
        assert!(hb_residual(&p, &z, 1.3).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_frf() {
        let p = problem(0.0, 0.01, ResonanceId::new(1, 2).unwrap());
        let w = 0.7;
        let sol = hb_solve(&p, w, &HarmonicSolution::zeros(w / 2.0, 15)).unwrap();
        let expect = 0.01 / ((1.0 - w * w).powi(2) + (0.01 * w).powi(2)).sqrt();
        assert!((sol.amplitude(2) - expect).abs() < 1e-12);
        assert!(sol.amplitude(1) < 1e-14 && sol.amplitude(3) < 1e-14);
        let phase = (0.01 * w).atan2(1.0 - w * w);
        assert!((sol.phase(2) - phase).abs() < 1e-10);
    }

    #[test]
    fn jacobians_match_differences() {
        let p = problem(1.0, 0.2, ResonanceId::new(1, 3).unwrap());
        let q = DVector::from_fn(31, |i, _| 0.05 * ((i * 7 % 5) as f64 - 2.0));
        let w = 3.3;
        let j = p.jacobian_q(&q, w);
        let h = 1e-6;
        for k in [0, 1, 6, 30] {
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[k] += h;
            qm[k] -= h;
            let d = (p.residual(&qp, w) - p.residual(&qm, w)) / (2.0 * h);
            assert!((d - j.column(k)).amax() < 1e-7);
        }
        let d = (p.residual(&q, w + h) - p.residual(&q, w - h)) / (2.0 * h);
        assert!((d - p.jacobian_omega(&q, w)).amax() < 1e-7);
    }
}
