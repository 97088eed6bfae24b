use std::f64::consts::TAU;

use nalgebra::DVector;

use super::{continue_branch, hb_solve, Branch, HbProblem, PointTag};
use crate::continuation::{null_vector, StepControl};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicSolution;
use crate::model::{gamma_capital, SlowFlowState};
use crate::slow_flow::{r0_approximation, SlowFlowSystem};

const GRID: usize = 60;
const R0_SCALES: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
const SEED_PHASES: usize = 16;
const KICKS: [f64; 4] = [0.01, 0.03, 0.1, 0.3];
/// Pitchfork pairs can sit closer than a default step.
const SCAN_STEP: f64 = 0.005;

/// Forced linear response at harmonic `nu`.
pub fn linear_seed(problem: &HbProblem, omega: f64) -> HarmonicSolution {
    let cfg = &problem.cfg;
    let w0 = cfg.omega0();
    let re = w0 * w0 - omega * omega;
    let im = 2.0 * cfg.zeta_bar() * w0 * omega;
    let mut sol = HarmonicSolution::zeros(problem.base_freq(omega), problem.n_harmonics());
    sol.set_polar(problem.nu(), problem.gamma_bar() / re.hypot(im), im.atan2(re));
    sol
}

/// Harmonic `k` from the averaged state plus the off-resonant forced term.
pub fn slow_flow_seed(problem: &HbProblem, state: &SlowFlowState, omega: f64) -> HarmonicSolution {
    let (k, nu) = (problem.k(), problem.nu());
    let mut sol = HarmonicSolution::zeros(problem.base_freq(omega), problem.n_harmonics());
    sol.set_polar(k, state.r, state.phi);
    if k != nu {
        if let Ok(g) = gamma_capital(omega, &problem.cfg, problem.gamma_bar()) {
            sol.coeffs[nu - 1].1 += g;
        }
    }
    sol
}

/// The response carries harmonics absent from the symmetric forced solution,
/// with a non-negligible share in harmonic `k`.
pub fn symmetry_broken(problem: &HbProblem, sol: &HarmonicSolution) -> bool {
    let content = sol.symmetry_breaking_content(problem.nu());
    let size = problem.to_vector(sol).norm();
    content > 1e-6 && content > 1e-3 * size && sol.amplitude(problem.k()) > 1e-3 * size
}

fn needs_isolated(problem: &HbProblem) -> bool {
    problem.nu() > 1 || problem.k().is_multiple_of(2)
}

fn grid((lo, hi): (f64, f64)) -> Vec<f64> {
    (1..GRID).map(|i| lo + (hi - lo) * i as f64 / GRID as f64).collect()
}

fn accept(problem: &HbProblem, omega: f64, guess: &HarmonicSolution) -> Option<HarmonicSolution> {
    hb_solve(problem, omega, guess)
        .ok()
        .filter(|s| symmetry_broken(problem, s))
}

fn from_slow_flow(problem: &HbProblem, range: (f64, f64)) -> Option<(f64, HarmonicSolution)> {
    let sys = SlowFlowSystem::new(problem.resonance).ok()?;
    grid(range).into_iter().find_map(|w| {
        let states = sys.find_steady_states(w, &problem.cfg, problem.forcing).ok()?;
        states
            .iter()
            .rev()
            .find_map(|s| accept(problem, w, &slow_flow_seed(problem, &s.state, w)))
            .map(|sol| (w, sol))
    })
}

fn from_r0(problem: &HbProblem, range: (f64, f64)) -> Option<(f64, HarmonicSolution)> {
    grid(range).into_iter().find_map(|w| {
        let r0 = r0_approximation(problem.resonance, w, &problem.cfg, problem.forcing)
            .ok()?
            .r0;
        R0_SCALES.iter().find_map(|m| {
            (0..SEED_PHASES).find_map(|i| {
                let phi = TAU * i as f64 / SEED_PHASES as f64;
                let state = SlowFlowState { r: m * r0, phi };
                accept(problem, w, &slow_flow_seed(problem, &state, w)).map(|s| (w, s))
            })
        })
    })
}

/// Branch points of the symmetric forced branch (sign changes of
/// `det J_q` away from folds), followed by a kick along the null direction.
fn from_branch_switch(
    problem: &HbProblem,
    range: (f64, f64),
    ctrl: &StepControl,
) -> Option<(f64, HarmonicSolution)> {
    let fine = StepControl {
        initial: ctrl.initial.min(SCAN_STEP),
        max: ctrl.max.min(SCAN_STEP),
        ..*ctrl
    };
    let mid = 0.5 * (range.0 + range.1);
    let main = continue_branch(problem, &linear_seed(problem, mid), mid, range, &fine).ok()?;
    let qs: Vec<DVector<f64>> = main.points.iter().map(|p| problem.to_vector(&p.solution)).collect();
    let dets: Vec<f64> = main
        .points
        .iter()
        .zip(&qs)
        .map(|(p, q)| problem.jacobian_q(q, p.omega).determinant())
        .collect();
    let bps: Vec<usize> = (1..dets.len())
        .filter(|&i| dets[i].signum() != dets[i - 1].signum() && !main.points[i].tags.contains(&PointTag::Fold))
        .collect();
    let mut candidates: Vec<(usize, usize)> = bps.windows(2).map(|w| ((w[0] + w[1]) / 2, w[0])).collect();
    candidates.extend(bps.iter().map(|&b| (b, b)));
    for (c, b) in candidates {
        let v = null_vector(&problem.jacobian_q(&qs[b], main.points[b].omega));
        let w = main.points[c].omega;
        for d in KICKS {
            for sign in [1.0, -1.0] {
                let q = &qs[c] + &v * (sign * d);
                if let Some(s) = accept(problem, w, &problem.to_solution(&q, w)) {
                    return Some((w, s));
                }
            }
        }
    }
    None
}

/// A converged response carrying symmetry-breaking harmonics within
/// `omega_range`: averaged steady states first, then the `r0` estimate over
/// a phase grid, then branch switching from the symmetric branch.
pub fn find_isolated_seed(
    problem: &HbProblem,
    omega_range: (f64, f64),
    ctrl: &StepControl,
) -> Result<(f64, HarmonicSolution)> {
    from_slow_flow(problem, omega_range)
        .or_else(|| from_r0(problem, omega_range))
        .or_else(|| from_branch_switch(problem, omega_range, ctrl))
        .ok_or(Error::SeedNotFound)
}

/// Starting frequency and converged response for the family of `problem`.
pub fn seed_branch(
    problem: &HbProblem,
    omega_range: (f64, f64),
    ctrl: &StepControl,
) -> Result<(f64, HarmonicSolution)> {
    if needs_isolated(problem) {
        return find_isolated_seed(problem, omega_range, ctrl);
    }
    let w = omega_range.0;
    Ok((w, hb_solve(problem, w, &linear_seed(problem, w))?))
}

/// Seed and continue the response branch of the family within `omega_range`.
pub fn trace_family(
    problem: &HbProblem,
    omega_range: (f64, f64),
    ctrl: &StepControl,
) -> Result<Branch> {
    let (w, seed) = seed_branch(problem, omega_range, ctrl)?;
    continue_branch(problem, &seed, w, omega_range, ctrl)
}
