use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{hb_solve, join, stability_hill, HbProblem};
use crate::continuation::{trace_both, StepControl};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicSolution;
use crate::model::ResonanceId;

/// Fraction of the seed's symmetry-breaking content below which an isolated
/// branch is considered to have merged into the symmetric one.
const CONTENT_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointTag {
    Fold,
    /// Phase resonance of harmonic `k`.
    PhaseResonance(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub omega: f64,
    pub solution: HarmonicSolution,
    pub max_displacement: f64,
    pub stable: Option<bool>,
    pub tags: Vec<PointTag>,
}

impl BranchPoint {
    pub fn new(problem: &HbProblem, solution: HarmonicSolution, omega: f64) -> Self {
        let stable = Some(stability_hill(problem, &solution));
        Self {
            omega,
            max_displacement: solution.max_displacement(),
            solution,
            stable,
            tags: Vec::new(),
        }
    }

    pub fn amplitude(&self, k: usize) -> f64 {
        self.solution.amplitude(k)
    }

    pub fn phase(&self, k: usize) -> f64 {
        self.solution.phase(k)
    }

    pub(crate) fn state(&self, problem: &HbProblem) -> DVector<f64> {
        join(&problem.to_vector(&self.solution), self.omega)
    }

    pub(crate) fn from_state(problem: &HbProblem, y: &DVector<f64>) -> Self {
        let n = problem.dim();
        let omega = y[n];
        Self::new(problem, problem.to_solution(&y.rows(0, n).into_owned(), omega), omega)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub resonance: ResonanceId,
    pub forcing: f64,
    pub points: Vec<BranchPoint>,
    pub closed: bool,
}

impl Branch {
    pub fn folds(&self) -> impl Iterator<Item = &BranchPoint> {
        self.points.iter().filter(|p| p.tags.contains(&PointTag::Fold))
    }

    pub fn omega_range(&self) -> (f64, f64) {
        self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.omega), hi.max(p.omega))
        })
    }
}

/// Converge `seed` at `omega_start` and continue it both ways until the
/// frequency leaves `omega_range`, the loop closes, or (for a seed carrying
/// symmetry-breaking harmonics) that content dies out.
pub fn continue_branch(
    problem: &HbProblem,
    seed: &HarmonicSolution,
    omega_start: f64,
    omega_range: (f64, f64),
    ctrl: &StepControl,
) -> Result<Branch> {
    let (lo, hi) = omega_range;
    if !(lo < hi) || !(lo..=hi).contains(&omega_start) {
        return Err(Error::InvalidParameter(format!(
            "start {omega_start} outside continuation range [{lo}, {hi}]"
        )));
    }
    let start = hb_solve(problem, omega_start, seed)?;
    let nu = problem.nu();
    let floor = CONTENT_FLOOR * start.symmetry_breaking_content(nu);
    let n = problem.dim();
    let y0 = join(&problem.to_vector(&start), omega_start);
    let trace = trace_both(problem, &y0, ctrl, |y| {
        let w = y[n];
        if !(lo..=hi).contains(&w) {
            return false;
        }
        floor == 0.0
            || problem
                .to_solution(&y.rows(0, n).into_owned(), w)
                .symmetry_breaking_content(nu)
                > floor
    });
    let mut points: Vec<BranchPoint> = trace
        .points
        .iter()
        .map(|cp| {
            let mut p = BranchPoint::from_state(problem, &cp.y);
            if cp.fold {
                p.tags.push(PointTag::Fold);
            }
            p
        })
        .collect();
    if trace.closed {
        let (first, last) = (&trace.points[0], trace.points.last().unwrap());
        if first.tangent[n].signum() != last.tangent[n].signum() {
            points[0].tags.push(PointTag::Fold);
        }
    }
    Ok(Branch {
        resonance: problem.resonance,
        forcing: problem.forcing,
        points,
        closed: trace.closed,
    })
}
