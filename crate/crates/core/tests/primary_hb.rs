use std::f64::consts::FRAC_PI_2;

use duffing_core::closed_form::primary_resonance;
use duffing_core::harmonic_balance::{
    detect_phase_resonance, find_extrema, trace_family, Branch, HbProblem, Measure,
};
use duffing_core::time_oracle::ode_residual_rms;
use duffing_core::{Forcing, OscillatorConfig, ResonanceId, StepControl};

fn branch(n: usize) -> (HbProblem, Branch) {
    let cfg = OscillatorConfig::default();
    let p = HbProblem::new(cfg, 0.01, ResonanceId::PRIMARY, n, 8 * n).unwrap();
    let b = trace_family(&p, (0.8, 1.6), &StepControl::default()).unwrap();
    (p, b)
}

#[test]
fn peak_agrees_with_closed_form() {
    let (p, b) = branch(15);
    let cf = primary_resonance(&p.cfg, 0.01).unwrap();
    let peak = find_extrema(&p, &b, Measure::Amplitude(1))
        .into_iter()
        .filter(|e| e.maximum)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap();
    assert!((peak.value - cf.amp_a).abs() / cf.amp_a < 0.01);
    assert!((peak.point.omega - cf.omega_a).abs() / cf.omega_a < 0.01);
    assert_eq!(b.folds().count(), 2);
}

#[test]
fn single_quadrature_crossing_near_peak() {
    let (p, b) = branch(15);
    let pr = detect_phase_resonance(&p, &b);
    assert_eq!(pr.len(), 1);
    assert!((pr[0].phase(1) - FRAC_PI_2).abs() < 1e-8);
    assert!((pr[0].omega - 1.5f64.sqrt()).abs() < 5e-3);
}

#[test]
fn branch_satisfies_equation_of_motion() {
    let (p, b) = branch(15);
    let g = p.gamma_bar();
    let worst = b
        .points
        .iter()
        .map(|pt| ode_residual_rms(&pt.solution, &p.cfg, &Forcing::new(0.01, pt.omega).unwrap()) / g)
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "worst residual {worst}");
}

#[test]
fn truncation_converged() {
    let (p15, b15) = branch(15);
    let (p21, b21) = branch(21);
    let a = &detect_phase_resonance(&p15, &b15)[0];
    let c = &detect_phase_resonance(&p21, &b21)[0];
    assert!((a.omega - c.omega).abs() < 1e-8);
    assert!((a.amplitude(1) - c.amplitude(1)).abs() < 1e-8);
}
