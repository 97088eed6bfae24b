use duffing_core::harmonic_balance::{
    find_isolated_seed, symmetry_broken, trace_family, HbProblem, Measure, find_extrema,
};
use duffing_core::phase::distance_to_resonant_set;
use duffing_core::{OscillatorConfig, ResonanceId, StepControl};

fn problem(k: u32, nu: u32, f: f64) -> HbProblem {
    HbProblem::new(OscillatorConfig::default(), f, ResonanceId::new(k, nu).unwrap(), 15, 128).unwrap()
}

#[test]
fn sub13_isola_is_closed() {
    let p = problem(1, 3, 0.6);
    let b = trace_family(&p, (2.5, 8.0), &StepControl::default()).unwrap();
    assert!(b.closed);
    assert_eq!(b.folds().count(), 2);
    let (lo, hi) = b.omega_range();
    assert!(lo > 3.0 && lo < 3.1 && hi > 7.5 && hi < 7.7, "{lo} {hi}");
    assert!(b.points.iter().all(|pt| symmetry_broken(&p, &pt.solution)));
}

#[test]
fn sub13_amplitude_peak_near_resonant_phase() {
    let p = problem(1, 3, 0.6);
    let b = trace_family(&p, (2.5, 8.0), &StepControl::default()).unwrap();
    let peak = find_extrema(&p, &b, Measure::Amplitude(1))
        .into_iter()
        .filter(|e| e.maximum)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap();
    assert!(distance_to_resonant_set(p.resonance, peak.point.phase(1)) < 0.05);
}

#[test]
fn super21_found_by_branch_switching() {
    let p = problem(2, 1, 0.5);
    let (w, sol) = find_isolated_seed(&p, (0.4, 0.8), &StepControl::default()).unwrap();
    assert!((0.59..0.62).contains(&w), "{w}");
    assert!(sol.amplitude(2) > 1e-3);
}
