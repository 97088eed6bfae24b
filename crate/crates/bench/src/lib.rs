//! Shared fixtures for the solver benchmarks.

use duffing_core::harmonic_balance::HbProblem;
use duffing_core::{OscillatorConfig, ResonanceId};

pub fn primary_problem(f: f64) -> HbProblem {
    HbProblem::new(OscillatorConfig::default(), f, ResonanceId::PRIMARY, 15, 128)
        .expect("valid problem")
}

pub fn subharmonic_problem(f: f64) -> HbProblem {
    HbProblem::new(
        OscillatorConfig::default(),
        f,
        ResonanceId::new(1, 3).expect("valid label"),
        15,
        128,
    )
    .expect("valid problem")
}
