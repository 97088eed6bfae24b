//! Amplitude and phase resonances of a harmonically forced hardening Duffing
//! oscillator
//!
//! ```text
//! x'' + 2 zeta w0 x' + w0^2 x + alpha x^3 = gamma sin(w t)
//! ```
//!
//! located three ways: closed-form expressions from averaging
//! ([`closed_form`]), steady states of the averaged equations
//! ([`slow_flow`]) and multi-harmonic balance with arclength continuation
//! ([`harmonic_balance`]). Direct time integration ([`time_oracle`]) serves
//! as the reference for all of them.
//!
//! Phase lags follow `x_k(t) = A_k sin(k w t / nu - phi_k)` and are measured
//! against the forcing `sin(w t)`.

pub mod closed_form;
pub mod continuation;
pub mod error;
pub mod harmonic;
pub mod harmonic_balance;
pub mod model;
pub mod phase;
pub mod rational;
pub mod slow_flow;
pub mod time_oracle;

pub use error::{Error, Result};
pub use harmonic::HarmonicSolution;
pub use model::{
    gamma_capital, Forcing, OscillatorConfig, ResonanceId, ResonanceKind, ResonancePoint,
    SlowFlowState,
};
pub use phase::{equivalent_phase_lags, resonant_phase_lag};
pub use continuation::StepControl;
