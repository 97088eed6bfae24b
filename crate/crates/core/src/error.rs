use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid resonance label `{0}`")]
    InvalidResonance(String),
    #[error("frequency {omega} is too close to the linear natural frequency")]
    SingularFrequency { omega: f64 },
    #[error("damping too large for an amplitude peak")]
    OverdampedPeak,
    #[error("zero damping")]
    ZeroDamping,
    #[error("hardening stiffness required (alpha > 0)")]
    NotHardening,
    #[error("no resonance: negative discriminant")]
    NoResonance,
    #[error("no quadrature point at omega = {omega}: below the locus fold")]
    BelowFoldPoint { omega: f64 },
    #[error("r0 undefined at omega = {omega}: 4*Omega/(3*alpha) < 2*Gamma^2")]
    NotExist { omega: f64 },
    #[error("resonance family {0} is not implemented")]
    UnsupportedFamily(String),
    #[error("no steady state found in the requested range")]
    SeedNotFound,
    #[error("Newton iteration did not converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },
    #[error("integration produced a non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("response not settled: period amplitudes differ by {rel_change:.3e}")]
    NotSettled { rel_change: f64 },
    #[error("trajectory too short: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
