//! Oscillator parameters, forcing and resonance labels.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of `m x'' + c x' + k x + k_nl x^3 = f sin(w t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillatorConfig {
    pub mass: f64,
    pub damping: f64,
    pub lin_stiffness: f64,
    pub nl_stiffness: f64,
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            damping: 0.01,
            lin_stiffness: 1.0,
            nl_stiffness: 1.0,
        }
    }
}

impl OscillatorConfig {
    pub fn new(mass: f64, damping: f64, lin_stiffness: f64, nl_stiffness: f64) -> Result<Self> {
        let cfg = Self {
            mass,
            damping,
            lin_stiffness,
            nl_stiffness,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Unit mass and stiffness with the given damping ratio and cubic coefficient.
    pub fn normalized(zeta_bar: f64, alpha: f64) -> Result<Self> {
        Self::new(1.0, 2.0 * zeta_bar, 1.0, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass", self.mass),
            ("damping", self.damping),
            ("lin_stiffness", self.lin_stiffness),
            ("nl_stiffness", self.nl_stiffness),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParameter("mass must be positive".into()));
        }
        if self.lin_stiffness <= 0.0 {
            return Err(Error::InvalidParameter("lin_stiffness must be positive".into()));
        }
        if self.damping < 0.0 {
            return Err(Error::InvalidParameter("damping must be non-negative".into()));
        }
        // zero is accepted as the linear limit; softening is out of scope
        if self.nl_stiffness < 0.0 {
            return Err(Error::InvalidParameter(
                "nl_stiffness must be non-negative (hardening)".into(),
            ));
        }
        if self.zeta_bar() >= 1.0 {
            return Err(Error::InvalidParameter("system must be underdamped".into()));
        }
        Ok(())
    }

    /// Parse a JSON descriptor; omitted fields take the default values.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("oscillator descriptor: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn omega0(&self) -> f64 {
        (self.lin_stiffness / self.mass).sqrt()
    }

    pub fn zeta_bar(&self) -> f64 {
        self.damping / (2.0 * (self.lin_stiffness * self.mass).sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.nl_stiffness / self.mass
    }

    /// Mass-normalized forcing amplitude for a force `f`.
    pub fn gamma_bar(&self, f: f64) -> f64 {
        f / self.mass
    }
}

/// Harmonic excitation `f sin(omega t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Forcing {
    pub amplitude: f64,
    pub omega: f64,
}

impl Forcing {
    pub fn new(amplitude: f64, omega: f64) -> Result<Self> {
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidParameter("forcing amplitude must be >= 0".into()));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter("forcing frequency must be > 0".into()));
        }
        Ok(Self { amplitude, omega })
    }

    pub fn gamma_bar(&self, cfg: &OscillatorConfig) -> f64 {
        cfg.gamma_bar(self.amplitude)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }
}

/// A `k:nu` resonance: harmonic `k` of the response at base frequency `omega/nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ResonanceId {
    k: u32,
    nu: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ResonanceId {
    pub const PRIMARY: Self = Self { k: 1, nu: 1 };

    pub fn new(k: u32, nu: u32) -> Result<Self> {
        if k == 0 || nu == 0 || gcd(k, nu) != 1 {
            return Err(Error::InvalidResonance(format!("{k}:{nu}")));
        }
        Ok(Self { k, nu })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// Frequency of the resonant harmonic, `k omega / nu`.
    pub fn response_frequency(&self, omega: f64) -> f64 {
        self.k as f64 * omega / self.nu as f64
    }

    /// Forcing frequency at which the resonant harmonic sits on `omega0`.
    pub fn nominal_frequency(&self, omega0: f64) -> f64 {
        self.nu as f64 * omega0 / self.k as f64
    }

    pub fn both_odd(&self) -> bool {
        self.k % 2 == 1 && self.nu % 2 == 1
    }

    /// Squared detuning of the resonant harmonic, `(k omega/nu)^2 - omega0^2`.
    pub fn detuning(&self, omega: f64, cfg: &OscillatorConfig) -> f64 {
        let wk = self.response_frequency(omega);
        wk * wk - cfg.omega0().powi(2)
    }
}

impl fmt::Display for ResonanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.k, self.nu)
    }
}

impl FromStr for ResonanceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidResonance(s.to_string());
        let (k, nu) = s.trim().split_once(':').ok_or_else(bad)?;
        let k = k.trim().parse().map_err(|_| bad())?;
        let nu = nu.trim().parse().map_err(|_| bad())?;
        Self::new(k, nu)
    }
}

impl TryFrom<String> for ResonanceId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ResonanceId> for String {
    fn from(r: ResonanceId) -> String {
        r.to_string()
    }
}

/// Polar slow coordinates of the resonant harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlowFlowState {
    pub r: f64,
    pub phi: f64,
}

impl SlowFlowState {
    /// `r` must be non-negative; `phi` is wrapped to `[0, 2pi)`.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::InvalidParameter("slow-flow amplitude must be >= 0".into()));
        }
        Ok(Self {
            r,
            phi: crate::phase::wrap_angle(phi),
        })
    }

    /// Averaging coordinates `(u, v)` with `u = -r sin(phi)`, `v = -r cos(phi)`.
    pub fn to_uv(&self) -> (f64, f64) {
        (-self.r * self.phi.sin(), -self.r * self.phi.cos())
    }

    pub fn from_uv(u: f64, v: f64) -> Self {
        Self {
            r: u.hypot(v),
            phi: crate::phase::wrap_angle((-u).atan2(-v)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResonanceKind {
    AmplitudeResonance,
    PhaseResonance,
}

/// A resonance located on the amplitude or phase criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePoint {
    pub omega: f64,
    pub amplitude: f64,
    pub phase_lag: f64,
    pub kind: ResonanceKind,
    pub harmonic_index: u32,
}

/// Relative guard on `|omega^2 - omega0^2|` below which the directly forced
/// harmonic is undefined.
pub const GAMMA_GUARD: f64 = 1e-6;

/// Amplitude of the directly forced harmonic, `gamma_bar / (omega0^2 - omega^2)`.
pub fn gamma_capital(omega: f64, cfg: &OscillatorConfig, gamma_bar: f64) -> Result<f64> {
    let w0sq = cfg.omega0().powi(2);
    let den = w0sq - omega * omega;
    if den.abs() < GAMMA_GUARD * w0sq {
        return Err(Error::SingularFrequency { omega });
    }
    Ok(gamma_bar / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_parameters() {
        let cfg = OscillatorConfig::default();
        assert_eq!(cfg.omega0(), 1.0);
        assert_eq!(cfg.zeta_bar(), 0.005);
        assert_eq!(cfg.alpha(), 1.0);
    }

    #[test]
    fn json_descriptor_defaults() {
        let cfg = OscillatorConfig::from_json(r#"{"damping":0.02}"#).unwrap();
        assert_eq!(cfg.mass, 1.0);
        assert_eq!(cfg.zeta_bar(), 0.01);
        assert!(OscillatorConfig::from_json(r#"{"mass":-1}"#).is_err());
        assert!(OscillatorConfig::from_json(r#"{"colour":1}"#).is_err());
    }

    #[test]
    fn rejects_invalid() {
        assert!(OscillatorConfig::new(0.0, 0.01, 1.0, 1.0).is_err());
        assert!(OscillatorConfig::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(OscillatorConfig::new(1.0, 0.01, 1.0, -1.0).is_err());
        assert!(OscillatorConfig::new(1.0, 2.5, 1.0, 1.0).is_err());
        assert!(Forcing::new(-1.0, 1.0).is_err());
        assert!(Forcing::new(1.0, 0.0).is_err());
    }

    #[test]
    fn resonance_labels() {
        let r: ResonanceId = "3:1".parse().unwrap();
        assert_eq!((r.k(), r.nu()), (3, 1));
        assert_eq!(r.to_string(), "3:1");
        assert!("2:4".parse::<ResonanceId>().is_err());
        assert!("0:1".parse::<ResonanceId>().is_err());
        assert!("x".parse::<ResonanceId>().is_err());
        let s: ResonanceId = "1:3".parse().unwrap();
        assert!((s.response_frequency(3.0) - 1.0).abs() < 1e-15);
        assert_eq!(s.nominal_frequency(1.0), 3.0);
    }

    #[test]
    fn gamma_capital_values() {
        let cfg = OscillatorConfig::default();
        assert!((gamma_capital(3.0, &cfg, 0.3).unwrap() + 0.0375).abs() < 1e-15);
        assert!((gamma_capital(1.0 / 3.0, &cfg, 0.2).unwrap() - 0.225).abs() < 1e-14);
        assert_eq!(
            gamma_capital(1.0, &cfg, 0.2),
            Err(Error::SingularFrequency { omega: 1.0 })
        );
    }

    #[test]
    fn uv_round_trip() {
        let s = SlowFlowState::new(0.7, 2.0).unwrap();
        let (u, v) = s.to_uv();
        let b = SlowFlowState::from_uv(u, v);
        assert!((b.r - 0.7).abs() < 1e-15);
        assert!((b.phi - 2.0).abs() < 1e-15);
    }
}
