use std::f64::consts::{PI, TAU};

use duffing_core::closed_form::{primary_resonance, primary_resonance_gap, sub13_phase_locus};
use duffing_core::harmonic_balance::Aft;
use duffing_core::phase::{angle_diff, distance_to_resonant_set, equivalence_spacing, wrap_angle};
use duffing_core::slow_flow::SlowFlowSystem;
use duffing_core::{equivalent_phase_lags, resonant_phase_lag, OscillatorConfig, ResonanceId, SlowFlowState};
use nalgebra::DVector;
use proptest::prelude::*;

fn resonance() -> impl Strategy<Value = ResonanceId> {
    (1u32..8, 1u32..6).prop_filter_map("coprime", |(k, nu)| ResonanceId::new(k, nu).ok())
}

proptest! {
    #[test]
    fn uv_round_trip(r in 1e-6f64..10.0, phi in 0.0f64..TAU) {
        let s = SlowFlowState::new(r, phi).unwrap();
        let (u, v) = s.to_uv();
        let back = SlowFlowState::from_uv(u, v);
        prop_assert!((back.r - r).abs() < 1e-12 * r.max(1.0));
        prop_assert!(angle_diff(back.phi, phi).abs() < 1e-9);
    }

    #[test]
    fn canonical_lag_in_equivalent_set(res in resonance()) {
        let lags = equivalent_phase_lags(res);
        let canon = resonant_phase_lag(res);
        prop_assert!(lags.iter().any(|l| angle_diff(*l, canon).abs() < 1e-12));
        let step = equivalence_spacing(res);
        prop_assert_eq!(lags.len(), (TAU / step).round() as usize);
        for l in &lags {
            prop_assert!(distance_to_resonant_set(res, *l) < 1e-12);
            prop_assert!(distance_to_resonant_set(res, wrap_angle(l + step)) < 1e-12);
        }
    }

    #[test]
    fn primary_gap_positive_and_consistent(zeta in 1e-4f64..0.05, f in 1e-4f64..0.1) {
        let cfg = OscillatorConfig::normalized(zeta, 1.0).unwrap();
        let r = primary_resonance(&cfg, f).unwrap();
        let gap = primary_resonance_gap(&cfg, f).unwrap();
        prop_assert!(gap > 0.0);
        prop_assert!(r.omega_p > r.omega_a);
        prop_assert!((gap - r.delta_omega).abs() < 1e-9 * r.omega_p);
    }

    #[test]
    fn sub13_locus_points_are_steady(w in 3.05f64..6.0) {
        let cfg = OscillatorConfig::default();
        let sys = SlowFlowSystem::new(ResonanceId::new(1, 3).unwrap()).unwrap();
        for p in sub13_phase_locus(&cfg, w).unwrap() {
            if !(p.amplitude > 0.0) || !p.forcing_gamma_bar.is_finite() {
                continue;
            }
            let f = p.forcing_gamma_bar * cfg.mass;
            let s = SlowFlowState { r: p.amplitude, phi: PI / 2.0 };
            let (a, b) = sys.residual(&s, w, &cfg, f).unwrap();
            prop_assert!(a.hypot(b) < 1e-10 * p.amplitude.max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn aft_round_trip(coeffs in prop::collection::vec(-1.0f64..1.0, 19)) {
        let aft = Aft::new(9, 64);
        let q = DVector::from_vec(coeffs);
        let back = aft.to_freq(&aft.to_time(&q));
        prop_assert!((back - q).norm() < 1e-12);
    }
}
