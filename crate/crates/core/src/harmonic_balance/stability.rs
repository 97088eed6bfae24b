use nalgebra::Complex;

use super::HbProblem;
use crate::harmonic::HarmonicSolution;

const STABLE_TOL: f64 = 1e-6;

/// Floquet multipliers of the variational equation
/// `y'' + 2 zeta w0 y' + (w0^2 + 3 alpha x(t)^2) y = 0` over one response period,
/// from an RK4 monodromy matrix.
pub fn floquet_multipliers(problem: &HbProblem, sol: &HarmonicSolution) -> [Complex<f64>; 2] {
    let cfg = &problem.cfg;
    let w0sq = cfg.omega0().powi(2);
    let c = 2.0 * cfg.zeta_bar() * cfg.omega0();
    let a3 = 3.0 * cfg.alpha();
    let steps = (80 * sol.n_harmonics()).max(1000);
    let period = sol.period();
    let h = period / steps as f64;
    let stiff: Vec<f64> = (0..=2 * steps)
        .map(|i| {
            let x = sol.eval(0.5 * h * i as f64);
            w0sq + a3 * x * x
        })
        .collect();
    let rhs = |y: [f64; 2], kx: f64| [y[1], -c * y[1] - kx * y[0]];
    let mut cols = [[1.0, 0.0], [0.0, 1.0]];
    for col in cols.iter_mut() {
        let mut y = *col;
        for n in 0..steps {
            let (k0, kh, k1) = (stiff[2 * n], stiff[2 * n + 1], stiff[2 * n + 2]);
            let d1 = rhs(y, k0);
            let d2 = rhs([y[0] + 0.5 * h * d1[0], y[1] + 0.5 * h * d1[1]], kh);
            let d3 = rhs([y[0] + 0.5 * h * d2[0], y[1] + 0.5 * h * d2[1]], kh);
            let d4 = rhs([y[0] + h * d3[0], y[1] + h * d3[1]], k1);
            for i in 0..2 {
                y[i] += h / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
            }
        }
        *col = y;
    }
    let tr = cols[0][0] + cols[1][1];
    let det = cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1];
    let disc = Complex::new(tr * tr / 4.0 - det, 0.0).sqrt();
    let half = Complex::new(tr / 2.0, 0.0);
    [half + disc, half - disc]
}

/// Stable when every multiplier lies inside the unit circle.
pub fn stability_hill(problem: &HbProblem, sol: &HarmonicSolution) -> bool {
    floquet_multipliers(problem, sol)
        .iter()
        .all(|m| m.norm() < 1.0 + STABLE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{OscillatorConfig, ResonanceId};

    #[test]
    fn linear_multipliers_decay_at_damping_rate() {
        let cfg = OscillatorConfig::new(1.0, 0.01, 1.0, 0.0).unwrap();
        let p = HbProblem::new(cfg, 0.1, ResonanceId::PRIMARY, 9, 64).unwrap();
        let mut sol = HarmonicSolution::zeros(0.8, 9);
        sol.set_polar(1, 0.3, 0.2);
        let mu = floquet_multipliers(&p, &sol);
        let expect = (-0.005 * sol.period()).exp();
        for m in mu {
            assert!((m.norm() - expect).abs() < 1e-8);
        }
        assert!(stability_hill(&p, &sol));
    }

    #[test]
    fn determinant_is_liouville() {
        let cfg = OscillatorConfig::default();
        let p = HbProblem::new(cfg, 0.1, ResonanceId::PRIMARY, 9, 64).unwrap();
        let mut sol = HarmonicSolution::zeros(1.2, 9);
        sol.set_polar(1, 0.8, 1.0);
        sol.set_polar(3, 0.02, 0.3);
        let mu = floquet_multipliers(&p, &sol);
        let det = (mu[0] * mu[1]).re;
        assert!((det - (-0.01 * sol.period()).exp()).abs() < 1e-9);
    }
}
