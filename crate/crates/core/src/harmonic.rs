//! Truncated Fourier representation of a periodic response.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::phase::wrap_angle;

/// `x(t) = a0 + sum_j cos_j cos(j w t) + sin_j sin(j w t)` with `w = base_freq`.
///
/// Each term equals `A_j sin(j w t - phi_j)`, so `sin_j = A_j cos(phi_j)` and
/// `cos_j = -A_j sin(phi_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSolution {
    pub base_freq: f64,
    pub a0: f64,
    pub coeffs: Vec<(f64, f64)>,
}

impl HarmonicSolution {
    pub fn zeros(base_freq: f64, n_harmonics: usize) -> Self {
        Self {
            base_freq,
            a0: 0.0,
            coeffs: vec![(0.0, 0.0); n_harmonics],
        }
    }

    /// Build from the flat layout `[a0, c1, s1, ..., cN, sN]`.
    pub fn from_flat(base_freq: f64, q: &[f64]) -> Self {
        assert!(q.len() % 2 == 1, "flat harmonic vector must have odd length");
        let coeffs = q[1..].chunks_exact(2).map(|c| (c[0], c[1])).collect();
        Self {
            base_freq,
            a0: q[0],
            coeffs,
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut q = Vec::with_capacity(2 * self.coeffs.len() + 1);
        q.push(self.a0);
        for &(c, s) in &self.coeffs {
            q.push(c);
            q.push(s);
        }
        q
    }

    pub fn n_harmonics(&self) -> usize {
        self.coeffs.len()
    }

    /// Amplitude `A_j`; `A_0 = |a0|`, zero beyond the truncation.
    pub fn amplitude(&self, j: usize) -> f64 {
        match j {
            0 => self.a0.abs(),
            _ => self
                .coeffs
                .get(j - 1)
                .map_or(0.0, |&(c, s)| c.hypot(s)),
        }
    }

    /// Phase lag `phi_j` in `[0, 2pi)`.
    pub fn phase(&self, j: usize) -> f64 {
        assert!(j >= 1, "phase is defined for j >= 1");
        self.coeffs
            .get(j - 1)
            .map_or(0.0, |&(c, s)| wrap_angle((-c).atan2(s)))
    }

    /// Set harmonic `j` to `amp sin(j w t - phi)`.
    pub fn set_polar(&mut self, j: usize, amp: f64, phi: f64) {
        self.coeffs[j - 1] = (-amp * phi.sin(), amp * phi.cos());
    }

    pub fn period(&self) -> f64 {
        TAU / self.base_freq
    }

    pub fn eval(&self, t: f64) -> f64 {
        let th = self.base_freq * t;
        self.a0
            + self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &(c, s))| {
                    let (sn, cs) = ((i + 1) as f64 * th).sin_cos();
                    c * cs + s * sn
                })
                .sum::<f64>()
    }

    pub fn eval_velocity(&self, t: f64) -> f64 {
        let th = self.base_freq * t;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &(c, s))| {
                let jw = (i + 1) as f64 * self.base_freq;
                let (sn, cs) = ((i + 1) as f64 * th).sin_cos();
                jw * (s * cs - c * sn)
            })
            .sum()
    }

    pub fn eval_acceleration(&self, t: f64) -> f64 {
        let th = self.base_freq * t;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &(c, s))| {
                let jw = (i + 1) as f64 * self.base_freq;
                let (sn, cs) = ((i + 1) as f64 * th).sin_cos();
                -jw * jw * (c * cs + s * sn)
            })
            .sum()
    }

    /// Samples of `x` over one period at `m` uniform instants.
    pub fn sample_period(&self, m: usize) -> Vec<f64> {
        let dt = self.period() / m as f64;
        (0..m).map(|i| self.eval(i as f64 * dt)).collect()
    }

    /// Peak `|x(t)|` over one period, sampled then polished by parabolic fit.
    pub fn max_displacement(&self) -> f64 {
        let m = (64 * self.coeffs.len()).max(256);
        let xs = self.sample_period(m);
        let (imax, _) = xs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        let (a, b, c) = (
            xs[(imax + m - 1) % m].abs(),
            xs[imax].abs(),
            xs[(imax + 1) % m].abs(),
        );
        let den = a - 2.0 * b + c;
        if den < 0.0 {
            let d = 0.5 * (a - c) / den;
            let dt = self.period() / m as f64;
            self.eval((imax as f64 + d) * dt).abs().max(b)
        } else {
            b
        }
    }

    /// Norm of the components that vanish on a response with the symmetry
    /// of the forcing (only odd multiples of `nu` present).
    pub fn symmetry_breaking_content(&self, nu: usize) -> f64 {
        let mut s = self.a0 * self.a0;
        for (i, &(c, sn)) in self.coeffs.iter().enumerate() {
            let j = i + 1;
            if j % nu != 0 || (j / nu).is_multiple_of(2) {
                s += c * c + sn * sn;
            }
        }
        s.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polar_convention() {
        let mut h = HarmonicSolution::zeros(2.0, 3);
        h.set_polar(2, 0.5, PI / 3.0);
        assert!((h.amplitude(2) - 0.5).abs() < 1e-15);
        assert!((h.phase(2) - PI / 3.0).abs() < 1e-14);
        let t = 0.37;
        let expect = 0.5 * (2.0 * 2.0 * t - PI / 3.0).sin();
        assert!((h.eval(t) - expect).abs() < 1e-14);
        assert_eq!(h.amplitude(7), 0.0);
    }

    #[test]
    fn derivatives() {
        let h = HarmonicSolution::from_flat(1.3, &[0.1, 0.2, -0.3, 0.05, 0.01]);
        let (t, e) = (0.4, 1e-5);
        let v = (h.eval(t + e) - h.eval(t - e)) / (2.0 * e);
        let a = (h.eval_velocity(t + e) - h.eval_velocity(t - e)) / (2.0 * e);
        assert!((v - h.eval_velocity(t)).abs() < 1e-8);
        assert!((a - h.eval_acceleration(t)).abs() < 1e-8);
        assert_eq!(h.to_flat(), vec![0.1, 0.2, -0.3, 0.05, 0.01]);
    }

    #[test]
    fn max_displacement_of_pure_tone() {
        let mut h = HarmonicSolution::zeros(1.0, 1);
        h.set_polar(1, 0.8, 0.3);
        assert!((h.max_displacement() - 0.8).abs() < 1e-9);
    }

    #[test]
    fn symmetry_content() {
        let mut h = HarmonicSolution::zeros(1.0 / 3.0, 9);
        h.set_polar(3, 1.0, 0.0);
        h.set_polar(9, 0.1, 0.0);
        assert_eq!(h.symmetry_breaking_content(3), 0.0);
        h.set_polar(1, 0.2, 0.0);
        h.set_polar(6, 0.1, 0.0);
        assert!((h.symmetry_breaking_content(3) - 0.05f64.sqrt()).abs() < 1e-12);
    }
}
