//! Alternating frequency/time transforms over one base period.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

/// Synthesis `E` (`M x (2N+1)`) and projection `P` (`(2N+1) x M`) for the
/// layout `[a0, c1, s1, ..., cN, sN]` sampled at `theta_i = 2 pi i / M`.
/// `P E = I` whenever `M > 2N`.
#[derive(Debug, Clone)]
pub struct Aft {
    n_harmonics: usize,
    synth: DMatrix<f64>,
    proj: DMatrix<f64>,
}

impl Aft {
    pub fn new(n_harmonics: usize, samples: usize) -> Self {
        let n = 2 * n_harmonics + 1;
        let m = samples;
        let mut synth = DMatrix::zeros(m, n);
        let mut proj = DMatrix::zeros(n, m);
        let scale = 2.0 / m as f64;
        for i in 0..m {
            let th = TAU * i as f64 / m as f64;
            synth[(i, 0)] = 1.0;
            proj[(0, i)] = 1.0 / m as f64;
            for j in 1..=n_harmonics {
                let (s, c) = (j as f64 * th).sin_cos();
                synth[(i, 2 * j - 1)] = c;
                synth[(i, 2 * j)] = s;
                proj[(2 * j - 1, i)] = scale * c;
                proj[(2 * j, i)] = scale * s;
            }
        }
        Self { n_harmonics, synth, proj }
    }

    pub fn n_harmonics(&self) -> usize {
        self.n_harmonics
    }

    pub fn samples(&self) -> usize {
        self.synth.nrows()
    }

    pub fn to_time(&self, q: &DVector<f64>) -> DVector<f64> {
        &self.synth * q
    }

    pub fn to_freq(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj * x
    }

    /// Harmonic coefficients of `x(t)^3`.
    pub fn cubic(&self, q: &DVector<f64>) -> DVector<f64> {
        let x = self.to_time(q);
        self.to_freq(&x.map(|v| v * v * v))
    }

    /// `d cubic / dq = P diag(3 x^2) E`.
    pub fn cubic_jacobian(&self, q: &DVector<f64>) -> DMatrix<f64> {
        let x = self.to_time(q);
        let mut scaled = self.synth.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            row *= 3.0 * x[i] * x[i];
        }
        &self.proj * scaled
    }
}
