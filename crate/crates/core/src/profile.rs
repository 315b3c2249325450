//! Cumulative mass of a sampled density, read between grid points through
//! the density's trigonometric interpolant.
//!
//! A step-function Riemann sum is only first-order accurate in the spacing;
//! integrating the periodic interpolant term by term is spectrally accurate
//! and agrees exactly with the Riemann total at the right end.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeMass {
    axis: Grid,
    /// Fourier coefficients `c_k` for `k = 0..n`, wrapped (upper half negative).
    coeffs: Vec<Complex64>,
    /// Monotone cumulative mass at each node, plus the right endpoint.
    nodes: Vec<f64>,
}

impl CumulativeMass {
    /// `density` must be non-negative with Riemann mass 1 on `axis`.
    pub fn new(axis: Grid, density: &[f64]) -> Self {
        let n = axis.len();
        debug_assert_eq!(density.len(), n);
        let (h, len) = (axis.spacing(), axis.length());

        let mut coeffs: Vec<Complex64> = density.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut coeffs);
        coeffs.iter_mut().for_each(|c| *c /= n as f64);

        // node values: c₀·s + Σ_{k≠0} g_k (e^{2πiks/L} − 1), g_k = c_k L/(2πik);
        // the Nyquist term integrates to a sine and vanishes on nodes.
        let mut g: Vec<Complex64> = (0..n)
            .map(|k| {
                let kk = wrapped(k, n);
                if kk == 0 || k == n / 2 {
                    Complex64::default()
                } else {
                    coeffs[k] * len / (Complex64::i() * 2.0 * PI * kk as f64)
                }
            })
            .collect();
        let g_sum: Complex64 = g.iter().sum();
        FftPlanner::new().plan_fft_inverse(n).process(&mut g);

        let c0 = coeffs[0].re;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut running: f64 = 0.0;
        for (a, ga) in g.iter().enumerate() {
            let v = c0 * a as f64 * h + (ga - g_sum).re;
            running = running.max(v.clamp(0.0, 1.0));
            nodes.push(running);
        }
        nodes.push(1.0f64.max(running));
        CumulativeMass { axis, coeffs, nodes }
    }

    pub fn axis(&self) -> &Grid {
        &self.axis
    }

    /// Mass on `(-∞, x]`.
    pub fn at(&self, x: f64) -> f64 {
        if x <= self.axis.min() {
            return 0.0;
        }
        if x >= self.axis.max() {
            return 1.0;
        }
        if let Some(i) = self.axis.node_index(x) {
            return self.nodes[i];
        }
        let s = x - self.axis.min();
        let i = ((s / self.axis.spacing()).floor() as usize).min(self.axis.len() - 1);
        self.interpolant(s).clamp(self.nodes[i], self.nodes[i + 1])
    }

    fn interpolant(&self, s: f64) -> f64 {
        let n = self.axis.len();
        let len = self.axis.length();
        let mut total = self.coeffs[0].re * s;
        for k in 1..n {
            let kk = wrapped(k, n);
            let c = self.coeffs[k];
            if k == n / 2 {
                // real Nyquist mode c·cos(πns/L)
                total += c.re * (PI * n as f64 * s / len).sin() * len / (PI * n as f64);
            } else {
                let w = 2.0 * PI * kk as f64 / len;
                let e = Complex64::from_polar(1.0, w * s) - 1.0;
                total += (c * e / (Complex64::i() * w)).re;
            }
        }
        total
    }
}

#[inline]
fn wrapped(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
