//! Discrete unitary pair between position and momentum samples.
//!
//! Forward kernel `e^{-ipq/ℏ}/√(2πℏ)` sampled on a periodic position grid and
//! its conjugate momentum grid (`Grid::momentum_grid`). With `q_a = q_min + a·dq`
//! and `p_j = p_min + j·dp`, `dq·dp = 2πℏ/n`, so the double sum factorises into
//! one FFT plus two diagonal phase multiplications.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::Grid;

pub(crate) fn to_momentum(grid: &Grid, hbar: f64, amplitudes: &[Complex64]) -> Vec<Complex64> {
    let pgrid = grid.momentum_grid(hbar);
    let (dq, p_min, q_min) = (grid.spacing(), pgrid.min(), grid.min());
    let n = grid.len();

    let mut buf: Vec<Complex64> = amplitudes
        .iter()
        .enumerate()
        .map(|(a, &psi)| psi * Complex64::from_polar(1.0, -p_min * a as f64 * dq / hbar))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let scale = dq / (2.0 * std::f64::consts::PI * hbar).sqrt();
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= Complex64::from_polar(scale, -pgrid.point(j) * q_min / hbar);
    }
    buf
}

pub(crate) fn to_position(grid: &Grid, hbar: f64, amplitudes: &[Complex64]) -> Vec<Complex64> {
    let pgrid = grid.momentum_grid(hbar);
    let (dp, p_min, q_min) = (pgrid.spacing(), pgrid.min(), grid.min());
    let n = grid.len();

    let mut buf: Vec<Complex64> = amplitudes
        .iter()
        .enumerate()
        .map(|(j, &phi)| phi * Complex64::from_polar(1.0, q_min * j as f64 * dp / hbar))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);

    let scale = dp / (2.0 * std::f64::consts::PI * hbar).sqrt();
    for (a, v) in buf.iter_mut().enumerate() {
        *v *= Complex64::from_polar(scale, p_min * grid.point(a) / hbar);
    }
    buf
}

/// Applies a function of the momentum operator to position amplitudes.
pub(crate) fn apply_momentum_fn<F>(grid: &Grid, hbar: f64, amplitudes: &[Complex64], f: F) -> Vec<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let pgrid = grid.momentum_grid(hbar);
    let mut phi = to_momentum(grid, hbar, amplitudes);
    for (j, v) in phi.iter_mut().enumerate() {
        *v *= f(pgrid.point(j));
    }
    to_position(grid, hbar, &phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // O(n²) quadrature with the kernel written out directly.
    fn dense_forward(grid: &Grid, hbar: f64, psi: &[Complex64]) -> Vec<Complex64> {
        let pgrid = grid.momentum_grid(hbar);
        let norm = grid.spacing() / (2.0 * PI * hbar).sqrt();
        pgrid
            .points()
            .map(|p| {
                grid.points()
                    .zip(psi)
                    .map(|(q, &a)| a * Complex64::from_polar(norm, -p * q / hbar))
                    .sum()
            })
            .collect()
    }

    fn dense_inverse(grid: &Grid, hbar: f64, phi: &[Complex64]) -> Vec<Complex64> {
        let pgrid = grid.momentum_grid(hbar);
        let norm = pgrid.spacing() / (2.0 * PI * hbar).sqrt();
        grid.points()
            .map(|q| {
                pgrid
                    .points()
                    .zip(phi)
                    .map(|(p, &a)| a * Complex64::from_polar(norm, p * q / hbar))
                    .sum()
            })
            .collect()
    }

    fn pseudo_random_state(n: usize) -> Vec<Complex64> {
        // fixed LCG so the test has no RNG dependency
        let mut s: u64 = 0x9e3779b97f4a7c15;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..n).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn fast_transform_matches_dense_quadrature() {
        let grid = Grid::new(-3.0, 5.0, 128).unwrap();
        let hbar = 0.7;
        let psi = pseudo_random_state(grid.len());
        let fast = to_momentum(&grid, hbar, &psi);
        let dense = dense_forward(&grid, hbar, &psi);
        let err = fast.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "forward error {err}");

        let back_fast = to_position(&grid, hbar, &fast);
        let back_dense = dense_inverse(&grid, hbar, &dense);
        let err = back_fast.iter().zip(&back_dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-11, "inverse error {err}");
        let err = back_fast.iter().zip(&psi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "round trip error {err}");
    }
}
