use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[min, max)`. The endpoint `max` is excluded so
/// that the discrete Fourier pair built on it is exactly unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    min: f64,
    max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n_points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::domain(format!("grid bounds must be finite, got [{min}, {max})")));
        }
        if !(min < max) {
            return Err(Error::domain(format!("grid needs min < max, got [{min}, {max})")));
        }
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::domain(format!(
                "grid size must be a power of two >= 8, got {n_points}"
            )));
        }
        Ok(Grid { min, max, n_points })
    }

    /// Symmetric grid whose conjugate (momentum) grid coincides with itself:
    /// `n · spacing² = 2πℏ`. Useful when positions and momenta are read on a
    /// common log-price axis.
    pub fn self_dual(n_points: usize, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::domain(format!("hbar must be positive, got {hbar}")));
        }
        let half = (PI * hbar * n_points as f64 / 2.0).sqrt();
        Grid::new(-half, half, n_points)
    }

    #[inline]
    pub fn min(&self) -> f64 {
        self.min
    }

    #[inline]
    pub fn max(&self) -> f64 {
        self.max
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.n_points as f64
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (0..self.n_points).map(move |i| self.min + i as f64 * h)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x < self.max
    }

    /// Index of the grid point nearest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.min) / self.spacing()).round();
        if t <= 0.0 {
            0
        } else {
            (t as usize).min(self.n_points - 1)
        }
    }

    /// Index `i` if `x` sits on grid point `i` up to rounding.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let t = (x - self.min) / self.spacing();
        let r = t.round();
        if (t - r).abs() <= 1e-9 && r >= 0.0 && (r as usize) < self.n_points {
            Some(r as usize)
        } else {
            None
        }
    }

    /// Conjugate grid of the discrete Fourier pair: spacing `2πℏ/(n·h)`,
    /// centred on zero.
    pub fn momentum_grid(&self, hbar: f64) -> Grid {
        let p_max = PI * hbar / self.spacing();
        Grid {
            min: -p_max,
            max: p_max,
            n_points: self.n_points,
        }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            min: -10.0,
            max: 10.0,
            n_points: 1024,
        }
    }
}
