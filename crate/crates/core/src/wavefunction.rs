use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::Grid;

/// Squared norms below this are treated as an empty state.
const NORM_FLOOR: f64 = 1e-280;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    Position,
    Momentum,
}

/// Complex amplitudes of a strategy state sampled on a grid.
///
/// `grid` is always the position (log-price) grid. In the momentum
/// representation the samples live on `grid.momentum_grid(hbar_e)`; use
/// [`Wavefunction::sample_grid`] to get whichever axis the amplitudes are on.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    representation: Representation,
    hbar_e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl Wavefunction {
    pub fn new(
        grid: Grid,
        amplitudes: Vec<Complex64>,
        representation: Representation,
        hbar_e: f64,
    ) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.len()
            )));
        }
        if !(hbar_e > 0.0 && hbar_e.is_finite()) {
            return Err(Error::domain(format!("hbar_e must be positive, got {hbar_e}")));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain("non-finite amplitude"));
        }
        Ok(Wavefunction { grid, amplitudes, representation, hbar_e })
    }

    /// Samples `f` on the axis of `representation`.
    pub fn from_fn<F>(grid: Grid, representation: Representation, hbar_e: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let axis = match representation {
            Representation::Position => grid,
            Representation::Momentum => grid.momentum_grid(hbar_e),
        };
        let amplitudes = axis.points().map(f).collect();
        Wavefunction::new(grid, amplitudes, representation, hbar_e)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn hbar_e(&self) -> f64 {
        self.hbar_e
    }

    pub fn sample_grid(&self) -> Grid {
        match self.representation {
            Representation::Position => self.grid,
            Representation::Momentum => self.grid.momentum_grid(self.hbar_e),
        }
    }

    /// Riemann sum of `|amplitude|²` over the sample axis.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.sample_grid().spacing()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > NORM_FLOOR) || !n2.is_finite() {
            return Err(Error::DegenerateState(n2));
        }
        let s = 1.0 / n2.sqrt();
        Ok(Wavefunction {
            amplitudes: self.amplitudes.iter().map(|a| a * s).collect(),
            ..self.clone()
        })
    }

    /// Switches between `⟨q|ψ⟩` and `⟨p|ψ⟩`.
    pub fn change_representation(&self) -> Self {
        let (amplitudes, representation) = match self.representation {
            Representation::Position => (
                fourier::to_momentum(&self.grid, self.hbar_e, &self.amplitudes),
                Representation::Momentum,
            ),
            Representation::Momentum => (
                fourier::to_position(&self.grid, self.hbar_e, &self.amplitudes),
                Representation::Position,
            ),
        };
        Wavefunction { amplitudes, representation, ..self.clone() }
    }

    pub fn to_representation(&self, representation: Representation) -> Self {
        if self.representation == representation {
            self.clone()
        } else {
            self.change_representation()
        }
    }

    /// Normalised probability density on the sample axis.
    pub fn density(&self) -> Result<Vec<f64>> {
        let n2 = self.norm_sqr();
        if !(n2 > NORM_FLOOR) || !n2.is_finite() {
            return Err(Error::DegenerateState(n2));
        }
        Ok(self.amplitudes.iter().map(|a| a.norm_sqr() / n2).collect())
    }

    /// Mean and variance of the coordinate of the current representation.
    pub fn moments(&self) -> Result<Moments> {
        let rho = self.density()?;
        let axis = self.sample_grid();
        let h = axis.spacing();
        let mean: f64 = axis.points().zip(&rho).map(|(x, w)| x * w).sum::<f64>() * h;
        let variance: f64 = axis
            .points()
            .zip(&rho)
            .map(|(x, w)| (x - mean).powi(2) * w)
            .sum::<f64>()
            * h;
        Ok(Moments { mean, variance: variance.max(0.0) })
    }

    /// Probability mass in the outer `fraction` of the sample axis (both ends
    /// together).
    pub fn edge_mass(&self, fraction: f64) -> Result<f64> {
        let rho = self.density()?;
        let n = rho.len();
        let k = ((n as f64 * fraction).ceil() as usize).min(n / 2);
        let h = self.sample_grid().spacing();
        Ok((rho[..k].iter().sum::<f64>() + rho[n - k..].iter().sum::<f64>()) * h)
    }

    /// Riemann-sum inner product `⟨self|other⟩`; both must share grid,
    /// representation and ℏ_E.
    pub fn inner(&self, other: &Wavefunction) -> Result<Complex64> {
        if self.grid != other.grid
            || self.representation != other.representation
            || self.hbar_e != other.hbar_e
        {
            return Err(Error::domain("inner product of incompatible wavefunctions"));
        }
        let h = self.sample_grid().spacing();
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * h)
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        Wavefunction { amplitudes, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn gaussian(center: f64) -> Wavefunction {
        Wavefunction::from_fn(Grid::default(), Representation::Position, 1.0, |q| {
            Complex64::new((-(q - center).powi(2) / 2.0).exp() / PI.powf(0.25), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn normalize_constant_amplitudes() {
        let grid = Grid::new(0.0, 1.0, 8).unwrap();
        let psi = Wavefunction::new(grid, vec![Complex64::new(2.0, 0.0); 8], Representation::Position, 1.0)
            .unwrap();
        let n = psi.normalize().unwrap();
        for a in n.amplitudes() {
            assert!((a.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_is_idempotent_on_gaussian() {
        let psi = gaussian(0.0);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let n = psi.normalize().unwrap();
        let err = n.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn zero_state_is_degenerate() {
        let psi =
            Wavefunction::new(Grid::default(), vec![Complex64::default(); 1024], Representation::Position, 1.0)
                .unwrap();
        assert!(matches!(psi.normalize(), Err(Error::DegenerateState(_))));
        assert!(matches!(psi.moments(), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn gaussian_is_self_dual() {
        let phi = gaussian(0.0).change_representation();
        assert_eq!(phi.representation(), Representation::Momentum);
        let pgrid = phi.sample_grid();
        let err = pgrid
            .points()
            .zip(phi.amplitudes())
            .map(|(p, a)| (a - Complex64::new((-p * p / 2.0).exp() / PI.powf(0.25), 0.0)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn gaussian_moments() {
        let m = gaussian(0.0).moments().unwrap();
        assert!(m.mean.abs() < 1e-14);
        assert!((m.variance - 0.5).abs() < 1e-12);
        let m = gaussian(3.0).moments().unwrap();
        assert!((m.mean - 3.0).abs() < 1e-12);
        assert!((m.variance - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_lengths() {
        let r = Wavefunction::new(Grid::default(), vec![Complex64::default(); 3], Representation::Position, 1.0);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    fn random_state(seed: &[(f64, f64)]) -> Wavefunction {
        // smooth random superposition of displaced Gaussians with random phases
        Wavefunction::from_fn(Grid::default(), Representation::Position, 1.0, |q| {
            seed.iter()
                .enumerate()
                .map(|(k, &(c, ph))| {
                    Complex64::from_polar((-(q - c).powi(2) / (1.0 + k as f64 * 0.3)).exp(), ph + 0.4 * q)
                })
                .sum()
        })
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn parseval_and_round_trip(seed in prop::collection::vec((-4.0f64..4.0, 0.0f64..6.28), 1..5)) {
            let psi = random_state(&seed);
            let phi = psi.change_representation();
            prop_assert!((phi.norm_sqr() - psi.norm_sqr()).abs() < 1e-10 * psi.norm_sqr().max(1.0));
            let back = phi.change_representation();
            let err = back.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10);
        }

        #[test]
        fn moments_ignore_global_phase(seed in prop::collection::vec((-4.0f64..4.0, 0.0f64..6.28), 1..5), phase in 0.0f64..6.28) {
            let psi = random_state(&seed);
            let rotated = psi.with_amplitudes(psi.amplitudes().iter().map(|a| a * Complex64::from_polar(1.0, phase)).collect());
            let (a, b) = (psi.moments().unwrap(), rotated.moments().unwrap());
            prop_assert!((a.mean - b.mean).abs() < 1e-12);
            prop_assert!((a.variance - b.variance).abs() < 1e-12);
        }

        #[test]
        fn translation_shifts_mean(steps in -100i32..100) {
            let shift = steps as f64 * Grid::default().spacing();
            let a = gaussian(0.0).moments().unwrap();
            let b = gaussian(shift).moments().unwrap();
            prop_assert!((b.mean - a.mean - shift).abs() < 1e-12);
        }
    }
}
