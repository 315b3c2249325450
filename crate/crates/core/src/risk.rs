//! The risk inclination operator
//! `H = (P − p₀)²/2m + mω²(Q − q₀)²/2`, `ω = 2π/θ`, and its spectrum.
//!
//! The kinetic term is applied spectrally: on the periodic grid it is the
//! circulant matrix `F⁻¹ diag((p_j − p₀)²/2m) F`, exact for band-limited
//! states. Noncommutativity of strength Θ enters only through the effective
//! constant `√(ℏ_E² + Θ²)`, which replaces ℏ_E everywhere in this module.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::eigen::{lowest_eigenpairs, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::Grid;
use crate::wavefunction::{Representation, Wavefunction};

/// Largest accepted eigen-residual `‖Hψ − Eψ‖/‖ψ‖`.
pub const RESIDUAL_LIMIT: f64 = 1e-8;
/// Eigenstate mass allowed in the outer 5% of the grid before a warning.
pub const EDGE_MASS_LIMIT: f64 = 1e-10;
const EDGE_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskParams {
    /// Buy/sell risk asymmetry, the mass analogue.
    pub m: f64,
    /// Characteristic transaction time.
    pub theta: f64,
    pub hbar_e: f64,
    /// Noncommutativity strength Θ.
    pub big_theta: f64,
    pub q0: f64,
    pub p0: f64,
}

impl Default for RiskParams {
    fn default() -> Self {
        RiskParams::unit()
    }
}

impl RiskParams {
    /// `m = ℏ_E = 1`, `θ = 2π` (so `ω = 1`), `Θ = 0`, centred at the origin.
    pub fn unit() -> Self {
        RiskParams { m: 1.0, theta: 2.0 * PI, hbar_e: 1.0, big_theta: 0.0, q0: 0.0, p0: 0.0 }
    }

    pub fn new(m: f64, theta: f64, hbar_e: f64, big_theta: f64) -> Result<Self> {
        let p = RiskParams { m, theta, hbar_e, big_theta, q0: 0.0, p0: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_center(self, q0: f64, p0: f64) -> Self {
        RiskParams { q0, p0, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str, v: f64| {
            if ok {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} out of range: {v}")))
            }
        };
        check(self.m > 0.0 && self.m.is_finite(), "m", self.m)?;
        check(self.theta > 0.0 && self.theta.is_finite(), "theta", self.theta)?;
        check(self.hbar_e > 0.0 && self.hbar_e.is_finite(), "hbar_e", self.hbar_e)?;
        check(self.big_theta >= 0.0 && self.big_theta.is_finite(), "big_theta", self.big_theta)?;
        check(self.q0.is_finite(), "q0", self.q0)?;
        check(self.p0.is_finite(), "p0", self.p0)
    }

    #[inline]
    pub fn omega(&self) -> f64 {
        2.0 * PI / self.theta
    }

    /// `√(ℏ_E² + Θ²)`.
    pub fn effective_hbar(&self) -> f64 {
        self.hbar_e.hypot(self.big_theta)
    }

    /// Classical value `H(p, q)` of the risk inclination function.
    #[inline]
    pub fn classical(&self, q: f64, p: f64) -> f64 {
        let w = self.omega();
        (p - self.p0).powi(2) / (2.0 * self.m) + 0.5 * self.m * w * w * (q - self.q0).powi(2)
    }

    /// Exact level `n` of the effective oscillator, `ℏω(n + ½)`.
    pub fn level_energy(&self, n: usize) -> f64 {
        self.effective_hbar() * self.omega() * (n as f64 + 0.5)
    }
}

/// Effective constant under noncommutativity Θ: `√(ℏ_E² + Θ²)`.
pub fn effective_planck(hbar_e: f64, big_theta: f64) -> Result<f64> {
    if !(hbar_e > 0.0) || !(big_theta >= 0.0) || !hbar_e.is_finite() || !big_theta.is_finite() {
        return Err(Error::domain(format!(
            "effective_planck needs hbar_e > 0 and big_theta >= 0, got ({hbar_e}, {big_theta})"
        )));
    }
    Ok(hbar_e.hypot(big_theta))
}

/// Dense self-adjoint matrix on position amplitudes (row-major).
///
/// Acting on amplitude vectors it represents `H` in the Riemann-sum inner
/// product; the matrix is Hermitian in the ordinary sense because the grid
/// weights are uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianOperator {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
            worst = worst.max(self.get(i, i).im.abs());
        }
        worst
    }
}

/// First column of the circulant kinetic matrix: `t_d = ⟨q_d|T|q_0⟩`.
fn kinetic_column(grid: &Grid, hbar: f64, m: f64, p0: f64) -> Vec<Complex64> {
    let n = grid.len();
    let pgrid = grid.momentum_grid(hbar);
    let mut buf: Vec<Complex64> = pgrid
        .points()
        .map(|p| Complex64::new((p - p0).powi(2) / (2.0 * m), 0.0))
        .collect();
    // Σ_j e^{i p_j d·dq/ℏ} f_j = (−1)^d Σ_j e^{2πi jd/n} f_j
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf.iter()
        .enumerate()
        .map(|(d, v)| if d % 2 == 0 { v / n as f64 } else { -v / n as f64 })
        .collect()
}

fn potential(params: &RiskParams, grid: &Grid) -> Vec<f64> {
    let w = params.omega();
    grid.points().map(|q| 0.5 * params.m * w * w * (q - params.q0).powi(2)).collect()
}

/// Dense matrix of the (effective) risk inclination operator on `grid`.
pub fn build_risk_operator(params: &RiskParams, grid: &Grid) -> Result<HermitianOperator> {
    params.validate()?;
    let n = grid.len();
    let t = kinetic_column(grid, params.effective_hbar(), params.m, params.p0);
    let v = potential(params, grid);
    let mut data = vec![Complex64::default(); n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = t[(i + n - j) % n];
        }
        data[i * n + i] += v[i];
    }
    Ok(HermitianOperator { n, data })
}

/// `Hψ` evaluated with FFTs; `psi` may be in either representation and the
/// result is returned in the same one.
pub fn apply_risk_operator(params: &RiskParams, psi: &Wavefunction) -> Result<Wavefunction> {
    params.validate()?;
    let hbar = params.effective_hbar();
    if (psi.hbar_e() - hbar).abs() > 1e-12 * hbar {
        return Err(Error::domain(format!(
            "state carries hbar {} but the operator uses {hbar}",
            psi.hbar_e()
        )));
    }
    let pos = psi.to_representation(Representation::Position);
    let grid = *pos.grid();
    let (m, p0) = (params.m, params.p0);
    let kinetic = fourier::apply_momentum_fn(&grid, hbar, pos.amplitudes(), |p| {
        Complex64::new((p - p0).powi(2) / (2.0 * m), 0.0)
    });
    let v = potential(params, &grid);
    let out = kinetic
        .iter()
        .zip(pos.amplitudes())
        .zip(&v)
        .map(|((k, a), vi)| k + a * vi)
        .collect();
    Ok(pos.with_amplitudes(out).to_representation(psi.representation()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridWarning {
    pub level: usize,
    pub edge_mass: f64,
}

/// Adiabatic strategies: lowest eigenpairs of the risk operator.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub eigenstates: Vec<Wavefunction>,
    pub residuals: Vec<f64>,
    /// Levels whose eigenstate leaks into the outer 5% of the grid.
    pub warnings: Vec<GridWarning>,
}

/// First `k` eigenpairs, ascending. Eigenstates are normalised, carry the
/// effective ℏ, and are phased real-positive at the first appreciable sample
/// at or right of `q₀`.
pub fn spectrum(params: &RiskParams, grid: &Grid, k: usize) -> Result<SpectralResult> {
    params.validate()?;
    if k >= grid.len() / 4 {
        return Err(Error::domain(format!(
            "requested {k} levels on {} points; need k < n/4",
            grid.len()
        )));
    }
    let hbar = params.effective_hbar();
    let n = grid.len();

    // Solve at p₀ = 0, where the matrix is real; a momentum offset is the
    // gauge factor e^{ip₀(q−q₀)/ℏ}.
    let t = kinetic_column(grid, hbar, params.m, 0.0);
    let v = potential(params, grid);
    let matrix = SymmetricMatrix::from_fn(n, |i, j| {
        let mut x = t[(i + n - j) % n].re;
        if i == j {
            x += v[i];
        }
        x
    });

    let pairs = lowest_eigenpairs(&matrix, k);
    let anchor = grid.nearest_index(params.q0);
    let scale = 1.0 / grid.spacing().sqrt();

    let mut result = SpectralResult {
        eigenvalues: Vec::with_capacity(k),
        eigenstates: Vec::with_capacity(k),
        residuals: Vec::with_capacity(k),
        warnings: Vec::new(),
    };
    for (level, pair) in pairs.into_iter().enumerate() {
        if !(pair.residual <= RESIDUAL_LIMIT) {
            return Err(Error::Convergence { level, residual: pair.residual, limit: RESIDUAL_LIMIT });
        }
        let peak = pair.vector.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let sign = pair.vector[anchor..]
            .iter()
            .find(|x| x.abs() >= 1e-3 * peak)
            .map_or(1.0, |x| x.signum());
        let amplitudes = grid
            .points()
            .zip(&pair.vector)
            .map(|(q, y)| Complex64::from_polar(sign * y * scale, params.p0 * (q - params.q0) / hbar))
            .collect();
        let state = Wavefunction::new(*grid, amplitudes, Representation::Position, hbar)?;
        let edge_mass = state.edge_mass(EDGE_FRACTION)?;
        if edge_mass > EDGE_MASS_LIMIT {
            result.warnings.push(GridWarning { level, edge_mass });
        }
        result.eigenvalues.push(pair.value);
        result.residuals.push(pair.residual);
        result.eigenstates.push(state);
    }
    Ok(result)
}

/// `h_E = 2θ·E₀`: the minimal inclination to risk over the shortest
/// meaningful profit interval `2θ`.
pub fn minimal_risk_constant(params: &RiskParams, grid: &Grid) -> Result<f64> {
    let s = spectrum(params, grid, 1)?;
    Ok(2.0 * params.theta * s.eigenvalues[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground_gaussian(grid: Grid) -> Wavefunction {
        Wavefunction::from_fn(grid, Representation::Position, 1.0, |q| {
            Complex64::new((-q * q / 2.0).exp() / PI.powf(0.25), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn effective_planck_values() {
        assert_eq!(effective_planck(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(effective_planck(3.0, 4.0).unwrap(), 5.0);
        assert!((effective_planck(1.0, 1.0).unwrap() - 1.414214).abs() < 1e-6);
        assert!(effective_planck(-1.0, 0.0).is_err());
        assert!(effective_planck(1.0, -0.5).is_err());
    }

    #[test]
    fn omega_theta_product() {
        for theta in [0.1, 1.0, PI, 7.3] {
            let p = RiskParams::new(1.0, theta, 1.0, 0.0).unwrap();
            assert!((p.omega() * p.theta - 2.0 * PI).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(RiskParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(RiskParams::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(RiskParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(RiskParams::new(1.0, 1.0, 1.0, -0.1).is_err());
        let bad = RiskParams { m: -2.0, ..RiskParams::unit() };
        assert!(matches!(build_risk_operator(&bad, &Grid::new(-5.0, 5.0, 64).unwrap()), Err(Error::Domain(_))));
    }

    #[test]
    fn operator_is_hermitian() {
        let grid = Grid::new(-8.0, 8.0, 128).unwrap();
        let h = build_risk_operator(&RiskParams::unit(), &grid).unwrap();
        assert!(h.hermiticity_defect() < 1e-12);
        let shifted = RiskParams::unit().with_center(0.5, 1.3);
        let h = build_risk_operator(&shifted, &grid).unwrap();
        assert!(h.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn dense_and_fft_application_agree() {
        let grid = Grid::new(-8.0, 8.0, 128).unwrap();
        let params = RiskParams::unit().with_center(0.3, -0.7);
        let psi = Wavefunction::from_fn(grid, Representation::Position, 1.0, |q| {
            Complex64::from_polar((-(q - 0.5).powi(2)).exp(), 0.8 * q)
        })
        .unwrap();
        let dense = build_risk_operator(&params, &grid).unwrap().apply(psi.amplitudes());
        let fft = apply_risk_operator(&params, &psi).unwrap();
        let err = dense.iter().zip(fft.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn ground_gaussian_has_half_quantum() {
        let grid = Grid::default();
        let psi = ground_gaussian(grid);
        let h = build_risk_operator(&RiskParams::unit(), &grid).unwrap();
        let hpsi = h.apply(psi.amplitudes());
        let rel = hpsi
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b * 0.5).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / psi.amplitudes().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(rel < 1e-6, "{rel}");
    }

    #[test]
    fn k_limit_enforced() {
        let grid = Grid::new(-5.0, 5.0, 64).unwrap();
        assert!(matches!(spectrum(&RiskParams::unit(), &grid, 16), Err(Error::Domain(_))));
        assert!(spectrum(&RiskParams::unit(), &grid, 15).is_ok());
    }

    #[test]
    fn narrow_grid_warns() {
        let grid = Grid::new(-3.0, 3.0, 128).unwrap();
        let s = spectrum(&RiskParams::unit(), &grid, 6).unwrap();
        assert!(!s.warnings.is_empty());
        assert!(s.warnings.iter().any(|w| w.level == 5));
        let s = spectrum(&RiskParams::unit(), &Grid::default(), 6).unwrap();
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn eigenstates_are_phased_positive() {
        let params = RiskParams::unit().with_center(0.25, 0.0);
        let s = spectrum(&params, &Grid::new(-10.0, 10.0, 256).unwrap(), 4).unwrap();
        for psi in &s.eigenstates {
            let a = psi.amplitudes();
            let peak = a.iter().fold(0.0f64, |m, x| m.max(x.norm()));
            let first = a[psi.grid().nearest_index(0.25)..].iter().find(|x| x.norm() >= 1e-3 * peak).unwrap();
            assert!(first.re > 0.0 && first.im.abs() < 1e-14);
        }
    }
}
