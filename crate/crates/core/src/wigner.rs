//! Phase-space strategy densities: Wigner functions of the adiabatic
//! strategies, Gibbs weights over levels, and the closed-form thermal
//! density with its mean risk and entropy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::risk::RiskParams;

/// Boundary-to-peak ratio above which a Wigner function does not fit its grid.
pub const WIGNER_EDGE_LIMIT: f64 = 1e-12;
/// Boundary-to-peak ratio above which `mean_risk` refuses the quadrature.
pub const QUADRATURE_EDGE_LIMIT: f64 = 1e-10;
/// Cells below this density contribute nothing to the entropy.
const ENTROPY_FLOOR: f64 = 1e-300;
const AUTO_HALF_WIDTHS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub q: Grid,
    pub p: Grid,
}

impl PhaseGrid {
    pub fn new(q: Grid, p: Grid) -> Self {
        PhaseGrid { q, p }
    }

    #[inline]
    pub fn cell_measure(&self) -> f64 {
        self.q.spacing() * self.p.spacing()
    }

    pub fn cells(&self) -> usize {
        self.q.len() * self.p.len()
    }

    /// Square-ish grid centred on `(q₀, p₀)` with both half-widths
    /// `8·max(Δq, Δp)` and spacings at most `resolution` on each axis.
    fn centred(params: &RiskParams, spread: f64, resolution: (f64, f64)) -> Result<Self> {
        let half = AUTO_HALF_WIDTHS * spread;
        let axis = |center: f64, h: f64| {
            let n = ((2.0 * half / h).ceil() as usize).next_power_of_two().max(64);
            Grid::new(center - half, center + half, n)
        };
        Ok(PhaseGrid { q: axis(params.q0, resolution.0)?, p: axis(params.p0, resolution.1)? })
    }

    /// Grid adequate for every `W_k` with `k ≤ level`.
    pub fn auto_for_level(level: usize, params: &RiskParams) -> Result<Self> {
        params.validate()?;
        let (hbar, w, m) = (params.effective_hbar(), params.omega(), params.m);
        let e = level as f64 + 0.5;
        let (dq, dp) = ((e * hbar / (m * w)).sqrt(), (e * hbar * m * w).sqrt());
        // ground-state widths divided by the number of radial nodes
        let shrink = 4.0 * (level as f64 + 1.0).sqrt();
        let (gq, gp) = ((hbar / (2.0 * m * w)).sqrt(), (hbar * m * w / 2.0).sqrt());
        PhaseGrid::centred(params, dq.max(dp), (gq / shrink, gp / shrink))
    }

    /// Grid adequate for the thermal density at `beta`.
    pub fn auto_for_thermal(beta: f64, params: &RiskParams) -> Result<Self> {
        let tp = ThermalParams::new(beta, params)?;
        let w = params.omega();
        let (dq, dp) = ((1.0 / (tp.x * params.m * w * w)).sqrt(), (params.m / tp.x).sqrt());
        PhaseGrid::centred(params, dq.max(dp), (dq / 4.0, dp / 4.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DensityKind {
    WignerPure(usize),
    Thermal(f64),
}

/// Real density on a phase grid, row-major with the q index outer.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDensity {
    grid: PhaseGrid,
    values: Vec<f64>,
    kind: DensityKind,
}

impl PhaseDensity {
    fn tabulate<F: Fn(f64, f64) -> f64>(grid: PhaseGrid, kind: DensityKind, f: F) -> Self {
        let ps: Vec<f64> = grid.p.points().collect();
        let values = grid.q.points().flat_map(|q| ps.iter().map(move |&p| (q, p))).map(|(q, p)| f(q, p)).collect();
        PhaseDensity { grid, values, kind }
    }

    pub fn from_values(grid: PhaseGrid, values: Vec<f64>, kind: DensityKind) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::domain(format!("{} values for {} phase cells", values.len(), grid.cells())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite phase density"));
        }
        Ok(PhaseDensity { grid, values, kind })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.grid.p.len() + ip]
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_measure()
    }

    pub fn q_marginal(&self) -> Vec<f64> {
        let np = self.grid.p.len();
        let dp = self.grid.p.spacing();
        self.values.chunks(np).map(|row| row.iter().sum::<f64>() * dp).collect()
    }

    pub fn p_marginal(&self) -> Vec<f64> {
        let np = self.grid.p.len();
        let dq = self.grid.q.spacing();
        let mut out = vec![0.0; np];
        for row in self.values.chunks(np) {
            out.iter_mut().zip(row).for_each(|(o, v)| *o += v);
        }
        out.iter_mut().for_each(|o| *o *= dq);
        out
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sup-norm distance to a density on the same grid.
    pub fn sup_distance(&self, other: &PhaseDensity) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::domain("densities live on different phase grids"));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Largest `|value|` on the grid boundary relative to the largest overall.
    pub fn edge_ratio(&self) -> f64 {
        let (nq, np) = (self.grid.q.len(), self.grid.p.len());
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge: f64 = 0.0;
        for iq in 0..nq {
            edge = edge.max(self.value(iq, 0).abs()).max(self.value(iq, np - 1).abs());
        }
        for ip in 0..np {
            edge = edge.max(self.value(0, ip).abs()).max(self.value(nq - 1, ip).abs());
        }
        edge / peak
    }

    /// Weighted sum of densities on a common grid.
    pub fn combine(parts: &[(f64, &PhaseDensity)], kind: DensityKind) -> Result<PhaseDensity> {
        let first = parts.first().ok_or_else(|| Error::domain("nothing to combine"))?.1;
        let mut values = vec![0.0; first.values.len()];
        for (w, d) in parts {
            if d.grid != first.grid {
                return Err(Error::domain("densities live on different phase grids"));
            }
            values.iter_mut().zip(&d.values).for_each(|(v, x)| *v += w * x);
        }
        Ok(PhaseDensity { grid: first.grid, values, kind })
    }
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence
/// `(k+1)L_{k+1} = (2k+1−x)L_k − k·L_{k−1}`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `e^{−x/2} L_n(x)`, zero once the exponential underflows.
fn damped_laguerre(n: usize, x: f64) -> f64 {
    if x > 1400.0 {
        return 0.0;
    }
    (-0.5 * x).exp() * laguerre(n, x)
}

/// Wigner function of the `n`-th adiabatic strategy,
/// `W_n = ((−1)ⁿ/πℏ)·e^{−2H/ℏω}·L_n(4H/ℏω)`.
pub fn wigner_excited(n: usize, params: &RiskParams, pgrid: &PhaseGrid) -> Result<PhaseDensity> {
    params.validate()?;
    let (hbar, w) = (params.effective_hbar(), params.omega());
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let pref = sign / (PI * hbar);
    let d = PhaseDensity::tabulate(*pgrid, DensityKind::WignerPure(n), |q, p| {
        pref * damped_laguerre(n, 4.0 * params.classical(q, p) / (hbar * w))
    });
    let ratio = d.edge_ratio();
    if ratio > WIGNER_EDGE_LIMIT {
        return Err(Error::GridTooSmall { what: "Wigner boundary density", found: ratio, limit: WIGNER_EDGE_LIMIT });
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsWeights {
    /// `w_n` for `n = 0..=n_max`.
    pub weights: Vec<f64>,
    /// `1 − Σ w_n`, in closed form.
    pub tail_mass: f64,
}

/// `w_n(β) = e^{−βnℏω} / Σ_k e^{−βkℏω} = e^{−βnℏω}(1 − e^{−βℏω})`.
pub fn gibbs_weights(beta: f64, params: &RiskParams, n_max: usize) -> Result<GibbsWeights> {
    params.validate()?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    let a = beta * params.effective_hbar() * params.omega();
    let head = -(-a).exp_m1();
    let weights = (0..=n_max).map(|n| (-a * n as f64).exp() * head).collect();
    Ok(GibbsWeights { weights, tail_mass: (-a * (n_max as f64 + 1.0)).exp() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub beta: f64,
    /// `(2/ℏω)·tanh(βℏω/2)`, the inverse mean risk.
    pub x: f64,
}

impl ThermalParams {
    pub fn new(beta: f64, params: &RiskParams) -> Result<Self> {
        params.validate()?;
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        let hw = params.effective_hbar() * params.omega();
        Ok(ThermalParams { beta, x: 2.0 / hw * (0.5 * beta * hw).tanh() })
    }
}

/// Closed-form Gibbs mixture of the Wigner functions:
/// `ρ_β = (ω/2π)·x·e^{−xH}`.
pub fn thermal_density(beta: f64, params: &RiskParams, pgrid: &PhaseGrid) -> Result<PhaseDensity> {
    let tp = ThermalParams::new(beta, params)?;
    let pref = params.omega() / (2.0 * PI) * tp.x;
    Ok(PhaseDensity::tabulate(*pgrid, DensityKind::Thermal(beta), |q, p| {
        pref * (-tp.x * params.classical(q, p)).exp()
    }))
}

/// `E[H] = ∫ H·ρ dq dp`.
pub fn mean_risk(rho: &PhaseDensity, params: &RiskParams) -> Result<f64> {
    params.validate()?;
    let ratio = rho.edge_ratio();
    if ratio > QUADRATURE_EDGE_LIMIT {
        return Err(Error::GridTooSmall { what: "density at the grid boundary", found: ratio, limit: QUADRATURE_EDGE_LIMIT });
    }
    let g = rho.grid();
    let np = g.p.len();
    let ps: Vec<f64> = g.p.points().collect();
    let total: f64 = g
        .q
        .points()
        .zip(rho.values().chunks(np))
        .map(|(q, row)| row.iter().zip(&ps).map(|(v, &p)| v * params.classical(q, p)).sum::<f64>())
        .sum();
    Ok(total * g.cell_measure())
}

/// Differential entropy `−∫ ρ ln ρ dq dp`; only for non-negative densities.
pub fn entropy(rho: &PhaseDensity) -> Result<f64> {
    if let Some(v) = rho.values().iter().find(|v| **v < 0.0) {
        return Err(Error::domain(format!("entropy of a density with negative value {v}")));
    }
    let s: f64 = rho
        .values()
        .iter()
        .filter(|&&v| v >= ENTROPY_FLOOR)
        .map(|&v| -v * v.ln())
        .sum();
    Ok(s * rho.grid().cell_measure())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid() -> PhaseGrid {
        let g = Grid::new(-10.0, 10.0, 256).unwrap();
        PhaseGrid::new(g, g)
    }

    // explicit series Σ (−1)^k C(n,k) x^k / k!
    fn laguerre_series(n: usize, x: f64) -> f64 {
        let mut binom = 1.0;
        let mut fact = 1.0;
        let mut total = 0.0;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom * x.powi(k as i32) / fact;
        }
        total
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        assert!((laguerre(5, 1.7) - laguerre_series(5, 1.7)).abs() < 1e-12);
        for n in 0..12 {
            for x in [0.0, 0.3, 2.5, 7.0] {
                assert!((laguerre(n, x) - laguerre_series(n, x)).abs() < 1e-10, "n={n} x={x}");
            }
        }
        assert_eq!(laguerre(7, 0.0), 1.0);
    }

    #[test]
    fn wigner_center_values() {
        let g = unit_grid();
        let params = RiskParams::unit();
        let (iq, ip) = (g.q.node_index(0.0).unwrap(), g.p.node_index(0.0).unwrap());
        let w0 = wigner_excited(0, &params, &g).unwrap();
        assert!((w0.value(iq, ip) - 0.318310).abs() < 1e-6);
        let w1 = wigner_excited(1, &params, &g).unwrap();
        assert!((w1.value(iq, ip) + 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn wigner_mass_and_energy() {
        let params = RiskParams::unit();
        let g = PhaseGrid::auto_for_level(3, &params).unwrap();
        let w3 = wigner_excited(3, &params, &g).unwrap();
        assert!((w3.mass() - 1.0).abs() < 1e-6);
        let g = unit_grid();
        assert!((mean_risk(&wigner_excited(0, &params, &g).unwrap(), &params).unwrap() - 0.5).abs() < 1e-5);
        assert!((mean_risk(&wigner_excited(1, &params, &g).unwrap(), &params).unwrap() - 1.5).abs() < 1e-5);
    }

    #[test]
    fn wigner_on_small_grid_is_rejected() {
        let g = Grid::new(-2.0, 2.0, 64).unwrap();
        let r = wigner_excited(2, &RiskParams::unit(), &PhaseGrid::new(g, g));
        assert!(matches!(r, Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn gibbs_geometric_weights() {
        let params = RiskParams::unit();
        let g = gibbs_weights(2f64.ln(), &params, 2).unwrap();
        for (w, e) in g.weights.iter().zip([0.5, 0.25, 0.125]) {
            assert!((w - e).abs() < 1e-15);
        }
        let g = gibbs_weights(50.0, &params, 3).unwrap();
        assert!((g.weights[0] - 1.0).abs() < 1e-20);
        for beta in [0.05, 0.7, 3.0] {
            let g = gibbs_weights(beta, &params, 60).unwrap();
            assert!((g.weights.iter().sum::<f64>() + g.tail_mass - 1.0).abs() < 1e-12);
        }
        assert!(matches!(gibbs_weights(0.0, &params, 5), Err(Error::Domain(_))));
        assert!(matches!(gibbs_weights(-1.0, &params, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn cold_thermal_density_is_ground_wigner() {
        let params = RiskParams::unit();
        let g = unit_grid();
        let cold = thermal_density(50.0, &params, &g).unwrap();
        let w0 = wigner_excited(0, &params, &g).unwrap();
        assert!(cold.sup_distance(&w0).unwrap() < 1e-6);
    }

    #[test]
    fn thermal_density_is_normalised_and_positive() {
        let params = RiskParams::unit();
        for beta in [0.25, 1.0, 4.0] {
            let g = PhaseGrid::auto_for_thermal(beta, &params).unwrap();
            let rho = thermal_density(beta, &params, &g).unwrap();
            assert!((rho.mass() - 1.0).abs() < 1e-6);
            assert!(rho.min_value() >= -1e-15);
            let x = ThermalParams::new(beta, &params).unwrap().x;
            assert!((mean_risk(&rho, &params).unwrap() / (1.0 / x) - 1.0).abs() < 1e-5);
        }
        assert!(matches!(thermal_density(0.0, &params, &unit_grid()), Err(Error::Domain(_))));
    }

    #[test]
    fn entropy_of_ground_state() {
        let params = RiskParams::unit();
        let w0 = wigner_excited(0, &params, &unit_grid()).unwrap();
        assert!((entropy(&w0).unwrap() - (1.0 + PI.ln())).abs() < 1e-4);
        let w1 = wigner_excited(1, &params, &unit_grid()).unwrap();
        assert!(matches!(entropy(&w1), Err(Error::Domain(_))));
        let g = PhaseGrid::auto_for_thermal(1.0, &params).unwrap();
        let hot = thermal_density(1.0, &params, &g).unwrap();
        assert!(entropy(&hot).unwrap() > entropy(&w0).unwrap());
    }
}
