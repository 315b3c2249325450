//! Trader strategies: correlated coherent states, ε-regularised delta
//! strategies, the two-player intention density and the demand/supply
//! transaction-probability profiles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::Grid;
use crate::profile::CumulativeMass;
use crate::wavefunction::{Representation, Wavefunction};

/// Tail mass a constructed strategy may leave in the outer 5% of either axis.
pub const TAIL_MASS_LIMIT: f64 = 1e-12;
const EDGE_FRACTION: f64 = 0.05;

/// Parameters of the correlated annihilation operator
/// `C(r, η) = (1/2η)(1 − ir/√(1−r²))·Q + iη·P` and the centre of its
/// eigenvector.
///
/// With `P = −iℏ∂_q` the eigenvectors are Gaussians with
/// `Δq = η√ℏ`, `Δp = √ℏ / (2η√(1−r²))` and position–momentum correlation
/// `r`, so `Δp·Δq·√(1−r²) = ℏ/2` for every `(r, η)`. The alternative
/// parameterisation `Δp = ℏ/2η`, `Δq = η/√(1−r²)` has the same saturated
/// product but puts the `1/√(1−r²)` on the other dispersion; it corresponds
/// to a different scaling of η and is not what the operator above produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentParams {
    pub r: f64,
    pub eta: f64,
    pub q0: f64,
    pub p0: f64,
}

impl CoherentParams {
    pub fn new(r: f64, eta: f64) -> Result<Self> {
        let cp = CoherentParams { r, eta, q0: 0.0, p0: 0.0 };
        cp.validate()?;
        Ok(cp)
    }

    pub fn with_center(self, q0: f64, p0: f64) -> Self {
        CoherentParams { q0, p0, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r.abs() < 1.0) {
            return Err(Error::domain(format!("correlation r must satisfy |r| < 1, got {}", self.r)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::domain(format!("eta must be positive, got {}", self.eta)));
        }
        if !(self.q0.is_finite() && self.p0.is_finite()) {
            return Err(Error::domain("non-finite strategy centre"));
        }
        Ok(())
    }

    /// `r/√(1−r²)`.
    fn chirp(&self) -> f64 {
        self.r / (1.0 - self.r * self.r).sqrt()
    }

    /// Coefficient of Q in the annihilation operator.
    fn q_coefficient(&self) -> Complex64 {
        Complex64::new(1.0, -self.chirp()) / (2.0 * self.eta)
    }

    /// Eigenvalue `c` fixed by `⟨Q⟩ = q₀`, `⟨P⟩ = p₀`.
    pub fn eigenvalue(&self) -> Complex64 {
        self.q_coefficient() * self.q0 + Complex64::new(0.0, self.eta * self.p0)
    }

    /// Dispersions the exact eigenvector must have.
    pub fn predicted_dispersions(&self, hbar_e: f64) -> Dispersions {
        let delta_q = self.eta * hbar_e.sqrt();
        let delta_p = hbar_e.sqrt() / (2.0 * self.eta * (1.0 - self.r * self.r).sqrt());
        Dispersions { delta_q, delta_p, covariance: self.r * delta_q * delta_p, corr: self.r }
    }
}

fn check_tails(psi: &Wavefunction) -> Result<()> {
    let q_tail = psi.edge_mass(EDGE_FRACTION)?;
    if q_tail > TAIL_MASS_LIMIT {
        return Err(Error::GridTooSmall { what: "position tail mass", found: q_tail, limit: TAIL_MASS_LIMIT });
    }
    let p_tail = psi.change_representation().edge_mass(EDGE_FRACTION)?;
    if p_tail > TAIL_MASS_LIMIT {
        return Err(Error::GridTooSmall { what: "momentum tail mass", found: p_tail, limit: TAIL_MASS_LIMIT });
    }
    Ok(())
}

/// Normalised eigenvector of `C(r, η)` in the position representation.
pub fn coherent_strategy(cp: &CoherentParams, grid: &Grid, hbar_e: f64) -> Result<Wavefunction> {
    cp.validate()?;
    let width = Complex64::new(1.0, -cp.chirp()) / (4.0 * cp.eta * cp.eta * hbar_e);
    let psi = Wavefunction::from_fn(*grid, Representation::Position, hbar_e, |q| {
        let d = q - cp.q0;
        (-width * d * d + Complex64::new(0.0, cp.p0 * d / hbar_e)).exp()
    })?
    .normalize()?;
    check_tails(&psi)?;
    Ok(psi)
}

/// `‖(C − c)ψ‖ / ‖ψ‖` with P applied spectrally.
pub fn coherent_residual(cp: &CoherentParams, psi: &Wavefunction) -> Result<f64> {
    cp.validate()?;
    let pos = psi.to_representation(Representation::Position);
    let (grid, hbar) = (*pos.grid(), pos.hbar_e());
    let p_psi = fourier::apply_momentum_fn(&grid, hbar, pos.amplitudes(), |p| Complex64::new(p, 0.0));
    let (a, c) = (cp.q_coefficient(), cp.eigenvalue());
    let i_eta = Complex64::new(0.0, cp.eta);
    let out: Vec<Complex64> = grid
        .points()
        .zip(pos.amplitudes())
        .zip(&p_psi)
        .map(|((q, &x), &px)| a * q * x + i_eta * px - c * x)
        .collect();
    let norm = pos.norm_sqr();
    if !(norm > 0.0) {
        return Err(Error::DegenerateState(norm));
    }
    Ok((out.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.spacing() / norm).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dispersions {
    pub delta_q: f64,
    pub delta_p: f64,
    /// Symmetrised `⟨(QP + PQ)/2⟩ − ⟨Q⟩⟨P⟩`.
    pub covariance: f64,
    pub corr: f64,
}

impl Dispersions {
    /// `Δp·Δq·√(1 − corr²)`, which is `√(Δq²Δp² − cov²)`.
    pub fn uncertainty_product(&self) -> f64 {
        let d = (self.delta_q * self.delta_p).powi(2) - self.covariance.powi(2);
        d.max(0.0).sqrt()
    }
}

pub fn dispersions(psi: &Wavefunction) -> Result<Dispersions> {
    let pos = psi.to_representation(Representation::Position).normalize()?;
    let mom = pos.change_representation();
    let (mq, mp) = (pos.moments()?, mom.moments()?);

    let grid = *pos.grid();
    let p_psi = fourier::apply_momentum_fn(&grid, pos.hbar_e(), pos.amplitudes(), |p| Complex64::new(p, 0.0));
    // Re⟨Qψ|Pψ⟩ = ⟨(QP + PQ)/2⟩
    let sym: f64 = grid
        .points()
        .zip(pos.amplitudes())
        .zip(&p_psi)
        .map(|((q, x), px)| (x.conj() * px).re * q)
        .sum::<f64>()
        * grid.spacing();
    let covariance = sym - mq.mean * mp.mean;
    let (delta_q, delta_p) = (mq.variance.sqrt(), mp.variance.sqrt());
    let corr = if delta_q > 0.0 && delta_p > 0.0 { covariance / (delta_q * delta_p) } else { 0.0 };
    Ok(Dispersions { delta_q, delta_p, covariance, corr })
}

/// ε-regularised delta strategy: a Gaussian whose density has standard
/// deviation ε, standing in for the non-normalisable `⟨x|a⟩ = δ(x − a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaStrategy {
    pub state: Wavefunction,
    pub log_price: f64,
    /// `eᵃ`.
    pub price: f64,
    pub epsilon: f64,
}

/// Buyer-side delta strategy at log-price `a` in the position representation.
pub fn delta_strategy(a: f64, epsilon: f64, grid: &Grid, hbar_e: f64) -> Result<DeltaStrategy> {
    delta_strategy_in(Representation::Position, a, epsilon, grid, hbar_e)
}

/// Delta strategy on either axis; the momentum form is the seller's
/// counterpart read on `grid.momentum_grid(hbar_e)`.
pub fn delta_strategy_in(
    representation: Representation,
    a: f64,
    epsilon: f64,
    grid: &Grid,
    hbar_e: f64,
) -> Result<DeltaStrategy> {
    let axis = match representation {
        Representation::Position => *grid,
        Representation::Momentum => grid.momentum_grid(hbar_e),
    };
    if !(epsilon >= 4.0 * axis.spacing()) || !epsilon.is_finite() {
        return Err(Error::domain(format!(
            "epsilon {epsilon} under-resolves the grid (floor {})",
            4.0 * axis.spacing()
        )));
    }
    if !(a > axis.min() && a < axis.max()) {
        return Err(Error::domain(format!("log-price {a} outside [{}, {})", axis.min(), axis.max())));
    }
    let state = Wavefunction::from_fn(*grid, representation, hbar_e, |x| {
        Complex64::new((-(x - a).powi(2) / (4.0 * epsilon * epsilon)).exp(), 0.0)
    })?
    .normalize()?;
    Ok(DeltaStrategy { state, log_price: a, price: a.exp(), epsilon })
}

/// `|⟨q|ψ⟩_A|² · |⟨p|ψ⟩_B|²` on the product of Alice's position axis and
/// Bob's momentum axis, each factor normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct IntentionDensity {
    pub q_axis: Grid,
    pub p_axis: Grid,
    q_density: Vec<f64>,
    p_density: Vec<f64>,
}

impl IntentionDensity {
    pub fn cell_measure(&self) -> f64 {
        self.q_axis.spacing() * self.p_axis.spacing()
    }

    #[inline]
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.q_density[iq] * self.p_density[ip]
    }

    /// Row-major values, q index outer.
    pub fn values(&self) -> Vec<f64> {
        self.q_density
            .iter()
            .flat_map(|a| self.p_density.iter().map(move |b| a * b))
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.values().iter().sum::<f64>() * self.cell_measure()
    }

    pub fn q_marginal(&self) -> Vec<f64> {
        let dp = self.p_axis.spacing();
        (0..self.q_axis.len())
            .map(|i| (0..self.p_axis.len()).map(|j| self.value(i, j)).sum::<f64>() * dp)
            .collect()
    }

    pub fn p_marginal(&self) -> Vec<f64> {
        let dq = self.q_axis.spacing();
        (0..self.p_axis.len())
            .map(|j| (0..self.q_axis.len()).map(|i| self.value(i, j)).sum::<f64>() * dq)
            .collect()
    }
}

/// Alice reveals a buying price `q`, Bob (the opposite position) a selling
/// price `p`; their intentions are independent.
pub fn intention_density(alice: &Wavefunction, bob: &Wavefunction) -> Result<IntentionDensity> {
    if alice.representation() != Representation::Position {
        return Err(Error::domain("alice's state must be in the position representation"));
    }
    if bob.representation() != Representation::Momentum {
        return Err(Error::domain("bob's state must be in the momentum representation"));
    }
    Ok(IntentionDensity {
        q_axis: alice.sample_grid(),
        p_axis: bob.sample_grid(),
        q_density: alice.density()?,
        p_density: bob.density()?,
    })
}

/// Probability that a buyer holding `psi` accepts market log-price `x`.
///
/// A buyer revealing withdrawal value `q` refuses anything cheaper and takes
/// any price at or above it, so acceptance is the position mass on `q ≤ x`.
/// Note this is the reverse of the everyday reservation-price reading.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandCurve(CumulativeMass);

impl DemandCurve {
    pub fn new(psi: &Wavefunction) -> Result<Self> {
        let pos = psi.to_representation(Representation::Position);
        Ok(DemandCurve(CumulativeMass::new(pos.sample_grid(), &pos.density()?)))
    }

    pub fn at(&self, x: f64) -> f64 {
        self.0.at(x)
    }
}

/// Probability that a seller holding `psi` accepts market log-price `x`:
/// the momentum mass on `p ≥ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupplyCurve(CumulativeMass);

impl SupplyCurve {
    pub fn new(psi: &Wavefunction) -> Result<Self> {
        let mom = psi.to_representation(Representation::Momentum);
        Ok(SupplyCurve(CumulativeMass::new(mom.sample_grid(), &mom.density()?)))
    }

    pub fn at(&self, x: f64) -> f64 {
        1.0 - self.0.at(x)
    }
}

pub fn demand_profile(psi: &Wavefunction, x: f64) -> Result<f64> {
    Ok(DemandCurve::new(psi)?.at(x))
}

pub fn supply_profile(psi: &Wavefunction, x: f64) -> Result<f64> {
    Ok(SupplyCurve::new(psi)?.at(x))
}
