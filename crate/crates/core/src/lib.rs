//! Quantum market games: the risk inclination operator and its spectrum,
//! correlated coherent strategies, Wigner and thermal strategy densities, and
//! a Monte-Carlo market in which a trader faces the Rest of the World.

pub mod eigen;
pub mod error;
mod fourier;
pub mod grid;
pub mod market;
pub mod profile;
pub mod risk;
pub mod strategies;
pub mod wavefunction;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::Grid;
pub use risk::{
    apply_risk_operator, build_risk_operator, effective_planck, minimal_risk_constant, spectrum,
    HermitianOperator, RiskParams, SpectralResult,
};
pub use wavefunction::{Moments, Representation, Wavefunction};
