//! WebAssembly bindings for the demo page in `www/`.

use qmarket::market::{symmetric_population, zeno_experiment, RWStrategy, SimConfig};
use qmarket::wigner::{gibbs_weights, thermal_density, wigner_excited, PhaseDensity, PhaseGrid};
use qmarket::{Grid, RiskParams};
use wasm_bindgen::prelude::*;

/// Smallest axis the page draws; the automatic grids can be coarser.
const DISPLAY_POINTS: usize = 128;

/// A density sampled on a phase grid, row-major with `q` as the row.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    q_min: f64,
    q_max: f64,
    p_min: f64,
    p_max: f64,
    nq: usize,
    np: usize,
    values: Vec<f64>,
    mass: f64,
}

#[wasm_bindgen]
impl Field {
    #[wasm_bindgen(getter)]
    pub fn q_min(&self) -> f64 {
        self.q_min
    }
    #[wasm_bindgen(getter)]
    pub fn q_max(&self) -> f64 {
        self.q_max
    }
    #[wasm_bindgen(getter)]
    pub fn p_min(&self) -> f64 {
        self.p_min
    }
    #[wasm_bindgen(getter)]
    pub fn p_max(&self) -> f64 {
        self.p_max
    }
    #[wasm_bindgen(getter)]
    pub fn nq(&self) -> usize {
        self.nq
    }
    #[wasm_bindgen(getter)]
    pub fn np(&self) -> usize {
        self.np
    }
    #[wasm_bindgen(getter)]
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

fn params(hbar_e: f64, big_theta: f64) -> qmarket::Result<RiskParams> {
    RiskParams::new(1.0, 2.0 * std::f64::consts::PI, hbar_e, big_theta)
}

fn refine(g: PhaseGrid) -> qmarket::Result<PhaseGrid> {
    let axis = |a: Grid| Grid::new(a.min(), a.max(), a.len().max(DISPLAY_POINTS));
    Ok(PhaseGrid::new(axis(g.q)?, axis(g.p)?))
}

fn field(d: PhaseDensity) -> Field {
    let g = d.grid();
    Field {
        q_min: g.q.min(),
        q_max: g.q.max(),
        p_min: g.p.min(),
        p_max: g.p.max(),
        nq: g.q.len(),
        np: g.p.len(),
        mass: d.mass(),
        values: d.values().to_vec(),
    }
}

pub fn wigner_field(level: usize, hbar_e: f64, big_theta: f64) -> qmarket::Result<Field> {
    let p = params(hbar_e, big_theta)?;
    let grid = refine(PhaseGrid::auto_for_level(level, &p)?)?;
    Ok(field(wigner_excited(level, &p, &grid)?))
}

pub fn thermal_field(beta: f64, hbar_e: f64, big_theta: f64) -> qmarket::Result<Field> {
    let p = params(hbar_e, big_theta)?;
    let grid = refine(PhaseGrid::auto_for_thermal(beta, &p)?)?;
    Ok(field(thermal_density(beta, &p, &grid)?))
}

pub fn gibbs(beta: f64, n_max: usize, hbar_e: f64, big_theta: f64) -> qmarket::Result<Vec<f64>> {
    Ok(gibbs_weights(beta, &params(hbar_e, big_theta)?, n_max)?.weights)
}

/// Transaction rate for each switch probability, two buyers against two sellers.
pub fn zeno_rates(frequencies: &[f64], ticks: usize, seed: u64) -> qmarket::Result<Vec<f64>> {
    let grid = Grid::self_dual(256, 1.0)?;
    let config = SimConfig {
        players: symmetric_population(&grid, 1.0, 2, 0.3, -0.2, 0.8)?,
        rw: RWStrategy::gaussian(grid, 0.0, 1.0)?,
        ticks,
        switch_probability: 0.0,
        crash_threshold: 0.05,
        rng_seed: seed,
    };
    Ok(zeno_experiment(&config, frequencies)?.iter().map(|r| r.transaction_rate).collect())
}

fn js(e: qmarket::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = wignerField)]
pub fn wigner_field_js(level: usize, hbar_e: f64, big_theta: f64) -> Result<Field, JsError> {
    wigner_field(level, hbar_e, big_theta).map_err(js)
}

#[wasm_bindgen(js_name = thermalField)]
pub fn thermal_field_js(beta: f64, hbar_e: f64, big_theta: f64) -> Result<Field, JsError> {
    thermal_field(beta, hbar_e, big_theta).map_err(js)
}

#[wasm_bindgen(js_name = gibbsWeights)]
pub fn gibbs_js(beta: f64, n_max: usize, hbar_e: f64, big_theta: f64) -> Result<Vec<f64>, JsError> {
    gibbs(beta, n_max, hbar_e, big_theta).map_err(js)
}

#[wasm_bindgen(js_name = zenoRates)]
pub fn zeno_rates_js(frequencies: Vec<f64>, ticks: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    zeno_rates(&frequencies, ticks, seed).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wigner_field_is_normalised_and_signed() {
        for level in [0, 1, 5] {
            let f = wigner_field(level, 1.0, 0.0).unwrap();
            assert!(f.nq >= DISPLAY_POINTS && f.values.len() == f.nq * f.np);
            assert!((f.mass - 1.0).abs() < 1e-6);
            let centre = f.values[(f.nq / 2) * f.np + f.np / 2];
            let sign = if level % 2 == 0 { 1.0 } else { -1.0 };
            assert!((centre - sign / PI).abs() < 1e-8);
        }
    }

    #[test]
    fn thermal_field_and_weights() {
        let f = thermal_field(1.0, 1.0, 0.0).unwrap();
        assert!((f.mass - 1.0).abs() < 1e-6);
        assert!(f.values.iter().all(|&v| v >= 0.0));
        let w = gibbs(1.0, 40, 1.0, 0.0).unwrap();
        assert_eq!(w.len(), 41);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.windows(2).all(|p| p[1] < p[0]));
        assert!(thermal_field(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn zeno_curve_starts_at_zero() {
        let r = zeno_rates(&[0.0, 1.0], 2000, 1).unwrap();
        assert_eq!(r[0], 0.0);
        assert!(r[1] > 0.0);
        assert_eq!(r, zeno_rates(&[0.0, 1.0], 2000, 1).unwrap());
    }
}
