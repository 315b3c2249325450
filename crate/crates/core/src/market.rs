//! Monte-Carlo market: traders against the Rest of the World (RW).
//!
//! Each tick the market re-measures every player: with probability `f` the
//! player is caught in the basis opposite to the one it was last seen in,
//! otherwise it is measured in the demand basis again. RW then proposes a
//! log-price drawn from its price law, every demand-basis player buys one
//! unit with probability given by its demand profile and every supply-basis
//! player sells one unit with its supply profile. A transaction happens when
//! at least one buy and one sell coincide; the clearing price is RW's quote.
//!
//! At `f = 0` nobody is ever left in the supply basis, no opposite moves
//! exist and the quotation collapses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::strategies::{delta_strategy, delta_strategy_in, DemandCurve, SupplyCurve};
use crate::wavefunction::{Representation, Wavefunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Demand,
    Supply,
}

impl Basis {
    fn opposite(self) -> Self {
        match self {
            Basis::Demand => Basis::Supply,
            Basis::Supply => Basis::Demand,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Player {
    pub id: usize,
    demand_state: Wavefunction,
    supply_state: Wavefunction,
    demand: DemandCurve,
    supply: SupplyCurve,
    demand_axis: Grid,
    supply_axis: Grid,
    pub basis: Basis,
    /// Consecutive ticks measured in the same basis.
    pub frozen_ticks: u64,
}

impl Player {
    pub fn new(id: usize, demand_state: Wavefunction, supply_state: Wavefunction, basis: Basis) -> Result<Self> {
        let demand_state = demand_state.to_representation(Representation::Position).normalize()?;
        let supply_state = supply_state.to_representation(Representation::Momentum).normalize()?;
        Ok(Player {
            id,
            demand: DemandCurve::new(&demand_state)?,
            supply: SupplyCurve::new(&supply_state)?,
            demand_axis: demand_state.sample_grid(),
            supply_axis: supply_state.sample_grid(),
            demand_state,
            supply_state,
            basis,
            frozen_ticks: 0,
        })
    }

    pub fn demand_state(&self) -> &Wavefunction {
        &self.demand_state
    }

    pub fn supply_state(&self) -> &Wavefunction {
        &self.supply_state
    }

    /// Probability of transacting at `price` in the current basis.
    pub fn acceptance(&self, price: f64) -> f64 {
        match self.basis {
            Basis::Demand => self.demand.at(price),
            Basis::Supply => self.supply.at(price),
        }
    }

    fn active_axis(&self) -> &Grid {
        match self.basis {
            Basis::Demand => &self.demand_axis,
            Basis::Supply => &self.supply_axis,
        }
    }
}

/// `n_per_side` buyers and `n_per_side` sellers with ε-regularised delta
/// strategies at log-prices `buy_at` and `sell_at`. Supply states live on
/// the momentum axis, so a self-dual grid keeps both on one price axis.
pub fn symmetric_population(
    grid: &Grid,
    hbar_e: f64,
    n_per_side: usize,
    buy_at: f64,
    sell_at: f64,
    epsilon: f64,
) -> Result<Vec<Player>> {
    let demand = delta_strategy(buy_at, epsilon, grid, hbar_e)?.state;
    let supply = delta_strategy_in(Representation::Momentum, sell_at, epsilon, grid, hbar_e)?.state;
    (0..2 * n_per_side)
        .map(|id| {
            let basis = if id < n_per_side { Basis::Demand } else { Basis::Supply };
            Player::new(id, demand.clone(), supply.clone(), basis)
        })
        .collect()
}

/// RW's price law: a normalised density on log-price nodes, sampled by
/// inverse CDF over node masses.
#[derive(Debug, Clone, PartialEq)]
pub struct RWStrategy {
    grid: Grid,
    density: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RWStrategy {
    pub fn from_density(grid: Grid, density: Vec<f64>) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(Error::domain("price density length does not match its grid"));
        }
        if density.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain("price density must be finite and non-negative"));
        }
        let h = grid.spacing();
        let mass: f64 = density.iter().sum::<f64>() * h;
        if !(mass > 0.0) {
            return Err(Error::DegenerateState(mass));
        }
        let density: Vec<f64> = density.iter().map(|v| v / mass).collect();
        let mut acc = 0.0;
        let cumulative = density
            .iter()
            .map(|v| {
                acc += v * h;
                acc
            })
            .collect();
        Ok(RWStrategy { grid, density, cumulative })
    }

    pub fn gaussian(grid: Grid, mean: f64, std: f64) -> Result<Self> {
        if !(std > 0.0 && std.is_finite()) {
            return Err(Error::domain(format!("price law width must be positive, got {std}")));
        }
        let density = grid.points().map(|x| (-(x - mean).powi(2) / (2.0 * std * std)).exp()).collect();
        RWStrategy::from_density(grid, density)
    }

    /// Monopolist's law: mass concentrated at the node nearest `pin` with
    /// width a tenth of the spacing.
    pub fn concentrated(grid: Grid, pin: f64) -> Result<Self> {
        if !grid.contains(pin) {
            return Err(Error::domain(format!("pin price {pin} outside [{}, {})", grid.min(), grid.max())));
        }
        let center = grid.point(grid.nearest_index(pin));
        let eps = 0.1 * grid.spacing();
        let density = grid.points().map(|x| (-(x - center).powi(2) / (2.0 * eps * eps)).exp()).collect();
        RWStrategy::from_density(grid, density)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Probability mass of each node.
    pub fn node_masses(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = self.grid.spacing();
        self.grid.points().zip(self.density.iter().map(move |v| v * h))
    }

    /// `Σ_i mass_i · f(x_i)`, the exact expectation under the sampler.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.node_masses().map(|(x, w)| w * f(x)).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.grid.len() - 1);
        self.grid.point(i)
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub players: Vec<Player>,
    pub rw: RWStrategy,
    pub ticks: usize,
    /// Per-tick probability that a player is caught in the opposite basis.
    pub switch_probability: f64,
    /// Minimum fraction of ticks with a transaction before the market counts
    /// as crashed.
    pub crash_threshold: f64,
    pub rng_seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ticks == 0 {
            return Err(Error::domain("need at least one tick"));
        }
        if !(0.0..=1.0).contains(&self.switch_probability) {
            return Err(Error::domain(format!(
                "switch probability must lie in [0, 1], got {}",
                self.switch_probability
            )));
        }
        if !(0.0..=1.0).contains(&self.crash_threshold) {
            return Err(Error::domain(format!("crash threshold must lie in [0, 1], got {}", self.crash_threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TickResult {
    pub buys: u32,
    pub sells: u32,
    /// Units exchanged: one per matched buy/sell pair.
    pub transactions: u32,
    /// Whether each player's order went through, in player order.
    pub accepted: Vec<bool>,
}

/// Clears one tick at RW's quote. Draws exactly one uniform per player.
pub fn clear_tick<R: Rng + ?Sized>(players: &[Player], rw_price: f64, rng: &mut R) -> Result<TickResult> {
    if !rw_price.is_finite() {
        return Err(Error::domain(format!("non-finite quote {rw_price}")));
    }
    let mut out = TickResult { buys: 0, sells: 0, transactions: 0, accepted: Vec::with_capacity(players.len()) };
    for player in players {
        let axis = player.active_axis();
        if rw_price < axis.min() || rw_price > axis.max() {
            return Err(Error::domain(format!(
                "quote {rw_price} outside player {}'s price range [{}, {}]",
                player.id,
                axis.min(),
                axis.max()
            )));
        }
        let u: f64 = rng.random();
        let hit = u < player.acceptance(rw_price);
        if hit {
            match player.basis {
                Basis::Demand => out.buys += 1,
                Basis::Supply => out.sells += 1,
            }
        }
        out.accepted.push(hit);
    }
    out.transactions = out.buys.min(out.sells);
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PlayerStats {
    pub id: usize,
    pub demand_trials: u64,
    pub demand_accepts: u64,
    pub supply_trials: u64,
    pub supply_accepts: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub switch_probability: f64,
    pub ticks: usize,
    pub transactions_per_tick: Vec<u32>,
    /// Fraction of ticks with at least one transaction.
    pub transaction_rate: f64,
    /// RW's quote on every tick.
    pub price_series: Vec<f64>,
    /// Unbiased sample variance of `price_series`.
    pub price_variance: f64,
    pub crashed: bool,
    pub player_stats: Vec<PlayerStats>,
}

fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// One deterministic run of the market.
pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut players = config.players.clone();
    let mut stats: Vec<PlayerStats> = players.iter().map(|p| PlayerStats { id: p.id, ..Default::default() }).collect();
    let mut transactions_per_tick = Vec::with_capacity(config.ticks);
    let mut price_series = Vec::with_capacity(config.ticks);
    let f = config.switch_probability;

    for _ in 0..config.ticks {
        for player in players.iter_mut() {
            let u: f64 = rng.random();
            let next = if u < f { player.basis.opposite() } else { Basis::Demand };
            player.frozen_ticks = if next == player.basis { player.frozen_ticks + 1 } else { 0 };
            player.basis = next;
        }
        let price = config.rw.sample(&mut rng);
        let tick = clear_tick(&players, price, &mut rng)?;
        for ((player, s), &hit) in players.iter().zip(stats.iter_mut()).zip(&tick.accepted) {
            match player.basis {
                Basis::Demand => {
                    s.demand_trials += 1;
                    s.demand_accepts += hit as u64;
                }
                Basis::Supply => {
                    s.supply_trials += 1;
                    s.supply_accepts += hit as u64;
                }
            }
        }
        transactions_per_tick.push(tick.transactions);
        price_series.push(price);
    }

    let active = transactions_per_tick.iter().filter(|&&t| t > 0).count();
    let transaction_rate = active as f64 / config.ticks as f64;
    Ok(SimReport {
        switch_probability: f,
        ticks: config.ticks,
        price_variance: sample_variance(&price_series),
        crashed: transaction_rate < config.crash_threshold,
        transaction_rate,
        transactions_per_tick,
        price_series,
        player_stats: stats,
    })
}

/// Runs the market once per switch probability, all on the same seed.
pub fn zeno_experiment(config: &SimConfig, frequencies: &[f64]) -> Result<Vec<SimReport>> {
    frequencies
        .iter()
        .map(|&f| simulate(&SimConfig { switch_probability: f, ..config.clone() }))
        .collect()
}

/// Runs the market with RW's price law replaced by a monopolist's pinned quote.
pub fn monopolist_experiment(config: &SimConfig, pin_price: f64) -> Result<SimReport> {
    let rw = RWStrategy::concentrated(*config.rw.grid(), pin_price)?;
    simulate(&SimConfig { rw, ..config.clone() })
}
