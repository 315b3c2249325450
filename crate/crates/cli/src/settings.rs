//! Flags and the `--config` document, merged into one set of settings.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmarket::market::{symmetric_population, RWStrategy, SimConfig};
use qmarket::{Grid, RiskParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qmarket", version, about = "Quantum market-game computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues of the risk inclination operator.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Dispersions and correlation of a correlated coherent strategy.
    #[command(allow_negative_numbers = true)]
    Coherent(CoherentArgs),
    /// Wigner function of an excited eigenstrategy on a phase grid.
    #[command(allow_negative_numbers = true)]
    Wigner(WignerArgs),
    /// Mean risk and entropy of the thermal strategy density.
    #[command(allow_negative_numbers = true)]
    Thermal(ThermalArgs),
    /// Transaction rate against the basis switch probability.
    #[command(allow_negative_numbers = true)]
    Zeno(ZenoArgs),
    /// Unpinned and monopolist-pinned runs on the same seed.
    #[command(allow_negative_numbers = true)]
    Monopolist(MonopolistArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub hbar_e: Option<f64>,
    #[arg(long)]
    pub big_theta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub q0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub q_min: Option<f64>,
    #[arg(long)]
    pub q_max: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML document with any of the long flag names as keys (underscored).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub ticks: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Buyers, and as many sellers.
    #[arg(long)]
    pub players: Option<usize>,
    #[arg(long)]
    pub buy_at: Option<f64>,
    #[arg(long)]
    pub sell_at: Option<f64>,
    /// Width of the players' delta strategies.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub crash_threshold: Option<f64>,
    #[arg(long)]
    pub rw_mean: Option<f64>,
    #[arg(long)]
    pub rw_std: Option<f64>,
    /// Points of the self-dual price grid.
    #[arg(long)]
    pub sim_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CoherentArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "r")]
    pub r: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub level: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ThermalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ZenoArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Comma-separated switch probabilities; pass the flag with no value for none.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub frequencies: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct MonopolistArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long)]
    pub pin_price: Option<f64>,
    #[arg(long)]
    pub switch_probability: Option<f64>,
}

/// Every setting any subcommand reads. Keys of the config document are the
/// field names; unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub hbar_e: Option<f64>,
    pub big_theta: Option<f64>,
    pub theta: Option<f64>,
    pub m: Option<f64>,
    pub q0: Option<f64>,
    pub p0: Option<f64>,
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub n_points: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub levels: Option<usize>,
    pub r: Option<f64>,
    pub eta: Option<f64>,
    pub level: Option<usize>,
    pub beta: Option<f64>,
    pub ticks: Option<usize>,
    pub seed: Option<u64>,
    pub players: Option<usize>,
    pub buy_at: Option<f64>,
    pub sell_at: Option<f64>,
    pub epsilon: Option<f64>,
    pub crash_threshold: Option<f64>,
    pub rw_mean: Option<f64>,
    pub rw_std: Option<f64>,
    pub sim_points: Option<usize>,
    pub frequencies: Option<Vec<f64>>,
    pub pin_price: Option<f64>,
    pub switch_probability: Option<f64>,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            hbar_e: self.hbar_e,
            big_theta: self.big_theta,
            theta: self.theta,
            m: self.m,
            q0: self.q0,
            p0: self.p0,
            q_min: self.q_min,
            q_max: self.q_max,
            n_points: self.n_points,
            format: self.format,
            out: self.out.clone(),
            ..Settings::default()
        }
    }
}

impl SimArgs {
    fn over(&self, base: Settings) -> Settings {
        Settings {
            ticks: self.ticks,
            seed: self.seed,
            players: self.players,
            buy_at: self.buy_at,
            sell_at: self.sell_at,
            epsilon: self.epsilon,
            crash_threshold: self.crash_threshold,
            rw_mean: self.rw_mean,
            rw_std: self.rw_std,
            sim_points: self.sim_points,
            ..base
        }
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Spectrum(a) => &a.common,
            Command::Coherent(a) => &a.common,
            Command::Wigner(a) => &a.common,
            Command::Thermal(a) => &a.common,
            Command::Zeno(a) => &a.common,
            Command::Monopolist(a) => &a.common,
        }
    }

    fn flag_settings(&self) -> Settings {
        let base = self.common().settings();
        match self {
            Command::Spectrum(a) => Settings { levels: a.levels, ..base },
            Command::Coherent(a) => Settings { r: a.r, eta: a.eta, ..base },
            Command::Wigner(a) => Settings { level: a.level, ..base },
            Command::Thermal(a) => Settings { beta: a.beta, ..base },
            Command::Zeno(a) => Settings { frequencies: a.frequencies.clone(), ..a.sim.over(base) },
            Command::Monopolist(a) => {
                Settings { pin_price: a.pin_price, switch_probability: a.switch_probability, ..a.sim.over(base) }
            }
        }
    }

    /// Flags merged over the config document, if any.
    pub fn settings(&self) -> Result<Settings, CliError> {
        let flags = self.flag_settings();
        let Some(path) = &self.common().config else {
            return Ok(flags);
        };
        let mut table = read_config(path)?;
        let overrides = toml::Table::try_from(&flags).map_err(|e| config_error(path, e))?;
        table.extend(overrides);
        Settings::deserialize(table).map_err(|e| config_error(path, e))
    }
}

fn config_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

fn read_config(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(path, e))?;
    let table: toml::Table = text.parse().map_err(|e| config_error(path, e))?;
    // reject unknown keys before flags are merged in
    Settings::deserialize(table.clone()).map_err(|e| config_error(path, e))?;
    Ok(table)
}

impl Settings {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn risk_params(&self) -> qmarket::Result<RiskParams> {
        let params = RiskParams {
            m: self.m.unwrap_or(1.0),
            theta: self.theta.unwrap_or(2.0 * PI),
            hbar_e: self.hbar_e.unwrap_or(1.0),
            big_theta: self.big_theta.unwrap_or(0.0),
            q0: self.q0.unwrap_or(0.0),
            p0: self.p0.unwrap_or(0.0),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn grid(&self) -> qmarket::Result<Grid> {
        Grid::new(self.q_min.unwrap_or(-10.0), self.q_max.unwrap_or(10.0), self.n_points.unwrap_or(1024))
    }

    /// Market on a self-dual grid, so demand (position) and supply
    /// (momentum) states share one log-price axis.
    pub fn sim_config(&self, switch_probability: f64) -> qmarket::Result<SimConfig> {
        let hbar = self.risk_params()?.effective_hbar();
        let grid = Grid::self_dual(self.sim_points.unwrap_or(256), hbar)?;
        let players = symmetric_population(
            &grid,
            hbar,
            self.players.unwrap_or(2),
            self.buy_at.unwrap_or(0.3),
            self.sell_at.unwrap_or(-0.2),
            self.epsilon.unwrap_or(0.8),
        )?;
        let config = SimConfig {
            players,
            rw: RWStrategy::gaussian(grid, self.rw_mean.unwrap_or(0.0), self.rw_std.unwrap_or(1.0))?,
            ticks: self.ticks.unwrap_or(10_000),
            switch_probability,
            crash_threshold: self.crash_threshold.unwrap_or(0.05),
            rng_seed: self.seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }
}
