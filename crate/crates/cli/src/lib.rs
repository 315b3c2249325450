//! `qmarket` command-line front end. [`run`] parses arguments, computes one
//! report and writes it as CSV or JSON.

pub mod report;
pub mod settings;

use std::ffi::OsString;

use clap::Parser;
use qmarket::market::{monopolist_experiment, zeno_experiment, SimReport};
use qmarket::strategies::{coherent_residual, coherent_strategy, dispersions, CoherentParams};
use qmarket::wigner::{entropy, mean_risk, thermal_density, wigner_excited, PhaseGrid, ThermalParams};
use qmarket::{minimal_risk_constant, spectrum};
use serde_json::Value;
use thiserror::Error;

use report::{emit, num, nums, object, Cell, Report};
use settings::{Cli, Command, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] qmarket::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input (flags, config, out-of-domain parameters), 1 for
    /// computations that fail on valid input and for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(e) if e.is_input_error() => 2,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qmarket: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command) -> Result<(), CliError> {
    let s = command.settings()?;
    let report = match command {
        Command::Spectrum(_) => spectrum_report(&s)?,
        Command::Coherent(_) => coherent_report(&s)?,
        Command::Wigner(_) => wigner_report(&s)?,
        Command::Thermal(_) => thermal_report(&s)?,
        Command::Zeno(_) => zeno_report(&s)?,
        Command::Monopolist(_) => monopolist_report(&s)?,
    };
    emit(&report, s.format(), s.out.as_deref())
}

pub fn spectrum_report(s: &Settings) -> Result<Report, CliError> {
    let params = s.risk_params()?;
    let grid = s.grid()?;
    let result = spectrum(&params, &grid, s.levels.unwrap_or(8))?;
    for w in &result.warnings {
        eprintln!("qmarket: warning: level {} has edge mass {:e}; widen the grid", w.level, w.edge_mass);
    }
    let rows = result.eigenvalues.iter().enumerate().map(|(n, &e)| vec![Cell::Int(n as u64), Cell::Float(e)]).collect();
    let levels = result
        .eigenvalues
        .iter()
        .zip(&result.residuals)
        .enumerate()
        .map(|(n, (&e, &res))| object([("n", Value::from(n)), ("eigenvalue", num(e)), ("residual", num(res))]))
        .collect();
    let json = object([
        ("effective_hbar", num(params.effective_hbar())),
        ("omega", num(params.omega())),
        ("minimal_risk_constant", num(minimal_risk_constant(&params, &grid)?)),
        ("levels", Value::Array(levels)),
    ]);
    Ok(Report { header: vec!["n", "eigenvalue"], rows, json })
}

pub fn coherent_report(s: &Settings) -> Result<Report, CliError> {
    let params = s.risk_params()?;
    let cp = CoherentParams::new(s.r.unwrap_or(0.0), s.eta.unwrap_or(1.0))?.with_center(params.q0, params.p0);
    let psi = coherent_strategy(&cp, &s.grid()?, params.effective_hbar())?;
    let d = dispersions(&psi)?;
    let residual = coherent_residual(&cp, &psi)?;
    let fields = [
        ("r", cp.r),
        ("eta", cp.eta),
        ("delta_q", d.delta_q),
        ("delta_p", d.delta_p),
        ("covariance", d.covariance),
        ("corr", d.corr),
        ("uncertainty_product", d.uncertainty_product()),
        ("residual", residual),
    ];
    Ok(Report {
        header: fields.iter().map(|f| f.0).collect(),
        rows: vec![fields.iter().map(|f| Cell::Float(f.1)).collect()],
        json: object(fields.map(|(k, v)| (k, num(v)))),
    })
}

fn grid_json(g: &PhaseGrid) -> Value {
    object([
        ("q_min", num(g.q.min())),
        ("q_max", num(g.q.max())),
        ("q_points", Value::from(g.q.len())),
        ("p_min", num(g.p.min())),
        ("p_max", num(g.p.max())),
        ("p_points", Value::from(g.p.len())),
    ])
}

pub fn wigner_report(s: &Settings) -> Result<Report, CliError> {
    let params = s.risk_params()?;
    let level = s.level.unwrap_or(0);
    let pgrid = PhaseGrid::auto_for_level(level, &params)?;
    let w = wigner_excited(level, &params, &pgrid)?;
    let mut rows = Vec::with_capacity(pgrid.cells());
    for (iq, q) in pgrid.q.points().enumerate() {
        for (ip, p) in pgrid.p.points().enumerate() {
            rows.push(vec![Cell::Float(q), Cell::Float(p), Cell::Float(w.value(iq, ip))]);
        }
    }
    let json = object([
        ("level", Value::from(level)),
        ("mass", num(w.mass())),
        ("min_value", num(w.min_value())),
        ("grid", grid_json(&pgrid)),
        ("values", Value::Array(w.values().chunks(pgrid.p.len()).map(|row| nums(row.iter().copied())).collect())),
    ]);
    Ok(Report { header: vec!["q", "p", "w"], rows, json })
}

pub fn thermal_report(s: &Settings) -> Result<Report, CliError> {
    let params = s.risk_params()?;
    let beta = s.beta.unwrap_or(1.0);
    let tp = ThermalParams::new(beta, &params)?;
    let pgrid = PhaseGrid::auto_for_thermal(beta, &params)?;
    let rho = thermal_density(beta, &params, &pgrid)?;
    let (risk, s_ent) = (mean_risk(&rho, &params)?, entropy(&rho)?);
    let (q, p) = (pgrid.q, pgrid.p);
    Ok(Report {
        header: vec!["beta", "x", "mean_risk", "entropy", "q_min", "q_max", "q_points", "p_min", "p_max", "p_points"],
        rows: vec![vec![
            Cell::Float(beta),
            Cell::Float(tp.x),
            Cell::Float(risk),
            Cell::Float(s_ent),
            Cell::Float(q.min()),
            Cell::Float(q.max()),
            Cell::Int(q.len() as u64),
            Cell::Float(p.min()),
            Cell::Float(p.max()),
            Cell::Int(p.len() as u64),
        ]],
        json: object([
            ("beta", num(beta)),
            ("x", num(tp.x)),
            ("mean_risk", num(risk)),
            ("entropy", num(s_ent)),
            ("grid", grid_json(&pgrid)),
        ]),
    })
}

const SIM_HEADER: [&str; 6] =
    ["switch_probability", "ticks", "transaction_rate", "mean_transactions", "price_variance", "crashed"];

fn mean_transactions(r: &SimReport) -> f64 {
    r.transactions_per_tick.iter().map(|&t| t as f64).sum::<f64>() / r.ticks as f64
}

fn sim_cells(r: &SimReport) -> Vec<Cell> {
    vec![
        Cell::Float(r.switch_probability),
        Cell::Int(r.ticks as u64),
        Cell::Float(r.transaction_rate),
        Cell::Float(mean_transactions(r)),
        Cell::Float(r.price_variance),
        Cell::Bool(r.crashed),
    ]
}

fn sim_json(r: &SimReport) -> Value {
    object([
        ("switch_probability", num(r.switch_probability)),
        ("ticks", Value::from(r.ticks)),
        ("transaction_rate", num(r.transaction_rate)),
        ("mean_transactions", num(mean_transactions(r))),
        ("price_variance", num(r.price_variance)),
        ("crashed", Value::Bool(r.crashed)),
        ("transactions_per_tick", Value::from(r.transactions_per_tick.clone())),
        ("price_series", nums(r.price_series.iter().copied())),
    ])
}

pub fn zeno_report(s: &Settings) -> Result<Report, CliError> {
    let frequencies = s.frequencies.clone().unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let config = s.sim_config(0.0)?;
    let reports = zeno_experiment(&config, &frequencies)?;
    Ok(Report {
        header: SIM_HEADER.to_vec(),
        rows: reports.iter().map(sim_cells).collect(),
        json: object([
            ("seed", Value::from(config.rng_seed)),
            ("reports", Value::Array(reports.iter().map(sim_json).collect())),
        ]),
    })
}

pub fn monopolist_report(s: &Settings) -> Result<Report, CliError> {
    let config = s.sim_config(s.switch_probability.unwrap_or(0.5))?;
    let pin = s.pin_price.unwrap_or(0.0);
    let free = qmarket::market::simulate(&config)?;
    let pinned = monopolist_experiment(&config, pin)?;
    let mut header = vec!["run"];
    header.extend(SIM_HEADER);
    let row = |name, r: &SimReport| {
        let mut cells = vec![Cell::Text(name)];
        cells.extend(sim_cells(r));
        cells
    };
    Ok(Report {
        header,
        rows: vec![row("unpinned", &free), row("pinned", &pinned)],
        json: object([
            ("seed", Value::from(config.rng_seed)),
            ("pin_price", num(pin)),
            ("unpinned", sim_json(&free)),
            ("pinned", sim_json(&pinned)),
        ]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qmarket::Error;

    #[test]
    fn every_error_class_has_its_exit_code() {
        let cases = [
            (CliError::Config("x".into()), 2),
            (CliError::Compute(Error::Domain("x".into())), 2),
            (CliError::Compute(Error::DegenerateState(0.0)), 1),
            (CliError::Compute(Error::GridTooSmall { what: "x", found: 1.0, limit: 0.0 }), 1),
            (CliError::Compute(Error::Convergence { level: 0, residual: 1.0, limit: 0.0 }), 1),
            (CliError::Io { path: "x".into(), source: std::io::Error::other("x") }, 1),
        ];
        for (e, code) in cases {
            assert_eq!(e.exit_code(), code, "{e}");
        }
    }

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(run(["qmarket", "--version"]), 0);
        assert_eq!(run(["qmarket"]), 2);
    }
}
