use qmarket::market::{monopolist_experiment, simulate, symmetric_population, zeno_experiment, RWStrategy, SimConfig};
use qmarket::strategies::{DemandCurve, SupplyCurve};
use qmarket::Grid;

fn config(switch_probability: f64, ticks: usize, seed: u64) -> SimConfig {
    let grid = Grid::self_dual(256, 1.0).unwrap();
    SimConfig {
        players: symmetric_population(&grid, 1.0, 2, 0.3, -0.2, 0.8).unwrap(),
        rw: RWStrategy::gaussian(grid, 0.0, 1.0).unwrap(),
        ticks,
        switch_probability,
        crash_threshold: 0.05,
        rng_seed: seed,
    }
}

#[test]
fn acceptance_frequencies_converge_at_monte_carlo_rate() {
    for ticks in [1_000, 10_000, 100_000] {
        // f = 1: each player alternates, so both profiles are sampled
        let cfg = config(1.0, ticks, 77);
        let report = simulate(&cfg).unwrap();
        for (player, stats) in cfg.players.iter().zip(&report.player_stats) {
            let demand = DemandCurve::new(player.demand_state()).unwrap();
            let supply = SupplyCurve::new(player.supply_state()).unwrap();
            let checks = [
                (stats.demand_trials, stats.demand_accepts, cfg.rw.expectation(|x| demand.at(x))),
                (stats.supply_trials, stats.supply_accepts, cfg.rw.expectation(|x| supply.at(x))),
            ];
            for (trials, accepts, exact) in checks {
                assert!(trials > 0);
                let freq = accepts as f64 / trials as f64;
                let se = (exact * (1.0 - exact) / trials as f64).sqrt();
                assert!((freq - exact).abs() <= 3.0 * se, "N={ticks}: {freq} vs {exact} (se {se})");
            }
        }
    }
}

#[test]
fn transaction_rate_grows_with_switching() {
    let freqs = [0.0, 0.25, 0.5, 0.75, 1.0];
    let seeds = 32;
    let mut rates = vec![Vec::new(); freqs.len()];
    for seed in 0..seeds {
        for (i, r) in zeno_experiment(&config(0.0, 10_000, seed), &freqs).unwrap().iter().enumerate() {
            rates[i].push(r.transaction_rate);
        }
    }
    assert!(rates[0].iter().all(|&r| r == 0.0));
    let stats: Vec<(f64, f64)> = rates
        .iter()
        .map(|rs| {
            let n = rs.len() as f64;
            let mean = rs.iter().sum::<f64>() / n;
            let var = rs.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (mean, (var / n).sqrt())
        })
        .collect();
    for w in stats.windows(2) {
        let ((m0, s0), (m1, s1)) = (w[0], w[1]);
        assert!(m1 >= m0 - 3.0 * s0.hypot(s1), "{stats:?}");
    }
    assert!(stats[4].0 > 0.0);
}

#[test]
fn monopolist_pins_the_quote() {
    for seed in [1, 2, 3] {
        let cfg = config(0.5, 10_000, seed);
        let free = simulate(&cfg).unwrap();
        let pinned = monopolist_experiment(&cfg, 0.25).unwrap();
        let n = free.ticks as f64;
        // sample variance of a unit normal has standard error √(2/(n−1))
        assert!((free.price_variance - 1.0).abs() <= 3.0 * (2.0 / (n - 1.0)).sqrt());
        assert!(pinned.price_variance < 1e-6);
        assert!(pinned.price_variance < free.price_variance);
    }
}

#[test]
fn identical_configs_give_identical_reports() {
    let a = zeno_experiment(&config(0.0, 3_000, 5), &[0.1, 0.9]).unwrap();
    let b = zeno_experiment(&config(0.0, 3_000, 5), &[0.1, 0.9]).unwrap();
    assert_eq!(a, b);
}
