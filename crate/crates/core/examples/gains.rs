// Relay gains under dependent and independent traffic: closed forms,
// peaks, the dominance regime and where the order flips.
//
// ```text
// cargo run --example gains
// ```

use bursty_relay::gains::{
    delta_dof, delta_dof_dep, delta_dof_ind, dominance_report, peak_gain, peak_gain_or_numeric, relay_gain,
    TrafficMode, DEFAULT_GRID_POINTS,
};
use bursty_relay::{ActivityDistribution, AntennaConfig};

pub fn run_example() -> bursty_relay::Result<()> {
    // Closed forms against the general region computation.
    let config = AntennaConfig::symmetric(4, 1, 1, 3)?;
    for p in [0.1, 0.25, 0.5, 0.9] {
        let dep = delta_dof_dep(&config, p)?;
        let ind = delta_dof_ind(&config, p)?;
        let general = delta_dof(&config, &ActivityDistribution::independent(p, 4)?)?;
        println!("{config} p={p}: dep {dep:.6} ind {ind:.6} (general {general:.6})");
    }

    // Peaks for single-antenna users with a large relay.
    for k in [2, 4, 8, 16] {
        let c = AntennaConfig::symmetric(k, 1, 1, k as u32 - 1)?;
        let dep = peak_gain(&c, TrafficMode::Dependent)?;
        let ind = peak_gain(&c, TrafficMode::Independent)?;
        println!("K={k:>2}: peak at p={:.4}, dep {:.6}, ind {:.6}", dep.p_star, dep.value, ind.value);
    }

    // A small relay has no closed-form peak; fall back to a grid.
    let small = AntennaConfig::symmetric(4, 1, 1, 1)?;
    let numeric = peak_gain_or_numeric(&small, TrafficMode::Independent, DEFAULT_GRID_POINTS)?;
    println!("{small}: {:?} peak {:.6} at p={}", numeric.method, numeric.value, numeric.p_star);

    // Dependent traffic wins whenever the relay is large; otherwise the
    // order can flip.
    let grid: Vec<f64> = (1..10).map(|i| f64::from(i) / 10.0).collect();
    for c in [config, AntennaConfig::symmetric(4, 2, 7, 1)?, AntennaConfig::symmetric(4, 2, 1, 1)?] {
        let signs: Vec<String> = dominance_report(&c, &grid)?.iter().map(|r| r.sign.to_string()).collect();
        println!("{c}: {}", signs.join(" "));
    }

    // Asymmetric users go through the general form only.
    let asym = AntennaConfig::new(vec![1, 2, 3], 2, 2)?;
    let gain = relay_gain(&asym, &ActivityDistribution::independent(0.4, 3)?)?;
    println!("{asym}: gain {gain:.6} at independent p=0.4");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
