// Finite-power cut-set values, their slope in log P against the DoF cut
// bounds, and the relay's compression penalty.
//
// ```text
// cargo run --example cutset_slope
// ```

use bursty_relay::oracle::{
    cutset_evaluate, cutset_slope, rate_penalty, rate_penalty_monte_carlo, ChannelInstance, Field, DEFAULT_POWER_GRID,
};
use bursty_relay::region::cut_bound;
use bursty_relay::{ActivityDistribution, AntennaConfig, UserSet};

pub fn run_example() -> bursty_relay::Result<()> {
    let config = AntennaConfig::symmetric(3, 1, 2, 1)?;
    let channel = ChannelInstance::sample(&config, Field::Real, 1)?;
    for dist in [ActivityDistribution::independent(0.25, 3)?, ActivityDistribution::dependent(0.25, 3)?] {
        for subset in UserSet::nonempty_subsets(3) {
            let slope = cutset_slope(&config, &dist, subset, &DEFAULT_POWER_GRID, &channel)?;
            let bound = cut_bound(&config, &dist, subset)?;
            println!("{config} {:<8}: slope {slope:.4}, DoF bound {bound:.4}", subset.to_string());
        }
    }

    let full = UserSet::full(3);
    let dist = ActivityDistribution::independent(0.25, 3)?;
    for exp in [2, 4, 6, 8, 10] {
        let power = 10f64.powi(exp);
        let bits = cutset_evaluate(&config, &dist, full, power, &channel)?;
        println!("P=1e{exp:<2}: relay-receive cut {:8.3} bits, relay-transmit cut {:8.3} bits", bits.receive_cut, bits.transmit_cut);
    }

    for l in 0..=4 {
        println!("L={l}: penalty {} bits, sampled {:.12}", rate_penalty(l), rate_penalty_monte_carlo(l, 10_000, 3)?);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
