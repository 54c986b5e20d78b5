// Explicit-matrix check of the simulator: the rank of everything the
// receiver hears equals the simulator's delivered-symbol count.
//
// ```text
// cargo run --example rank_oracle
// ```

use bursty_relay::oracle::{rank_decode_count, ChannelInstance, Field};
use bursty_relay::sim::{simulate_trace, ActivityTrace};
use bursty_relay::{ActivityDistribution, AntennaConfig};

pub fn run_example() -> bursty_relay::Result<()> {
    for config in [AntennaConfig::symmetric(2, 1, 1, 1)?, AntennaConfig::symmetric(3, 1, 2, 1)?] {
        let dist = ActivityDistribution::independent(0.5, config.users())?;
        let mut agree = 0;
        for seed in 0..10 {
            let trace = ActivityTrace::sample(&dist, 50, seed);
            let delivered = simulate_trace(&config, &trace, false)?.final_state.delivered() as usize;
            let prime = rank_decode_count(&config, &trace, &ChannelInstance::sample(&config, Field::Prime, seed)?)?;
            let real = rank_decode_count(&config, &trace, &ChannelInstance::sample(&config, Field::Real, seed)?)?;
            println!("{config} seed {seed}: delivered {delivered}, rank over GF(p) {prime}, over reals {real}");
            agree += usize::from(prime == delivered && real == delivered);
        }
        println!("{config}: {agree}/10 traces agree\n");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
