// When can every user get its interference-free DoF at once?
//
// ```text
// cargo run --example collision_free
// ```

use bursty_relay::threshold::{classify, collision_free_threshold, is_collision_free, p_i_crossover};
use bursty_relay::AntennaConfig;

pub fn run_example() -> bursty_relay::Result<()> {
    let configs = [(2, 1, 1, 1), (2, 1, 2, 0), (4, 1, 2, 2), (4, 2, 7, 1), (3, 1, 1, 0), (2, 4, 1, 1), (2, 2, 1, 2)];
    for (k, m, n, l) in configs {
        let config = AntennaConfig::symmetric(k, m, n, l)?;
        let label = classify(&config)?;
        let threshold = collision_free_threshold(&config)?;
        let crossover = p_i_crossover(&config)?;
        println!(
            "{config}: {} collision-free possible: {}, threshold {:?}, individual crossover {:?}",
            label.case_id, label.collision_free_possible, threshold, crossover
        );
        if let Some(t) = threshold {
            let below = (t - 0.05).max(0.0);
            let above = (t + 0.05).min(1.0);
            println!(
                "  p={below:.3}: {}  p={above:.3}: {}",
                is_collision_free(&config, below)?,
                is_collision_free(&config, above)?
            );
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
