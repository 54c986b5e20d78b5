// Slot-level simulation of the relay buffering collisions and replaying
// them into idle slots, compared with the sum-DoF formula.
//
// ```text
// cargo run --release --example simulate
// ```

use bursty_relay::sim::{compare_to_formula, simulate, simulate_many, simulate_trace, ActivityTrace};
use bursty_relay::{ActivityDistribution, AntennaConfig, UserSet};

const SLOTS: usize = 200_000;

pub fn run_example() -> bursty_relay::Result<()> {
    // Two single-antenna users collide; the relay resolves it next slot.
    let two_user = AntennaConfig::symmetric(2, 1, 1, 1)?;
    let trace = ActivityTrace::explicit(2, vec![UserSet::from_users([0, 1]), UserSet::EMPTY])?;
    let report = simulate_trace(&two_user, &trace, true)?;
    for (t, slot) in report.slot_log.iter().flatten().enumerate() {
        println!("slot {t}: active {} {:?} buffer {}", slot.active, slot.outcome, slot.buffer_after);
    }
    println!("throughput {} symbols/slot\n", report.throughput);

    for config in [two_user, AntennaConfig::symmetric(4, 2, 7, 1)?] {
        for p in [0.25, 0.75] {
            for (law, dist) in [
                ("independent", ActivityDistribution::independent(p, config.users())?),
                ("dependent", ActivityDistribution::dependent(p, config.users())?),
            ] {
                let r = simulate(&config, &dist, SLOTS, 7)?;
                println!(
                    "{config} {law} p={p}: simulated {:.4}, formula {:.4}, gap {:+.5}, peak buffer {}",
                    r.throughput,
                    r.formula_value,
                    compare_to_formula(&r, &config, &dist)?,
                    r.buffer_high_water
                );
            }
        }
    }

    // Several seeds in parallel, merged by slot count.
    let config = AntennaConfig::symmetric(3, 1, 2, 1)?;
    let dist = ActivityDistribution::independent(0.3, 3)?;
    let merged = simulate_many(&config, &dist, SLOTS / 4, &[1, 2, 3, 4])?;
    println!("\n{config} over 4 seeds: {}", merged.to_json());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
