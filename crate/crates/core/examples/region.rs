// DoF region of a three-user system under three traffic laws.
//
// ```text
// cargo run --example region
// ```

use bursty_relay::{region, sum_dof, ActivityDistribution, AntennaConfig, DofVector, UserSet};

pub fn run_example() -> bursty_relay::Result<()> {
    let config = AntennaConfig::symmetric(3, 1, 2, 1)?;
    let p = 0.7;

    let laws = [
        ("independent", ActivityDistribution::independent(p, 3)?),
        ("dependent", ActivityDistribution::dependent(p, 3)?),
        // Users 1 and 2 always together, user 3 on its own.
        (
            "paired",
            ActivityDistribution::custom(
                3,
                [
                    (UserSet::EMPTY, 0.09),
                    (UserSet::from_users([0, 1]), 0.21),
                    (UserSet::from_users([2]), 0.21),
                    (UserSet::from_users([0, 1, 2]), 0.49),
                ],
            )?,
        ),
    ];

    for (name, dist) in &laws {
        let r = region(&config, dist)?;
        println!("{config} {name} p={p}: sum DoF {:.4}", sum_dof(&config, dist)?);
        for c in r.constraints() {
            println!("  sum over {:<8} <= {:.4}  ({})", c.subset.to_string(), c.bound, c.binding_side);
        }
        let fair = DofVector::uniform(3, r.sum_bound() / 3.0)?;
        println!("  equal split {:?} inside: {}", fair.as_slice(), r.contains(&fair)?);
    }

    let mut csv = Vec::new();
    region(&config, &laws[0].1)?.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
