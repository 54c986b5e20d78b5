//! Every example must keep running.

macro_rules! example {
    ($module:ident, $test:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(region_example, region_runs, "region.rs");
example!(gains_example, gains_runs, "gains.rs");
example!(collision_free_example, collision_free_runs, "collision_free.rs");
example!(simulate_example, simulate_runs, "simulate.rs");
example!(rank_oracle_example, rank_oracle_runs, "rank_oracle.rs");
example!(cutset_slope_example, cutset_slope_runs, "cutset_slope.rs");
example!(figures_example, figures_runs, "figures.rs");
