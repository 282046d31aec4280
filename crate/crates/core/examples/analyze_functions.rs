//! Classify a few growth functions: positive increase, regular variation,
//! and the right inverse.
//!
//! Run with `cargo run --example analyze_functions`.

use resolvent_decay::classes::{positive_increase_estimate, regular_variation_estimate};
use resolvent_decay::{defaults, grid, GrowthFunction, Result};

fn main() -> Result<()> {
    let s_grid = grid::per_decade(10.0, 1e12, defaults::S_PER_DECADE)?;
    let cases = [
        ("s^0.5", GrowthFunction::power(0.5)),
        ("s^2", GrowthFunction::power(2.0)),
        ("ln s", GrowthFunction::log_power(1.0, 1.0)),
        ("exp((ln s)^0.5)", GrowthFunction::exp_log_power(0.5)),
    ];
    println!("{:<18} {:>9} {:>10} {:>12} {:>14}", "M", "pos.inc", "alpha", "rv index", "M^-1(100)");
    for (name, f) in &cases {
        let pi = positive_increase_estimate(f, &defaults::LAMBDAS, &s_grid)?;
        let rv = regular_variation_estimate(f, &defaults::LAMBDAS, &s_grid)?;
        let index = rv.index.map_or("-".to_string(), |a| format!("{a:.4}"));
        println!(
            "{name:<18} {:>9} {:>10.4} {index:>12} {:>14.6e}",
            pi.detected,
            pi.alpha,
            f.inverse(100.0)?
        );
    }
    Ok(())
}
