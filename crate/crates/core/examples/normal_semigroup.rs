//! A normal semigroup with spectrum −1/ln|β| ± iβ.
//!
//! `decay_norm` computes ‖T(t)A⁻¹‖ exactly from the spectrum; it is set
//! against e^{−2√t}, the exact-normal envelope for M(s) = ln s.

use resolvent_decay::spectral::{decay_norm, spectrum_from_profile, theorem_consistency_report};
use resolvent_decay::transforms::{envelope, EnvelopeKind, EnvelopeParams};
use resolvent_decay::{defaults, grid, GrowthFunction, Result};

fn main() -> Result<()> {
    let f = GrowthFunction::log_power(1.0, 1.0);
    let betas = grid::exp_spaced(2.0, 60.0, (58.0 / std::f64::consts::LN_10 * 48.0) as usize);
    let spec = spectrum_from_profile(&f, &betas)?;
    let ts = [100.0, 200.0, 400.0, 800.0];
    let exact = envelope(
        &f,
        EnvelopeKind::ExactNormal,
        EnvelopeParams::default().with_t_range(ts[0], ts[3]),
    )?;
    println!("{:>6} {:>14} {:>14} {:>10} {:>12}", "t", "decay_norm", "exp(-2 sqrt t)", "ratio", "beta*");
    for t in ts {
        let d = decay_norm(&spec, t);
        println!(
            "{t:>6.0} {:>14.6e} {:>14.6e} {:>10.4} {:>12.4e}",
            d.value,
            (-2.0 * t.sqrt()).exp(),
            d.value / exact.value(t)?,
            d.beta_star
        );
    }

    let t_grid = grid::geometric(10.0, 1e4, 20)?;
    let report = theorem_consistency_report(&spec, &f, defaults::DELTA, 1.0, &t_grid)?;
    println!("verdict: {}", report.verdict);
    Ok(())
}
