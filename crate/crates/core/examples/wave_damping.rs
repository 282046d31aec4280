//! Wave equation on [0, 1] with viscoelastic boundary damping.
//!
//! Runs the stock configuration, reports the energy balance and fits the
//! late-time decay to C t^{-p}.

use resolvent_decay::wave::{fit_decay, simulate, DecayModel, WaveConfig};
use resolvent_decay::Result;

fn main() -> Result<()> {
    let cfg = WaveConfig::stock();
    let trace = simulate(&cfg)?;
    let e0 = trace.total_energy[0];
    let e_t = *trace.total_energy.last().expect("non-empty trace");
    println!("steps {}, dt {:.3e}, samples {}", cfg.steps(), cfg.dt(), trace.len());
    for t in [0.0, 1.0, 10.0, 50.0, 100.0, 200.0] {
        println!("E({t:>5}) / E(0) = {:.6e}", trace.energy_at(t).unwrap_or(f64::NAN) / e0);
    }
    println!("sampled balance error {:.2e}", (e0 - e_t - trace.dissipated()) / e0);
    println!("discrete balance error {:.2e}", (e0 - e_t - trace.discrete_dissipated()) / e0);
    for model in [DecayModel::Power, DecayModel::ExpSqrt] {
        let fit = fit_decay(&trace, (20.0, cfg.t_final), model)?;
        println!("{model}: rate {:.4}, residual {:.3e}", fit.rate, fit.residual);
    }
    Ok(())
}
