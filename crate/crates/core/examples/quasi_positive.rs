//! Quasi-positive increase for M(s) = exp((ln s)^{1/2}).
//!
//! Builds the optimal auxiliary function N, checks the defining
//! inequality on a grid, and evaluates the quasi envelopes.

use resolvent_decay::classes::{optimal_auxiliary, verify_quasi_inequality};
use resolvent_decay::transforms::{predict, EnvelopeKind, EnvelopeParams};
use resolvent_decay::{grid, GrowthFunction, Result};

fn main() -> Result<()> {
    let m = GrowthFunction::exp_log_power(0.5);
    let s_grid = grid::per_decade(10.0, 1e40, 32)?;
    let aux = optimal_auxiliary(&m, 1.0, 10.0, &s_grid)?;
    for s in [1e3, 1e10, 1e20, 1e39] {
        println!("N({s:.0e}) = {:.4}", aux.n.evaluate(s)?);
    }

    let lambdas = grid::geometric(1.0 + 1e-3, 1e6, 60)?;
    let check = verify_quasi_inequality(&m, &aux, &lambdas, &grid::per_decade(20.0, 1e30, 16)?)?;
    println!("inequality holds: {}, worst ratio {:.6} at s = {:.3e}", check.holds, check.worst_margin, check.worst_s);

    let params = EnvelopeParams::default().with_aux(aux);
    for kind in [EnvelopeKind::QuasiFull, EnvelopeKind::QuasiEps, EnvelopeKind::QuasiSimple] {
        let e = predict(&m, kind, params.clone())?;
        let t0 = e.min_time()?.max(10.0);
        println!("{:<13} t = {t0:>9.2}: {:.4e}   t = {:>9.2}: {:.4e}", kind.name(), e.value(t0)?, 100.0 * t0, e.value(100.0 * t0)?);
    }
    Ok(())
}
