//! Lower, bounded-upper and optimal decay envelopes for M(s) = s².
//!
//! The optimal envelope is 1/M⁻¹(t) = t^{-1/2}; the lower one carries the
//! constant C in its argument.

use resolvent_decay::transforms::{asymptotic_compare, predict, EnvelopeKind, EnvelopeParams};
use resolvent_decay::{grid, GrowthFunction, Result};

fn main() -> Result<()> {
    let m = GrowthFunction::power(2.0);
    let params = EnvelopeParams::default();
    let kinds = [EnvelopeKind::Lower, EnvelopeKind::BdUpper, EnvelopeKind::Optimal];
    let envelopes = kinds
        .iter()
        .map(|&k| predict(&m, k, params.clone()))
        .collect::<Result<Vec<_>>>()?;

    print!("{:>10}", "t");
    for k in kinds {
        print!(" {:>14}", k.name());
    }
    println!();
    for t in grid::geometric(10.0, 1e6, 6)? {
        print!("{t:>10.0}");
        for e in &envelopes {
            print!(" {:>14.6e}", e.value(t)?);
        }
        println!();
    }

    let ts = grid::geometric(1e2, 1e8, 40)?;
    let cmp = asymptotic_compare(&envelopes[2], &envelopes[1], &ts)?;
    println!("optimal / bd_upper ratio in [{:.4}, {:.4}]", cmp.ratio_min, cmp.ratio_max);
    Ok(())
}
