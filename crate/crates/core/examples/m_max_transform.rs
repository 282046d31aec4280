//! The transforms M_log∞, M_log0 and M_max applied to M(s) = s.
//!
//! For the identity, M_max(s) = s/e for s ≥ e, attained at λ = e.
//! M_log0 needs a function on [1, ∞), so the domain is restricted first.

use resolvent_decay::transforms::{m_log_infinity, m_log_zero, m_max};
use resolvent_decay::{defaults, GrowthFunction, Result};

fn main() -> Result<()> {
    let m = GrowthFunction::power(1.0);
    let log_inf = m_log_infinity(&m);
    let log_zero = m_log_zero(&m.clone().with_start(1.0))?;
    println!("{:>10} {:>14} {:>14} {:>14} {:>14}", "s", "M_log_inf", "M_log_0", "M_max", "s/e");
    for s in [3.0, 10.0, 100.0, 1e4, 1e6] {
        println!(
            "{s:>10.0} {:>14.6} {:>14.6} {:>14.6} {:>14.6}",
            log_inf.evaluate(s)?,
            log_zero.evaluate(s)?,
            m_max(&m, s, defaults::M_MAX_GRID)?,
            s / std::f64::consts::E
        );
    }
    Ok(())
}
