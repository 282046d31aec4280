//! Log-spaced sampling grids.
//!
//! Every grid here is inclusive of both endpoints, and the endpoints are
//! reproduced exactly rather than through `exp(ln(x))`.

use crate::error::{Error, Result};

/// `n` points geometrically spaced on `[start, end]`.
pub fn geometric(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end >= start && start.is_finite() && end.is_finite()) {
        return Err(Error::Domain(format!(
            "geometric grid needs 0 < start <= end, got [{start}, {end}]"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    if start == end {
        return Ok(vec![start; n]);
    }
    let ratio = end / start;
    let last = (n - 1) as f64;
    let mut out: Vec<f64> = (0..n)
        .map(|i| start * ratio.powf(i as f64 / last))
        .collect();
    out[0] = start;
    out[n - 1] = end;
    Ok(out)
}

/// Geometric grid with (at least) `per_decade` points per factor of ten.
pub fn per_decade(start: f64, end: f64, per_decade: usize) -> Result<Vec<f64>> {
    if per_decade == 0 {
        return Err(Error::Domain("per_decade must be positive".into()));
    }
    if !(start > 0.0 && end >= start) {
        return Err(Error::Domain(format!(
            "grid needs 0 < start <= end, got [{start}, {end}]"
        )));
    }
    let decades = (end / start).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1) + 1;
    geometric(start, end, n)
}

/// Geometric grid given by its natural-log endpoints, useful when the
/// endpoints themselves would overflow.
pub fn exp_spaced(log_start: f64, log_end: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![log_start.exp(); n];
    }
    let step = (log_end - log_start) / (n - 1) as f64;
    (0..n).map(|i| (log_start + step * i as f64).exp()).collect()
}

/// Uniform grid on `[start, end]` with `n` points.
pub fn linear(start: f64, end: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![start; n];
    }
    let step = (end - start) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
    out[n - 1] = end;
    out
}
