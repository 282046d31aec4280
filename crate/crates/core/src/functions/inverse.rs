//! Right-continuous right-inverse `M⁻¹(y) = sup{r ≥ a : M(r) ≤ y}`.

use super::{GrowthFunction, Kind};
use crate::error::{Error, Result};

pub const DEFAULT_INVERSE_TOL: f64 = 1e-9;

const MAX_BRACKET: f64 = 1e300;
const MAX_BISECTIONS: usize = 4000;

impl GrowthFunction {
    /// `sup{r ≥ a : M(r) ≤ y}` with the default relative tolerance.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        self.right_inverse(y, None, DEFAULT_INVERSE_TOL)
    }

    /// `sup{r ≥ a : M(r) ≤ y}`.
    ///
    /// Tables are inverted exactly segment by segment. Other kinds are
    /// bracketed by doubling from the domain start (or from `bracket_hint`)
    /// and then bisected until both the bracket width is below `tol·r` and
    /// the value gap across it is below `tol·y`. The returned point always
    /// satisfies `M(r) ≤ y`.
    pub fn right_inverse(&self, y: f64, bracket_hint: Option<(f64, f64)>, tol: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::Range("cannot invert at NaN".into()));
        }
        if let Kind::Tabulated { table } = &self.kind {
            return table.right_inverse(y);
        }
        let eval = |r: f64| -> Result<f64> {
            match self.evaluate(r) {
                Ok(v) if v.is_nan() => Err(Error::Convergence(format!("M({r}) is NaN"))),
                Ok(v) => Ok(v),
                Err(Error::Domain(msg)) => Err(Error::Range(format!(
                    "{y} not attained within the representable range ({msg})"
                ))),
                Err(e) => Err(e),
            }
        };

        let (mut lo, mut hi, mut f_lo, mut f_hi) = match bracket_hint {
            Some((lo, hi)) => {
                let (f_lo, f_hi) = (eval(lo)?, eval(hi)?);
                if !(lo >= self.a && lo < hi && f_lo <= y && f_hi > y) {
                    return Err(Error::Convergence(format!(
                        "hint [{lo}, {hi}] does not bracket level {y}"
                    )));
                }
                (lo, hi, f_lo, f_hi)
            }
            None => {
                let lo = self.a;
                let f_lo = eval(lo)?;
                if f_lo > y {
                    return Err(Error::Range(format!(
                        "{y} below M(a) = {f_lo}; the inverse is defined from M(a) upward"
                    )));
                }
                let (mut lo, mut f_lo) = (lo, f_lo);
                let mut hi = if lo > 0.0 { 2.0 * lo } else { 1.0 };
                let mut f_hi = eval(hi)?;
                while f_hi <= y {
                    lo = hi;
                    f_lo = f_hi;
                    hi *= 2.0;
                    if hi > MAX_BRACKET {
                        return Err(Error::Range(format!(
                            "{y} not attained below {MAX_BRACKET:e}"
                        )));
                    }
                    f_hi = eval(hi)?;
                }
                (lo, hi, f_lo, f_hi)
            }
        };

        for _ in 0..MAX_BISECTIONS {
            if hi - lo <= tol * hi && f_hi - f_lo <= tol * y.abs() {
                return Ok(lo);
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(lo);
            }
            let f_mid = eval(mid)?;
            if f_mid <= y {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
                f_hi = f_mid;
            }
        }
        Err(Error::Convergence(format!("bisection for level {y} did not converge")))
    }
}
