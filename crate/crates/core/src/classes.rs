//! Finite-window detectors for regular variation, positive increase and
//! quasi-positive increase, and the pointwise-minimal auxiliary function.
//!
//! The defining conditions are limits as `s → ∞`; here they are evaluated on
//! a finite geometric grid. Positive increase additionally runs a trend
//! test over three nested sub-windows so that ratios which only *look*
//! bounded away from one on a short window (log powers, say) are not
//! misclassified.

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{domain, Error, Result};
use crate::functions::{GrowthFunction, MonotoneTable};
use crate::optimize;

/// Outcome of [`positive_increase_estimate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositiveIncreaseReport {
    pub detected: bool,
    pub lambda0: f64,
    /// `inf_s M(λ0 s)/M(s)` over the window.
    pub m_lambda0: f64,
    /// `1 / m(λ0)`, the constant produced by the liminf argument.
    pub c: f64,
    /// `ln m(λ0) / ln λ0`
    pub alpha: f64,
    /// Largest `c ≤ 1` with `m(λ) ≥ c λ^alpha` on every sampled λ.
    pub c_tight: f64,
    pub s0: f64,
    pub window: (f64, f64),
    /// `d ln(m − 1) / d ln ln s_max` between the last two sub-windows.
    pub trend_slope: f64,
    /// `m(λ0) − 1` on the three nested sub-windows.
    pub sub_window_excess: [f64; 3],
    /// `(λ, m(λ))` for every sampled λ.
    pub inf_ratios: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularVariationReport {
    /// Estimated index, or `None` when the function is judged not
    /// regularly varying.
    pub index: Option<f64>,
    /// Raw estimate at the largest grid point (mean over λ).
    pub raw_index: f64,
    /// Spread `max − min` of the index estimates over λ and the upper
    /// third of the grid.
    pub spread: f64,
    pub per_lambda: Vec<(f64, f64)>,
}

/// Auxiliary data `(N, c, s0)` of a quasi-positive-increase inequality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiAux {
    pub n: GrowthFunction,
    pub c: f64,
    pub s0: f64,
}

impl QuasiAux {
    pub fn new(n: GrowthFunction, c: f64, s0: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(domain(format!("quasi constant c must lie in (0,1], got {c}")));
        }
        Ok(Self { n, c, s0 })
    }

    /// `max N(s) / ln s` over the grid points above `e`; bounded values
    /// confirm the logarithmic growth the quasi envelopes assume.
    pub fn log_growth_bound(&self, s_grid: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &s in s_grid.iter().filter(|&&s| s > std::f64::consts::E && s >= self.n.a) {
            match self.n.evaluate(s) {
                Ok(v) => worst = worst.max(v / s.ln()),
                Err(Error::Domain(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(worst)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiCheck {
    /// `min f(λs) / (f(s) c λ^{1/N(λs)})` over the sampled pairs.
    pub worst_margin: f64,
    pub worst_lambda: f64,
    pub worst_s: f64,
    pub holds: bool,
}

fn check_grid(f: &GrowthFunction, lambdas: &[f64], s_grid: &[f64]) -> Result<()> {
    if s_grid.len() < 6 {
        return Err(domain("s grid too short"));
    }
    if s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("s grid must be strictly increasing"));
    }
    let (lo, hi) = (s_grid[0], *s_grid.last().unwrap());
    if lo < f.a || lo <= 0.0 {
        return Err(domain(format!("s grid starts at {lo}, below the domain start {}", f.a)));
    }
    if (hi / lo).log10() < 3.0 - 1e-9 {
        return Err(domain("s grid must span at least three decades"));
    }
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 1.0)) {
        return Err(domain("lambdas must be > 1"));
    }
    let lmax = lambdas.iter().cloned().fold(1.0, f64::max);
    f.evaluate(lmax * hi).map_err(|e| {
        domain(format!("λ·s_max = {} outside the representable range: {e}", lmax * hi))
    })?;
    Ok(())
}

fn inf_ratio(f: &GrowthFunction, lambda: f64, s: &[f64], fs: &[f64]) -> Result<f64> {
    let mut m = f64::INFINITY;
    for (&si, &fi) in s.iter().zip(fs) {
        m = m.min(f.evaluate(lambda * si)? / fi);
    }
    Ok(m)
}

/// Estimate whether `f` has positive increase on the window spanned by
/// `s_grid`, using the inf-ratio `m(λ) = inf_s f(λs)/f(s)` for each λ.
pub fn positive_increase_estimate(
    f: &GrowthFunction,
    lambdas: &[f64],
    s_grid: &[f64],
) -> Result<PositiveIncreaseReport> {
    positive_increase_with_margin(f, lambdas, s_grid, defaults::POSITIVE_INCREASE_MARGIN)
}

pub fn positive_increase_with_margin(
    f: &GrowthFunction,
    lambdas: &[f64],
    s_grid: &[f64],
    margin: f64,
) -> Result<PositiveIncreaseReport> {
    check_grid(f, lambdas, s_grid)?;
    let fs = s_grid.iter().map(|&s| f.evaluate(s)).collect::<Result<Vec<_>>>()?;
    let mut inf_ratios = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        inf_ratios.push((l, inf_ratio(f, l, s_grid, &fs)?));
    }
    // Largest inf-ratio wins, ties toward the smaller λ.
    let (lambda0, m0) = inf_ratios
        .iter()
        .cloned()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, (l, m)| {
            if m > best.1 || (m == best.1 && l < best.0) {
                (l, m)
            } else {
                best
            }
        });
    let c = 1.0 / m0;
    let alpha = m0.ln() / lambda0.ln();
    let c_tight = if alpha > 0.0 {
        inf_ratios
            .iter()
            .map(|&(l, m)| m / l.powf(alpha))
            .fold(1.0, f64::min)
    } else {
        c.min(1.0)
    };

    let n = s_grid.len();
    let ends = [n / 3, 2 * n / 3, n];
    let mut sub_window_excess = [0.0; 3];
    for (k, &end) in ends.iter().enumerate() {
        sub_window_excess[k] = inf_ratio(f, lambda0, &s_grid[..end], &fs[..end])? - 1.0;
    }
    let (e2, e3) = (sub_window_excess[1], sub_window_excess[2]);
    let (s2, s3) = (s_grid[ends[1] - 1], s_grid[n - 1]);
    let trend_slope = if e2 > 0.0 && e3 > 0.0 && s2 > 1.0 {
        (e3 / e2).ln() / (s3.ln() / s2.ln()).ln()
    } else if e3 <= 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    };

    let detected = m0 > 1.0 + margin && trend_slope >= defaults::DRIFT_SLOPE;
    Ok(PositiveIncreaseReport {
        detected,
        lambda0,
        m_lambda0: m0,
        c,
        alpha,
        c_tight,
        s0: s_grid[0],
        window: (s_grid[0], s_grid[n - 1]),
        trend_slope,
        sub_window_excess,
        inf_ratios,
    })
}

/// Estimate the index of regular variation from `ln(f(λs)/f(s)) / ln λ`.
pub fn regular_variation_estimate(
    f: &GrowthFunction,
    lambdas: &[f64],
    s_grid: &[f64],
) -> Result<RegularVariationReport> {
    check_grid(f, lambdas, s_grid)?;
    let n = s_grid.len();
    let top = &s_grid[2 * n / 3..];
    let s_last = s_grid[n - 1];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut per_lambda = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        for &s in top {
            let est = (f.evaluate(l * s)? / f.evaluate(s)?).ln() / l.ln();
            lo = lo.min(est);
            hi = hi.max(est);
        }
        let at_last = (f.evaluate(l * s_last)? / f.evaluate(s_last)?).ln() / l.ln();
        per_lambda.push((l, at_last));
    }
    let raw_index = per_lambda.iter().map(|p| p.1).sum::<f64>() / per_lambda.len() as f64;
    let spread = hi - lo;
    let scale = raw_index.abs().max(defaults::REGVAR_SPREAD_FLOOR);
    let index = (spread <= defaults::REGVAR_SPREAD * scale).then_some(raw_index);
    Ok(RegularVariationReport {
        index,
        raw_index,
        spread,
        per_lambda,
    })
}

/// Pointwise-minimal auxiliary function for constant `c`:
/// `N(s) = sup_{1<λ≤s/s0} ln λ / ln(f(s) / (c f(s/λ)))`, tabulated on the
/// grid points above `s0` and made non-decreasing by a running maximum.
/// Values of λ with `f(s) ≤ c f(s/λ)` admit no finite `N` and are skipped.
pub fn optimal_auxiliary(f: &GrowthFunction, c: f64, s0: f64, s_grid: &[f64]) -> Result<QuasiAux> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(domain(format!("c must lie in (0,1], got {c}")));
    }
    if !(s0 > 0.0) {
        return Err(domain("s0 must be positive"));
    }
    let ln_c = c.ln();
    let floor_arg = f.a.max(s0);
    let mut xs = Vec::new();
    let mut ns = Vec::new();
    for &s in s_grid.iter().filter(|&&s| s > floor_arg) {
        let fs = f.evaluate(s)?;
        let x_max = (s / floor_arg).ln();
        let x_min = defaults::AUX_MIN_LOG_LAMBDA.min(0.5 * x_max);
        let objective = |v: f64| -> f64 {
            let x = v.exp();
            let lambda = x.exp();
            let arg = (s / lambda).max(f.a);
            match f.evaluate(arg) {
                Ok(fl) => {
                    let denom = (fs / fl).ln() - ln_c;
                    if denom > 0.0 {
                        x / denom
                    } else {
                        f64::NEG_INFINITY
                    }
                }
                Err(_) => f64::NEG_INFINITY,
            }
        };
        let (_, best) = optimize::grid_then_golden(
            objective,
            x_min.ln(),
            x_max.ln(),
            defaults::AUX_LAMBDA_POINTS,
            1e-10,
        );
        if best.is_finite() && best > 0.0 {
            xs.push(s);
            ns.push(best);
        }
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate(
            "auxiliary supremum is empty at (almost) every grid point".into(),
        ));
    }
    let mut running = 0.0f64;
    for v in ns.iter_mut() {
        running = running.max(*v);
        *v = running;
    }
    let table = MonotoneTable::new(xs, ns)?;
    QuasiAux::new(GrowthFunction::tabulated(table), c, s0)
}

/// Worst margin of `f(λs)/f(s) ≥ c λ^{1/N(λs)}` over the sampled pairs with
/// `s ≥ s0`.
pub fn verify_quasi_inequality(
    f: &GrowthFunction,
    aux: &QuasiAux,
    lambda_grid: &[f64],
    s_grid: &[f64],
) -> Result<QuasiCheck> {
    let mut worst = (f64::INFINITY, f64::NAN, f64::NAN);
    let ln_c = aux.c.ln();
    for &s in s_grid.iter().filter(|&&s| s >= aux.s0) {
        let ln_fs = f.evaluate(s)?.ln();
        for &l in lambda_grid {
            if l < 1.0 {
                return Err(domain("λ grid must lie in [1, ∞)"));
            }
            let ls = l * s;
            let n = aux.n.evaluate(ls)?;
            let log_margin = f.evaluate(ls)?.ln() - ln_fs - ln_c - l.ln() / n;
            if log_margin < worst.0 {
                worst = (log_margin, l, s);
            }
        }
    }
    if !worst.0.is_finite() {
        return Err(domain("no (λ, s) pairs at or above s0"));
    }
    let worst_margin = worst.0.exp();
    Ok(QuasiCheck {
        worst_margin,
        worst_lambda: worst.1,
        worst_s: worst.2,
        holds: worst_margin >= 1.0 - defaults::QUASI_TOL,
    })
}
