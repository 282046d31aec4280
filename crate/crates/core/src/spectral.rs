//! Exact norms for semigroups whose operator norms are suprema over the
//! spectrum (normal semigroups in particular), on sampled spectra.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{positive_increase_estimate, PositiveIncreaseReport};
use crate::defaults;
use crate::error::{domain, Error, Result};
use crate::functions::{GrowthFunction, Kind};
use crate::grid;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumModel {
    /// Sorted by imaginary part, then real part.
    points: Vec<Complex64>,
    pub profile: Option<GrowthFunction>,
    pub conjugate_closed: bool,
}

impl SpectrumModel {
    pub fn new(mut points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(domain("spectrum needs at least one point"));
        }
        for z in &points {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(domain(format!("non-finite spectral point {z}")));
            }
            if !(z.re < 0.0) {
                return Err(domain(format!("spectral point {z} is not in the open left half-plane")));
            }
        }
        points.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        let conjugate_closed = points.iter().all(|z| {
            let k = points.partition_point(|w| w.im < -z.im - 1e-12);
            points[k..]
                .iter()
                .take_while(|w| w.im <= -z.im + 1e-12)
                .any(|w| (w.re - z.re).abs() <= 1e-12 * z.re.abs().max(1.0))
        });
        Ok(Self { points, profile: None, conjugate_closed })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Spectral bound `max Re z`.
    pub fn spectral_bound(&self) -> f64 {
        self.points.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_k |ir − z_k|`, scanning outward from `r` in the sorted list.
    pub fn distance_to_axis_point(&self, r: f64) -> f64 {
        let k = self.points.partition_point(|z| z.im < r);
        let mut best = f64::INFINITY;
        for z in self.points[k..].iter() {
            if z.im - r >= best {
                break;
            }
            best = best.min(Complex64::new(-z.re, r - z.im).norm());
        }
        for z in self.points[..k].iter().rev() {
            if r - z.im >= best {
                break;
            }
            best = best.min(Complex64::new(-z.re, r - z.im).norm());
        }
        best
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<(f64, f64)> = self.points.iter().map(|z| (z.re, z.im)).collect();
        crate::io::two_column_csv(("re", "im"), &rows)
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let (re, im) = crate::io::read_two_columns(reader)?;
        Self::new(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    }
}

/// Points `−1/f(|β|) ± iβ` for every `β` in the grid.
pub fn spectrum_from_profile(f: &GrowthFunction, beta_grid: &[f64]) -> Result<SpectrumModel> {
    let mut points = Vec::with_capacity(2 * beta_grid.len());
    for &b in beta_grid {
        let v = f.evaluate(b.abs())?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(format!("profile value {v} at {b} is not positive and finite")));
        }
        let re = -1.0 / v;
        points.push(Complex64::new(re, b.abs()));
        if b != 0.0 {
            points.push(Complex64::new(re, -b.abs()));
        }
    }
    let mut spec = SpectrumModel::new(points)?;
    spec.profile = Some(f.clone());
    Ok(spec)
}

/// `max 1/dist(ir, σ)` over `r` in the grid, the spectral ordinates and
/// `{0, ±s}`, all restricted to `|r| ≤ s`.
pub fn resolvent_majorant(spec: &SpectrumModel, s: f64, r_grid: &[f64]) -> f64 {
    let s = s.max(0.0);
    let extra = [0.0, s, -s];
    r_grid
        .iter()
        .chain(spec.points.iter().map(|z| &z.im))
        .chain(extra.iter())
        .filter(|r| r.abs() <= s)
        .map(|&r| 1.0 / spec.distance_to_axis_point(r))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DecayNorm {
    pub value: f64,
    pub log_value: f64,
    /// Imaginary part of the maximising point.
    pub beta_star: f64,
}

/// `max_k e^{t Re z_k} / |z_k|`, maximised in log space.
pub fn decay_norm(spec: &SpectrumModel, t: f64) -> DecayNorm {
    let (log_value, idx) = spec
        .points
        .par_iter()
        .enumerate()
        .map(|(k, z)| (t * z.re - z.norm().ln(), k))
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    DecayNorm {
        value: log_value.exp(),
        log_value,
        beta_star: spec.points[idx].im,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Bounded product and positive increase detected.
    #[serde(rename = "consistent")]
    Consistent,
    /// Unbounded product and no positive increase.
    #[serde(rename = "consistent (contrapositive)")]
    ConsistentContrapositive,
    /// Bounded product without positive increase, or the reverse.
    #[serde(rename = "contradiction")]
    Contradiction,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::ConsistentContrapositive => "consistent (contrapositive)",
            Verdict::Contradiction => "contradiction",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumDiagnostics {
    pub delta: f64,
    pub c: f64,
    /// Range of `sup_{|r|≤s} dist(ir,σ)⁻¹ / f(s)` over the positive ordinates.
    pub comparability: (f64, f64),
    pub t: Vec<f64>,
    pub log_decay: Vec<f64>,
    pub beta_star: Vec<f64>,
    /// `ln f⁻¹(c t)`
    pub log_inverse: Vec<f64>,
    pub log_product: Vec<f64>,
    /// Times skipped because `f⁻¹(c t)` is not representable.
    pub skipped: Vec<f64>,
    pub product_sup: f64,
    /// Slope of `ln(product)` against `ln t` over the upper half of the grid.
    pub product_trend: f64,
    pub bounded: bool,
    pub positive_increase: PositiveIncreaseReport,
    pub verdict: Verdict,
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Compare `decay_norm(t)` with `1/f⁻¹(ct)` and cross-check the positive
/// increase detector: bounded decay forces positive increase.
pub fn theorem_consistency_report(
    spec: &SpectrumModel,
    f: &GrowthFunction,
    delta: f64,
    c: f64,
    t_grid: &[f64],
) -> Result<SpectrumDiagnostics> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain(format!("delta must lie in (0,1], got {delta}")));
    }
    if !(c > 0.0) {
        return Err(domain("c must be positive"));
    }
    if matches!(f.kind, Kind::Constant { .. }) {
        return Err(Error::Hypothesis("the growth function must be unbounded".into()));
    }
    let ordinates: Vec<f64> = {
        let mut v: Vec<f64> = spec.points.iter().map(|z| z.im).filter(|&b| b >= f.a && b > 0.0).collect();
        v.dedup();
        v
    };
    if ordinates.is_empty() {
        return Err(Error::Hypothesis("no spectral ordinates inside the domain of f".into()));
    }
    let f_lo = f.evaluate(ordinates[0])?;
    let f_hi = f.evaluate(*ordinates.last().unwrap())?;
    if !(f_hi > f_lo * (1.0 + 1e-12)) {
        return Err(Error::Hypothesis("the growth function must be unbounded".into()));
    }

    let mut running = 1.0 / spec.distance_to_axis_point(0.0);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &b in &ordinates {
        running = running.max(1.0 / spec.distance_to_axis_point(b));
        let ratio = running / f.evaluate(b)?;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    if lo < delta {
        return Err(Error::Hypothesis(format!(
            "comparability fails: sup dist⁻¹ / f drops to {lo:.4} < delta = {delta}"
        )));
    }

    let mut out = SpectrumDiagnostics {
        delta,
        c,
        comparability: (lo, hi),
        t: Vec::new(),
        log_decay: Vec::new(),
        beta_star: Vec::new(),
        log_inverse: Vec::new(),
        log_product: Vec::new(),
        skipped: Vec::new(),
        product_sup: 0.0,
        product_trend: 0.0,
        bounded: false,
        positive_increase: positive_increase_estimate(f, &defaults::LAMBDAS, &{
            let start = f.a.max(10.0);
            grid::per_decade(start, start * 1e12, defaults::S_PER_DECADE)?
        })?,
        verdict: Verdict::Contradiction,
    };
    for &t in t_grid {
        let inv = match f.inverse(c * t) {
            Ok(r) if r > 0.0 => r,
            Ok(_) | Err(Error::Range(_)) => {
                out.skipped.push(t);
                continue;
            }
            Err(e) => return Err(e),
        };
        let dn = decay_norm(spec, t);
        out.t.push(t);
        out.log_decay.push(dn.log_value);
        out.beta_star.push(dn.beta_star);
        out.log_inverse.push(inv.ln());
        out.log_product.push(dn.log_value + inv.ln());
    }
    if out.t.len() < 2 {
        return Err(domain("fewer than two usable times in the grid"));
    }
    out.product_sup = out.log_product.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
    let half = out.t.len() / 2;
    let ln_t: Vec<f64> = out.t[half..].iter().map(|t| t.ln()).collect();
    out.product_trend = slope(&ln_t, &out.log_product[half..]);
    out.bounded = out.product_trend <= defaults::PRODUCT_TREND_TOL;
    out.verdict = match (out.bounded, out.positive_increase.detected) {
        (true, true) => Verdict::Consistent,
        (false, false) => Verdict::ConsistentContrapositive,
        _ => Verdict::Contradiction,
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, SQRT_2};

    #[test]
    fn profile_points() {
        let s = spectrum_from_profile(&GrowthFunction::power(2.0), &[1.0]).unwrap();
        assert_eq!(s.points(), &[Complex64::new(-1.0, -1.0), Complex64::new(-1.0, 1.0)]);
        assert!(s.conjugate_closed);
        let l = spectrum_from_profile(&GrowthFunction::log_power(1.0, 1.0), &[E]).unwrap();
        assert_eq!(l.points()[1], Complex64::new(-1.0, E));
    }

    #[test]
    fn majorant_examples() {
        let s = spectrum_from_profile(&GrowthFunction::power(2.0), &[1.0]).unwrap();
        assert!((resolvent_majorant(&s, 0.0, &[]) - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((resolvent_majorant(&s, 1.0, &[]) - 1.0).abs() < 1e-15);
        let single = SpectrumModel::new(vec![Complex64::new(-2.0, 0.0)]).unwrap();
        assert_eq!(resolvent_majorant(&single, 5.0, &[0.3, 1.0]), 0.5);
    }

    #[test]
    fn decay_norm_examples() {
        let s = SpectrumModel::new(vec![Complex64::new(-1.0, 1.0)]).unwrap();
        assert!(!s.conjugate_closed);
        assert!((decay_norm(&s, 0.0).value - 1.0 / SQRT_2).abs() < 1e-15);
        let r = SpectrumModel::new(vec![Complex64::new(-2.0, 0.0)]).unwrap();
        let d = decay_norm(&r, 1.0);
        assert!((d.value - 0.5 * (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_closed_half_plane() {
        assert!(SpectrumModel::new(vec![Complex64::new(0.0, 1.0)]).is_err());
        assert!(SpectrumModel::new(vec![]).is_err());
    }

    #[test]
    fn consistency_power_and_log() {
        let betas = grid::per_decade(1.0, 1e8, 48).unwrap();
        let ts = grid::geometric(10.0, 1e5, 20).unwrap();
        let p = GrowthFunction::power(2.0);
        let rep = theorem_consistency_report(&spectrum_from_profile(&p, &betas).unwrap(), &p, 0.9, 1.0, &ts).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);

        let lbetas = grid::per_decade(E * E, 1e60, 48).unwrap();
        let l = GrowthFunction::log_power(1.0, 1.0);
        let ts = grid::geometric(10.0, 500.0, 20).unwrap();
        let rep = theorem_consistency_report(&spectrum_from_profile(&l, &lbetas).unwrap(), &l, 0.9, 1.0, &ts).unwrap();
        assert!(!rep.bounded);
        assert_eq!(rep.verdict, Verdict::ConsistentContrapositive);
    }

    #[test]
    fn constant_is_rejected() {
        let s = SpectrumModel::new(vec![Complex64::new(-1.0, 0.0)]).unwrap();
        let r = theorem_consistency_report(&s, &GrowthFunction::constant(1.0), 0.9, 1.0, &[1.0, 2.0]);
        assert!(matches!(r, Err(Error::Hypothesis(_))));
    }
}
