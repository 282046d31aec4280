//! Rate transforms of a resolvent-growth function and the decay envelopes
//! built from their right-inverses.
//!
//! | envelope       | value at `t`                       | source         |
//! |----------------|------------------------------------|----------------|
//! | `lower`        | `c / M⁻¹(C t)`                     | `M`            |
//! | `bd_upper`     | `1 / M_log⁻¹(c t)`                 | `M_log`        |
//! | `optimal`      | `1 / M⁻¹(c t)`                     | `M`            |
//! | `quasi_full`   | `1 / M_K⁻¹(c e t)`                 | `M_K`          |
//! | `quasi_eps`    | `1 / M_N⁻¹(c e (1−ε) t)`           | `M_N`          |
//! | `quasi_simple` | `N(R)^{3/2} / R`, `R = M_N⁻¹(c e t)` | `M_N`        |
//! | `exact_normal` | `1 / M_max⁻¹(c t)`                 | `M` (tabulated)|
//!
//! Constants hidden in `O(·)` statements are explicit parameters
//! defaulting to one.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::QuasiAux;
use crate::defaults;
use crate::error::{domain, Error, Result};
use crate::functions::{GrowthFunction, Kind, MonotoneTable};
use crate::optimize;

/// `M_log(s) = M(s)(ln(1+s) + ln(1+M(s)))`, restricted to `s > 0`.
pub fn m_log_infinity(f: &GrowthFunction) -> GrowthFunction {
    let a = if f.a > 0.0 { f.a } else { f64::EPSILON };
    GrowthFunction {
        kind: Kind::MLogInfinity { base: Box::new(f.clone()) },
        a,
    }
}

/// `M(s)(ln s + ln(1+M(s)))` on `[1, ∞)`.
pub fn m_log_zero(f: &GrowthFunction) -> Result<GrowthFunction> {
    if f.a < 1.0 {
        return Err(domain(format!(
            "M_log at zero needs a function on [1, ∞), domain starts at {}",
            f.a
        )));
    }
    Ok(GrowthFunction {
        kind: Kind::MLogZero { base: Box::new(f.clone()) },
        a: f.a,
    })
}

/// `max_{1≤λ≤s} M(s/λ) ln λ` by a log-spaced λ scan of `grid_size` points
/// followed by golden-section refinement around the best sample. When the
/// domain of `M` starts above one, λ is capped at `s/a`.
pub fn m_max(f: &GrowthFunction, s: f64, grid_size: usize) -> Result<f64> {
    let lower = f.a.max(1.0);
    if !(s >= lower) {
        return Err(domain(format!("M_max needs s >= {lower}, got {s}")));
    }
    let u_max = (s / lower).ln();
    if u_max <= 0.0 {
        return Ok(0.0);
    }
    f.evaluate(s)?;
    f.evaluate(lower)?;
    let objective = |u: f64| -> f64 {
        let arg = (s * (-u).exp()).clamp(lower, s);
        match f.evaluate(arg) {
            Ok(v) => v * u,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    // The scan walks s/λ down geometrically; refinement uses exact arguments.
    let n = grid_size.max(3);
    let step = u_max / (n - 1) as f64;
    let ratio = (-step).exp();
    let mut arg = s;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..n {
        let v = if i == n - 1 {
            objective(u_max)
        } else {
            match f.evaluate(arg.max(lower)) {
                Ok(v) => v * (step * i as f64),
                Err(_) => f64::NEG_INFINITY,
            }
        };
        if v > best_v {
            best_v = v;
            best_i = i;
        }
        arg *= ratio;
    }
    let (_, best) = optimize::refine_around(
        objective,
        0.0,
        u_max,
        n,
        best_i,
        best_v,
        defaults::M_MAX_XTOL * u_max.max(1.0),
    );
    Ok(best)
}

/// `M_K = M · K` with `K(s) = N(s)(1 + 3 ln N(s) / (2 N(s)))`, defined from
/// `N⁻¹(1)` onward.
pub fn m_k(f: &GrowthFunction, aux: &QuasiAux) -> Result<GrowthFunction> {
    let mut start = f.a.max(aux.n.a);
    if aux.n.evaluate(start)? < 1.0 {
        start = start.max(aux.n.inverse(1.0)?);
    }
    Ok(GrowthFunction {
        kind: Kind::MK {
            base: Box::new(f.clone()),
            aux: Box::new(aux.n.clone()),
        },
        a: start,
    })
}

/// `M_N = M · N`.
pub fn m_n(f: &GrowthFunction, aux: &QuasiAux) -> GrowthFunction {
    GrowthFunction {
        kind: Kind::MN {
            base: Box::new(f.clone()),
            aux: Box::new(aux.n.clone()),
        },
        a: f.a.max(aux.n.a),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Lower,
    BdUpper,
    Optimal,
    QuasiFull,
    QuasiEps,
    QuasiSimple,
    ExactNormal,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 7] = [
        EnvelopeKind::Lower,
        EnvelopeKind::BdUpper,
        EnvelopeKind::Optimal,
        EnvelopeKind::QuasiFull,
        EnvelopeKind::QuasiEps,
        EnvelopeKind::QuasiSimple,
        EnvelopeKind::ExactNormal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvelopeKind::Lower => "lower",
            EnvelopeKind::BdUpper => "bd_upper",
            EnvelopeKind::Optimal => "optimal",
            EnvelopeKind::QuasiFull => "quasi_full",
            EnvelopeKind::QuasiEps => "quasi_eps",
            EnvelopeKind::QuasiSimple => "quasi_simple",
            EnvelopeKind::ExactNormal => "exact_normal",
        }
    }

    pub fn needs_aux(self) -> bool {
        matches!(
            self,
            EnvelopeKind::QuasiFull | EnvelopeKind::QuasiEps | EnvelopeKind::QuasiSimple
        )
    }
}

impl fmt::Display for EnvelopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvelopeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvelopeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown envelope kind '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnvelopeParams {
    /// Argument scaling (value scaling for `lower`).
    pub c: f64,
    /// Argument scaling of the `lower` envelope.
    pub big_c: f64,
    pub epsilon: f64,
    pub aux: Option<QuasiAux>,
    /// Time range the `exact_normal` table must cover.
    pub t_range: Option<(f64, f64)>,
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            big_c: 1.0,
            epsilon: defaults::EPSILON,
            aux: None,
            t_range: None,
        }
    }
}

impl EnvelopeParams {
    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_aux(mut self, aux: QuasiAux) -> Self {
        self.aux = Some(aux);
        self
    }

    pub fn with_t_range(mut self, lo: f64, hi: f64) -> Self {
        self.t_range = Some((lo, hi));
        self
    }
}

/// A computable decay bound `t ↦ envelope(t)`; non-increasing in `t`.
#[derive(Clone, Debug, Serialize)]
pub struct DecayEnvelope {
    pub kind: EnvelopeKind,
    pub source: GrowthFunction,
    pub params: EnvelopeParams,
    #[serde(skip)]
    m_max_table: Option<MonotoneTable>,
}

/// Build an envelope from an already-transformed source (see the module
/// table). `exact_normal` takes the raw `M` and tabulates `M_max` over the
/// preimage of `params.t_range`.
pub fn envelope(f: &GrowthFunction, kind: EnvelopeKind, params: EnvelopeParams) -> Result<DecayEnvelope> {
    if !(params.c > 0.0 && params.big_c > 0.0) {
        return Err(domain("envelope constants must be positive"));
    }
    if !(params.epsilon > 0.0 && params.epsilon < 1.0) {
        return Err(domain("epsilon must lie in (0,1)"));
    }
    if kind.needs_aux() && params.aux.is_none() {
        return Err(domain(format!("{kind} envelope needs an auxiliary function")));
    }
    let m_max_table = if kind == EnvelopeKind::ExactNormal {
        let (t_lo, t_hi) = params
            .t_range
            .ok_or_else(|| domain("exact_normal envelope needs a t range"))?;
        Some(tabulate_m_max(
            f,
            params.c * t_lo,
            params.c * t_hi,
            defaults::M_MAX_TABLE_PER_DECADE,
            defaults::M_MAX_GRID,
        )?)
    } else {
        None
    };
    Ok(DecayEnvelope {
        kind,
        source: f.clone(),
        params,
        m_max_table,
    })
}

/// Apply the transform `kind` needs to the raw growth function `m`, then
/// build the envelope.
pub fn predict(m: &GrowthFunction, kind: EnvelopeKind, params: EnvelopeParams) -> Result<DecayEnvelope> {
    let source = match kind {
        EnvelopeKind::Lower | EnvelopeKind::Optimal | EnvelopeKind::ExactNormal => m.clone(),
        EnvelopeKind::BdUpper => m_log_infinity(m),
        EnvelopeKind::QuasiFull => {
            let aux = params.aux.as_ref().ok_or_else(|| domain("quasi_full needs aux"))?;
            m_k(m, aux)?
        }
        EnvelopeKind::QuasiEps | EnvelopeKind::QuasiSimple => {
            let aux = params.aux.as_ref().ok_or_else(|| domain("quasi envelope needs aux"))?;
            m_n(m, aux)
        }
    };
    envelope(&source, kind, params)
}

/// Tabulate `M_max` on a log grid (`per_decade` points per decade) whose
/// range covers the levels `[y_lo, y_hi]`. Values are made non-decreasing
/// by a running maximum.
pub fn tabulate_m_max(
    f: &GrowthFunction,
    y_lo: f64,
    y_hi: f64,
    per_decade: usize,
    grid_size: usize,
) -> Result<MonotoneTable> {
    if !(y_lo > 0.0 && y_hi >= y_lo) {
        return Err(domain(format!("bad M_max level range [{y_lo}, {y_hi}]")));
    }
    let lower = f.a.max(1.0);
    let m_max_fn = GrowthFunction {
        kind: Kind::MMax { base: Box::new(f.clone()), grid_size },
        a: lower,
    };
    let step = 10f64.powf(1.0 / per_decade as f64);
    let r_lo = m_max_fn.right_inverse(y_lo, None, 1e-4)?;
    let r_hi = m_max_fn.right_inverse(y_hi, None, 1e-4)?;
    let log_start = (r_lo / step.powi(4)).max(lower * step).ln();
    let mut log_end = (r_hi * step.powi(4)).ln();
    loop {
        let n = (((log_end - log_start) / step.ln()).ceil() as usize).max(1) + 1;
        let s = crate::grid::exp_spaced(log_start, log_end, n);
        let mut values = s
            .par_iter()
            .map(|&si| m_max(f, si, grid_size))
            .collect::<Result<Vec<_>>>()?;
        let mut running = 0.0f64;
        for v in values.iter_mut() {
            running = running.max(*v);
            *v = running;
        }
        if values[0] <= 0.0 {
            return Err(Error::Degenerate("M_max vanishes at the table start".into()));
        }
        if *values.last().unwrap() > y_hi || log_end > 700.0 {
            return MonotoneTable::new(s, values);
        }
        log_end += 8.0 * step.ln();
    }
}

impl DecayEnvelope {
    /// Smallest `t` at which the envelope is defined.
    pub fn min_time(&self) -> Result<f64> {
        let base = match &self.m_max_table {
            Some(t) => t.values()[0],
            None => self.source.evaluate(self.source.a)?,
        };
        Ok(match self.kind {
            EnvelopeKind::Lower => base / self.params.big_c,
            EnvelopeKind::QuasiFull | EnvelopeKind::QuasiSimple => base / (self.params.c * E),
            EnvelopeKind::QuasiEps => base / (self.params.c * E * (1.0 - self.params.epsilon)),
            _ => base / self.params.c,
        })
    }

    fn level(&self, t: f64) -> f64 {
        let p = &self.params;
        match self.kind {
            EnvelopeKind::Lower => p.big_c * t,
            EnvelopeKind::QuasiFull | EnvelopeKind::QuasiSimple => p.c * E * t,
            EnvelopeKind::QuasiEps => p.c * E * (1.0 - p.epsilon) * t,
            _ => p.c * t,
        }
    }

    /// The radius `R(t)` whose reciprocal (up to factors) is the envelope.
    pub fn radius(&self, t: f64) -> Result<f64> {
        let y = self.level(t);
        let min = self.min_time()?;
        if !(t >= min) {
            return Err(Error::Range(format!(
                "t = {t} below the envelope's minimal time {min}"
            )));
        }
        match &self.m_max_table {
            Some(table) => table.right_inverse(y),
            None => self.source.inverse(y),
        }
    }

    pub fn log_value(&self, t: f64) -> Result<f64> {
        let r = self.radius(t)?;
        Ok(match self.kind {
            EnvelopeKind::Lower => self.params.c.ln() - r.ln(),
            EnvelopeKind::QuasiSimple => {
                let aux = self.params.aux.as_ref().expect("checked at construction");
                1.5 * aux.n.evaluate(r)?.ln() - r.ln()
            }
            _ => -r.ln(),
        })
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        let r = self.radius(t)?;
        Ok(match self.kind {
            EnvelopeKind::Lower => self.params.c / r,
            EnvelopeKind::QuasiSimple => {
                let aux = self.params.aux.as_ref().expect("checked at construction");
                aux.n.evaluate(r)?.powf(1.5) / r
            }
            _ => 1.0 / r,
        })
    }

    pub fn m_max_table(&self) -> Option<&MonotoneTable> {
        self.m_max_table.as_ref()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompareStats {
    pub points: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Least-squares slope of `ln(e1/e2)` against `ln t`.
    pub ratio_trend: f64,
    pub log_ratio_min: f64,
    pub log_ratio_max: f64,
    /// Least-squares slope of `ln e1 / ln e2` against `ln t`.
    pub log_ratio_trend: f64,
    pub log_ratio_last: f64,
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
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

/// Ratio diagnostics of two envelopes over the grid points where both are
/// defined.
pub fn asymptotic_compare(e1: &DecayEnvelope, e2: &DecayEnvelope, t_grid: &[f64]) -> Result<CompareStats> {
    let mut ln_t = Vec::new();
    let mut ln_ratio = Vec::new();
    let mut log_ratio = Vec::new();
    for &t in t_grid {
        if let (Ok(l1), Ok(l2)) = (e1.log_value(t), e2.log_value(t)) {
            ln_t.push(t.ln());
            ln_ratio.push(l1 - l2);
            log_ratio.push(l1 / l2);
        }
    }
    if ln_t.is_empty() {
        return Err(domain("envelopes share no defined time on the grid"));
    }
    let fold_min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let fold_max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(CompareStats {
        points: ln_t.len(),
        ratio_min: fold_min(&ln_ratio).exp(),
        ratio_max: fold_max(&ln_ratio).exp(),
        ratio_trend: ls_slope(&ln_t, &ln_ratio),
        log_ratio_min: fold_min(&log_ratio),
        log_ratio_max: fold_max(&log_ratio),
        log_ratio_trend: ls_slope(&ln_t, &log_ratio),
        log_ratio_last: *log_ratio.last().unwrap(),
    })
}
