//! Least-squares decay-rate fits of an energy trace.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wave::EnergyTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// `ln E = a − p ln t`
    Power,
    /// `ln E = a − b √t`
    ExpSqrt,
}

impl fmt::Display for DecayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayModel::Power => "power",
            DecayModel::ExpSqrt => "exp_sqrt",
        })
    }
}

impl FromStr for DecayModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(DecayModel::Power),
            "exp_sqrt" => Ok(DecayModel::ExpSqrt),
            _ => Err(Error::Parse(format!("unknown decay model '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub window: (f64, f64),
    pub intercept: f64,
    /// `p` for the power model, `b` for `exp_sqrt`.
    pub rate: f64,
    /// Root-mean-square residual of `ln E`.
    pub residual: f64,
    pub points: usize,
}

/// Fit `(times, energies)` restricted to `window`.
pub fn fit_series(times: &[f64], energies: &[f64], window: (f64, f64), model: DecayModel) -> Result<DecayFit> {
    let (t1, t2) = window;
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Error::Fit(format!("bad window [{t1}, {t2}]")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &e) in times.iter().zip(energies) {
        if t < t1 || t > t2 {
            continue;
        }
        if !(e > 0.0) {
            return Err(Error::Fit(format!("non-positive energy {e} at t = {t}")));
        }
        xs.push(match model {
            DecayModel::Power => t.ln(),
            DecayModel::ExpSqrt => t.sqrt(),
        });
        ys.push(e.ln());
    }
    if xs.len() < 2 {
        return Err(Error::Fit(format!("fewer than two samples in [{t1}, {t2}]")));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(DecayFit {
        model,
        window,
        intercept,
        rate: -slope,
        residual: (rss / n).sqrt(),
        points: xs.len(),
    })
}

/// Fit the total energy of `trace` on `window`.
pub fn fit_decay(trace: &EnergyTrace, window: (f64, f64), model: DecayModel) -> Result<DecayFit> {
    let (first, last) = match (trace.times.first(), trace.times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::Fit("empty trace".into())),
    };
    if window.0 < first || window.1 > last + 1e-9 * last.abs().max(1.0) {
        return Err(Error::Fit(format!(
            "window [{}, {}] outside trace [{first}, {last}]",
            window.0, window.1
        )));
    }
    fit_series(&trace.times, &trace.total_energy, window, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> EnergyTrace {
        let times: Vec<f64> = (1..=400).map(|k| k as f64 * 0.5).collect();
        let e: Vec<f64> = times.iter().map(|&t| f(t)).collect();
        EnergyTrace {
            times,
            field_energy: e.clone(),
            memory_energy: vec![0.0; e.len()],
            dissipation_rate: vec![0.0; e.len()],
            total_energy: e,
            discrete_loss: Vec::new(),
        }
    }

    #[test]
    fn power_law() {
        let tr = synthetic(|t| 4.0 / t);
        let fit = fit_decay(&tr, (20.0, 200.0), DecayModel::Power).unwrap();
        assert!((fit.rate - 1.0).abs() < 1e-6);
        assert!((fit.intercept - 4f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn exp_sqrt_law() {
        let tr = synthetic(|t| (-4.0 * t.sqrt()).exp());
        let fit = fit_decay(&tr, (20.0, 200.0), DecayModel::ExpSqrt).unwrap();
        assert!((fit.rate - 4.0).abs() < 1e-6);
    }

    #[test]
    fn fit_errors() {
        let tr = synthetic(|t| if t > 50.0 { 0.0 } else { 1.0 });
        assert!(matches!(fit_decay(&tr, (20.0, 200.0), DecayModel::Power), Err(Error::Fit(_))));
        let tr = synthetic(|t| 1.0 / t);
        assert!(fit_decay(&tr, (20.0, 500.0), DecayModel::Power).is_err());
        assert!("linear".parse::<DecayModel>().is_err());
    }
}
