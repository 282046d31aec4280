//! Positive, continuous, non-decreasing functions on a half-line `[a, ∞)`:
//! the resolvent-growth functions every other module consumes.
//!
//! A [`GrowthFunction`] is a closed recursive description ([`Kind`]) plus
//! its domain start `a`. Descriptions serialize to JSON as
//! `{"kind": "power", "alpha": 2.0, "a": 1.0}`; composite kinds nest their
//! operands under `base`, `left`/`right` or `aux`.

mod inverse;
mod karamata;
mod table;

pub use inverse::DEFAULT_INVERSE_TOL;
pub use karamata::{IndexFn, KaramataRep, ScalarFn};
pub use table::{Interpolation, MonotoneTable};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::wave::DampingKernel;

fn default_floor() -> f64 {
    1.0
}

fn default_mmax_grid() -> usize {
    crate::defaults::M_MAX_GRID
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    /// `s^α`
    Power { alpha: f64 },
    /// `max(floor, (ln s)^α)` for `s > 1`, `floor` otherwise.
    LogPower {
        alpha: f64,
        #[serde(default = "default_floor")]
        floor: f64,
    },
    /// `exp((ln s)^α)` for `s ≥ 1`, `1` otherwise, with `α ∈ (0, 1)`.
    ExpLogPower { alpha: f64 },
    Constant { value: f64 },
    /// `s^index · ℓ(s)` with `ℓ` in Karamata form.
    Karamata { rep: KaramataRep, index: f64 },
    Tabulated { table: MonotoneTable },
    Scaled { base: Box<GrowthFunction>, factor: f64 },
    MaxOf {
        left: Box<GrowthFunction>,
        right: Box<GrowthFunction>,
    },
    /// `M(s)(ln(1+s) + ln(1+M(s)))`
    MLogInfinity { base: Box<GrowthFunction> },
    /// `M(s)(ln s + ln(1+M(s)))`
    MLogZero { base: Box<GrowthFunction> },
    /// `max_{1≤λ≤s} M(s/λ) ln λ`, evaluated pointwise.
    MMax {
        base: Box<GrowthFunction>,
        #[serde(default = "default_mmax_grid")]
        grid_size: usize,
    },
    /// `M(s) K(s)` with `K = N (1 + 3 ln N / (2N))`.
    MK {
        base: Box<GrowthFunction>,
        aux: Box<GrowthFunction>,
    },
    /// `M(s) N(s)`
    MN {
        base: Box<GrowthFunction>,
        aux: Box<GrowthFunction>,
    },
    /// `1 / Re 𝓕k(s)` for a finite completely monotone kernel.
    ReciprocalImpedance { kernel: DampingKernel },
    /// `s^α / ℓ(s)`
    PowerOver { alpha: f64, slow: Box<GrowthFunction> },
    #[serde(skip)]
    Custom { name: String, f: ScalarFn },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthFunction {
    #[serde(flatten)]
    pub kind: Kind,
    #[serde(default)]
    pub a: f64,
}

/// `x^α` with exact small integer powers.
fn pow(x: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        x
    } else if alpha == 2.0 {
        x * x
    } else {
        x.powf(alpha)
    }
}

/// `N (1 + 3 ln N / (2N)) = N + 1.5 ln N`.
pub fn k_factor(n: f64) -> f64 {
    n + 1.5 * n.ln()
}

impl GrowthFunction {
    pub fn new(kind: Kind, a: f64) -> Result<Self> {
        let f = Self { kind, a };
        f.validate()?;
        Ok(f)
    }

    pub fn power(alpha: f64) -> Self {
        Self { kind: Kind::Power { alpha }, a: 0.0 }
    }

    pub fn log_power(alpha: f64, floor: f64) -> Self {
        Self { kind: Kind::LogPower { alpha, floor }, a: 0.0 }
    }

    pub fn exp_log_power(alpha: f64) -> Self {
        Self { kind: Kind::ExpLogPower { alpha }, a: 0.0 }
    }

    pub fn constant(value: f64) -> Self {
        Self { kind: Kind::Constant { value }, a: 0.0 }
    }

    pub fn tabulated(table: MonotoneTable) -> Self {
        let a = table.start();
        Self { kind: Kind::Tabulated { table }, a }
    }

    pub fn karamata(rep: KaramataRep, index: f64) -> Self {
        let a = rep.a;
        Self { kind: Kind::Karamata { rep, index }, a }
    }

    pub fn custom(name: &str, a: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: Kind::Custom { name: name.to_string(), f: ScalarFn::new(f) },
            a,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        let a = self.a;
        Self { kind: Kind::Scaled { base: Box::new(self), factor }, a }
    }

    /// Same function with domain start moved to `a` (which must not lie
    /// below the current start of any operand).
    pub fn with_start(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn domain_start(&self) -> f64 {
        self.a
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(domain(format!("domain start must be finite and >= 0, got {}", self.a)));
        }
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match &self.kind {
            Kind::Power { alpha } => positive("alpha", *alpha),
            Kind::LogPower { alpha, floor } => {
                positive("alpha", *alpha)?;
                positive("floor", *floor)
            }
            Kind::ExpLogPower { alpha } => {
                if *alpha > 0.0 && *alpha < 1.0 {
                    Ok(())
                } else {
                    Err(domain(format!("exp_log_power alpha must lie in (0,1), got {alpha}")))
                }
            }
            Kind::Constant { value } => positive("value", *value),
            Kind::Karamata { rep, index } => {
                rep.validate()?;
                if !index.is_finite() {
                    return Err(domain("karamata index must be finite"));
                }
                if self.a < rep.a {
                    return Err(domain("domain start below Karamata base point"));
                }
                Ok(())
            }
            Kind::Tabulated { table } => {
                if self.a < table.start() {
                    return Err(domain("domain start below first table abscissa"));
                }
                Ok(())
            }
            Kind::Scaled { base, factor } => {
                positive("factor", *factor)?;
                base.validate()
            }
            Kind::MaxOf { left, right } => {
                left.validate()?;
                right.validate()
            }
            Kind::MLogInfinity { base } | Kind::MLogZero { base } => base.validate(),
            Kind::MMax { base, grid_size } => {
                if *grid_size < 3 {
                    return Err(domain("m_max grid needs at least 3 points"));
                }
                base.validate()
            }
            Kind::MK { base, aux } | Kind::MN { base, aux } => {
                base.validate()?;
                aux.validate()
            }
            Kind::ReciprocalImpedance { kernel } => kernel.validate(),
            Kind::PowerOver { alpha, slow } => {
                positive("alpha", *alpha)?;
                slow.validate()
            }
            Kind::Custom { .. } => Ok(()),
        }
    }

    /// `M(s)`; errors when `s` is below the domain start or outside a
    /// table's range.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        if !(s >= self.a) || s.is_nan() {
            return Err(domain(format!("{s} below domain start {}", self.a)));
        }
        self.eval_kind(s)
    }

    fn eval_kind(&self, s: f64) -> Result<f64> {
        Ok(match &self.kind {
            Kind::Power { alpha } => pow(s, *alpha),
            Kind::LogPower { alpha, floor } => {
                if s <= 1.0 {
                    *floor
                } else {
                    floor.max(pow(s.ln(), *alpha))
                }
            }
            Kind::ExpLogPower { alpha } => {
                if s <= 1.0 {
                    1.0
                } else {
                    s.ln().powf(*alpha).exp()
                }
            }
            Kind::Constant { value } => *value,
            Kind::Karamata { rep, index } => s.powf(*index) * rep.eval(s)?,
            Kind::Tabulated { table } => table.eval(s)?,
            Kind::Scaled { base, factor } => factor * base.evaluate(s)?,
            Kind::MaxOf { left, right } => left.evaluate(s)?.max(right.evaluate(s)?),
            Kind::MLogInfinity { base } => {
                if s <= 0.0 {
                    return Err(domain("M_log is restricted to s > 0"));
                }
                let m = base.evaluate(s)?;
                m * (s.ln_1p() + m.ln_1p())
            }
            Kind::MLogZero { base } => {
                if s < 1.0 {
                    return Err(domain("M_log at zero is defined on [1, ∞)"));
                }
                let m = base.evaluate(s)?;
                m * (s.ln() + m.ln_1p())
            }
            Kind::MMax { base, grid_size } => crate::transforms::m_max(base, s, *grid_size)?,
            Kind::MK { base, aux } => {
                let n = aux.evaluate(s)?;
                if n < 1.0 - 1e-9 {
                    return Err(domain(format!("K(s) needs N(s) >= 1, got N({s}) = {n}")));
                }
                base.evaluate(s)? * k_factor(n)
            }
            Kind::MN { base, aux } => base.evaluate(s)? * aux.evaluate(s)?,
            Kind::ReciprocalImpedance { kernel } => 1.0 / kernel.impedance_real(s),
            Kind::PowerOver { alpha, slow } => s.powf(*alpha) / slow.evaluate(s)?,
            Kind::Custom { f, .. } => f.call(s),
        })
    }
}

/// `ℓ(s) = q0 · exp(∫_a^s p(τ)/τ dτ)` as a growth function on `[a, ∞)`.
pub fn karamata_build(rep: KaramataRep) -> Result<GrowthFunction> {
    rep.validate()?;
    Ok(GrowthFunction::karamata(rep, 0.0))
}

/// Pointwise maximum of two functions sharing a domain start.
pub fn combine_max(f: &GrowthFunction, g: &GrowthFunction) -> Result<GrowthFunction> {
    if f.a != g.a {
        return Err(domain(format!(
            "combine_max needs equal domain starts, got {} and {}",
            f.a, g.a
        )));
    }
    Ok(GrowthFunction {
        kind: Kind::MaxOf { left: Box::new(f.clone()), right: Box::new(g.clone()) },
        a: f.a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn closed_forms() {
        assert_eq!(GrowthFunction::power(2.0).evaluate(3.0).unwrap(), 9.0);
        assert_eq!(GrowthFunction::log_power(1.0, 1.0).evaluate(E).unwrap(), 1.0);
        assert!((GrowthFunction::log_power(1.0, 1.0).evaluate(E.powi(3)).unwrap() - 3.0).abs() < 1e-12);
        let el = GrowthFunction::exp_log_power(0.5);
        assert!((el.evaluate(E.powi(16)).unwrap() - E.powi(4)).abs() < 1e-9);
        assert_eq!(el.evaluate(0.5).unwrap(), 1.0);
    }

    #[test]
    fn max_of_powers() {
        let f = GrowthFunction::power(1.0).with_start(1.0);
        let g = GrowthFunction::power(2.0).with_start(1.0);
        let m = combine_max(&f, &g).unwrap();
        assert_eq!(m.evaluate(4.0).unwrap(), 16.0);
        let m0 = combine_max(&GrowthFunction::power(1.0), &GrowthFunction::power(2.0)).unwrap();
        assert_eq!(m0.evaluate(0.5).unwrap(), 0.5);
        assert!(combine_max(&f, &GrowthFunction::power(2.0)).is_err());
    }

    #[test]
    fn max_is_idempotent() {
        let f = GrowthFunction::exp_log_power(0.5);
        let m = combine_max(&f, &f).unwrap();
        for s in crate::grid::geometric(0.1, 1e6, 100).unwrap() {
            assert_eq!(m.evaluate(s).unwrap(), f.evaluate(s).unwrap());
        }
    }

    #[test]
    fn domain_errors() {
        let f = GrowthFunction::power(2.0).with_start(1.0);
        assert!(matches!(f.evaluate(0.5), Err(Error::Domain(_))));
        let t = MonotoneTable::new(vec![1.0, 2.0], vec![1.0, 2.0]).unwrap();
        let g = GrowthFunction::tabulated(t);
        assert!(matches!(g.evaluate(3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn karamata_constant_index_is_power() {
        let rep = KaramataRep::new(IndexFn::Constant { value: 2.0 }, 1.0, 1.0).unwrap();
        let f = karamata_build(rep).unwrap();
        assert!((f.evaluate(3.0).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let f = GrowthFunction::from_json(r#"{"kind": "power", "alpha": 2, "a": 1.0}"#).unwrap();
        assert_eq!(f.evaluate(3.0).unwrap(), 9.0);
        let nested = combine_max(
            &GrowthFunction::log_power(1.0, 1.0),
            &GrowthFunction::power(0.5).scaled(2.0),
        )
        .unwrap();
        let text = nested.to_json().unwrap();
        let back = GrowthFunction::from_json(&text).unwrap();
        assert_eq!(back.evaluate(7.0).unwrap(), nested.evaluate(7.0).unwrap());
        let lp = GrowthFunction::from_json(r#"{"kind": "log_power", "alpha": 1}"#).unwrap();
        assert_eq!(lp.evaluate(2.0).unwrap(), 1.0);
    }

    #[test]
    fn invalid_descriptions_are_rejected() {
        assert!(GrowthFunction::from_json(r#"{"kind": "power", "alpha": -1}"#).is_err());
        assert!(GrowthFunction::from_json(r#"{"kind": "exp_log_power", "alpha": 1.5}"#).is_err());
        assert!(GrowthFunction::from_json(r#"{"kind": "nope"}"#).is_err());
        let custom = GrowthFunction::custom("sq", 0.0, |s| s * s);
        assert!(custom.to_json().is_err());
    }

    #[test]
    fn k_factor_values() {
        assert!((k_factor(E) - (E + 1.5)).abs() < 1e-15);
        assert_eq!(k_factor(1.0), 1.0);
        assert!((k_factor(5.0) - 7.414_156_868_651_15).abs() < 1e-9);
    }
}
