//! Slowly varying functions in Karamata form
//! `ℓ(s) = q0 · exp(∫_a^s p(τ)/τ dτ)`.
//!
//! The exponent is integrated in `u = ln τ`, split into unit panels
//! `[ln a + k, ln a + k + 1]`. Completed panels are memoized; a lookup
//! sums the same panel values in the same order as the uncached path, so
//! cached and uncached results agree bit for bit.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature;

/// A user-supplied scalar function, shared between threads.
#[derive(Clone)]
pub struct ScalarFn(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl ScalarFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn call(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarFn(..)")
    }
}

/// The index function `p` of the representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IndexFn {
    Constant { value: f64 },
    /// `p(τ) = 1 / ln(e τ)`, which yields `ℓ(s) = 1 + ln s` for `a = 1`.
    InverseLog,
    #[serde(skip)]
    Custom(ScalarFn),
}

impl IndexFn {
    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            IndexFn::Constant { value } => *value,
            IndexFn::InverseLog => 1.0 / (1.0 + tau.ln()),
            IndexFn::Custom(f) => f.call(tau),
        }
    }
}

#[derive(Debug, Default)]
struct PanelCache {
    // prefix[k] = sum of the first k panel integrals
    prefix: Mutex<Vec<f64>>,
}

const PANEL_TOL: f64 = 1e-14;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KaramataRep {
    pub p: IndexFn,
    pub q0: f64,
    pub a: f64,
    #[serde(skip)]
    cache: Arc<PanelCache>,
}

impl KaramataRep {
    pub fn new(p: IndexFn, q0: f64, a: f64) -> Result<Self> {
        let rep = Self {
            p,
            q0,
            a,
            cache: Arc::default(),
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q0 > 0.0 && self.q0.is_finite()) {
            return Err(domain("Karamata q0 must be positive"));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(domain("Karamata base point a must be positive"));
        }
        // local integrability of p(τ)/τ, probed on the first panel
        self.panel(0)?;
        Ok(())
    }

    fn panel(&self, k: usize) -> Result<f64> {
        let u0 = self.a.ln() + k as f64;
        let p = &self.p;
        quadrature::integrate(|u| p.eval(u.exp()), u0, u0 + 1.0, PANEL_TOL, PANEL_TOL)
    }

    fn partial(&self, k: usize, u: f64) -> Result<f64> {
        let u0 = self.a.ln() + k as f64;
        let p = &self.p;
        quadrature::integrate(|v| p.eval(v.exp()), u0, u, PANEL_TOL, PANEL_TOL)
    }

    fn split(&self, s: f64) -> Result<(usize, f64)> {
        if !(s >= self.a) {
            return Err(domain(format!("{s} below Karamata base point {}", self.a)));
        }
        let u = s.ln();
        let k = (u - self.a.ln()).floor().max(0.0) as usize;
        Ok((k, u))
    }

    /// `∫_a^s p(τ)/τ dτ`, using the panel cache.
    pub fn exponent(&self, s: f64) -> Result<f64> {
        let (k, u) = self.split(s)?;
        let head = {
            let mut prefix = self.cache.prefix.lock().expect("panel cache poisoned");
            if prefix.is_empty() {
                prefix.push(0.0);
            }
            while prefix.len() <= k {
                let j = prefix.len() - 1;
                let next = prefix[j] + self.panel(j)?;
                prefix.push(next);
            }
            prefix[k]
        };
        Ok(head + self.partial(k, u)?)
    }

    /// Same as [`exponent`](Self::exponent) without touching the cache.
    pub fn exponent_uncached(&self, s: f64) -> Result<f64> {
        let (k, u) = self.split(s)?;
        let mut head = 0.0;
        for j in 0..k {
            head += self.panel(j)?;
        }
        Ok(head + self.partial(k, u)?)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        let e = self.exponent(s)?;
        let v = self.q0 * e.exp();
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("ℓ({s}) overflowed")));
        }
        Ok(v)
    }

    /// `p(s)` at a large argument; a value far from zero indicates the
    /// representation is not slowly varying.
    pub fn tail_index(&self, s: f64) -> f64 {
        self.p.eval(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_index_is_constant() {
        let rep = KaramataRep::new(IndexFn::Constant { value: 0.0 }, 3.0, 1.0).unwrap();
        assert_eq!(rep.eval(1.0).unwrap(), 3.0);
        assert_eq!(rep.eval(1e6).unwrap(), 3.0);
    }

    #[test]
    fn inverse_log_gives_one_plus_log() {
        let rep = KaramataRep::new(IndexFn::InverseLog, 1.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        assert!((rep.eval(e).unwrap() - 2.0).abs() < 1e-12);
        let s = 1e8f64;
        assert!((rep.eval(s).unwrap() - (1.0 + s.ln())).abs() < 1e-11);
    }

    #[test]
    fn cache_is_bit_identical() {
        let rep = KaramataRep::new(IndexFn::InverseLog, 1.0, 1.0).unwrap();
        for &s in &[30.0, 1e3, 5.5e5, 2.0, 1e9] {
            assert_eq!(
                rep.exponent(s).unwrap().to_bits(),
                rep.exponent_uncached(s).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn below_base_point_is_domain_error() {
        let rep = KaramataRep::new(IndexFn::InverseLog, 1.0, 2.0).unwrap();
        assert!(matches!(rep.eval(1.0), Err(Error::Domain(_))));
        assert!(KaramataRep::new(IndexFn::InverseLog, 0.0, 1.0).is_err());
    }
}
