//! Finite completely monotone kernels `k(t) = Σ w_j e^{−τ_j t}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::functions::{GrowthFunction, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub tau: f64,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampingKernel {
    pub atoms: Vec<Atom>,
    /// Lower bound on the atom locations.
    pub epsilon: f64,
}

impl DampingKernel {
    pub fn new(atoms: Vec<(f64, f64)>, epsilon: f64) -> Result<Self> {
        let k = Self {
            atoms: atoms.into_iter().map(|(tau, w)| Atom { tau, w }).collect(),
            epsilon,
        };
        k.validate()?;
        Ok(k)
    }

    /// One atom at `tau` with weight `w`; `epsilon` is set to `tau`.
    pub fn single(tau: f64, w: f64) -> Result<Self> {
        Self::new(vec![(tau, w)], tau)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(domain("kernel epsilon must be positive"));
        }
        if self.atoms.is_empty() {
            return Err(domain("kernel needs at least one atom"));
        }
        for a in &self.atoms {
            if !(a.tau.is_finite() && a.tau >= self.epsilon) {
                return Err(domain(format!("atom location {} below epsilon {}", a.tau, self.epsilon)));
            }
            if !(a.w.is_finite() && a.w > 0.0) {
                return Err(domain(format!("atom weight must be positive, got {}", a.w)));
            }
        }
        Ok(())
    }

    /// Multiply every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let k = Self {
            atoms: self.atoms.iter().map(|a| Atom { tau: a.tau, w: a.w * factor }).collect(),
            epsilon: self.epsilon,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn kernel_eval(&self, t: f64) -> f64 {
        self.atoms.iter().map(|a| a.w * (-a.tau * t).exp()).sum()
    }

    /// `Re 𝓕k(s) = Σ w_j τ_j / (τ_j² + s²)`.
    pub fn impedance_real(&self, s: f64) -> f64 {
        self.atoms.iter().map(|a| a.w * a.tau / (a.tau * a.tau + s * s)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<(f64, f64)> = self.atoms.iter().map(|a| (a.tau, a.w)).collect();
        crate::io::two_column_csv(("tau", "w"), &rows)
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R, epsilon: Option<f64>) -> Result<Self> {
        let (tau, w) = crate::io::read_two_columns(reader)?;
        let eps = epsilon.unwrap_or_else(|| tau.iter().cloned().fold(f64::INFINITY, f64::min));
        Self::new(tau.into_iter().zip(w).collect(), eps)
    }
}

/// `M(s) = 1 / Re 𝓕k(s)` on `[0, ∞)`.
pub fn m_from_kernel(kernel: &DampingKernel) -> Result<GrowthFunction> {
    kernel.validate()?;
    Ok(GrowthFunction {
        kind: Kind::ReciprocalImpedance { kernel: kernel.clone() },
        a: 0.0,
    })
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for `x ∈ (0, 2]`.
pub fn gamma_positive(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 2.0) {
        return Err(domain(format!("gamma_positive needs x in (0, 2], got {x}")));
    }
    // Γ(x) = Γ(x+1)/x keeps the series argument at or above one.
    let z = x;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let gamma_z1 = (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum;
    Ok(gamma_z1 / x)
}

/// Slowly varying factor of a regularly varying density.
#[derive(Clone, Debug)]
pub enum SlowFactor {
    Constant(f64),
    Function(GrowthFunction),
}

impl SlowFactor {
    fn eval(&self, tau: f64) -> Result<f64> {
        match self {
            SlowFactor::Constant(v) => Ok(*v),
            SlowFactor::Function(f) => f.evaluate(tau),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegvarKernel {
    pub kernel: DampingKernel,
    /// Estimate of `∫_{tau_max}^∞ g(τ)/τ dτ`, taking `ℓ` frozen at `tau_max`.
    pub tail_mass: f64,
}

/// Density `g(τ) = (2−α) τ^{−α} ℓ(τ) / (Γ(α/2) Γ(2−α/2))`.
pub fn regvar_density(alpha: f64, ell: &SlowFactor, tau: f64) -> Result<f64> {
    let norm = gamma_positive(alpha / 2.0)? * gamma_positive(2.0 - alpha / 2.0)?;
    Ok((2.0 - alpha) * tau.powf(-alpha) * ell.eval(tau)? / norm)
}

/// Discretise `g` on `[1, tau_max]` by the midpoint rule in `ln τ`.
pub fn kernel_from_regvar(
    alpha: f64,
    ell: &SlowFactor,
    tau_max: f64,
    atoms_per_decade: usize,
) -> Result<RegvarKernel> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    if !(tau_max > 1.0 && tau_max.is_finite()) {
        return Err(domain("tau_max must exceed 1"));
    }
    if atoms_per_decade == 0 {
        return Err(domain("atoms_per_decade must be positive"));
    }
    let span = tau_max.ln();
    let n = ((tau_max.log10() * atoms_per_decade as f64).ceil() as usize).max(1);
    let h = span / n as f64;
    let mut atoms = Vec::with_capacity(n);
    for j in 0..n {
        let tau = ((j as f64 + 0.5) * h).exp();
        atoms.push((tau, regvar_density(alpha, ell, tau)? * tau * h));
    }
    let tail_mass = regvar_density(alpha, ell, tau_max)? / alpha;
    Ok(RegvarKernel {
        kernel: DampingKernel::new(atoms, 1.0)?,
        tail_mass,
    })
}
