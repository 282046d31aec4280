//! 1-D wave equation on `(0, 1)` with viscoelastic boundary damping
//! `∂_n u + Σ_j w_j θ_{b,j} = 0`, `θ'_{b,j} = −τ_j θ_{b,j} + u_t(b)`.
//!
//! Space uses the trapezoid-weighted second difference (boundary rows carry
//! half mass), time uses leapfrog for `u` and a staggered exponential
//! integrator for `θ`. The boundary node solves a scalar implicit equation,
//! which makes the discrete energy
//! `½ v^{n+½}ᵀ H v^{n+½} + ½ u^{n+1}ᵀ S u^n + ½ Σ w θ^{n+½}²`
//! decrease by exactly `Σ w · 2 tanh(τΔt/2) (θ^n)²` per step.

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::wave::DampingKernel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    /// `A exp(1 − 1/(1 − r²))` for `r = |x − center| / radius < 1`.
    Bump {
        center: f64,
        radius: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Gaussian {
        center: f64,
        sigma: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Zero,
    /// Piecewise linear through `(x, y)`; `x` must cover `[0, 1]`.
    Table { x: Vec<f64>, y: Vec<f64> },
}

fn one() -> f64 {
    1.0
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        match self {
            Profile::Bump { center, radius, amplitude } => {
                if !(center.is_finite() && *radius > 0.0 && amplitude.is_finite()) {
                    return bad("bump needs finite center/amplitude and positive radius");
                }
            }
            Profile::Gaussian { center, sigma, amplitude } => {
                if !(center.is_finite() && *sigma > 0.0 && amplitude.is_finite()) {
                    return bad("gaussian needs finite center/amplitude and positive sigma");
                }
            }
            Profile::Zero => {}
            Profile::Table { x, y } => {
                if x.len() != y.len() || x.len() < 2 {
                    return bad("profile table needs matching columns of length >= 2");
                }
                if !x.windows(2).all(|w| w[1] > w[0]) || x[0] > 0.0 || x[x.len() - 1] < 1.0 {
                    return bad("profile table abscissae must increase and cover [0, 1]");
                }
                if !y.iter().all(|v| v.is_finite()) {
                    return bad("profile table values must be finite");
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Bump { center, radius, amplitude } => {
                let r = (x - center) / radius;
                if r.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - 1.0 / (1.0 - r * r)).exp()
                }
            }
            Profile::Gaussian { center, sigma, amplitude } => {
                let r = (x - center) / sigma;
                amplitude * (-0.5 * r * r).exp()
            }
            Profile::Zero => 0.0,
            Profile::Table { x: xs, y: ys } => {
                let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
                let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                ys[k - 1] + t * (ys[k] - ys[k - 1])
            }
        }
    }
}

fn default_cfl() -> f64 {
    defaults::CFL
}

fn default_stride() -> usize {
    25
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WaveConfig {
    pub kernel: DampingKernel,
    /// Number of grid intervals; nodes are `x_i = i/N`.
    pub grid_points: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_final: f64,
    pub initial_displacement: Profile,
    #[serde(default = "zero_profile")]
    pub initial_velocity: Profile,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

fn zero_profile() -> Profile {
    Profile::Zero
}

impl WaveConfig {
    /// Atom `(1, 1)`, `N = 800`, `T = 200`, displacement a smooth bump
    /// supported on the whole interval, zero velocity.
    pub fn stock() -> Self {
        Self {
            kernel: DampingKernel::single(1.0, 1.0).expect("valid atom"),
            grid_points: 800,
            cfl: defaults::CFL,
            t_final: 200.0,
            initial_displacement: Profile::Bump { center: 0.5, radius: 0.5, amplitude: 1.0 },
            initial_velocity: Profile::Zero,
            record_stride: default_stride(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps() as f64
    }

    pub fn steps(&self) -> usize {
        let h = 1.0 / self.grid_points as f64;
        ((self.t_final / (self.cfl * h)).ceil() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.grid_points < 3 {
            return Err(Error::Config("grid_points must be at least 3".into()));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config("t_final must be positive".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be positive".into()));
        }
        self.initial_displacement.validate()?;
        self.initial_velocity.validate()?;
        let work = (self.grid_points as f64 + 1.0) * self.steps() as f64;
        if work > defaults::STEP_BUDGET {
            return Err(Error::Config(format!(
                "{work:.3e} node updates exceed the budget {:.3e}",
                defaults::STEP_BUDGET
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WaveState {
    pub u: Vec<f64>,
    /// Staggered velocity `(u^n − u^{n−1})/Δt`.
    pub v: Vec<f64>,
    /// `theta[b][j]` at the half step preceding `time`.
    pub theta: [Vec<f64>; 2],
    pub time: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub field_energy: Vec<f64>,
    pub memory_energy: Vec<f64>,
    pub dissipation_rate: Vec<f64>,
    pub total_energy: Vec<f64>,
    /// Energy removed by the scheme up to each recorded time.
    #[serde(default)]
    pub discrete_loss: Vec<f64>,
}

impl EnergyTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Trapezoid integral of the dissipation rate over the recorded times.
    pub fn dissipated(&self) -> f64 {
        self.times
            .windows(2)
            .zip(self.dissipation_rate.windows(2))
            .map(|(t, d)| 0.5 * (t[1] - t[0]) * (d[0] + d[1]))
            .sum()
    }

    /// Total energy removed by the scheme; equals E(0) − E(T) up to rounding.
    pub fn discrete_dissipated(&self) -> f64 {
        self.discrete_loss.last().copied().unwrap_or(0.0)
    }

    /// Energy at the recorded time closest to `t` from below.
    pub fn energy_at(&self, t: f64) -> Option<f64> {
        let k = self.times.partition_point(|&s| s <= t);
        (k > 0).then(|| self.total_energy[k - 1])
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["time", "field_energy", "memory_energy", "dissipation_rate", "total_energy"])?;
        for k in 0..self.len() {
            out.write_record(
                [
                    self.times[k],
                    self.field_energy[k],
                    self.memory_energy[k],
                    self.dissipation_rate[k],
                    self.total_energy[k],
                ]
                .iter()
                .map(|v| crate::io::fmt_f64(*v)),
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

struct Recorder<'a> {
    h: f64,
    dt: f64,
    kernel: &'a DampingKernel,
    trace: EnergyTrace,
    e0: f64,
}

impl Recorder<'_> {
    fn record(&mut self, time: f64, u: &[f64], u_prev: &[f64], theta: &[Vec<f64>; 2], loss: f64) -> Result<()> {
        let n = u.len() - 1;
        let mut kinetic = 0.0;
        for i in 0..=n {
            let weight = if i == 0 || i == n { 0.5 * self.h } else { self.h };
            let v = (u[i] - u_prev[i]) / self.dt;
            kinetic += weight * v * v;
        }
        let mut strain = 0.0;
        for i in 0..n {
            strain += (u[i + 1] - u[i]) * (u_prev[i + 1] - u_prev[i]);
        }
        let field = 0.5 * kinetic + 0.5 * strain / self.h;
        let mut memory = 0.0;
        let mut dissipation = 0.0;
        for side in theta {
            for (a, th) in self.kernel.atoms.iter().zip(side) {
                memory += 0.5 * a.w * th * th;
                dissipation += a.w * a.tau * th * th;
            }
        }
        let total = field + memory;
        if self.trace.is_empty() {
            self.e0 = total;
        } else if !total.is_finite() || total > self.e0 * (1.0 + defaults::ENERGY_GROWTH_TOL) {
            return Err(Error::Stability(format!(
                "energy {total:.6e} at t = {time} exceeds E(0) = {:.6e}",
                self.e0
            )));
        }
        let t = &mut self.trace;
        t.times.push(time);
        t.field_energy.push(field);
        t.memory_energy.push(memory);
        t.dissipation_rate.push(dissipation);
        t.total_energy.push(total);
        t.discrete_loss.push(loss);
        Ok(())
    }
}

pub fn simulate(config: &WaveConfig) -> Result<EnergyTrace> {
    simulate_with_state(config).map(|(trace, _)| trace)
}

/// Run the scheme, returning the trace and the final state.
pub fn simulate_with_state(config: &WaveConfig) -> Result<(EnergyTrace, WaveState)> {
    config.validate()?;
    let n = config.grid_points;
    let h = 1.0 / n as f64;
    let steps = config.steps();
    let dt = config.dt();
    let kernel = &config.kernel;
    let decay: Vec<f64> = kernel.atoms.iter().map(|a| (-a.tau * dt).exp()).collect();
    let beta: f64 = kernel
        .atoms
        .iter()
        .zip(&decay)
        .map(|(at, a)| at.w * dt * (1.0 + a) / 4.0)
        .sum();
    let r2 = (dt / h) * (dt / h);
    let bnd_gain = dt / h * beta;
    // Per-step loss of atom j is w_j (1 − a_j)/(2(1 + a_j)) (θ⁺ + θ⁻)².
    let loss_coef: Vec<f64> = kernel
        .atoms
        .iter()
        .zip(&decay)
        .map(|(at, a)| at.w * (1.0 - a) / (2.0 * (1.0 + a)))
        .collect();
    let mut loss = 0.0;

    let u0: Vec<f64> = (0..=n).map(|i| config.initial_displacement.eval(i as f64 * h)).collect();
    let v0: Vec<f64> = (0..=n).map(|i| config.initial_velocity.eval(i as f64 * h)).collect();
    if !u0.iter().chain(&v0).all(|v| v.is_finite()) {
        return Err(Error::Config("initial data must be finite".into()));
    }
    // Taylor start with zero memory: u^{-1} = u^0 − Δt v0 + Δt²/2 · H⁻¹(−S u^0).
    let mut u_prev = vec![0.0; n + 1];
    for i in 0..=n {
        let acc = if i == 0 {
            2.0 * (u0[1] - u0[0]) / (h * h)
        } else if i == n {
            2.0 * (u0[n - 1] - u0[n]) / (h * h)
        } else {
            (u0[i + 1] - 2.0 * u0[i] + u0[i - 1]) / (h * h)
        };
        u_prev[i] = u0[i] - dt * v0[i] + 0.5 * dt * dt * acc;
    }
    let mut u = u0;
    let mut u_next = vec![0.0; n + 1];
    let m = kernel.atoms.len();
    let mut theta = [vec![0.0; m], vec![0.0; m]];

    let mut rec = Recorder { h, dt, kernel, trace: EnergyTrace::default(), e0: 0.0 };
    for step in 0..steps {
        if step % config.record_stride == 0 {
            rec.record(step as f64 * dt, &u, &u_prev, &theta, loss)?;
        }
        for i in 1..n {
            u_next[i] = 2.0 * u[i] - u_prev[i] + r2 * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        }
        for (side, (b, inner)) in [(0usize, 1usize), (n, n - 1)].into_iter().enumerate() {
            let th = &mut theta[side];
            let g_old: f64 = kernel
                .atoms
                .iter()
                .zip(&decay)
                .zip(th.iter())
                .map(|((at, a), t)| at.w * (1.0 + a) * t / 2.0)
                .sum();
            let p = 2.0 * u[b] - u_prev[b] + 2.0 * r2 * (u[inner] - u[b]);
            let x = (p - 2.0 * dt * dt / h * g_old + bnd_gain * u_prev[b]) / (1.0 + bnd_gain);
            u_next[b] = x;
            let vbar = (x - u_prev[b]) / (2.0 * dt);
            for ((t, a), k) in th.iter_mut().zip(&decay).zip(&loss_coef) {
                let old = *t;
                *t = a * old + dt * (1.0 + a) / 2.0 * vbar;
                loss += k * (*t + old) * (*t + old);
            }
        }
        std::mem::swap(&mut u_prev, &mut u);
        std::mem::swap(&mut u, &mut u_next);
    }
    rec.record(steps as f64 * dt, &u, &u_prev, &theta, loss)?;
    let v = u.iter().zip(&u_prev).map(|(a, b)| (a - b) / dt).collect();
    let state = WaveState { u, v, theta, time: steps as f64 * dt };
    Ok((rec.trace, state))
}
