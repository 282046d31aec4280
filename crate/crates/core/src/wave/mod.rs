//! Wave equation with viscoelastic boundary damping: kernels, impedance,
//! time-domain simulation and decay fits.

mod fit;
mod kernel;
mod sim;

pub use fit::{fit_decay, fit_series, DecayFit, DecayModel};
pub use kernel::{
    gamma_positive, kernel_from_regvar, m_from_kernel, regvar_density, Atom, DampingKernel, RegvarKernel,
    SlowFactor,
};
pub use sim::{simulate, simulate_with_state, EnergyTrace, Profile, WaveConfig, WaveState};
