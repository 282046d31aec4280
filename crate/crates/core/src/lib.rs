//! Decay rates of operator semigroups from resolvent-growth functions.
//!
//! - [`functions`]: growth functions `M`, their right-inverses and tables.
//! - [`classes`]: regular variation, positive increase, quasi-positive
//!   increase and the minimal auxiliary function.
//! - [`transforms`]: `M_log`, `M_max`, `M_K`, `M_N` and decay envelopes.
//! - [`spectral`]: exact norms on sampled spectra.
//! - [`wave`]: damped 1-D wave equation, kernels and impedance.

// `!(x > 0.0)` guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod cli;
pub mod defaults;
pub mod error;
pub mod functions;
pub mod grid;
pub mod io;
pub mod optimize;
pub mod quadrature;
pub mod spectral;
pub mod transforms;
pub mod wave;

pub use error::{Error, Result};
pub use functions::GrowthFunction;
