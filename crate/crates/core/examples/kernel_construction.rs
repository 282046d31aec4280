//! Damping kernels: a single exponential atom, and a discretised kernel
//! k(t) ~ t^{α−1} built from a regularly varying density.

use resolvent_decay::wave::{gamma_positive, kernel_from_regvar, m_from_kernel, DampingKernel, SlowFactor};
use resolvent_decay::Result;

fn main() -> Result<()> {
    let single = DampingKernel::single(1.0, 1.0)?;
    let m = m_from_kernel(&single)?;
    // 1/Re K̂(is) = (1 + s²)/1 for one atom with τ = w = 1.
    for s in [1.0, 10.0, 100.0] {
        println!("single atom: M({s}) = {:.6}  (1 + s^2 = {})", m.evaluate(s)?, 1.0 + s * s);
    }

    // α = 1, ℓ ≡ 1: g(τ) = 2/(πτ) on [1, ∞), so s·Re 𝓕k(s) = (2/π)(π/2 − arctan(1/s)).
    let built = kernel_from_regvar(1.0, &SlowFactor::Constant(1.0), 1e6, 200)?;
    println!(
        "regvar kernel: {} atoms, total weight {:.6}, tail mass {:.2e}",
        built.kernel.atoms.len(),
        built.kernel.total_weight(),
        built.tail_mass
    );
    let pi = std::f64::consts::PI;
    for s in [1.0, 10.0, 100.0, 1000.0] {
        println!(
            "s = {s:>6}: s Re Fk(s) = {:.6}   closed form {:.6}",
            s * built.kernel.impedance_real(s),
            2.0 / pi * (pi / 2.0 - (1.0 / s).atan())
        );
    }
    println!("Gamma(1/2)^2 = {:.9} (pi = {:.9})", gamma_positive(0.5)?.powi(2), pi);
    Ok(())
}
