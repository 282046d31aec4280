//! Acceptance suite: nine criteria run sequentially, one PASS/FAIL line
//! each, with wall-clock budgets. Oracles are computed here, independently
//! of the library code paths they check.

use std::f64::consts::{E, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resolvent_decay::classes::{positive_increase_estimate, verify_quasi_inequality, QuasiAux};
use resolvent_decay::defaults;
use resolvent_decay::functions::{Interpolation, MonotoneTable};
use resolvent_decay::grid;
use resolvent_decay::spectral::{decay_norm, spectrum_from_profile};
use resolvent_decay::transforms::{self, asymptotic_compare, envelope, m_max, EnvelopeKind, EnvelopeParams};
use resolvent_decay::wave::{
    fit_decay, kernel_from_regvar, simulate, DampingKernel, DecayModel, SlowFactor, WaveConfig,
};
use resolvent_decay::GrowthFunction;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `max_λ M(s/λ) ln λ` by brute force on a dense uniform grid in `ln λ`,
/// with `M(x) = max(1, ln x)^α`.
fn brute_m_max_log_power(alpha: f64, ln_s: f64, points: usize) -> f64 {
    (0..=points)
        .map(|k| {
            let u = ln_s * k as f64 / points as f64;
            (ln_s - u).max(1.0).powf(alpha) * u
        })
        .fold(0.0, f64::max)
}

fn criterion_1() -> Result<String, String> {
    let f = GrowthFunction::log_power(1.0, 1.0);
    let s = E.powi(4);
    let got = ok(m_max(&f, s, defaults::M_MAX_GRID))?;
    let oracle = brute_m_max_log_power(1.0, 4.0, 400_000);
    ensure((got - oracle).abs() <= 1e-6, || format!("m_max(e^4) = {got}, oracle {oracle}"))?;
    ensure((oracle - 4.0).abs() <= 1e-6, || format!("oracle {oracle} differs from 4"))?;
    let mut worst: f64 = 0.0;
    for alpha in [0.5f64, 1.0, 2.0] {
        let c_alpha = alpha.powf(-alpha) * (1.0 + alpha).powf(1.0 + alpha);
        let v = ok(m_max(&GrowthFunction::log_power(alpha, 1.0), E.powi(40), defaults::M_MAX_GRID))?;
        let ratio = v * c_alpha / 40f64.powf(alpha + 1.0);
        ensure((0.999..=1.001).contains(&ratio), || format!("alpha {alpha}: ratio {ratio}"))?;
        worst = worst.max((ratio - 1.0).abs());
    }
    Ok(format!("|m_max(e^4) - 4| = {:.1e}, worst |ratio - 1| = {worst:.1e}", (got - 4.0).abs()))
}

fn criterion_2() -> Result<String, String> {
    let f = GrowthFunction::log_power(1.0, 1.0);
    let (b_lo, b_hi) = (E * E, E.powi(60));
    let betas = ok(grid::per_decade(b_lo, b_hi, 48))?;
    let spec = ok(spectrum_from_profile(&f, &betas))?;
    let env = ok(envelope(
        &f,
        EnvelopeKind::ExactNormal,
        EnvelopeParams::default().with_t_range(100.0, 800.0),
    ))?;
    let mut worst_rel: f64 = 0.0;
    let mut ratios = Vec::new();
    for t in [100.0, 200.0, 400.0, 800.0] {
        let dn = decay_norm(&spec, t);
        let brute = spec
            .points()
            .iter()
            .map(|z| t * z.re - (z.re * z.re + z.im * z.im).sqrt().ln())
            .fold(f64::NEG_INFINITY, f64::max);
        ensure((dn.log_value - brute).abs() <= 1e-12 * brute.abs(), || {
            format!("t={t}: log-space {} vs brute force {brute}", dn.log_value)
        })?;
        let target = -2.0 * t.sqrt();
        let rel = (dn.log_value - target).abs() / target.abs();
        ensure(rel <= 0.02, || format!("t={t}: log decay_norm {} vs {target}", dn.log_value))?;
        worst_rel = worst_rel.max(rel);
        let b = dn.beta_star.abs();
        ensure(b >= 10.0 * b_lo && b <= b_hi / 10.0, || format!("t={t}: beta* = {b:e} not a decade inside"))?;
        let ratio = (dn.log_value - ok(env.log_value(t))?).exp();
        ensure((0.8..=1.2).contains(&ratio), || format!("t={t}: decay_norm / envelope = {ratio}"))?;
        ratios.push(ratio);
    }
    Ok(format!(
        "worst relative log error {worst_rel:.2e}, norm/envelope ratios {}",
        ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(" ")
    ))
}

fn criterion_3() -> Result<String, String> {
    let lambdas = defaults::LAMBDAS;
    let grid12 = ok(grid::per_decade(10.0, 1e12, defaults::S_PER_DECADE))?;

    let p = ok(positive_increase_estimate(&GrowthFunction::power(0.5), &lambdas, &grid12))?;
    ensure(p.detected && (0.45..=0.55).contains(&p.alpha), || {
        format!("power(0.5): detected={} alpha={}", p.detected, p.alpha)
    })?;
    let l = ok(positive_increase_estimate(&GrowthFunction::log_power(1.0, 1.0), &lambdas, &grid12))?;
    ensure(!l.detected, || "log_power(1) detected".into())?;
    let x = ok(positive_increase_estimate(&GrowthFunction::exp_log_power(0.5), &lambdas, &grid12))?;
    ensure(!x.detected, || "exp_log_power(0.5) detected".into())?;

    let xs = ok(grid::per_decade(10.0, 1e42, 64))?;
    let ys: Vec<f64> = xs.iter().map(|&s| s.powf(2.0 + s.ln().ln().sin())).collect();
    let table = ok(MonotoneTable::with_interpolation(xs, ys, Interpolation::LogLinear))?;
    let osc = GrowthFunction::tabulated(table);
    let grid40 = ok(grid::per_decade(10.0, 1e40, defaults::S_PER_DECADE))?;
    let o = ok(positive_increase_estimate(&osc, &lambdas, &grid40))?;
    ensure(o.detected, || format!("oscillating power not detected: m0={} trend={}", o.m_lambda0, o.trend_slope))?;
    Ok(format!(
        "power alpha {:.4}; log trend {:.3}; exp-log trend {:.3}; oscillating alpha {:.3}",
        p.alpha, l.trend_slope, x.trend_slope, o.alpha
    ))
}

fn criterion_4() -> Result<String, String> {
    let m = GrowthFunction::log_power(1.0, 1.0);
    let n = GrowthFunction::log_power(1.0, 1.0).scaled(0.5);
    let c = 2.0 / E;
    let lambdas = ok(grid::geometric(1.0, 1e4, 100))?;
    for k in 0..=16 {
        let ln_s0 = 1.0 + 0.5 * k as f64 - 0.5;
        let ln_s0 = ln_s0.max(1.0);
        let aux = ok(QuasiAux::new(n.clone(), c, ln_s0.exp()))?;
        let s_grid = grid::exp_spaced(ln_s0, 40.0, 400);
        let chk = ok(verify_quasi_inequality(&m, &aux, &lambdas, &s_grid))?;
        if chk.worst_margin >= 1.0 - 1e-9 {
            ensure(ln_s0 <= 8.0, || format!("s0 = e^{ln_s0} exceeds e^8"))?;
            return Ok(format!("s0 = e^{ln_s0}, worst margin {:.6}", chk.worst_margin));
        }
    }
    Err("no s0 <= e^8 found".into())
}

fn criterion_5() -> Result<String, String> {
    let built = ok(kernel_from_regvar(1.0, &SlowFactor::Constant(1.0), 1e6, 200))?;
    let mut worst: f64 = 0.0;
    let mut at_100 = 0.0;
    for s in [10.0, 100.0, 1000.0] {
        let got = s * built.kernel.impedance_real(s);
        let oracle = (2.0 / PI) * (PI / 2.0 - (1.0 / s).atan());
        ensure((got - oracle).abs() <= 1e-3, || format!("s={s}: {got} vs {oracle}"))?;
        worst = worst.max((got - oracle).abs());
        if s == 100.0 {
            at_100 = got;
            ensure((oracle - 0.993634).abs() < 5e-7, || format!("closed form at 100 is {oracle}"))?;
        }
    }
    Ok(format!("s*Re Fk(100) = {at_100:.6}, worst error {worst:.1e}, tail mass {:.1e}", built.tail_mass))
}

fn criterion_6() -> Result<String, String> {
    let stock = WaveConfig::stock();
    let tr = ok(simulate(&stock))?;
    let e0 = tr.total_energy[0];
    let mut worst_step: f64 = f64::NEG_INFINITY;
    for w in tr.total_energy.windows(2) {
        worst_step = worst_step.max((w[1] - w[0]) / e0);
    }
    ensure(worst_step <= 1e-8, || format!("(a) energy rose by {worst_step:e} E(0)"))?;

    let e_t = *tr.total_energy.last().unwrap();
    let balance = (e0 - e_t - tr.dissipated()).abs() / e0;
    ensure(balance <= 0.01, || format!("(b) balance error {balance:e}"))?;
    let exact = (e0 - e_t - tr.discrete_dissipated()).abs() / e0;
    ensure(exact <= 1e-10, || format!("(b) per-step loss misses {exact:e} E(0)"))?;

    let fine = ok(simulate(&WaveConfig { grid_points: 2 * stock.grid_points, ..stock.clone() }))?;
    let e_fine = *fine.total_energy.last().unwrap();
    let change = (e_fine - e_t).abs() / e_t;
    ensure(change < 0.02, || format!("(c) E(T) changes by {change:e} under refinement"))?;

    let quiet = WaveConfig {
        kernel: ok(DampingKernel::single(1.0, 1.0).and_then(|k| k.scaled(1e-8)))?,
        t_final: 10.0,
        ..stock
    };
    let qt = ok(simulate(&quiet))?;
    let q0 = qt.total_energy[0];
    let drift = qt.total_energy.iter().map(|e| (e - q0).abs() / q0).fold(0.0, f64::max);
    ensure(drift <= 1e-5, || format!("(d) drift {drift:e}"))?;
    Ok(format!(
        "max step rise {worst_step:.1e}, balance {balance:.1e} (per-step {exact:.1e}), refinement {change:.1e}, conservative drift {drift:.1e}"
    ))
}

fn criterion_7() -> Result<String, String> {
    let tr = ok(simulate(&WaveConfig::stock()))?;
    let fit = ok(fit_decay(&tr, (20.0, 200.0), DecayModel::Power))?;
    ensure(fit.rate >= 0.9, || format!("fitted p = {}", fit.rate))?;
    Ok(format!("p = {:.4} (rms residual {:.1e})", fit.rate, fit.residual))
}

fn criterion_8() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_261_015);
    let mut checked = 0usize;
    for k in 0..100 {
        let n = rng.gen_range(2..40);
        let mut x = rng.gen_range(0.5..5.0);
        let mut y = rng.gen_range(0.1..10.0);
        let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            xs.push(x);
            ys.push(y);
            x += rng.gen_range(0.01..2.0);
            if rng.gen_bool(0.8) {
                y += rng.gen_range(0.001..5.0);
            }
        }
        let interp = if k % 2 == 0 { Interpolation::Linear } else { Interpolation::LogLinear };
        let table = ok(MonotoneTable::with_interpolation(xs.clone(), ys.clone(), interp))?;
        let f = GrowthFunction::tabulated(table);
        let (y_lo, y_hi) = (ys[0], ys[n - 1]);
        let mut targets: Vec<f64> = (0..20).map(|_| rng.gen_range(y_lo..=y_hi)).collect();
        targets.extend(&ys);
        for yv in targets {
            let r = ok(f.inverse(yv))?;
            let back = ok(f.evaluate(r))?;
            ensure((back - yv).abs() <= 1e-9 * yv, || format!("table {k}: M(M^-1({yv})) = {back}"))?;
            checked += 1;
        }
        for _ in 0..20 {
            let s = rng.gen_range(xs[0]..=xs[n - 1]);
            let r = ok(f.inverse(ok(f.evaluate(s))?))?;
            ensure(r >= s - 1e-9, || format!("table {k}: M^-1(M({s})) = {r}"))?;
        }
    }
    let p2 = GrowthFunction::power(2.0);
    let mut worst: f64 = 0.0;
    for t in ok(grid::geometric(1e-3, 1e6, 50))? {
        let ratio = ok(p2.inverse(2.0 * t))? / ok(p2.inverse(t))?;
        worst = worst.max((ratio - SQRT_2).abs());
    }
    ensure(worst <= 1e-9, || format!("inverse ratio off sqrt 2 by {worst:e}"))?;
    Ok(format!("{checked} round trips, worst |ratio - sqrt 2| = {worst:.1e}"))
}

fn criterion_9() -> Result<String, String> {
    let m = GrowthFunction::log_power(1.0, 1.0);
    let c = 2.0 / E;
    let aux = ok(QuasiAux::new(GrowthFunction::log_power(1.0, 1.0).scaled(0.5), c, E * E))?;
    let params = EnvelopeParams::default().with_c(c).with_aux(aux);
    let quasi = ok(transforms::predict(&m, EnvelopeKind::QuasiFull, params))?;
    // M_K(e^10) = 10 (5 + 1.5 ln 5)
    let mk = 10.0 * (5.0 + 1.5 * 5f64.ln());
    let t = mk / (c * E);
    let v = ok(quasi.value(t))?;
    let rel = (v / (-10f64).exp() - 1.0).abs();
    ensure(rel <= 0.01, || format!("quasi_full at M_K(e^10)/(ce) = {v:e}"))?;

    let exact = ok(envelope(
        &m,
        EnvelopeKind::ExactNormal,
        EnvelopeParams::default().with_t_range(1e3, 1e5),
    ))?;
    let ts = ok(grid::geometric(1e3, 1e5, 40))?;
    let st = ok(asymptotic_compare(&quasi, &exact, &ts))?;
    ensure(st.points == ts.len(), || format!("only {} comparable times", st.points))?;
    ensure(st.log_ratio_min >= 0.9 && st.log_ratio_max <= 1.1, || {
        format!("log ratio in [{}, {}]", st.log_ratio_min, st.log_ratio_max)
    })?;
    Ok(format!(
        "substitution error {rel:.1e}; log ratio in [{:.4}, {:.4}], trend {:+.4}",
        st.log_ratio_min, st.log_ratio_max, st.log_ratio_trend
    ))
}

fn main() {
    let checks: [(&str, Check, Duration); 9] = [
        ("M_max closed form", criterion_1, Duration::from_secs(1)),
        ("normal semigroup exact rate", criterion_2, Duration::from_secs(1)),
        ("positive increase ground truth", criterion_3, Duration::from_secs(1)),
        ("quasi-positive increase inequality", criterion_4, Duration::from_secs(1)),
        ("regularly varying kernel, alpha = 1", criterion_5, Duration::from_secs(1)),
        ("wave simulator physics", criterion_6, Duration::from_secs(5)),
        ("wave decay exponent", criterion_7, Duration::from_secs(5)),
        ("inversion properties", criterion_8, Duration::from_secs(1)),
        ("envelope cross-checks", criterion_9, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(e) => (false, e),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {}: {name} ({:.3} s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
