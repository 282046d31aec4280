//! Command-line front end. Every subcommand writes its artifacts into a
//! staging directory that is renamed onto `--out` once complete.
//!
//! Exit codes: 0 success, 2 parse/config/IO, 3 domain-type failures,
//! 4 numerical instability.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::classes::{self, QuasiAux};
use crate::defaults;
use crate::error::{Error, Result};
use crate::functions::{GrowthFunction, MonotoneTable};
use crate::grid;
use crate::io::{fmt_f64, to_json_pretty};
use crate::spectral;
use crate::transforms::{self, EnvelopeKind, EnvelopeParams};
use crate::wave::{self, DecayModel, SlowFactor, WaveConfig};

#[derive(Debug, Parser)]
#[command(name = "resolvent-decay", version, about = "Semigroup decay rates from resolvent growth")]
pub struct Cli {
    /// Suppress progress messages on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Print the defaults table as JSON and exit.
    #[arg(long)]
    pub show_defaults: bool,
    /// Seed recorded in the run manifest.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a growth function: regular variation, positive increase,
    /// minimal auxiliary function.
    Analyze(AnalyzeArgs),
    /// Evaluate a decay envelope on a log-spaced time grid.
    Predict(PredictArgs),
    /// Synthesize a spectrum from a profile and compare exact norms with
    /// the envelope.
    Spectrum(SpectrumArgs),
    /// Simulate the damped wave equation and fit the energy decay.
    Wave(WaveArgs),
    /// Discretise a regularly varying kernel density into atoms.
    KernelBuild(KernelArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory; must not exist or be empty.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TimeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Growth-function JSON.
    pub spec: PathBuf,
    /// Constant of the quasi-positive-increase inequality, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long, default_value_t = defaults::S_PER_DECADE)]
    pub per_decade: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Growth-function JSON (the raw `M`).
    pub spec: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    pub kind: EnvelopeKind,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Argument scaling of the `lower` envelope.
    #[arg(long, default_value_t = 1.0)]
    pub big_c: f64,
    #[arg(long, default_value_t = defaults::EPSILON)]
    pub epsilon: f64,
    /// Auxiliary-function JSON (`{"n": ..., "c": ..., "s0": ...}`), needed
    /// by the quasi envelopes; `analyze` writes one as `aux.json`.
    #[arg(long)]
    pub aux: Option<PathBuf>,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Profile growth-function JSON.
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 1e8)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 48)]
    pub beta_per_decade: usize,
    #[arg(long, default_value_t = defaults::DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    /// Wave configuration JSON.
    pub config: PathBuf,
    /// Fit window start; defaults to a tenth of the final time.
    #[arg(long)]
    pub fit_t1: Option<f64>,
    #[arg(long)]
    pub fit_t2: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e6)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 200)]
    pub per_decade: usize,
    /// Slowly varying factor as growth-function JSON; constant one if absent.
    #[arg(long)]
    pub ell: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

fn parse_kind(s: &str) -> std::result::Result<EnvelopeKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Record of one invocation, written as `manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<PathBuf>,
    pub parameters: BTreeMap<String, Value>,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub defaults_version: u32,
}

/// Files produced by a subcommand, in write order.
struct Artifacts {
    files: Vec<(String, String)>,
    summary: Vec<String>,
}

impl Artifacts {
    fn new() -> Self {
        Self { files: Vec::new(), summary: Vec::new() }
    }

    fn add(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    if cli.show_defaults {
        say(&to_json_pretty(&defaults::table())?);
        return Ok(());
    }
    let Some(command) = &cli.command else {
        return Err(Error::Config("no subcommand given (see --help)".into()));
    };
    let (name, inputs, out) = match command {
        Command::Analyze(a) => ("analyze", vec![a.spec.clone()], &a.out.out),
        Command::Predict(a) => {
            let mut v = vec![a.spec.clone()];
            v.extend(a.aux.clone());
            ("predict", v, &a.out.out)
        }
        Command::Spectrum(a) => ("spectrum", vec![a.spec.clone()], &a.out.out),
        Command::Wave(a) => ("wave", vec![a.config.clone()], &a.out.out),
        Command::KernelBuild(a) => ("kernel-build", a.ell.iter().cloned().collect(), &a.out.out),
    };
    for p in &inputs {
        if !p.exists() {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("input {} does not exist", p.display()),
            )));
        }
    }
    let (parameters, mut artifacts) = match command {
        Command::Analyze(a) => cmd_analyze(a)?,
        Command::Predict(a) => cmd_predict(a)?,
        Command::Spectrum(a) => cmd_spectrum(a)?,
        Command::Wave(a) => cmd_wave(a)?,
        Command::KernelBuild(a) => cmd_kernel_build(a)?,
    };
    let manifest = RunManifest {
        subcommand: name.to_string(),
        inputs,
        parameters,
        output_dir: out.clone(),
        seed: cli.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        defaults_version: defaults::VERSION,
    };
    artifacts.add("manifest.json", to_json_pretty(&manifest)?);
    write_atomically(out, &artifacts.files)?;
    if !cli.quiet {
        for line in &artifacts.summary {
            say(line);
        }
        for (f, _) in &artifacts.files {
            say(&format!("wrote {}", out.join(f).display()));
        }
    }
    Ok(())
}

/// Print to stdout; a closed pipe is not an error.
fn say(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn write_atomically(out: &Path, files: &[(String, String)]) -> Result<()> {
    if out.exists() && fs::read_dir(out)?.next().is_some() {
        return Err(Error::Config(format!(
            "output directory {} exists and is not empty",
            out.display()
        )));
    }
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent)?;
    let leaf = out
        .file_name()
        .ok_or_else(|| Error::Config(format!("bad output path {}", out.display())))?;
    let staging = parent.join(format!(".{}.partial-{}", leaf.to_string_lossy(), std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir(&staging)?;
    let result = (|| -> Result<()> {
        for (name, content) in files {
            fs::write(staging.join(name), content)?;
        }
        fs::rename(&staging, out)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    result
}

/// Replace `{"kind": "tabulated", "csv": path}` nodes by inline tables,
/// resolving `path` relative to `base`.
fn resolve_tables(value: &mut Value, base: &Path) -> Result<()> {
    match value {
        Value::Object(map) => {
            let is_table_ref = map.get("kind").and_then(Value::as_str) == Some("tabulated") && map.contains_key("csv");
            if is_table_ref {
                let rel = map
                    .remove("csv")
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .ok_or_else(|| Error::Parse("'csv' must be a path string".into()))?;
                let interpolation = map.remove("interpolation");
                let table = MonotoneTable::from_csv_reader(fs::File::open(base.join(rel))?)?;
                let mut table_json = serde_json::to_value(&table)?;
                if let (Some(i), Value::Object(t)) = (interpolation, &mut table_json) {
                    t.insert("interpolation".into(), i);
                }
                map.insert("table".into(), table_json);
            }
            for v in map.values_mut() {
                resolve_tables(v, base)?;
            }
        }
        Value::Array(items) => {
            for v in items {
                resolve_tables(v, base)?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// Load a growth-function JSON file, inlining referenced CSV tables.
pub fn load_function(path: &Path) -> Result<GrowthFunction> {
    let text = fs::read_to_string(path)?;
    let mut value: Value = serde_json::from_str(&text)?;
    resolve_tables(&mut value, path.parent().unwrap_or(Path::new(".")))?;
    let f: GrowthFunction = serde_json::from_value(value)?;
    f.validate()?;
    Ok(f)
}

fn time_grid(t: &TimeArgs) -> Result<Vec<f64>> {
    if !(t.t_min > 0.0) {
        return Err(Error::Config("--t-min must be positive".into()));
    }
    if t.points == 0 {
        return Err(Error::Config("--points must be positive".into()));
    }
    grid::geometric(t.t_min, t.t_max, t.points)
}

fn params<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

type CmdOutput = Result<(BTreeMap<String, Value>, Artifacts)>;

#[derive(Serialize)]
struct AnalyzeReport {
    function: GrowthFunction,
    window: (f64, f64),
    regular_variation: classes::RegularVariationReport,
    positive_increase: classes::PositiveIncreaseReport,
    auxiliary: Option<AuxSummary>,
    auxiliary_error: Option<String>,
}

#[derive(Serialize)]
struct AuxSummary {
    c: f64,
    s0: f64,
    /// `max N(s)/ln s` over the grid.
    log_growth_bound: f64,
    samples: Vec<(f64, f64)>,
}

fn cmd_analyze(a: &AnalyzeArgs) -> CmdOutput {
    let f = load_function(&a.spec)?;
    let lmax = defaults::LAMBDAS.iter().cloned().fold(1.0, f64::max);
    let s_min = a.s_min.unwrap_or_else(|| f.a.max(10.0));
    let s_max = a.s_max.unwrap_or_else(|| match &f.kind {
        crate::functions::Kind::Tabulated { table } => table.end() / lmax,
        _ => 1e12,
    });
    let s_grid = grid::per_decade(s_min, s_max, a.per_decade)?;
    let rv = classes::regular_variation_estimate(&f, &defaults::LAMBDAS, &s_grid)?;
    let pi = classes::positive_increase_estimate(&f, &defaults::LAMBDAS, &s_grid)?;
    let mut art = Artifacts::new();
    let (auxiliary, auxiliary_error) = match classes::optimal_auxiliary(&f, a.c, s_min, &s_grid) {
        Ok(aux) => {
            let samples = s_grid
                .iter()
                .filter_map(|&s| aux.n.evaluate(s).ok().map(|n| (s, n)))
                .collect();
            let summary = AuxSummary {
                c: aux.c,
                s0: aux.s0,
                log_growth_bound: aux.log_growth_bound(&s_grid)?,
                samples,
            };
            art.add("aux.json", to_json_pretty(&aux)?);
            (Some(summary), None)
        }
        Err(e @ (Error::Degenerate(_) | Error::Domain(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    art.summary.push(format!(
        "regular variation index: {}",
        rv.index.map_or("none".to_string(), |i| format!("{i:.6}"))
    ));
    art.summary.push(format!(
        "positive increase: detected={} alpha={:.6} c={:.6} lambda0={} trend={:.4}",
        pi.detected, pi.alpha, pi.c, pi.lambda0, pi.trend_slope
    ));
    let report = AnalyzeReport {
        function: f,
        window: (s_min, s_max),
        regular_variation: rv,
        positive_increase: pi,
        auxiliary,
        auxiliary_error,
    };
    art.add("report.json", to_json_pretty(&report)?);
    let p = params([
        ("c", a.c.into()),
        ("s_min", s_min.into()),
        ("s_max", s_max.into()),
        ("per_decade", a.per_decade.into()),
    ]);
    Ok((p, art))
}

fn cmd_predict(a: &PredictArgs) -> CmdOutput {
    let f = load_function(&a.spec)?;
    let aux: Option<QuasiAux> = match &a.aux {
        Some(p) => Some(serde_json::from_str(&fs::read_to_string(p)?)?),
        None if a.kind.needs_aux() => {
            return Err(Error::Config(format!("--kind {} needs --aux", a.kind)));
        }
        None => None,
    };
    let ts = time_grid(&a.time)?;
    let params_lib = EnvelopeParams {
        c: a.c,
        big_c: a.big_c,
        epsilon: a.epsilon,
        aux,
        t_range: Some((a.time.t_min, a.time.t_max)),
    };
    let env = transforms::predict(&f, a.kind, params_lib)?;
    let mut csv = String::from("t,value\n");
    for &t in &ts {
        let v = env.value(t)?;
        csv.push_str(&format!("{},{}\n", fmt_f64(t), fmt_f64(v)));
    }
    let mut art = Artifacts::new();
    art.add("envelope.csv", csv);
    art.add("envelope.json", to_json_pretty(&env)?);
    art.summary.push(format!("{} envelope on {} times", a.kind, ts.len()));
    let p = params([
        ("kind", a.kind.name().into()),
        ("c", a.c.into()),
        ("big_c", a.big_c.into()),
        ("epsilon", a.epsilon.into()),
        ("t_min", a.time.t_min.into()),
        ("t_max", a.time.t_max.into()),
        ("points", a.time.points.into()),
    ]);
    Ok((p, art))
}

fn cmd_spectrum(a: &SpectrumArgs) -> CmdOutput {
    let f = load_function(&a.spec)?;
    let betas = grid::per_decade(a.beta_min, a.beta_max, a.beta_per_decade)?;
    let spec = spectral::spectrum_from_profile(&f, &betas)?;
    let ts = time_grid(&a.time)?;
    let diag = spectral::theorem_consistency_report(&spec, &f, a.delta, a.c, &ts)?;
    let mut csv = String::from("t,decay_norm,log_decay_norm,beta_star\n");
    for &t in &ts {
        let d = spectral::decay_norm(&spec, t);
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(t),
            fmt_f64(d.value),
            fmt_f64(d.log_value),
            fmt_f64(d.beta_star)
        ));
    }
    let mut art = Artifacts::new();
    art.summary.push(format!("verdict: {}", diag.verdict));
    art.add("spectrum.csv", spec.to_csv()?);
    art.add("decay.csv", csv);
    art.add("diagnostics.json", to_json_pretty(&diag)?);
    let p = params([
        ("beta_min", a.beta_min.into()),
        ("beta_max", a.beta_max.into()),
        ("beta_per_decade", a.beta_per_decade.into()),
        ("delta", a.delta.into()),
        ("c", a.c.into()),
        ("t_min", a.time.t_min.into()),
        ("t_max", a.time.t_max.into()),
        ("points", a.time.points.into()),
    ]);
    Ok((p, art))
}

#[derive(Serialize)]
struct WaveSummary {
    energy_initial: f64,
    energy_final: f64,
    /// `max |E(t) − E(0)| / E(0)`
    energy_drift: f64,
    /// `(E(0) − E(T) − ∫D dt) / E(0)`
    balance_error: f64,
    /// Same with the scheme's exact per-step loss in place of `∫D dt`.
    discrete_balance_error: f64,
    power: Option<wave::DecayFit>,
    exp_sqrt: Option<wave::DecayFit>,
    fit_error: Option<String>,
}

fn cmd_wave(a: &WaveArgs) -> CmdOutput {
    let cfg = WaveConfig::from_json(&fs::read_to_string(&a.config)?)?;
    let trace = wave::simulate(&cfg)?;
    let e0 = trace.total_energy[0];
    let e_t = *trace.total_energy.last().expect("trace has samples");
    let window = (a.fit_t1.unwrap_or(cfg.t_final / 10.0), a.fit_t2.unwrap_or(cfg.t_final));
    let fits = (
        wave::fit_decay(&trace, window, DecayModel::Power),
        wave::fit_decay(&trace, window, DecayModel::ExpSqrt),
    );
    let fit_error = match &fits {
        (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        _ => None,
    };
    let summary = WaveSummary {
        energy_initial: e0,
        energy_final: e_t,
        energy_drift: trace.total_energy.iter().map(|e| (e - e0).abs() / e0).fold(0.0, f64::max),
        balance_error: (e0 - e_t - trace.dissipated()) / e0,
        discrete_balance_error: (e0 - e_t - trace.discrete_dissipated()) / e0,
        power: fits.0.ok(),
        exp_sqrt: fits.1.ok(),
        fit_error,
    };
    let mut csv = Vec::new();
    trace.write_csv(&mut csv)?;
    let mut art = Artifacts::new();
    art.summary.push(format!(
        "E(T)/E(0) = {:.6e}, drift {:.3e}, balance error {:.3e}",
        e_t / e0,
        summary.energy_drift,
        summary.balance_error
    ));
    if let Some(p) = &summary.power {
        art.summary.push(format!("power-law fit on [{}, {}]: p = {:.4}", window.0, window.1, p.rate));
    }
    art.add("trace.csv", String::from_utf8(csv).map_err(|e| Error::Serialization(e.to_string()))?);
    art.add("fit.json", to_json_pretty(&summary)?);
    let p = params([
        ("fit_t1", window.0.into()),
        ("fit_t2", window.1.into()),
        ("config", serde_json::to_value(&cfg)?),
    ]);
    Ok((p, art))
}

#[derive(Serialize)]
struct KernelSummary {
    alpha: f64,
    tau_max: f64,
    atoms_per_decade: usize,
    atoms: usize,
    epsilon: f64,
    total_weight: f64,
    tail_mass: f64,
}

fn cmd_kernel_build(a: &KernelArgs) -> CmdOutput {
    let ell = match &a.ell {
        Some(p) => SlowFactor::Function(load_function(p)?),
        None => SlowFactor::Constant(1.0),
    };
    let built = wave::kernel_from_regvar(a.alpha, &ell, a.tau_max, a.per_decade)?;
    let summary = KernelSummary {
        alpha: a.alpha,
        tau_max: a.tau_max,
        atoms_per_decade: a.per_decade,
        atoms: built.kernel.atoms.len(),
        epsilon: built.kernel.epsilon,
        total_weight: built.kernel.total_weight(),
        tail_mass: built.tail_mass,
    };
    let mut art = Artifacts::new();
    art.summary.push(format!("{} atoms, tail mass {:.3e}", summary.atoms, summary.tail_mass));
    art.add("kernel.csv", built.kernel.to_csv()?);
    art.add("kernel.json", to_json_pretty(&summary)?);
    let p = params([
        ("alpha", a.alpha.into()),
        ("tau_max", a.tau_max.into()),
        ("per_decade", a.per_decade.into()),
    ]);
    Ok((p, art))
}
