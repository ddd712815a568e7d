//! Command-line front end: presets, evolution runs, bound computations,
//! verification suites, and CSV emission.
//!
//! Exit codes: 0 success, 1 usage error, 2 physics-constraint violation,
//! 3 verification failure.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::bounds::{self, BoundReport};
use crate::dynamics::{apply_kraus, completeness_residual, integrate_master};
use crate::linalg::sandwich;
use crate::meson::{
    self, basis_vectors, coefficient_functions, detection_probabilities, evolve_tilde,
    kraus_breve, meson_choi, meson_lindblad, prepare_tilde, strangeness_expectation,
    CpViolation, MesonParams, StateKind,
};
use crate::presets::{ParticlePreset, PresetChannel};
use crate::scalar::{
    evolve_scalar_general, scalar_choi, scalar_kraus_superselected, survival_probability,
    ScalarParams, ScalarState,
};
use crate::units::mev_to_per_sec;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "decaylab",
    version,
    about = "Dynamical-semigroup evolution and decoherence bounds for unstable particles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve an initial state on a time grid and emit probabilities as CSV.
    Evolve(CommonArgs),
    /// Compute the decoherence bound report for a meson preset.
    Bounds(CommonArgs),
    /// Emit the data behind the discriminant / allowed-region figures.
    Figure(FigureArgs),
    /// Run the internal verification suites.
    Verify(CommonArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Particle preset: K0, B0, or pi0.
    #[arg(long)]
    preset: Option<String>,
    /// Flat key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid start time in seconds.
    #[arg(long)]
    t_start: Option<f64>,
    /// Grid stop time in seconds.
    #[arg(long)]
    t_stop: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// Log-spaced grid instead of linear.
    #[arg(long)]
    log: bool,
    /// Decoherence rate; plain numbers are s^-1, a "MeV" suffix converts.
    #[arg(long)]
    lambda: Option<String>,
    /// Initial state: K0, K0bar, KS, KL, K1, K2, or vacuum.
    #[arg(long)]
    initial: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FigureArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which figure dataset to emit.
    #[arg(long, value_enum, default_value_t = Figure::Fig1)]
    which: Figure,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Figure {
    Fig1,
    Fig2,
}

/// A failure carrying its process exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: msg.into(),
        }
    }

    fn physics(msg: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: msg.into(),
        }
    }

    fn verification(msg: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: msg.into(),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Self::physics(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}

/// Entry point used by the binary; parses `std::env::args`.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Entry point with explicit arguments, for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output exits 0
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { 0 } else { 1 };
        }
    };
    let result = match cli.command {
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Bounds(args) => cmd_bounds(&args),
        Command::Figure(args) => cmd_figure(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("decaylab: {}", f.message);
            f.code
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("DECAYLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                // ignore the error if a pool was already built in-process
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Parse a rate; a trailing "MeV" converts through hbar.
fn parse_rate(s: &str) -> Result<f64, Failure> {
    let t = s.trim();
    let (num, mev) = match t.strip_suffix("MeV").or_else(|| t.strip_suffix("mev")) {
        Some(rest) => (rest.trim(), true),
        None => (t, false),
    };
    let v: f64 = num
        .parse()
        .map_err(|_| Failure::usage(format!("cannot parse rate '{s}'")))?;
    Ok(if mev { mev_to_per_sec(v) } else { v })
}

/// Fully resolved run configuration: defaults, then config file, then flags.
struct RunConfig {
    preset: ParticlePreset,
    lambda: Option<f64>,
    initial: StateKind,
    t_start: f64,
    t_stop: f64,
    points: usize,
    log: bool,
    out: Option<PathBuf>,
    which: Figure,
}

impl RunConfig {
    fn resolve(args: &CommonArgs, which: Figure) -> Result<Self, Failure> {
        // config file first
        let mut kv: Vec<(String, String)> = Vec::new();
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Failure::usage(format!("config line {} is not key=value", lineno + 1))
                })?;
                kv.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        let from_file = |key: &str| kv.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.clone());

        let preset_name = args
            .preset
            .clone()
            .or_else(|| from_file("preset"))
            .unwrap_or_else(|| "K0".to_string());
        let mut preset = ParticlePreset::by_name(&preset_name)
            .map_err(|e| Failure::usage(e.to_string()))?;

        // inline parameter overrides (meson channel only)
        let mut meson_override = false;
        let mut mp = match &preset.channel {
            PresetChannel::Meson(p) => *p,
            PresetChannel::Scalar(_) => MesonParams::new(1.0, 1.0, 0.0, 0.0, 0.0)
                .expect("placeholder params are valid"),
        };
        for (key, field) in [
            ("gamma_s", 0usize),
            ("gamma_l", 1),
            ("delta_m", 2),
            ("delta_l", 3),
        ] {
            if let Some(v) = from_file(key) {
                if matches!(preset.channel, PresetChannel::Scalar(_)) {
                    return Err(Failure::usage(format!(
                        "config key '{key}' applies only to meson presets"
                    )));
                }
                let x = parse_rate(&v)?;
                match field {
                    0 => mp.gamma_s = x,
                    1 => mp.gamma_l = x,
                    2 => mp.delta_m = x,
                    _ => mp.delta_l = x,
                }
                meson_override = true;
            }
        }
        if meson_override {
            mp.validate().map_err(|e| Failure::usage(e.to_string()))?;
            preset.channel = PresetChannel::Meson(mp);
            preset.epsilon = CpViolation::from_delta_l(mp.delta_l)
                .map_err(|e| Failure::usage(e.to_string()))?;
        }

        let lambda = match args.lambda.clone().or_else(|| from_file("lambda")) {
            Some(s) => Some(parse_rate(&s)?),
            None => None,
        };
        if let Some(l) = lambda {
            if l < 0.0 {
                return Err(Failure::physics("lambda must be nonnegative".to_string()));
            }
        }

        let initial = args
            .initial
            .clone()
            .or_else(|| from_file("initial"))
            .unwrap_or_else(|| "K0".to_string())
            .parse::<StateKind>()
            .map_err(|e| Failure::usage(e.to_string()))?;

        let default_stop = match &preset.channel {
            PresetChannel::Meson(p) => 10.0 / p.gamma_s,
            PresetChannel::Scalar(p) => 10.0 / p.gamma,
        };
        let parse_f64 = |s: &str, what: &str| -> Result<f64, Failure> {
            s.parse()
                .map_err(|_| Failure::usage(format!("cannot parse {what} '{s}'")))
        };
        let t_start = match args.t_start {
            Some(v) => v,
            None => match from_file("t_start") {
                Some(s) => parse_f64(&s, "t_start")?,
                None => 0.0,
            },
        };
        let t_stop = match args.t_stop {
            Some(v) => v,
            None => match from_file("t_stop") {
                Some(s) => parse_f64(&s, "t_stop")?,
                None => default_stop,
            },
        };
        let points = match args.points {
            Some(v) => v,
            None => match from_file("points") {
                Some(s) => s
                    .parse()
                    .map_err(|_| Failure::usage(format!("cannot parse points '{s}'")))?,
                None => 200,
            },
        };
        let log = args.log
            || matches!(from_file("log").as_deref(), Some("true") | Some("1") | Some("yes"));
        let out = args
            .out
            .clone()
            .or_else(|| from_file("out").map(PathBuf::from));
        let which = match from_file("which").as_deref() {
            Some("fig1") => Figure::Fig1,
            Some("fig2") => Figure::Fig2,
            Some(other) => {
                return Err(Failure::usage(format!("unknown figure '{other}'")));
            }
            None => which,
        };

        if !(t_stop > t_start && t_start >= 0.0) {
            return Err(Failure::usage("time grid needs stop > start >= 0"));
        }
        if points < 2 {
            return Err(Failure::usage("time grid needs at least 2 points"));
        }
        if log && t_start <= 0.0 {
            return Err(Failure::usage("log grid needs t_start > 0"));
        }

        Ok(Self {
            preset,
            lambda,
            initial,
            t_start,
            t_stop,
            points,
            log,
            out,
            which,
        })
    }

    fn time_grid(&self) -> Vec<f64> {
        grid(self.t_start, self.t_stop, self.points, self.log)
    }

    fn meson_params(&self) -> Result<MesonParams, Failure> {
        let mut p = self
            .preset
            .meson_params()
            .map_err(|e| Failure::usage(e.to_string()))?;
        if let Some(l) = self.lambda {
            p.lambda = l;
        }
        Ok(p)
    }

    fn writer(&self) -> Result<Box<dyn std::io::Write>, Failure> {
        match &self.out {
            Some(path) => Ok(Box::new(fs::File::create(path).map_err(|e| {
                Failure::usage(format!("cannot create {}: {e}", path.display()))
            })?)),
            None => Ok(Box::new(std::io::stdout())),
        }
    }
}

fn grid(start: f64, stop: f64, points: usize, log: bool) -> Vec<f64> {
    (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1) as f64;
            if log {
                (start.ln() + (stop.ln() - start.ln()) * f).exp()
            } else {
                start + (stop - start) * f
            }
        })
        .collect()
}

/// 12 significant digits, deterministic.
fn fmt(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.11e}")
}

fn provenance(w: &mut dyn std::io::Write, cfg: &RunConfig, command: &str) -> std::io::Result<()> {
    writeln!(w, "# decaylab v{VERSION}")?;
    writeln!(w, "# command: {command}")?;
    writeln!(w, "# preset: {}", cfg.preset.name)?;
    if let Some(l) = cfg.lambda {
        writeln!(w, "# lambda: {}", fmt(l))?;
    }
    Ok(())
}

fn cmd_evolve(args: &CommonArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(args, Figure::Fig1)?;
    let mut w = cfg.writer()?;
    provenance(w.as_mut(), &cfg, "evolve")?;
    match cfg.preset.channel.clone() {
        PresetChannel::Meson(_) => {
            let p = cfg.meson_params()?;
            let rho0 = prepare_tilde(cfg.initial, p.delta_l)?;
            writeln!(
                w,
                "t,rho_ss,rho_ll,rho_sl_re,rho_sl_im,rho_00,p_k0,p_k0bar,p_vacuum,closure,strangeness"
            )?;
            for t in cfg.time_grid() {
                let st = evolve_tilde(&rho0, &p, t)?;
                let m = st.matrix();
                let probs = detection_probabilities(&rho0, &p, t)?;
                let s = strangeness_expectation(&rho0, &p, t)?;
                let closure = probs.p_k0 + probs.p_k0_bar + probs.p_vacuum;
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    fmt(t),
                    fmt(m[(0, 0)].re),
                    fmt(m[(1, 1)].re),
                    fmt(m[(0, 1)].re),
                    fmt(m[(0, 1)].im),
                    fmt(m[(2, 2)].re),
                    fmt(probs.p_k0),
                    fmt(probs.p_k0_bar),
                    fmt(probs.p_vacuum),
                    fmt(closure),
                    fmt(s)
                )?;
            }
        }
        PresetChannel::Scalar(sp) => {
            if cfg.initial != StateKind::K0 && cfg.initial != StateKind::Vacuum {
                return Err(Failure::usage(
                    "scalar presets evolve the particle state (or vacuum)",
                ));
            }
            let rho0 = if cfg.initial == StateKind::Vacuum {
                ScalarState::vacuum()
            } else {
                ScalarState::particle()
            };
            writeln!(w, "t,rho_11,rho_00,survival")?;
            for t in cfg.time_grid() {
                let st = evolve_scalar_general(&rho0, &sp, t)?;
                let m = st.matrix();
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt(t),
                    fmt(m[(0, 0)].re),
                    fmt(m[(1, 1)].re),
                    fmt(survival_probability(sp.gamma, t))
                )?;
            }
        }
    }
    Ok(())
}

fn bound_report(p: &MesonParams) -> Result<BoundReport, Failure> {
    let nb = bounds::necessary_delta_bound(p);
    if !nb.ok {
        return Err(Failure::physics(format!(
            "necessary condition violated: delta_L = {} > sqrt(Gamma_S Gamma_L)/dm = {}",
            p.delta_l, nb.bound
        )));
    }
    Ok(bounds::lambda_max(p)?)
}

fn cmd_bounds(args: &CommonArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(args, Figure::Fig1)?;
    let p = cfg.meson_params()?;
    let report = bound_report(&p)?;
    let mut w = cfg.writer()?;
    provenance(w.as_mut(), &cfg, "bounds")?;
    writeln!(w, "quantity,value")?;
    writeln!(w, "t_plus_s,{}", fmt(report.t_plus))?;
    writeln!(w, "lambda_max_per_s,{}", fmt(report.lambda_max))?;
    writeln!(
        w,
        "lambda_max_first_order_per_s,{}",
        fmt(report.lambda_max_first_order)
    )?;
    writeln!(
        w,
        "necessary_bound,{}",
        fmt(report.necessary_margin + p.delta_l)
    )?;
    writeln!(w, "necessary_margin,{}", fmt(report.necessary_margin))?;
    writeln!(w, "necessary_ok,{}", report.necessary_ok)?;
    if let Some(ml) = cfg.preset.measured_lambda {
        let inside =
            bounds::experimental_lambda_check(report.lambda_max, ml.central, ml.err_lo, ml.err_hi);
        writeln!(w, "measured_lambda_per_s,{}", fmt(ml.central))?;
        writeln!(w, "measured_err_lo_per_s,{}", fmt(ml.err_lo))?;
        writeln!(w, "measured_err_hi_per_s,{}", fmt(ml.err_hi))?;
        writeln!(
            w,
            "measured_vs_allowed,{}",
            if inside { "inside" } else { "outside" }
        )?;
    }
    Ok(())
}

fn cmd_figure(args: &FigureArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&args.common, args.which)?;
    let p = cfg.meson_params()?;
    let report = bound_report(&p)?;
    let tp = report.t_plus;
    // default grid covers [1e-3 t_plus, 1e3 t_plus], log-spaced
    let explicit_grid = args.common.t_start.is_some() || args.common.t_stop.is_some();
    let ts = if explicit_grid {
        cfg.time_grid()
    } else {
        grid(1e-3 * tp, 1e3 * tp, cfg.points.max(500), true)
    };
    let mut w = cfg.writer()?;
    provenance(w.as_mut(), &cfg, "figure")?;
    match cfg.which {
        Figure::Fig1 => {
            writeln!(w, "t,discriminant_over_delta_sq,discriminant")?;
            for t in ts {
                let d = bounds::discriminant(&p, t)?;
                writeln!(
                    w,
                    "{},{},{}",
                    fmt(t),
                    fmt(d),
                    fmt(d * p.delta_l * p.delta_l)
                )?;
            }
        }
        Figure::Fig2 => {
            writeln!(w, "t,lambda_lower,lambda_upper,lambda_max")?;
            for t in ts {
                if t <= 0.0 {
                    continue;
                }
                let b = bounds::lambda_bounds_at(&p, t)?;
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt(t),
                    fmt(b.lower),
                    fmt(b.upper),
                    fmt(report.lambda_max)
                )?;
            }
        }
    }
    Ok(())
}

struct Suite {
    name: &'static str,
    max_residual: f64,
    tolerance: f64,
    witness: Option<f64>,
}

impl Suite {
    fn pass(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

fn cmd_verify(args: &CommonArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(args, Figure::Fig1)?;
    let p = cfg.meson_params()?;
    let e = CpViolation::from_delta_l(p.delta_l)?;
    let mut suites = Vec::new();

    // Choi positivity of the meson map at 200 log-spaced times
    {
        let tp = bounds::t_plus(&p).map_err(Failure::from)?;
        let mut worst = 0.0f64;
        let mut witness = None;
        for t in grid(1e-3 * tp, tp, 200, true) {
            let min = meson_choi(&p, t)?.min_eigenvalue()?;
            if -min > worst {
                worst = -min;
                witness = Some(t);
            }
        }
        suites.push(Suite {
            name: "choi_psd_meson",
            max_residual: worst.max(0.0),
            tolerance: 1e-12,
            witness,
        });
    }

    // Kraus completeness in the tilde metric (lambda > 0 exercises all six)
    {
        let mut pl = p;
        if pl.lambda == 0.0 {
            pl.lambda = 1e10;
        }
        let mut worst = 0.0f64;
        for t in grid(0.1 / p.gamma_s, 5.0 / p.gamma_s, 20, true) {
            // a non-CP parameter set is a suite failure, not a hard error
            match kraus_breve(&pl, t) {
                Ok(ks) => worst = worst.max(completeness_residual(&ks)),
                Err(_) => worst = f64::INFINITY,
            }
        }
        suites.push(Suite {
            name: "kraus_completeness_meson",
            max_residual: worst,
            tolerance: 1e-11,
            witness: None,
        });
    }

    // Scalar superselected Kraus completeness (algebraically exact)
    {
        let mut worst = 0.0f64;
        for t in grid(0.01, 10.0, 20, true) {
            worst = worst.max(completeness_residual(&scalar_kraus_superselected(1.0, 0.0, t)));
        }
        suites.push(Suite {
            name: "kraus_completeness_scalar",
            max_residual: worst,
            tolerance: 1e-15,
            witness: None,
        });
    }

    // Scalar Choi positivity
    {
        let sp = ScalarParams::superselected(1.0, 0.0).map_err(Failure::from)?;
        let mut worst = 0.0f64;
        for t in grid(0.01, 10.0, 100, true) {
            worst = worst.max(-scalar_choi(&sp, t)?.min_eigenvalue()?);
        }
        suites.push(Suite {
            name: "choi_psd_scalar",
            max_residual: worst.max(0.0),
            tolerance: 1e-12,
            witness: None,
        });
    }

    // metric-trace preservation and semigroup law of the closed form
    {
        let rho0 = prepare_tilde(StateKind::K0, p.delta_l)?;
        let tau = 1.0 / p.gamma_s;
        let mut worst_trace = 0.0f64;
        for t in grid(0.0, 20.0 * tau, 40, false) {
            let st = evolve_tilde(&rho0, &p, t)?;
            worst_trace = worst_trace.max((st.metric_trace() - 1.0).abs());
        }
        suites.push(Suite {
            name: "metric_trace",
            max_residual: worst_trace,
            tolerance: 1e-13,
            witness: None,
        });
        let one = evolve_tilde(&rho0, &p, 3.0 * tau)?;
        let two = evolve_tilde(&evolve_tilde(&rho0, &p, tau)?, &p, 2.0 * tau)?;
        suites.push(Suite {
            name: "semigroup",
            max_residual: two.matrix().sub(one.matrix()).frobenius_norm(),
            tolerance: 1e-12,
            witness: None,
        });
    }

    // CPT: equal diagonal masses of the strangeness eigenstates
    {
        let m = mev_to_per_sec(cfg.preset.mass_mev);
        let pm = p.with_mean_mass_freq(m);
        let diff = meson_lindblad(&pm, &e).map_or(f64::INFINITY, |model| {
            let s = 1.0 / 2.0f64.sqrt();
            let k0 = [
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
            ];
            let k0bar = [
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(0.0, 0.0),
            ];
            (sandwich(&k0, &model.hamiltonian, &k0).re
                - sandwich(&k0bar, &model.hamiltonian, &k0bar).re)
                .abs()
        });
        suites.push(Suite {
            name: "cpt_mass_equality",
            max_residual: diff,
            tolerance: 1e-12 * m,
            witness: None,
        });
        let _ = basis_vectors(&e);
    }

    // oracle equivalence: closed form vs Kraus vs master equation
    {
        let mut pl = p;
        if pl.lambda == 0.0 {
            pl.lambda = 1e10;
        }
        let run = || -> crate::Result<f64> {
            let rho0 = prepare_tilde(StateKind::K0, pl.delta_l)?;
            let t = 1.0 / pl.gamma_s;
            let closed = evolve_tilde(&rho0, &pl, t)?;
            let via_kraus = apply_kraus(rho0.matrix(), &kraus_breve(&pl, t)?)?;
            let kraus_err = via_kraus.sub(closed.matrix()).max_abs();
            let model = meson_lindblad(&pl, &e)?;
            let rk4 = integrate_master(&model, &rho0.to_orthonormal(&e), t, 50_000)?;
            let rk4_err = rk4.sub(&closed.to_orthonormal(&e)).max_abs();
            let _ = coefficient_functions(&pl, t)?;
            let _ = meson::g_matrix(pl.delta_l);
            Ok(kraus_err.max(rk4_err))
        };
        suites.push(Suite {
            name: "oracle_equivalence",
            max_residual: run().unwrap_or(f64::INFINITY),
            tolerance: 1e-7,
            witness: None,
        });
    }

    let mut w = cfg.writer()?;
    writeln!(w, "# decaylab v{VERSION}")?;
    writeln!(w, "# command: verify")?;
    writeln!(w, "# preset: {}", cfg.preset.name)?;
    writeln!(w, "suite,max_residual,tolerance,status,witness_t")?;
    let mut all_ok = true;
    for s in &suites {
        all_ok &= s.pass();
        writeln!(
            w,
            "{},{},{},{},{}",
            s.name,
            fmt(s.max_residual),
            fmt(s.tolerance),
            if s.pass() { "pass" } else { "fail" },
            s.witness.filter(|_| !s.pass()).map_or_else(String::new, fmt)
        )?;
    }
    if all_ok {
        writeln!(w, "# verify: all suites passed")?;
        Ok(())
    } else {
        writeln!(w, "# verify: FAILED")?;
        Err(Failure::verification("one or more suites failed"))
    }
}
