//! `skewprod`: classify skew-product systems, solve cohomology levels and
//! trace ergodic averages.
//!
//! Exit codes: 0 success, 1 usage/IO/parse error, 2 invalid system,
//! 3 hypothesis violation.

mod config;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use serde::Serialize;

use skewprod_core::cohomology::{detect_group, oracle_nullspace, solve_level_or_oracle, DEFAULT_N_MAX};
use skewprod_core::ergodicity::{
    birkhoff_pointwise, cesaro_orbit_average, classify, conditional_expectation_phi, invariant_measure_functional,
    log_checkpoints,
};
use skewprod_core::json::{to_json, AngleDto, BirkhoffDto, ClassificationDto, CrossedDto, LevelReportDto};
use skewprod_core::{Element, PhasedScalar, SkewSystem};

use config::{Observable, ScenarioConfig};

/// Usage error raised by the CLI itself.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Parser, Debug)]
#[command(name = "skewprod", version, about = "Skew-product dynamics on crossed products by Z")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ergodic classification and fixed-point description.
    Classify(Common),
    /// Solve the cohomological equation at one level.
    Solve(Common),
    /// Cesàro orbit average, or pointwise Birkhoff averages over Z∞.
    Average(Common),
    /// Conditional expectation onto the fixed points, or T(μ)(F).
    Expect(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario JSON file.
    config: Option<PathBuf>,
    /// Preset name; overrides the config's system.
    #[arg(long)]
    preset: Option<String>,
    /// Order of the double-rotation cocycle.
    #[arg(long)]
    l: Option<i64>,
    /// β of the zinf preset, as a rational number of turns such as `1/2`.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Use the noncommutative anzai-inverse variant.
    #[arg(long)]
    noncommutative: bool,
    /// Scan bound for the fixed-point group.
    #[arg(long)]
    n_max: Option<i64>,
    /// Cohomology level for `solve`.
    #[arg(long, allow_hyphen_values = true)]
    level: Option<i64>,
    /// Run the truncated nullspace oracle as well.
    #[arg(long)]
    oracle: bool,
    /// Oracle truncation `M`.
    #[arg(long)]
    truncation: Option<i64>,
    /// Oracle singular-value tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of averaging steps.
    #[arg(long)]
    iterations: Option<usize>,
    /// Crossed-product mode `k` of the default element `V^k U^m`.
    #[arg(long, allow_hyphen_values = true)]
    mode: Option<i64>,
    /// Power `m` of the default element `V^k U^m`.
    #[arg(long, allow_hyphen_values = true)]
    u_power: Option<i64>,
    /// Starting point `l₀` of the pointwise average over Z∞.
    #[arg(long, allow_hyphen_values = true)]
    l0: Option<i64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the `j,distance` trace of `average` here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

const DEFAULT_TRUNCATION: i64 = 12;
const DEFAULT_TOL: f64 = 1e-8;
const DEFAULT_ITERATIONS: usize = 10_000;
const DEFAULT_LEVEL: i64 = 1;

struct Scenario {
    cfg: ScenarioConfig,
    sys: SkewSystem,
    n_max: i64,
    truncation: i64,
    tol: f64,
    iterations: usize,
}

fn load(c: &Common) -> anyhow::Result<Scenario> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ScenarioConfig>(&text)
                .map_err(|e| skewprod_core::Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(l) = c.l {
        cfg.params.l = Some(l);
    }
    if let Some(b) = &c.beta {
        let q0: num::Rational64 =
            b.parse().map_err(|_| Usage(format!("--beta expects a rational such as 1/2, got {b:?}")))?;
        cfg.params.beta = Some(AngleDto { q0: q0.to_string(), sym: Default::default() });
    }
    if c.noncommutative {
        cfg.params.noncommutative = Some(true);
    }
    let sys = cfg.build_system(c.preset.as_deref())?;
    let n_max = c.n_max.or(cfg.n_max).unwrap_or(DEFAULT_N_MAX);
    let truncation = c.truncation.or(cfg.truncation).unwrap_or(DEFAULT_TRUNCATION);
    let tol = c.tol.or(cfg.tol).unwrap_or(DEFAULT_TOL);
    let iterations = c.iterations.or(cfg.iterations).unwrap_or(DEFAULT_ITERATIONS);
    if n_max < 1 {
        anyhow::bail!(Usage("--n-max must be positive".into()));
    }
    if iterations == 0 {
        anyhow::bail!(Usage("--iterations must be positive".into()));
    }
    Ok(Scenario { cfg, sys, n_max, truncation, tol, iterations })
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let text = to_json(value);
    match out {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn write_csv(path: &Path, rows: impl IntoIterator<Item = (usize, f64)>) -> anyhow::Result<()> {
    let mut f = std::io::BufWriter::new(
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(f, "j,distance")?;
    for (j, d) in rows {
        writeln!(f, "{j},{d:e}")?;
    }
    f.flush()?;
    Ok(())
}

/// Element from the config, or `V^k U^m` from the flags.
fn element(c: &Common, s: &Scenario, default_mode: i64) -> anyhow::Result<skewprod_core::CrossedElement> {
    if c.mode.is_none() && c.u_power.is_none() {
        if let Some(dto) = &s.cfg.element {
            return Ok(dto.to_crossed(&s.sys)?);
        }
    }
    let ctx = s.sys.context();
    let a = match c.u_power.unwrap_or(0) {
        0 => Element::one(ctx),
        m => Element::monomial(ctx, m, 0, PhasedScalar::one(ctx.basis()))?,
    };
    Ok(s.sys.crossed(c.mode.unwrap_or(default_mode), a)?)
}

#[derive(Serialize)]
struct BirkhoffOutput {
    q: i64,
    l0: i64,
    iterations: usize,
    #[serde(flatten)]
    trace: BirkhoffDto,
}

#[derive(Serialize)]
struct ExpectOutput {
    /// `E_Φ(x)`.
    conditional_expectation: CrossedDto,
    /// `ω₀(x)`.
    state: [f64; 2],
    /// `T(μ)(x)` when `μ` is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    t_mu: Option<[f64; 2]>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Classify(c) => {
            let s = load(&c)?;
            let report = classify(&s.sys, s.n_max)?;
            emit(&ClassificationDto::from(&report), c.out.as_deref())
        }
        Command::Solve(c) => {
            let s = load(&c)?;
            let n = c.level.or(s.cfg.level).unwrap_or(DEFAULT_LEVEL);
            let mut report = solve_level_or_oracle(&s.sys, n, s.truncation, s.tol)?;
            if c.oracle && report.oracle.is_none() {
                report.oracle = Some(oracle_nullspace(&s.sys, n, s.truncation, s.tol)?);
            }
            emit(&LevelReportDto::from(&report), c.out.as_deref())
        }
        Command::Average(c) => {
            let s = load(&c)?;
            let observable = match (c.l0, s.cfg.observable) {
                (Some(l0), obs) => Some(Observable { q: c.mode.or(obs.map(|o| o.q)).unwrap_or(1), l0 }),
                (None, obs) => obs,
            };
            if let Some(obs) = observable {
                let t = birkhoff_pointwise(&s.sys, obs.q, obs.l0, s.iterations)?;
                if let Some(path) = &c.csv {
                    let target = t.limit.unwrap_or(t.average);
                    write_csv(path, t.running.iter().map(|&(j, v)| (j, (v - target).norm())))?;
                }
                let out = BirkhoffOutput { q: obs.q, l0: obs.l0, iterations: s.iterations, trace: (&t).into() };
                return emit(&out, c.out.as_deref());
            }
            let fp = detect_group(&s.sys, s.n_max)?;
            let x = element(&c, &s, 1)?;
            let mut checkpoints = log_checkpoints(s.iterations);
            if c.csv.is_some() {
                let stride = (s.iterations / 200).max(1);
                checkpoints.extend((stride..=s.iterations).step_by(stride));
                checkpoints.sort_unstable();
                checkpoints.dedup();
            }
            let d = cesaro_orbit_average(&s.sys, &fp, &x, s.iterations, &checkpoints)?;
            if let Some(path) = &c.csv {
                write_csv(path, d.trace.iter().copied())?;
            }
            emit(&d, c.out.as_deref())
        }
        Command::Expect(c) => {
            let s = load(&c)?;
            let fp = detect_group(&s.sys, s.n_max)?;
            let x = element(&c, &s, 0)?;
            let e = conditional_expectation_phi(&s.sys, &fp, &x)?;
            let t_mu = match &s.cfg.mu {
                Some(entries) => {
                    let mu: BTreeMap<i64, Complex64> =
                        entries.iter().map(|m| (m.l, Complex64::new(m.re, m.im))).collect();
                    let v = invariant_measure_functional(&s.sys, &fp, &mu, &x)?;
                    Some([v.re, v.im])
                }
                None => None,
            };
            let state = x.state();
            emit(
                &ExpectOutput { conditional_expectation: CrossedDto::from_crossed(&e), state: [state.re, state.im], t_mu },
                c.out.as_deref(),
            )
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use skewprod_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::Hypothesis(_)) => 3,
        Some(E::InvalidSystem(_) | E::InvalidAutomorphism(_) | E::ContextMismatch(_) | E::BasisMismatch | E::InvalidBasis(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skewprod: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
