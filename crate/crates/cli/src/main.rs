//! Command-line harness: smoothness profiles, bound envelopes, environment
//! value curves, agent sweeps, and the bound-verification suite, all as
//! seeded, byte-reproducible CSV/JSON-lines output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lalpha_core::agents::zoom::IndexMode;
use lalpha_core::agents::{run_zoom, sweep_replacement_l, OptimisticAgentConfig, ZoomConfig};
use lalpha_core::analytic::{SineRamp, Stairs};
use lalpha_core::error::{Error, Result};
use lalpha_core::io::{
    fmt_float, load_profile, load_riverswim_config, load_samples, write_reports_jsonl,
};
use lalpha_core::metric::Point;
use lalpha_core::riverswim::{mc_value_estimate, v_star, RiverswimConfig};
use lalpha_core::smoothness::{
    l_alpha_empirical, l_alpha_envelope, lipschitz_envelope, multi_alpha_envelope,
    relaxed_envelope, SampleSet,
};
use lalpha_core::theory::checks::{run_suite, CheckOptions};

#[derive(Parser)]
#[command(name = "lalpha", version, about = "Coarse-grained smoothness toolkit")]
struct Cli {
    /// Base RNG seed; a fixed seed gives byte-identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Environment config as JSON (defaults used when omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionKind {
    Sine,
    Stairs,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvelopeMethod {
    Lipschitz,
    Lalpha,
    Multi,
    Relaxed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValueMode {
    Exact,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Per-scale smoothness constants of a built-in function as CSV
    /// `alpha,L_alpha_analytic,L_alpha_empirical`.
    Profile {
        #[arg(long, value_enum)]
        function: FunctionKind,
        /// Sine amplitude A.
        #[arg(long, default_value_t = 3.0)]
        amplitude: f64,
        /// Sine frequency omega (function is A*sin(2*pi*omega*x) + m*x).
        #[arg(long, default_value_t = 2.0)]
        omega: f64,
        /// Sine linear slope m.
        #[arg(long, default_value_t = 5.0)]
        slope: f64,
        /// Stairs step height A.
        #[arg(long, default_value_t = 0.1)]
        step_height: f64,
        /// Stairs step width w.
        #[arg(long, default_value_t = 0.1)]
        step_width: f64,
        /// Comma-separated scales to evaluate.
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        /// Sample-grid size for the empirical column.
        #[arg(long, default_value_t = 1500)]
        grid: usize,
        /// Domain lower end (default: 0).
        #[arg(long)]
        lo: Option<f64>,
        /// Domain upper end (default: 3 for sine, 1 for stairs).
        #[arg(long)]
        hi: Option<f64>,
    },
    /// Pointwise bounds from a 1-D sample file as CSV `x,lower,upper`.
    Envelope {
        /// Sample CSV with header `x_0,f`.
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, value_enum)]
        method: EnvelopeMethod,
        /// Lipschitz constant (method: lipschitz).
        #[arg(long)]
        l: Option<f64>,
        /// Scale (methods: lalpha, relaxed).
        #[arg(long)]
        alpha: Option<f64>,
        /// Per-scale constant (methods: lalpha, relaxed).
        #[arg(long)]
        l_alpha: Option<f64>,
        /// Smoothness-profile JSON (method: multi).
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Number of query points across the sample domain.
        #[arg(long, default_value_t = 401)]
        grid: usize,
    },
    /// Optimal river-crossing values as CSV `s,v_star[,mc_mean,mc_stderr]`.
    Riverswim {
        #[arg(long, value_enum, default_value_t = ValueMode::Exact)]
        mode: ValueMode,
        /// Number of interior states on the grid.
        #[arg(long, default_value_t = 401)]
        states: usize,
        /// Monte Carlo rollouts per state (mode: mc).
        #[arg(long, default_value_t = 200)]
        rollouts: usize,
        /// Rollout horizon (mode: mc).
        #[arg(long, default_value_t = 400)]
        horizon: usize,
    },
    /// Replacement-constant sweep of the optimistic agent as CSV
    /// `L_replacement,seed,total_reward`. Without --config the river gets
    /// transition noise 0.3 so runs separate by seed.
    Sweep {
        /// Comma-separated replacement constants.
        #[arg(
            long,
            value_delimiter = ',',
            default_values_t = [0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0]
        )]
        values: Vec<f64>,
        /// Independent runs per value.
        #[arg(long, default_value_t = 30)]
        seeds: u64,
        #[arg(long, default_value_t = 50)]
        episodes: usize,
        #[arg(long, default_value_t = 60)]
        max_steps: usize,
        #[arg(long, default_value_t = 5)]
        action_grid: usize,
        /// Action-coordinate weight in the agent's state-action metric.
        #[arg(long, default_value_t = 0.1)]
        action_weight: f64,
        /// Half-width of the uniform episode-start distribution.
        #[arg(long, default_value_t = 0.9)]
        start_spread: f64,
        #[arg(long, default_value_t = 1.0)]
        q_cap: f64,
    },
    /// Ball-refinement agent run as CSV
    /// `episode,mode,cumulative_reward,num_balls,min_radius`.
    Zoom {
        /// Index mode: lipschitz, l_alpha, or combined.
        #[arg(long, default_value = "combined")]
        mode: String,
        #[arg(long, default_value_t = 13)]
        episodes: usize,
        #[arg(long, default_value_t = 8)]
        max_steps: usize,
        /// Lipschitz constant used by the index.
        #[arg(long, default_value_t = 4.0)]
        l: f64,
        /// Per-scale constant used by the index.
        #[arg(long, default_value_t = 1.0)]
        l_alpha: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        q_cap: f64,
    },
    /// Bound-verification suite as JSON lines; exits 1 on any violation.
    Verify {
        /// One of: all, thm1, thm2, prop1, prop2, prop3, lemma1, appB.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Negative-control hook: tighten every bound by this factor.
        #[arg(long, hide = true, default_value_t = 1.0)]
        corrupt_bounds: f64,
    },
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn load_env(config: &Option<PathBuf>) -> Result<RiverswimConfig> {
    match config {
        Some(path) => load_riverswim_config(path),
        None => Ok(RiverswimConfig::default()),
    }
}

fn grid_points(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "grid needs at least 2 points (got {n})"
        )));
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

fn cmd_profile(
    w: &mut dyn Write,
    function: FunctionKind,
    sine: (f64, f64, f64),
    stairs: (f64, f64),
    alphas: &[f64],
    grid: usize,
    lo: Option<f64>,
    hi: Option<f64>,
) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidInput("need at least one alpha".into()));
    }
    let (eval, analytic): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>) = match function {
        FunctionKind::Sine => {
            let (a, omega, m) = sine;
            if !(a >= 0.0 && omega > 0.0 && m > 0.0) {
                return Err(Error::InvalidInput(
                    "sine needs amplitude >= 0, omega > 0, slope > 0".into(),
                ));
            }
            let f = SineRamp::new(a, omega, m);
            (
                Box::new(move |x| f.eval(x)),
                Box::new(move |al| f.l_alpha(al)),
            )
        }
        FunctionKind::Stairs => {
            let (a, width) = stairs;
            if !(a > 0.0 && width > 0.0) {
                return Err(Error::InvalidInput(
                    "stairs needs positive height and width".into(),
                ));
            }
            let f = Stairs::new(a, width);
            (
                Box::new(move |x| f.eval(x)),
                Box::new(move |al| f.l_alpha(al)),
            )
        }
    };
    let lo = lo.unwrap_or(0.0);
    let hi = hi.unwrap_or(match function {
        FunctionKind::Sine => 3.0,
        FunctionKind::Stairs => 1.0,
    });
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!(
            "need lo < hi (got [{lo}, {hi}])"
        )));
    }
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < hi - lo) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in (0, domain length) (got {alpha})"
            )));
        }
    }
    let pairs: Vec<(f64, f64)> = grid_points(lo, hi, grid)?
        .iter()
        .map(|&x| (x, eval(x)))
        .collect();
    let space = lalpha_core::metric::MetricSpace::interval(lo, hi)?;
    let samples = SampleSet::from_scalar_pairs(space, &pairs)?;
    writeln!(w, "alpha,L_alpha_analytic,L_alpha_empirical")?;
    for &alpha in alphas {
        let empirical = l_alpha_empirical(&samples, alpha)?;
        writeln!(
            w,
            "{},{},{}",
            fmt_float(alpha),
            fmt_float(analytic(alpha)),
            fmt_float(empirical)
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_envelope(
    w: &mut dyn Write,
    samples_path: &PathBuf,
    method: EnvelopeMethod,
    l: Option<f64>,
    alpha: Option<f64>,
    l_alpha: Option<f64>,
    profile_path: &Option<PathBuf>,
    grid: usize,
) -> Result<()> {
    let samples = load_samples(samples_path)?;
    if samples.space().dim() != 1 {
        return Err(Error::InvalidInput(format!(
            "envelope queries need 1-D samples (got dimension {})",
            samples.space().dim()
        )));
    }
    let need = |opt: Option<f64>, flag: &str| {
        opt.ok_or_else(|| Error::InvalidInput(format!("this method requires {flag}")))
    };
    enum Bound {
        Lipschitz(f64),
        LAlpha(f64, f64),
        Relaxed(f64, f64),
        Multi(lalpha_core::SmoothnessProfile),
    }
    let bound = match method {
        EnvelopeMethod::Lipschitz => Bound::Lipschitz(need(l, "--l")?),
        EnvelopeMethod::Lalpha => {
            Bound::LAlpha(need(alpha, "--alpha")?, need(l_alpha, "--l-alpha")?)
        }
        EnvelopeMethod::Relaxed => {
            Bound::Relaxed(need(alpha, "--alpha")?, need(l_alpha, "--l-alpha")?)
        }
        EnvelopeMethod::Multi => {
            let path = profile_path
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("this method requires --profile".into()))?;
            Bound::Multi(load_profile(path)?)
        }
    };
    let lo = samples.space().lower()[0];
    let hi = samples.space().upper()[0];
    writeln!(w, "x,lower,upper")?;
    for x in grid_points(lo, hi, grid)? {
        let q = Point::scalar(x)?;
        let env = match &bound {
            Bound::Lipschitz(l) => lipschitz_envelope(&samples, *l, &q)?,
            Bound::LAlpha(a, la) => l_alpha_envelope(&samples, *a, *la, &q)?,
            Bound::Relaxed(a, la) => relaxed_envelope(&samples, *a, *la, &q)?,
            Bound::Multi(profile) => multi_alpha_envelope(&samples, profile, &q)?,
        };
        writeln!(
            w,
            "{},{},{}",
            fmt_float(x),
            fmt_float(env.lower),
            fmt_float(env.upper)
        )?;
    }
    Ok(())
}

fn cmd_riverswim(
    w: &mut dyn Write,
    cfg: &RiverswimConfig,
    mode: ValueMode,
    states: usize,
    rollouts: usize,
    horizon: usize,
    seed: u64,
) -> Result<()> {
    cfg.validate()?;
    let grid = grid_points(-0.999, 0.999, states)?;
    match mode {
        ValueMode::Exact => {
            writeln!(w, "s,v_star")?;
            for &s in &grid {
                writeln!(w, "{},{}", fmt_float(s), fmt_float(v_star(cfg, s)?))?;
            }
        }
        ValueMode::Mc => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let estimates = mc_value_estimate(cfg, &grid, rollouts, horizon, &mut rng)?;
            writeln!(w, "s,v_star,mc_mean,mc_stderr")?;
            for (&s, est) in grid.iter().zip(&estimates) {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt_float(s),
                    fmt_float(v_star(cfg, s)?),
                    fmt_float(est.mean),
                    fmt_float(est.std_err)
                )?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    w: &mut dyn Write,
    env_cfg: &RiverswimConfig,
    values: &[f64],
    seeds: u64,
    episodes: usize,
    max_steps: usize,
    action_grid: usize,
    action_weight: f64,
    start_spread: f64,
    q_cap: f64,
    seed: u64,
) -> Result<()> {
    let base = OptimisticAgentConfig {
        l_replacement: 1.0,
        action_grid,
        episodes,
        max_steps,
        q_cap,
        gamma: env_cfg.gamma,
        action_weight,
        start_spread,
        seed,
    };
    let rows = sweep_replacement_l(values, seeds, env_cfg, &base)?;
    writeln!(w, "L_replacement,seed,total_reward")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{}",
            fmt_float(row.l_replacement),
            row.seed,
            fmt_float(row.total_reward)
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_zoom(
    w: &mut dyn Write,
    env_cfg: &RiverswimConfig,
    mode: &str,
    episodes: usize,
    max_steps: usize,
    l: f64,
    l_alpha: f64,
    alpha: f64,
    q_cap: f64,
    seed: u64,
) -> Result<()> {
    let mode = IndexMode::from_str(mode)?;
    let cfg = ZoomConfig {
        mode,
        l,
        l_alpha,
        alpha,
        q_cap,
        gamma: env_cfg.gamma,
        episodes,
        max_steps,
    };
    let stats = run_zoom(&cfg, env_cfg, seed)?;
    writeln!(w, "episode,mode,cumulative_reward,num_balls,min_radius")?;
    for st in stats {
        writeln!(
            w,
            "{},{},{},{},{}",
            st.episode,
            mode.as_str(),
            fmt_float(st.cumulative_reward),
            st.num_balls,
            fmt_float(st.min_radius)
        )?;
    }
    Ok(())
}

fn cmd_verify(w: &mut dyn Write, suite: &str, seed: u64, bound_scale: f64) -> Result<bool> {
    if !(bound_scale.is_finite() && bound_scale > 0.0) {
        return Err(Error::InvalidInput(format!(
            "--corrupt-bounds must be positive (got {bound_scale})"
        )));
    }
    let reports = run_suite(suite, seed, &CheckOptions { bound_scale })?;
    let all_passed = reports.iter().all(|r| r.passed);
    write_reports_jsonl(w, &reports)?;
    Ok(all_passed)
}

fn run(cli: Cli) -> Result<u8> {
    let mut w = open_out(&cli.out)?;
    let code = match &cli.command {
        Command::Profile {
            function,
            amplitude,
            omega,
            slope,
            step_height,
            step_width,
            alphas,
            grid,
            lo,
            hi,
        } => {
            cmd_profile(
                &mut w,
                *function,
                (*amplitude, *omega, *slope),
                (*step_height, *step_width),
                alphas,
                *grid,
                *lo,
                *hi,
            )?;
            0
        }
        Command::Envelope {
            samples,
            method,
            l,
            alpha,
            l_alpha,
            profile,
            grid,
        } => {
            cmd_envelope(
                &mut w, samples, *method, *l, *alpha, *l_alpha, profile, *grid,
            )?;
            0
        }
        Command::Riverswim {
            mode,
            states,
            rollouts,
            horizon,
        } => {
            let cfg = load_env(&cli.config)?;
            cmd_riverswim(&mut w, &cfg, *mode, *states, *rollouts, *horizon, cli.seed)?;
            0
        }
        Command::Sweep {
            values,
            seeds,
            episodes,
            max_steps,
            action_grid,
            action_weight,
            start_spread,
            q_cap,
        } => {
            let cfg = match &cli.config {
                Some(path) => load_riverswim_config(path)?,
                None => RiverswimConfig {
                    noise_sigma: 0.3,
                    ..RiverswimConfig::default()
                },
            };
            cmd_sweep(
                &mut w,
                &cfg,
                values,
                *seeds,
                *episodes,
                *max_steps,
                *action_grid,
                *action_weight,
                *start_spread,
                *q_cap,
                cli.seed,
            )?;
            0
        }
        Command::Zoom {
            mode,
            episodes,
            max_steps,
            l,
            l_alpha,
            alpha,
            q_cap,
        } => {
            let cfg = load_env(&cli.config)?;
            cmd_zoom(
                &mut w, &cfg, mode, *episodes, *max_steps, *l, *l_alpha, *alpha, *q_cap, cli.seed,
            )?;
            0
        }
        Command::Verify {
            suite,
            corrupt_bounds,
        } => {
            if cmd_verify(&mut w, suite, cli.seed, *corrupt_bounds)? {
                0
            } else {
                1
            }
        }
    };
    w.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
