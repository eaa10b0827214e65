//! Value-gap bounds for MDPs with reachability structure, and the Monte
//! Carlo harness that audits every bound on concrete instances.
//!
//! The reachability model: from any state, any state within `d_min` is
//! reachable in at most `k` steps with probability `1 - delta` (and on
//! failure the process strays at most `d_max`). Under that assumption the
//! optimal values of `d_min`-close state–action pairs differ by at most
//!
//! ```text
//! (1 - γ^k) / (1 - δ γ^k) · (Q*_max_pair - r_min/(1-γ))
//! ```
//!
//! with variants for stochastic drift (an additive `ΔQ*_{d_ε}` term), for
//! arbitrary distances (ceiling composition), and for a relaxed success
//! model (the exponent grows to `k̃ = k/((1-δ) - ⌈d_max/d_min⌉δ)`).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::num::tolerant_ceil;
use crate::riverswim::RiverswimConfig;
use crate::smoothness::{l_alpha_envelope, lipschitz_envelope, SampleSet};

/// Parameters of the reachability assumption plus the reward/discount data
/// the bounds need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityParams {
    /// Steps within which a `d_min`-ball is reachable.
    pub k: u32,
    /// Failure probability of a reach attempt.
    pub delta: f64,
    pub d_min: f64,
    pub r_min: f64,
    pub gamma: f64,
    /// Domain-level maximum optimal value.
    pub q_max: f64,
    /// Drift radius per attempt for the stochastic-drift bound.
    pub d_eps: Option<f64>,
    /// Value modulus at scale `d_eps` for the stochastic-drift bound.
    pub delta_q_eps: Option<f64>,
    /// Worst-case stray distance of a failed attempt.
    pub d_max: Option<f64>,
}

impl ReachabilityParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be a positive integer".into()));
        }
        if !(self.delta >= 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in [0,1) (got {})",
                self.delta
            )));
        }
        if !(self.d_min > 0.0 && self.d_min.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "d_min must be positive (got {})",
                self.d_min
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma must lie in (0,1) (got {})",
                self.gamma
            )));
        }
        if !(self.r_min.is_finite() && self.q_max.is_finite()) {
            return Err(Error::InvalidConfig(
                "r_min and q_max must be finite".into(),
            ));
        }
        if let Some(d_eps) = self.d_eps {
            if !(d_eps > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "d_eps must be positive (got {d_eps})"
                )));
            }
        }
        if let Some(dq) = self.delta_q_eps {
            if !(dq >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "delta_q_eps must be non-negative (got {dq})"
                )));
            }
        }
        if let Some(d_max) = self.d_max {
            if !(d_max > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "d_max must be positive (got {d_max})"
                )));
            }
            if self.delta > 0.0 && d_max >= (1.0 - self.delta) / self.delta * self.d_min {
                return Err(Error::InvalidConfig(format!(
                    "d_max = {d_max} reaches the divergence threshold ((1-delta)/delta)*d_min = {}",
                    (1.0 - self.delta) / self.delta * self.d_min
                )));
            }
        }
        Ok(())
    }

    /// Riverswim's deterministic instantiation: one step reaches any state
    /// within `a_max - c` with certainty, rewards are zero until a terminal
    /// one, and no state is worth more than `r_right`.
    pub fn for_riverswim(cfg: &RiverswimConfig) -> Self {
        Self {
            k: 1,
            delta: 0.0,
            d_min: cfg.a_max - cfg.c,
            r_min: 0.0,
            gamma: cfg.gamma,
            q_max: cfg.r_right,
            d_eps: None,
            delta_q_eps: None,
            d_max: None,
        }
    }
}

/// Gap bound for one pair of `d_min`-close points, parameterized by the pair
/// maximum `Q*_max,(1,2)`.
pub fn delta_q_bound(p: &ReachabilityParams, q_max_pair: f64) -> f64 {
    let value_floor = p.r_min / (1.0 - p.gamma);
    assert!(
        q_max_pair >= value_floor - 1e-12,
        "q_max_pair = {q_max_pair} below the value floor {value_floor}"
    );
    let gk = p.gamma.powi(p.k as i32);
    (1.0 - gk) / (1.0 - p.delta * gk) * (q_max_pair - value_floor)
}

/// Global gap bound `ΔQ*_max`: the pair bound at the domain-level maximum.
pub fn delta_q_max(p: &ReachabilityParams) -> f64 {
    delta_q_bound(p, p.q_max)
}

/// Gap bound under stochastic drift: the deterministic-reach bound plus the
/// value modulus at the drift scale, discounted by the successful branch.
pub fn delta_q_bound_stochastic(p: &ReachabilityParams, q_max_pair: f64) -> Result<f64> {
    let (Some(_), Some(delta_q_eps)) = (p.d_eps, p.delta_q_eps) else {
        return Err(Error::InvalidConfig(
            "stochastic bound needs both d_eps and delta_q_eps".into(),
        ));
    };
    let gk = p.gamma.powi(p.k as i32);
    Ok(delta_q_bound(p, q_max_pair) + gk * (1.0 - p.delta) / (1.0 - p.delta * gk) * delta_q_eps)
}

/// Expected hitting time, in `k`-step units, of a walker that descends one
/// level with probability `1 - delta` and climbs `d_dmax` levels otherwise:
/// `τ(D) = D / (1 - δ - δ·D_dmax)`.
pub fn random_walker_tau(delta: f64, d_dmax: u32, d: u32) -> Result<f64> {
    assert!((0.0..1.0).contains(&delta), "delta must lie in [0,1)");
    assert!(d >= 1, "distance must be at least one level");
    let denom = 1.0 - delta - delta * d_dmax as f64;
    if denom <= 0.0 {
        return Err(Error::Infeasible(format!(
            "expected hitting time diverges: 1 - delta - delta*D_dmax = {denom}"
        )));
    }
    Ok(d as f64 / denom)
}

/// Gap bound when failed reach attempts stray: the exponent is stretched to
/// `k̃ = k / ((1-δ) - ⌈d_max/d_min⌉·δ)`. Only meaningful for `r_min <= 0`,
/// where longer expected travel can only loosen the bound.
pub fn delta_q_bound_relaxed(p: &ReachabilityParams, q_max_pair: f64) -> Result<f64> {
    if p.r_min > 0.0 {
        return Err(Error::InvalidInput(format!(
            "relaxed bound requires r_min <= 0 (got {})",
            p.r_min
        )));
    }
    let Some(d_max) = p.d_max else {
        return Err(Error::InvalidConfig("relaxed bound needs d_max".into()));
    };
    let ratio = tolerant_ceil(d_max / p.d_min);
    let denom = (1.0 - p.delta) - ratio * p.delta;
    if denom <= 0.0 {
        return Err(Error::Infeasible(format!(
            "(1-delta) - ceil(d_max/d_min)*delta = {denom}; expected travel diverges"
        )));
    }
    let k_tilde = p.k as f64 / denom;
    let value_floor = p.r_min / (1.0 - p.gamma);
    Ok((1.0 - p.gamma.powf(k_tilde)) * (q_max_pair - value_floor))
}

/// Gap bound for points at arbitrary distance: chain `⌈d/d_min⌉` hops of the
/// global bound.
pub fn lemma_any_points_bound(p: &ReachabilityParams, d: f64) -> f64 {
    assert!(d >= 0.0, "distance must be non-negative");
    delta_q_max(p) * tolerant_ceil(d / p.d_min)
}

/// Smoothness cap implied by reachability: `L_{d_min} <= 2·ΔQ*_max / d_min`.
pub fn l_alpha_upper_bound(p: &ReachabilityParams) -> f64 {
    2.0 * delta_q_max(p) / p.d_min
}

/// Radius around an observation inside which the plain Lipschitz envelope
/// can still beat the coarse one: `α` itself when `L_α > L/3`, else
/// `2·L_α·α/(L - L_α)`. Continuous at `L_α = L/3` and never larger than `α`.
pub fn switch_distance(l: f64, l_alpha: f64, alpha: f64) -> Result<f64> {
    assert!(l_alpha > 0.0, "l_alpha must be positive");
    assert!(alpha > 0.0, "alpha must be positive");
    if l < l_alpha {
        return Err(Error::InvalidInput(format!(
            "need L >= L_alpha (got L={l}, L_alpha={l_alpha})"
        )));
    }
    if l_alpha > l / 3.0 {
        Ok(alpha)
    } else {
        Ok(2.0 * l_alpha * alpha / (l - l_alpha))
    }
}

/// Lower bound on the volume fraction where the coarse envelope is tighter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessBound {
    pub bound: f64,
    /// False when `(C_D/C_DX)(l_α/l_X)^D·N >= 1`, in which case the bound
    /// degenerates to zero and asserts nothing.
    pub hypothesis_holds: bool,
}

/// Fraction of the domain where the coarse envelope from `n` observations is
/// guaranteed tighter than the Lipschitz one: at least
/// `1 - (C_D/C_DX)·(l_α/l_X)^D·N`.
pub fn volume_fraction_bound(
    space: &MetricSpace,
    l: f64,
    l_alpha: f64,
    alpha: f64,
    n: usize,
) -> Result<TightnessBound> {
    let l_a = switch_distance(l, l_alpha, alpha)?;
    let constants = space.linear_size()?;
    let d = space.dim() as f64;
    let mass = constants.c_d / constants.c_dx * (l_a / constants.l_x).powf(d) * n as f64;
    if mass < 1.0 {
        Ok(TightnessBound {
            bound: 1.0 - mass,
            hypothesis_holds: true,
        })
    } else {
        Ok(TightnessBound {
            bound: 0.0,
            hypothesis_holds: false,
        })
    }
}

fn uniform_point<R: Rng + ?Sized>(space: &MetricSpace, rng: &mut R) -> crate::metric::Point {
    let coords = space
        .lower()
        .iter()
        .zip(space.upper())
        .map(|(&lo, &hi)| rng.gen_range(lo..hi))
        .collect();
    crate::metric::Point::new(coords).expect("box coordinates are finite")
}

/// Monte Carlo estimate of the fraction of the domain where the coarse
/// envelope is strictly tighter than the Lipschitz one.
pub fn measure_tightness_fraction<R: Rng + ?Sized>(
    samples: &SampleSet,
    l: f64,
    alpha: f64,
    l_alpha: f64,
    queries: usize,
    rng: &mut R,
) -> Result<f64> {
    assert!(queries > 0, "need at least one query point");
    let mut tighter = 0usize;
    for _ in 0..queries {
        let x = uniform_point(samples.space(), rng);
        let coarse = l_alpha_envelope(samples, alpha, l_alpha, &x)?.width();
        let plain = lipschitz_envelope(samples, l, &x)?.width();
        if coarse < plain {
            tighter += 1;
        }
    }
    Ok(tighter as f64 / queries as f64)
}

/// Episode horizon within which the coarse-grained agent enjoys the improved
/// regret regime: `2/(3α)`.
pub fn zoomrl_episode_threshold(alpha: f64) -> f64 {
    assert!(alpha > 0.0, "alpha must be positive");
    2.0 / (3.0 * alpha)
}

/// Outcome of one verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: u64,
    pub violations: u64,
    pub max_violation: f64,
    pub bound_value: f64,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        trials: u64,
        violations: u64,
        max_violation: f64,
        bound_value: f64,
    ) -> Self {
        Self {
            name: name.into(),
            trials,
            violations,
            max_violation,
            bound_value,
            passed: violations == 0,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are always serializable")
    }
}

pub mod checks {
    //! Randomized audits of every bound against instances with known ground
    //! truth. Each audit reports trials, violations, and the largest
    //! exceedance; a clean run has zero violations.

    use super::*;
    use crate::agents::zoom::{run_zoom_with_trees, BallTree, IndexMode, ZoomConfig};
    use crate::analytic::PiecewiseLinear;
    use crate::metric::Point;
    use crate::num::mean_stderr;
    use crate::riverswim::{q_star, q_star_interior};
    use crate::smoothness::{l_alpha_empirical, max_jump_given_l_alpha, Observation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Knobs shared by every audit. `bound_scale` deliberately tightens each
    /// verified bound by the given factor (bounds shrink, required margins
    /// grow); anything other than 1.0 is a negative-control corruption that
    /// should make the suite fail.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct CheckOptions {
        pub bound_scale: f64,
    }

    impl Default for CheckOptions {
        fn default() -> Self {
            Self { bound_scale: 1.0 }
        }
    }

    const TOL: f64 = 1e-12;

    fn require_deterministic(cfg: &RiverswimConfig) -> Result<()> {
        cfg.validate()?;
        if cfg.noise_sigma != 0.0 {
            return Err(Error::InvalidConfig(
                "closed-form audits need a deterministic environment (noise_sigma = 0)".into(),
            ));
        }
        Ok(())
    }

    /// Draws a matched-action pair with both points in the interior branch
    /// of the closed-form Q*. The reachability argument transits from the
    /// lower-value point to the higher one through the river; pairs whose
    /// optimal step already exits have no such transit, so the audit samples
    /// the regime the bound speaks about.
    fn interior_pair<R: Rng + ?Sized>(
        cfg: &RiverswimConfig,
        max_gap: Option<f64>,
        rng: &mut R,
    ) -> (f64, f64, f64) {
        for _ in 0..100_000 {
            let s1 = rng.gen_range(-0.999..0.999);
            let a = rng.gen_range(-cfg.a_max..cfg.a_max);
            let s2 = match max_gap {
                Some(gap) => (s1 + rng.gen_range(-gap..gap)).clamp(-0.999, 0.999),
                None => rng.gen_range(-0.999..0.999),
            };
            if q_star_interior(cfg, s1, a) && q_star_interior(cfg, s2, a) {
                return (s1, s2, a);
            }
        }
        unreachable!("interior pairs have positive probability under the default geometry");
    }

    /// Per-pair gap bound at distance `<= d_min`, matched actions.
    pub fn verify_theorem1<R: Rng + ?Sized>(
        cfg: &RiverswimConfig,
        pairs: u64,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        require_deterministic(cfg)?;
        let p = ReachabilityParams::for_riverswim(cfg);
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        for _ in 0..pairs {
            let (s1, s2, a) = interior_pair(cfg, Some(p.d_min), rng);
            let q1 = q_star(cfg, s1, a)?;
            let q2 = q_star(cfg, s2, a)?;
            let gap = (q1 - q2).abs();
            let bound = delta_q_bound(&p, q1.max(q2)) * opts.bound_scale;
            if gap > bound + TOL {
                violations += 1;
                max_violation = max_violation.max(gap - bound);
            }
        }
        Ok(CheckReport::new(
            "theorem1_riverswim",
            pairs,
            violations,
            max_violation,
            delta_q_max(&p),
        ))
    }

    /// Global gap bound at distance `<= d_min`: the pair bound evaluated at
    /// the domain maximum.
    pub fn verify_corollary1<R: Rng + ?Sized>(
        cfg: &RiverswimConfig,
        pairs: u64,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        require_deterministic(cfg)?;
        let p = ReachabilityParams::for_riverswim(cfg);
        let bound = delta_q_max(&p) * opts.bound_scale;
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        for _ in 0..pairs {
            let (s1, s2, a) = interior_pair(cfg, Some(p.d_min), rng);
            let gap = (q_star(cfg, s1, a)? - q_star(cfg, s2, a)?).abs();
            if gap > bound + TOL {
                violations += 1;
                max_violation = max_violation.max(gap - bound);
            }
        }
        Ok(CheckReport::new(
            "corollary1_riverswim",
            pairs,
            violations,
            max_violation,
            bound,
        ))
    }

    /// Arbitrary-distance pairs against the ceiling-composed bound.
    pub fn verify_lemma1<R: Rng + ?Sized>(
        cfg: &RiverswimConfig,
        pairs: u64,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        require_deterministic(cfg)?;
        let p = ReachabilityParams::for_riverswim(cfg);
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        for _ in 0..pairs {
            let (s1, s2, a) = interior_pair(cfg, None, rng);
            let gap = (q_star(cfg, s1, a)? - q_star(cfg, s2, a)?).abs();
            let bound = lemma_any_points_bound(&p, (s1 - s2).abs()) * opts.bound_scale;
            if gap > bound + TOL {
                violations += 1;
                max_violation = max_violation.max(gap - bound);
            }
        }
        Ok(CheckReport::new(
            "lemma1_riverswim",
            pairs,
            violations,
            max_violation,
            lemma_any_points_bound(&p, 2.0),
        ))
    }

    /// Empirical smoothness of Q* along the full-strength swim at scale
    /// `d_min`, against `2·ΔQ*_max/d_min`. States are restricted to those
    /// whose full swim stays inside the river (the regime with a
    /// `d_min`-reachable higher-value successor).
    pub fn verify_prop2(
        cfg: &RiverswimConfig,
        grid: usize,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        require_deterministic(cfg)?;
        assert!(grid >= 2, "need at least two grid states");
        let p = ReachabilityParams::for_riverswim(cfg);
        let lo = -0.999;
        let hi = cfg.c + 1.0 - cfg.a_max - 1e-9;
        let space = MetricSpace::interval(lo, hi)?;
        let mut observations = Vec::with_capacity(grid);
        for i in 0..grid {
            let s = lo + (hi - lo) * i as f64 / (grid - 1) as f64;
            observations.push(Observation {
                x: Point::scalar(s)?,
                f: q_star(cfg, s, cfg.a_max)?,
            });
        }
        let samples = SampleSet::new(space, observations)?;
        let empirical = l_alpha_empirical(&samples, p.d_min)?;
        let bound = l_alpha_upper_bound(&p) * opts.bound_scale;
        let violated = empirical > bound + TOL;
        Ok(CheckReport::new(
            "prop2_riverswim",
            grid as u64,
            violated as u64,
            if violated { empirical - bound } else { 0.0 },
            bound,
        ))
    }

    /// Jump cap `2αL_α` over a corpus of generated piecewise-linear
    /// functions with exactly computed coarse constants: both the exact
    /// breakpoint jumps and a dense adjacent-grid scan must respect the cap.
    pub fn verify_prop1<R: Rng + ?Sized>(
        functions: usize,
        grid: usize,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> CheckReport {
        assert!(functions > 0 && grid >= 2);
        let alphas = [0.02, 0.05, 0.1];
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        let mut largest_cap = 0.0f64;
        for i in 0..functions {
            let f = PiecewiseLinear::random(rng, 6, 2.0, 1.0);
            let alpha = alphas[i % alphas.len()];
            let l_alpha = f.l_alpha(alpha);
            let cap = max_jump_given_l_alpha(alpha, l_alpha) * opts.bound_scale;
            largest_cap = largest_cap.max(cap);
            let (lo, hi) = f.domain();
            let mut largest_jump = f.max_jump();
            let mut prev = f.eval(lo);
            for j in 1..=grid {
                let x = lo + (hi - lo) * j as f64 / grid as f64;
                let v = f.eval(x);
                largest_jump = largest_jump.max((v - prev).abs());
                prev = v;
            }
            if largest_jump > cap + 1e-9 {
                violations += 1;
                max_violation = max_violation.max(largest_jump - cap);
            }
        }
        CheckReport::new(
            "prop1_jump_cap",
            functions as u64,
            violations,
            max_violation,
            largest_cap,
        )
    }

    /// Randomized tightness configurations: the measured tighter-fraction
    /// must reach the volume-fraction bound up to Monte Carlo error.
    pub fn verify_theorem2<R: Rng + ?Sized>(
        configs: usize,
        queries: usize,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        assert!(configs > 0 && queries > 0);
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        let mut last_bound = 0.0f64;
        for _ in 0..configs {
            let dim = if rng.gen::<bool>() { 1 } else { 2 };
            let mut lower = Vec::with_capacity(dim);
            let mut upper = Vec::with_capacity(dim);
            for _ in 0..dim {
                let lo = rng.gen_range(-2.0..0.0);
                lower.push(lo);
                upper.push(lo + rng.gen_range(0.5..2.5));
            }
            let space = if rng.gen::<bool>() {
                MetricSpace::euclidean(lower, upper)?
            } else {
                MetricSpace::l1(lower, upper)?
            };
            let n = rng.gen_range(1..=6usize);
            let observations: Vec<Observation> = (0..n)
                .map(|_| Observation {
                    x: uniform_point(&space, rng),
                    f: rng.gen_range(-1.0..1.0),
                })
                .collect();
            let samples = SampleSet::new(space.clone(), observations)?;
            let l = rng.gen_range(1.0..8.0);
            let l_alpha = l * rng.gen_range(0.1..0.9);
            let mut alpha = rng.gen_range(0.02..0.3);
            let mut tightness = volume_fraction_bound(&space, l, l_alpha, alpha, n)?;
            for _ in 0..200 {
                if tightness.hypothesis_holds {
                    break;
                }
                alpha *= 0.5;
                tightness = volume_fraction_bound(&space, l, l_alpha, alpha, n)?;
            }
            if !tightness.hypothesis_holds {
                return Err(Error::DegenerateInput(
                    "could not reach the tightness hypothesis by shrinking alpha".into(),
                ));
            }
            let bound = tightness.bound / opts.bound_scale;
            last_bound = bound;
            let measured = measure_tightness_fraction(&samples, l, alpha, l_alpha, queries, rng)?;
            let sigma = (measured * (1.0 - measured) / queries as f64)
                .sqrt()
                .max(1.0 / queries as f64);
            if measured < bound - 3.0 * sigma - TOL {
                violations += 1;
                max_violation = max_violation.max(bound - 3.0 * sigma - measured);
            }
        }
        Ok(CheckReport::new(
            "theorem2_tightness",
            configs as u64,
            violations,
            max_violation,
            last_bound,
        ))
    }

    fn sample_in_ball<R: Rng + ?Sized>(
        tree: &BallTree,
        i: usize,
        s_half: f64,
        a_half: f64,
        rng: &mut R,
    ) -> (f64, f64) {
        let b = &tree.balls()[i];
        let s =
            (b.center_s + rng.gen_range(-b.radius..b.radius)).clamp(-s_half + 1e-6, s_half - 1e-6);
        let a = (b.center_a + rng.gen_range(-b.radius..b.radius)).clamp(-a_half, a_half);
        (s, a)
    }

    /// Grows a random tree through the public visit/refine mechanics. The
    /// radius floor is live (no episodes are recorded), so every radius
    /// stays at or above `3α` by construction.
    fn random_tree<R: Rng + ?Sized>(rng: &mut R) -> BallTree {
        let alpha = rng.gen_range(0.02..0.08);
        let l = rng.gen_range(2.0..10.0);
        let l_alpha = l * rng.gen_range(0.1..0.5);
        let q_cap = rng.gen_range(0.5..2.0);
        let mut tree = BallTree::new(IndexMode::Combined, l, l_alpha, alpha, q_cap, 1.0, 1.0)
            .expect("constants are in range");
        let growths = rng.gen_range(0..12usize);
        for _ in 0..growths {
            let i = rng.gen_range(0..tree.num_balls());
            let radius = tree.balls()[i].radius;
            let needed = (1.0 / radius).ceil() as u64;
            while tree.balls()[i].visits < needed {
                let (s, a) = sample_in_ball(&tree, i, 1.0, 1.0, rng);
                tree.record_visit(i, s, a).expect("ball id is valid");
            }
            tree.try_refine(i).expect("ball id is valid");
        }
        for i in 0..tree.num_balls() {
            let q = rng.gen_range(0.0..q_cap);
            tree.set_q_hat(i, q).expect("ball id is valid");
        }
        tree
    }

    /// Index dominance in the floor regime: with `L_α <= L/2` and all radii
    /// at least `3α`, the coarse index never exceeds the Lipschitz index.
    pub fn verify_prop3_indices<R: Rng + ?Sized>(
        trees: usize,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> CheckReport {
        assert!(trees > 0);
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        let mut audited = 0u64;
        for _ in 0..trees {
            let tree = random_tree(rng);
            debug_assert!(tree.min_radius() >= 3.0 * tree.alpha() - TOL);
            for i in 0..tree.num_balls() {
                audited += 1;
                let coarse = tree
                    .index_with_mode(i, IndexMode::LAlpha)
                    .expect("valid id");
                let plain = tree
                    .index_with_mode(i, IndexMode::Lipschitz)
                    .expect("valid id")
                    * opts.bound_scale;
                if coarse > plain + TOL {
                    violations += 1;
                    max_violation = max_violation.max(coarse - plain);
                }
            }
        }
        CheckReport::new(
            "prop3_index_dominance",
            audited,
            violations,
            max_violation,
            0.0,
        )
    }

    /// Live-run radius floor: during the first `⌊2/(3α)⌋` episodes no ball
    /// may shrink below `3α`, in any index mode.
    pub fn verify_radius_floor(
        env_cfg: &RiverswimConfig,
        seeds: u64,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        let base = ZoomConfig::default();
        let episodes = zoomrl_episode_threshold(base.alpha).floor() as usize;
        let floor = 3.0 * base.alpha / opts.bound_scale;
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        let mut trials = 0;
        for seed in 0..seeds {
            for mode in [IndexMode::Lipschitz, IndexMode::LAlpha, IndexMode::Combined] {
                let cfg = ZoomConfig {
                    mode,
                    episodes,
                    ..base
                };
                let stats = crate::agents::zoom::run_zoom(&cfg, env_cfg, seed)?;
                for stat in &stats {
                    trials += 1;
                    if stat.min_radius < floor - TOL {
                        violations += 1;
                        max_violation = max_violation.max(floor - stat.min_radius);
                    }
                }
            }
        }
        Ok(CheckReport::new(
            "prop3_radius_floor",
            trials,
            violations,
            max_violation,
            floor,
        ))
    }

    /// Index validity during the floor regime: with constants that really
    /// bound the closed-form Q* (estimated on a dense grid and inflated for
    /// safety), every ball's index upper-bounds Q* at sampled points inside
    /// the ball, in every mode.
    pub fn verify_index_validity<R: Rng + ?Sized>(
        cfg: &RiverswimConfig,
        samples: usize,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        require_deterministic(cfg)?;
        assert!(samples > 0);
        // sup |ΔQ*| / d over Chebyshev distances >= alpha, on a dense grid
        let alpha = 0.05;
        let (ns, na) = (80usize, 33usize);
        let mut pts = Vec::with_capacity(ns * na);
        for i in 0..ns {
            let s = -0.999 + 1.998 * i as f64 / (ns - 1) as f64;
            for j in 0..na {
                let a = -cfg.a_max + 2.0 * cfg.a_max * j as f64 / (na - 1) as f64;
                pts.push((s, a, q_star(cfg, s, a)?));
            }
        }
        let mut l_alpha_grid = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = (pts[i].0 - pts[j].0).abs().max((pts[i].1 - pts[j].1).abs());
                if d >= alpha {
                    l_alpha_grid = l_alpha_grid.max((pts[i].2 - pts[j].2).abs() / d);
                }
            }
        }
        let l_alpha = 1.1 * l_alpha_grid; // grid sup underestimates; inflate
        let l = 2.0 * l_alpha;
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        let mut audited = 0u64;
        'outer: for mode in [IndexMode::Lipschitz, IndexMode::LAlpha, IndexMode::Combined] {
            for seed in 0..4u64 {
                let zoom_cfg = ZoomConfig {
                    mode,
                    l,
                    l_alpha,
                    alpha,
                    q_cap: cfg.r_right,
                    gamma: cfg.gamma,
                    episodes: zoomrl_episode_threshold(alpha).floor() as usize,
                    max_steps: 8,
                };
                let (_, trees) = run_zoom_with_trees(&zoom_cfg, cfg, seed)?;
                for _ in 0..samples / 12 + 1 {
                    let tree = &trees[rng.gen_range(0..trees.len())];
                    let i = rng.gen_range(0..tree.num_balls());
                    let (s, a) = sample_in_ball(tree, i, 1.0, cfg.a_max, rng);
                    let truth = q_star(cfg, s, a)?;
                    let index = tree.index(i).expect("valid id") * opts.bound_scale;
                    audited += 1;
                    if truth > index + 1e-9 {
                        violations += 1;
                        max_violation = max_violation.max(truth - index);
                    }
                    if audited >= samples as u64 {
                        break 'outer;
                    }
                }
            }
        }
        Ok(CheckReport::new(
            "prop3_index_validity",
            audited,
            violations,
            max_violation,
            l_alpha,
        ))
    }

    /// One walker episode: epochs until the level count first reaches zero.
    fn walker_episode<R: Rng + ?Sized>(delta: f64, d_dmax: u32, d: u32, rng: &mut R) -> u64 {
        let mut level = d as i64;
        let mut epochs = 0u64;
        while level > 0 {
            epochs += 1;
            if rng.gen::<f64>() < delta {
                level += d_dmax as i64;
            } else {
                level -= 1;
            }
        }
        epochs
    }

    /// Simulated mean hitting time against the closed form, within three
    /// standard errors.
    pub fn verify_walker_tau<R: Rng + ?Sized>(
        episodes: u64,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        assert!(episodes >= 100);
        let (delta, d_dmax, d) = (0.1, 3u32, 1u32);
        let tau = random_walker_tau(delta, d_dmax, d)? * opts.bound_scale;
        let times: Vec<f64> = (0..episodes)
            .map(|_| walker_episode(delta, d_dmax, d, rng) as f64)
            .collect();
        let (mean, se) = mean_stderr(&times);
        let excess = (mean - tau).abs() - 3.0 * se;
        let violated = excess > 0.0;
        Ok(CheckReport::new(
            "appB_walker_tau",
            episodes,
            violated as u64,
            if violated { excess } else { 0.0 },
            tau,
        ))
    }

    /// Relaxed-reach gap bound against reward-weighted walker simulations:
    /// the simulated gap `(1 - mean γ^{kT})·(q_max - r_min/(1-γ))` must stay
    /// under the closed-form bound, up to Monte Carlo error. Strictness
    /// comes from Jensen: the bound discounts at the *expected* hitting
    /// time, the simulation averages the discounts themselves.
    pub fn verify_theorem4_walker<R: Rng + ?Sized>(
        configs: usize,
        episodes_per: u64,
        rng: &mut R,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        assert!(configs > 0 && episodes_per >= 50);
        let mut violations = 0;
        let mut max_violation = 0.0f64;
        let mut last_bound = 0.0f64;
        for _ in 0..configs {
            let (delta, d_dmax) = loop {
                let delta = rng.gen_range(0.05..0.25);
                let d_dmax = rng.gen_range(1..=3u32);
                if 1.0 - delta - delta * d_dmax as f64 >= 0.1 {
                    break (delta, d_dmax);
                }
            };
            let k = rng.gen_range(1..=3u32);
            let gamma = rng.gen_range(0.5..0.95);
            let q_max = rng.gen_range(0.5..2.0);
            let r_min = rng.gen_range(-1.0..0.0);
            let d_min = 1.0;
            let d_max = d_min * (d_dmax as f64 - rng.gen_range(0.0..0.99));
            let p = ReachabilityParams {
                k,
                delta,
                d_min,
                r_min,
                gamma,
                q_max,
                d_eps: None,
                delta_q_eps: None,
                d_max: Some(d_max),
            };
            p.validate()?;
            let bound = delta_q_bound_relaxed(&p, q_max)? * opts.bound_scale;
            last_bound = bound;
            let scale = q_max - r_min / (1.0 - gamma);
            let discounts: Vec<f64> = (0..episodes_per)
                .map(|_| gamma.powi((k as u64 * walker_episode(delta, d_dmax, 1, rng)) as i32))
                .collect();
            let (mean, se) = mean_stderr(&discounts);
            let gap = (1.0 - mean) * scale;
            let slack = 3.0 * se * scale;
            if gap > bound + slack + TOL {
                violations += 1;
                max_violation = max_violation.max(gap - bound - slack);
            }
        }
        Ok(CheckReport::new(
            "appB_theorem4",
            configs as u64 * episodes_per,
            violations,
            max_violation,
            last_bound,
        ))
    }

    fn seeded(seed: u64, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed.wrapping_add(salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }

    /// Named suites as exposed by the harness; `all` runs everything.
    pub fn run_suite(suite: &str, seed: u64, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let cfg = RiverswimConfig::default();
        let noisy = RiverswimConfig {
            noise_sigma: 0.03,
            ..cfg
        };
        let mut reports = Vec::new();
        let all = suite == "all";
        match suite {
            "all" | "thm1" | "thm2" | "prop1" | "prop2" | "prop3" | "lemma1" | "appB" => {}
            other => return Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
        }
        if all || suite == "thm1" {
            reports.push(verify_theorem1(&cfg, 20_000, &mut seeded(seed, 1), opts)?);
            reports.push(verify_corollary1(&cfg, 20_000, &mut seeded(seed, 2), opts)?);
        }
        if all || suite == "lemma1" {
            reports.push(verify_lemma1(&cfg, 20_000, &mut seeded(seed, 3), opts)?);
        }
        if all || suite == "thm2" {
            reports.push(verify_theorem2(30, 20_000, &mut seeded(seed, 4), opts)?);
        }
        if all || suite == "prop1" {
            reports.push(verify_prop1(60, 2_000, &mut seeded(seed, 5), opts));
        }
        if all || suite == "prop2" {
            reports.push(verify_prop2(&cfg, 400, opts)?);
        }
        if all || suite == "prop3" {
            reports.push(verify_prop3_indices(200, &mut seeded(seed, 6), opts));
            reports.push(verify_radius_floor(&noisy, 5, opts)?);
            reports.push(verify_index_validity(
                &cfg,
                2_000,
                &mut seeded(seed, 7),
                opts,
            )?);
        }
        if all || suite == "appB" {
            reports.push(verify_walker_tau(200_000, &mut seeded(seed, 8), opts)?);
            reports.push(verify_theorem4_walker(20, 200, &mut seeded(seed, 9), opts)?);
        }
        Ok(reports)
    }
}
