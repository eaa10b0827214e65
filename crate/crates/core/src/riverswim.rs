//! Continuous riverswim: a 1-D episodic MDP on `(-1, 1)` where every action
//! is pushed left by a current `c`. Reaching `s <= -1` pays `r_left`,
//! reaching `s >= 1` pays the larger `r_right`. The always-right optimal
//! value function has the closed form
//!
//! ```text
//! V*(s) = r_right * gamma^ceil((1 - s) / (a_max - c))
//! ```
//!
//! with rewards discounted by arrival time, and Q* follows by branching on
//! whether `s + a` already exits the river.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_a_max() -> f64 {
    1.0
}
fn default_c() -> f64 {
    0.3
}
fn default_r_left() -> f64 {
    0.01
}
fn default_r_right() -> f64 {
    1.0
}
fn default_gamma() -> f64 {
    0.95
}

/// Environment parameters. `noise_sigma` is the transition-noise standard
/// deviation as a fraction of `a_max` (0 = deterministic); `c` is the
/// strength of the leftward current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiverswimConfig {
    #[serde(default = "default_a_max")]
    pub a_max: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_r_left")]
    pub r_left: f64,
    #[serde(default = "default_r_right")]
    pub r_right: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub s0: f64,
}

impl Default for RiverswimConfig {
    fn default() -> Self {
        Self {
            a_max: default_a_max(),
            c: default_c(),
            r_left: default_r_left(),
            r_right: default_r_right(),
            gamma: default_gamma(),
            noise_sigma: 0.0,
            s0: 0.0,
        }
    }
}

impl RiverswimConfig {
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.a_max,
            self.c,
            self.r_left,
            self.r_right,
            self.gamma,
            self.noise_sigma,
            self.s0,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidConfig(
                "riverswim parameters must be finite".into(),
            ));
        }
        if !(self.a_max > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "a_max must be positive (got {})",
                self.a_max
            )));
        }
        if !(0.0 <= self.c && self.c <= self.a_max) {
            return Err(Error::InvalidConfig(format!(
                "current must satisfy 0 <= c <= a_max (got c={}, a_max={})",
                self.c, self.a_max
            )));
        }
        if !(self.r_right > self.r_left) {
            return Err(Error::InvalidConfig(format!(
                "need r_right > r_left (got {} <= {})",
                self.r_right, self.r_left
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma must lie in (0,1) (got {})",
                self.gamma
            )));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "noise_sigma must be non-negative (got {})",
                self.noise_sigma
            )));
        }
        if !(self.s0 > -1.0 && self.s0 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "s0 must lie in (-1,1) (got {})",
                self.s0
            )));
        }
        // No-left-optimal regime: moving left must never beat swimming right
        // from any state, i.e. r_left <= r_right * gamma^floor(2/(a_max-c)).
        let exponent = (2.0 / (self.a_max - self.c)).floor();
        if self.r_left > self.r_right * self.gamma.powf(exponent) {
            return Err(Error::InvalidConfig(format!(
                "r_left = {} admits left-optimal states (cap {})",
                self.r_left,
                self.r_right * self.gamma.powf(exponent)
            )));
        }
        Ok(())
    }

    /// Reachability granularity of the deterministic dynamics: any state
    /// within `a_max - c` is reachable in one step.
    #[inline]
    pub fn d_min(&self) -> f64 {
        self.a_max - self.c
    }
}

/// One environment transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub s_next: f64,
    pub reward: f64,
    pub done: bool,
}

/// Advances the dynamics by one step. The action is clipped to
/// `[-a_max, a_max]`; Gaussian noise of std `noise_sigma * a_max` is added
/// when configured, and terminal detection looks at the post-noise state.
pub fn step<R: Rng + ?Sized>(
    cfg: &RiverswimConfig,
    s: f64,
    a: f64,
    rng: &mut R,
) -> Result<Transition> {
    if !(s > -1.0 && s < 1.0) {
        return Err(Error::InvalidInput(format!(
            "stepping from terminal state s = {s}"
        )));
    }
    let a = a.clamp(-cfg.a_max, cfg.a_max);
    let mut s_next = s + a - cfg.c;
    if cfg.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, cfg.noise_sigma * cfg.a_max)
            .expect("validated noise std")
            .sample(rng);
        s_next += noise;
    }
    let (reward, done) = if s_next <= -1.0 {
        (cfg.r_left, true)
    } else if s_next >= 1.0 {
        (cfg.r_right, true)
    } else {
        (0.0, false)
    };
    Ok(Transition {
        s_next,
        reward,
        done,
    })
}

/// Closed-form optimal value of the deterministic dynamics.
pub fn v_star(cfg: &RiverswimConfig, s: f64) -> Result<f64> {
    if cfg.a_max <= cfg.c {
        return Err(Error::InvalidConfig(
            "a_max must exceed the current for the closed-form value".into(),
        ));
    }
    assert!(s > -1.0 && s < 1.0, "v_star queried at terminal state {s}");
    let steps = ((1.0 - s) / (cfg.a_max - cfg.c)).ceil();
    Ok(cfg.r_right * cfg.gamma.powf(steps))
}

/// Closed-form optimal action value of the deterministic dynamics:
/// `r_left` / `r_right` when `s + a` exits immediately, else
/// `gamma * v_star(s + a - c)`.
pub fn q_star(cfg: &RiverswimConfig, s: f64, a: f64) -> Result<f64> {
    assert!(s > -1.0 && s < 1.0, "q_star queried at terminal state {s}");
    assert!(
        a.abs() <= cfg.a_max + 1e-12,
        "action {a} outside [-a_max, a_max]"
    );
    let reach = s + a;
    if reach <= cfg.c - 1.0 {
        Ok(cfg.r_left)
    } else if reach >= cfg.c + 1.0 {
        Ok(cfg.r_right)
    } else {
        Ok(cfg.gamma * v_star(cfg, reach - cfg.c)?)
    }
}

/// Whether `(s, a)` lands in the interior branch of the closed-form Q*
/// (the step neither exits left nor right).
#[inline]
pub fn q_star_interior(cfg: &RiverswimConfig, s: f64, a: f64) -> bool {
    let reach = s + a;
    reach > cfg.c - 1.0 && reach < cfg.c + 1.0
}

/// Monte Carlo value estimate at one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueEstimate {
    pub mean: f64,
    pub std_err: f64,
}

/// Mean discounted return of the always-`a_max` policy from each state,
/// with per-state standard errors. Rewards are discounted by arrival time,
/// matching the closed form (one step to goal pays `gamma * r_right`).
pub fn mc_value_estimate<R: Rng + ?Sized>(
    cfg: &RiverswimConfig,
    states: &[f64],
    rollouts: usize,
    horizon: usize,
    rng: &mut R,
) -> Result<Vec<ValueEstimate>> {
    assert!(rollouts >= 1, "need at least one rollout");
    assert!(horizon >= 1, "need a positive horizon");
    if cfg.a_max <= cfg.c {
        return Err(Error::InvalidConfig(
            "a_max must exceed the current or rollouts never terminate".into(),
        ));
    }
    let mut out = Vec::with_capacity(states.len());
    let mut returns = Vec::with_capacity(rollouts);
    for &s0 in states {
        returns.clear();
        for _ in 0..rollouts {
            let mut s = s0;
            let mut discount = 1.0;
            let mut ret = 0.0;
            for _ in 0..horizon {
                let t = step(cfg, s, cfg.a_max, rng)?;
                discount *= cfg.gamma;
                ret += discount * t.reward;
                if t.done {
                    break;
                }
                s = t.s_next;
            }
            returns.push(ret);
        }
        let (mean, std_err) = crate::num::mean_stderr(&returns);
        out.push(ValueEstimate { mean, std_err });
    }
    Ok(out)
}

/// Stateful wrapper for agents: tracks the current state, terminal status,
/// and how many submitted actions needed clipping.
#[derive(Debug, Clone)]
pub struct RiverswimEnv {
    cfg: RiverswimConfig,
    s: f64,
    done: bool,
    clipped_actions: u64,
}

impl RiverswimEnv {
    pub fn new(cfg: RiverswimConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            s: cfg.s0,
            done: false,
            clipped_actions: 0,
        })
    }

    #[inline]
    pub fn config(&self) -> &RiverswimConfig {
        &self.cfg
    }

    #[inline]
    pub fn state(&self) -> f64 {
        self.s
    }

    #[inline]
    pub fn is_done(&self) -> bool {
        self.done
    }

    #[inline]
    pub fn clipped_actions(&self) -> u64 {
        self.clipped_actions
    }

    pub fn reset(&mut self) -> f64 {
        self.s = self.cfg.s0;
        self.done = false;
        self.s
    }

    /// Resets to a caller-chosen interior start state.
    pub fn reset_to(&mut self, s: f64) -> f64 {
        assert!(s > -1.0 && s < 1.0, "start state {s} is not interior");
        self.s = s;
        self.done = false;
        self.s
    }

    pub fn step<R: Rng + ?Sized>(&mut self, a: f64, rng: &mut R) -> Result<Transition> {
        if a.abs() > self.cfg.a_max {
            self.clipped_actions += 1;
            log::warn!("action {a} clipped to [-{0}, {0}]", self.cfg.a_max);
        }
        let t = step(&self.cfg, self.s, a, rng)?;
        self.s = t.s_next;
        self.done = t.done;
        Ok(t)
    }
}
