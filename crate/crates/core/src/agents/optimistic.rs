//! Optimistic Q-learning over a continuous state–action space using a
//! nearest-point upper bound: `Q_UB(x) = min(q_cap, min_i q_i + L·d(x, x_i))`
//! where `L` is a *replacement* smoothness constant supplied by the caller,
//! not estimated from data. Too small an `L` makes the bound hug (and
//! undercut) past returns; too large an `L` degenerates to the cap almost
//! everywhere. Sweeping `L` exposes an interior sweet spot.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{mean_stderr, variance};
use crate::riverswim::{RiverswimConfig, RiverswimEnv};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimisticAgentConfig {
    /// Replacement smoothness constant fed to the upper bound.
    pub l_replacement: f64,
    /// Number of discretized actions spanning `[-a_max, a_max]`.
    pub action_grid: usize,
    pub episodes: usize,
    pub max_steps: usize,
    /// Optimistic cap; must dominate every achievable return.
    pub q_cap: f64,
    pub gamma: f64,
    /// Weight of the action coordinate in the state–action metric
    /// `d = |Δs| + w·|Δa|`.
    pub action_weight: f64,
    /// Half-width of the uniform episode-start distribution around the
    /// environment's `s0` (0 starts every episode at `s0` exactly).
    pub start_spread: f64,
    pub seed: u64,
}

impl Default for OptimisticAgentConfig {
    fn default() -> Self {
        Self {
            l_replacement: 1.0,
            action_grid: 5,
            episodes: 50,
            max_steps: 60,
            q_cap: 1.0,
            gamma: 0.95,
            action_weight: 1.0,
            start_spread: 0.0,
            seed: 0,
        }
    }
}

impl OptimisticAgentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l_replacement.is_finite() && self.l_replacement >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "l_replacement must be finite and non-negative (got {})",
                self.l_replacement
            )));
        }
        if self.action_grid < 2 {
            return Err(Error::InvalidConfig(format!(
                "action_grid must be at least 2 (got {})",
                self.action_grid
            )));
        }
        if self.episodes == 0 || self.max_steps == 0 {
            return Err(Error::InvalidConfig(
                "episodes and max_steps must be positive".into(),
            ));
        }
        if !self.q_cap.is_finite() {
            return Err(Error::InvalidConfig("q_cap must be finite".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma must lie in (0,1) (got {})",
                self.gamma
            )));
        }
        if !(self.action_weight.is_finite() && self.action_weight > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "action_weight must be positive (got {})",
                self.action_weight
            )));
        }
        if !(self.start_spread.is_finite() && self.start_spread >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "start_spread must be finite and non-negative (got {})",
                self.start_spread
            )));
        }
        Ok(())
    }
}

/// Value-labeled memory point: `(state, action, backed-up target)`.
#[derive(Debug, Clone, Copy)]
struct MemoryPoint {
    s: f64,
    a: f64,
    q: f64,
}

#[derive(Debug, Clone)]
pub struct OptimisticAgent {
    cfg: OptimisticAgentConfig,
    actions: Vec<f64>,
    memory: Vec<MemoryPoint>,
}

impl OptimisticAgent {
    pub fn new(cfg: OptimisticAgentConfig, a_max: f64) -> Result<Self> {
        cfg.validate()?;
        if !(a_max > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "a_max must be positive (got {a_max})"
            )));
        }
        let n = cfg.action_grid;
        let actions = (0..n)
            .map(|i| -a_max + 2.0 * a_max * i as f64 / (n - 1) as f64)
            .collect();
        Ok(Self {
            cfg,
            actions,
            memory: Vec::new(),
        })
    }

    #[inline]
    pub fn actions(&self) -> &[f64] {
        &self.actions
    }

    #[inline]
    pub fn memory_len(&self) -> usize {
        self.memory.len()
    }

    /// `min(q_cap, min_i q_i + L·(|s−s_i| + w·|a−a_i|))`; `q_cap` when the
    /// memory is empty.
    pub fn q_upper(&self, s: f64, a: f64) -> f64 {
        let mut best = self.cfg.q_cap;
        for p in &self.memory {
            let d = (s - p.s).abs() + self.cfg.action_weight * (a - p.a).abs();
            let bound = p.q + self.cfg.l_replacement * d;
            if bound < best {
                best = bound;
            }
        }
        best
    }

    /// Greedy action under the upper bound. Ties resolve to the lowest grid
    /// index, i.e. the most negative action.
    fn best_action(&self, s: f64) -> f64 {
        let mut best_a = self.actions[0];
        let mut best_v = self.q_upper(s, best_a);
        for &a in &self.actions[1..] {
            let v = self.q_upper(s, a);
            if v > best_v {
                best_v = v;
                best_a = a;
            }
        }
        best_a
    }

    fn max_q_upper(&self, s: f64) -> f64 {
        self.actions
            .iter()
            .map(|&a| self.q_upper(s, a))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Runs one episode greedily, then walks the trajectory backwards
    /// inserting targets `q_t = r_t + γ·max_a Q_UB(s_{t+1}, a)` as it goes,
    /// so early steps are backed up against the freshly updated bound.
    /// Returns the undiscounted episode return.
    pub fn run_episode<R: Rng + ?Sized>(
        &mut self,
        env: &mut RiverswimEnv,
        rng: &mut R,
    ) -> Result<f64> {
        let mut s = env.reset();
        if self.cfg.start_spread > 0.0 {
            let lo = (env.config().s0 - self.cfg.start_spread).max(-0.99);
            let hi = (env.config().s0 + self.cfg.start_spread).min(0.99);
            s = env.reset_to(rng.gen_range(lo..hi));
        }
        let mut trajectory: Vec<(f64, f64, f64, f64, bool)> = Vec::new();
        let mut total = 0.0;
        for _ in 0..self.cfg.max_steps {
            let a = self.best_action(s);
            let t = env.step(a, rng)?;
            total += t.reward;
            trajectory.push((s, a, t.reward, t.s_next, t.done));
            if t.done {
                break;
            }
            s = t.s_next;
        }
        for &(s_t, a_t, r_t, s_next, done) in trajectory.iter().rev() {
            let q = if done {
                r_t
            } else {
                r_t + self.cfg.gamma * self.max_q_upper(s_next)
            };
            self.memory.push(MemoryPoint { s: s_t, a: a_t, q });
        }
        Ok(total)
    }

    /// Runs the configured number of episodes; returns per-episode returns.
    pub fn run<R: Rng + ?Sized>(
        &mut self,
        env_cfg: &RiverswimConfig,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        let mut env = RiverswimEnv::new(*env_cfg)?;
        (0..self.cfg.episodes)
            .map(|_| self.run_episode(&mut env, rng))
            .collect()
    }
}

/// Single-episode convenience entry point: fresh agent, one greedy episode,
/// undiscounted return.
pub fn run_control_episode<R: Rng + ?Sized>(
    cfg: &OptimisticAgentConfig,
    env_cfg: &RiverswimConfig,
    rng: &mut R,
) -> Result<f64> {
    let mut agent = OptimisticAgent::new(*cfg, env_cfg.a_max)?;
    let mut env = RiverswimEnv::new(*env_cfg)?;
    agent.run_episode(&mut env, rng)
}

/// One sweep cell: total reward of a full multi-episode run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l_replacement: f64,
    pub seed: u64,
    pub total_reward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub l_replacement: f64,
    pub mean: f64,
    pub std_err: f64,
    pub variance: f64,
}

fn cell_rng(base: u64, value_idx: u64, seed_idx: u64) -> ChaCha8Rng {
    let mixed = base
        .wrapping_add(value_idx.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(seed_idx.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Runs the full (replacement value × seed) grid; each cell is an
/// independent agent with its own deterministic random stream.
pub fn sweep_replacement_l(
    values: &[f64],
    seeds: u64,
    env_cfg: &RiverswimConfig,
    base: &OptimisticAgentConfig,
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::InvalidInput(
            "sweep needs at least one replacement value".into(),
        ));
    }
    if seeds == 0 {
        return Err(Error::InvalidInput("sweep needs at least one seed".into()));
    }
    env_cfg.validate()?;
    let mut rows = Vec::with_capacity(values.len() * seeds as usize);
    for (vi, &value) in values.iter().enumerate() {
        for seed in 0..seeds {
            let cfg = OptimisticAgentConfig {
                l_replacement: value,
                seed,
                ..*base
            };
            let mut agent = OptimisticAgent::new(cfg, env_cfg.a_max)?;
            let mut rng = cell_rng(base.seed, vi as u64, seed);
            let returns = agent.run(env_cfg, &mut rng)?;
            rows.push(SweepRow {
                l_replacement: value,
                seed,
                total_reward: returns.iter().sum(),
            });
        }
    }
    Ok(rows)
}

/// Per-value mean, standard error, and across-seed variance, in first-seen
/// value order.
pub fn summarize_sweep(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut order: Vec<f64> = Vec::new();
    for row in rows {
        if !order.iter().any(|&v| v == row.l_replacement) {
            order.push(row.l_replacement);
        }
    }
    order
        .into_iter()
        .map(|value| {
            let totals: Vec<f64> = rows
                .iter()
                .filter(|r| r.l_replacement == value)
                .map(|r| r.total_reward)
                .collect();
            let (mean, std_err) = mean_stderr(&totals);
            SweepSummary {
                l_replacement: value,
                mean,
                std_err,
                variance: variance(&totals),
            }
        })
        .collect()
}
