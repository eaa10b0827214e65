//! Adaptive ball-tree agent over a rectangular state–action box. Balls are
//! Chebyshev (max-coordinate) balls so a dyadic radius hierarchy tiles the
//! box exactly: the root radius is the largest half-side, every child has
//! half its parent's radius, and a child appears only after its parent has
//! been visited at least `1/radius(parent)` times.
//!
//! A ball's optimism index in `lipschitz` mode is
//!
//! ```text
//! index(B) = L·rad(B) + min over B' with rad(B') ≥ rad(B) of [Q̂(B') + L·dist(B,B')]
//! ```
//!
//! In `l_alpha` mode the constant is the coarse-grained one, and any transfer
//! over a distance shorter than α pays the flat penalty `3αL_α` instead of
//! `L_α·dist` — below α the coarse constant carries no information, so the
//! index inflates by the worst-case within-α variation. `combined` takes the
//! pointwise minimum of the two.
//!
//! While fewer than `⌊2/(3α)⌋` episodes have completed, refinement refuses to
//! create balls with radius below `3α`: at that scale the flat penalty
//! already dominates any resolution gain, and the refusal keeps the early
//! tree comparable across modes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riverswim::{RiverswimConfig, RiverswimEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexMode {
    Lipschitz,
    LAlpha,
    Combined,
}

impl IndexMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexMode::Lipschitz => "lipschitz",
            IndexMode::LAlpha => "l_alpha",
            IndexMode::Combined => "combined",
        }
    }
}

impl std::str::FromStr for IndexMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lipschitz" => Ok(IndexMode::Lipschitz),
            "l_alpha" => Ok(IndexMode::LAlpha),
            "combined" => Ok(IndexMode::Combined),
            other => Err(Error::InvalidInput(format!("unknown index mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoomConfig {
    pub mode: IndexMode,
    pub l: f64,
    pub l_alpha: f64,
    pub alpha: f64,
    pub q_cap: f64,
    pub gamma: f64,
    pub episodes: usize,
    pub max_steps: usize,
}

impl Default for ZoomConfig {
    fn default() -> Self {
        Self {
            mode: IndexMode::Combined,
            l: 4.0,
            l_alpha: 1.0,
            alpha: 0.05,
            q_cap: 1.0,
            gamma: 0.95,
            episodes: 13,
            max_steps: 8,
        }
    }
}

impl ZoomConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l_alpha > 0.0 && self.l >= self.l_alpha && self.l.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need finite L >= L_alpha > 0 (got L={}, L_alpha={})",
                self.l, self.l_alpha
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be positive (got {})",
                self.alpha
            )));
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
        if self.episodes == 0 || self.max_steps == 0 {
            return Err(Error::InvalidConfig(
                "episodes and max_steps must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub center_s: f64,
    pub center_a: f64,
    pub radius: f64,
    pub q_hat: f64,
    pub visits: u64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub last_visit: (f64, f64),
}

#[inline]
fn cheb(s1: f64, a1: f64, s2: f64, a2: f64) -> f64 {
    (s1 - s2).abs().max((a1 - a2).abs())
}

#[derive(Debug, Clone)]
pub struct BallTree {
    mode: IndexMode,
    l: f64,
    l_alpha: f64,
    alpha: f64,
    q_cap: f64,
    balls: Vec<Ball>,
    episodes_seen: usize,
    floor_episodes: usize,
}

impl BallTree {
    /// Root ball centered on the box `[-state_half, state_half] ×
    /// [-action_half, action_half]` with radius equal to the larger
    /// half-side, so the root covers the whole box.
    pub fn new(
        mode: IndexMode,
        l: f64,
        l_alpha: f64,
        alpha: f64,
        q_cap: f64,
        state_half: f64,
        action_half: f64,
    ) -> Result<Self> {
        if !(l_alpha > 0.0 && l >= l_alpha) {
            return Err(Error::InvalidConfig(format!(
                "need L >= L_alpha > 0 (got L={l}, L_alpha={l_alpha})"
            )));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be positive (got {alpha})"
            )));
        }
        if !(state_half > 0.0 && action_half > 0.0) {
            return Err(Error::InvalidConfig(
                "domain half-extents must be positive".into(),
            ));
        }
        let radius = state_half.max(action_half);
        let root = Ball {
            center_s: 0.0,
            center_a: 0.0,
            radius,
            q_hat: q_cap,
            visits: 0,
            parent: None,
            children: Vec::new(),
            last_visit: (0.0, 0.0),
        };
        Ok(Self {
            mode,
            l,
            l_alpha,
            alpha,
            q_cap,
            balls: vec![root],
            episodes_seen: 0,
            floor_episodes: (2.0 / (3.0 * alpha)).floor() as usize,
        })
    }

    #[inline]
    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    #[inline]
    pub fn num_balls(&self) -> usize {
        self.balls.len()
    }

    pub fn min_radius(&self) -> f64 {
        self.balls
            .iter()
            .map(|b| b.radius)
            .fold(f64::INFINITY, f64::min)
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn floor_episodes(&self) -> usize {
        self.floor_episodes
    }

    #[inline]
    pub fn episodes_seen(&self) -> usize {
        self.episodes_seen
    }

    pub fn note_episode(&mut self) {
        self.episodes_seen += 1;
    }

    /// Whether the Chebyshev ball `i` contains the state–action point.
    pub fn contains(&self, i: usize, s: f64, a: f64) -> bool {
        let b = &self.balls[i];
        cheb(b.center_s, b.center_a, s, a) <= b.radius + 1e-12
    }

    fn check_id(&self, i: usize) -> Result<()> {
        if i >= self.balls.len() {
            return Err(Error::InvalidInput(format!(
                "ball {i} is not in the tree ({} balls)",
                self.balls.len()
            )));
        }
        Ok(())
    }

    /// Optimism index of ball `i` under an explicit mode. The minimum runs
    /// over all balls at least as large as `i`, including `i` itself.
    pub fn index_with_mode(&self, i: usize, mode: IndexMode) -> Result<f64> {
        self.check_id(i)?;
        Ok(match mode {
            IndexMode::Lipschitz => self.index_raw(i, false),
            IndexMode::LAlpha => self.index_raw(i, true),
            IndexMode::Combined => self.index_raw(i, false).min(self.index_raw(i, true)),
        })
    }

    /// Index under the tree's own mode.
    pub fn index(&self, i: usize) -> Result<f64> {
        self.index_with_mode(i, self.mode)
    }

    fn index_raw(&self, i: usize, coarse: bool) -> f64 {
        let b = &self.balls[i];
        let scale = if coarse { self.l_alpha } else { self.l };
        let mut transfer = f64::INFINITY;
        for other in &self.balls {
            if other.radius < b.radius {
                continue;
            }
            let dist = cheb(b.center_s, b.center_a, other.center_s, other.center_a);
            let dist_term = if coarse {
                if dist < self.alpha {
                    3.0 * self.alpha * self.l_alpha
                } else {
                    self.l_alpha * dist
                }
            } else {
                self.l * dist
            };
            let candidate = other.q_hat + dist_term;
            if candidate < transfer {
                transfer = candidate;
            }
        }
        scale * b.radius + transfer
    }

    /// Highest-index ball whose state slice contains `s`; ties prefer the
    /// larger radius, then the earlier-created ball. The root slice spans
    /// the whole state range, so a ball always exists.
    pub fn select(&self, s: f64) -> usize {
        let mut best: Option<(usize, f64)> = None;
        for (i, b) in self.balls.iter().enumerate() {
            if (b.center_s - s).abs() > b.radius + 1e-12 {
                continue;
            }
            let idx = self.index(i).expect("ball id from enumeration");
            let better = match best {
                None => true,
                Some((bi, bidx)) => idx > bidx || (idx == bidx && b.radius > self.balls[bi].radius),
            };
            if better {
                best = Some((i, idx));
            }
        }
        best.expect("root ball covers every state").0
    }

    pub fn record_visit(&mut self, i: usize, s: f64, a: f64) -> Result<()> {
        self.check_id(i)?;
        let b = &mut self.balls[i];
        b.visits += 1;
        b.last_visit = (s, a);
        Ok(())
    }

    /// Running average with learning rate `1/visits`; call after
    /// `record_visit` so the first target replaces the optimistic prior.
    pub fn update_q(&mut self, i: usize, target: f64) -> Result<()> {
        self.check_id(i)?;
        let b = &mut self.balls[i];
        assert!(b.visits > 0, "update_q before any visit");
        b.q_hat += (target - b.q_hat) / b.visits as f64;
        Ok(())
    }

    /// Test hook for randomized index audits: overwrite a ball's estimate.
    pub fn set_q_hat(&mut self, i: usize, q_hat: f64) -> Result<()> {
        self.check_id(i)?;
        self.balls[i].q_hat = q_hat;
        Ok(())
    }

    /// Creates a child of half radius centered on the ball's most recent
    /// visit point, provided (a) the ball has been visited at least
    /// `1/radius` times, (b) the early-episode radius floor admits the child,
    /// and (c) no existing child already covers that point.
    pub fn try_refine(&mut self, i: usize) -> Result<Option<usize>> {
        self.check_id(i)?;
        let (radius, visits, point, children) = {
            let b = &self.balls[i];
            (b.radius, b.visits, b.last_visit, b.children.clone())
        };
        if (visits as f64) + 1e-9 < 1.0 / radius {
            return Ok(None);
        }
        let child_radius = radius / 2.0;
        if self.episodes_seen < self.floor_episodes && child_radius < 3.0 * self.alpha {
            return Ok(None);
        }
        if children.iter().any(|&c| self.contains(c, point.0, point.1)) {
            return Ok(None);
        }
        let child = Ball {
            center_s: point.0,
            center_a: point.1,
            radius: child_radius,
            q_hat: self.q_cap,
            visits: 0,
            parent: Some(i),
            children: Vec::new(),
            last_visit: point,
        };
        self.balls.push(child);
        let id = self.balls.len() - 1;
        self.balls[i].children.push(id);
        debug_assert!(
            self.episodes_seen >= self.floor_episodes || self.min_radius() >= 3.0 * self.alpha,
            "radius floor violated during the protected episode window"
        );
        Ok(Some(id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoomEpisodeStats {
    pub episode: usize,
    pub cumulative_reward: f64,
    pub num_balls: usize,
    pub min_radius: f64,
}

/// Full episodic run on riverswim with one ball tree per step index, so each
/// tree's visit count equals the number of completed episodes reaching that
/// depth — the accounting under which the early-episode radius floor is
/// meaningful. Bootstrap targets read the next step's tree; the last step
/// falls back on the optimistic cap.
pub fn run_zoom(
    cfg: &ZoomConfig,
    env_cfg: &RiverswimConfig,
    seed: u64,
) -> Result<Vec<ZoomEpisodeStats>> {
    run_zoom_with_trees(cfg, env_cfg, seed).map(|(stats, _)| stats)
}

/// As [`run_zoom`], additionally returning the per-step trees for
/// post-run audits of indices and radii.
pub fn run_zoom_with_trees(
    cfg: &ZoomConfig,
    env_cfg: &RiverswimConfig,
    seed: u64,
) -> Result<(Vec<ZoomEpisodeStats>, Vec<BallTree>)> {
    cfg.validate()?;
    env_cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees: Vec<BallTree> = (0..cfg.max_steps)
        .map(|_| {
            BallTree::new(
                cfg.mode,
                cfg.l,
                cfg.l_alpha,
                cfg.alpha,
                cfg.q_cap,
                1.0,
                env_cfg.a_max,
            )
        })
        .collect::<Result<_>>()?;
    let mut env = RiverswimEnv::new(*env_cfg)?;
    let mut stats = Vec::with_capacity(cfg.episodes);
    let mut cumulative = 0.0;
    for episode in 1..=cfg.episodes {
        let mut s = env.reset();
        for t in 0..cfg.max_steps {
            let ball = trees[t].select(s);
            let a = trees[t].balls()[ball]
                .center_a
                .clamp(-env_cfg.a_max, env_cfg.a_max);
            let tr = env.step(a, &mut rng)?;
            cumulative += tr.reward;
            let bootstrap = if tr.done {
                0.0
            } else if t + 1 < cfg.max_steps {
                let next = &trees[t + 1];
                (0..next.num_balls())
                    .filter(|&j| {
                        (next.balls()[j].center_s - tr.s_next).abs()
                            <= next.balls()[j].radius + 1e-12
                    })
                    .map(|j| next.index(j).expect("enumerated id"))
                    .fold(f64::NEG_INFINITY, f64::max)
                    .min(cfg.q_cap)
            } else {
                cfg.q_cap
            };
            let target = tr.reward + cfg.gamma * bootstrap;
            trees[t].record_visit(ball, s, a)?;
            trees[t].update_q(ball, target)?;
            trees[t].try_refine(ball)?;
            if tr.done {
                break;
            }
            s = tr.s_next;
        }
        for tree in &mut trees {
            tree.note_episode();
        }
        let num_balls = trees.iter().map(BallTree::num_balls).sum();
        let min_radius = trees
            .iter()
            .map(BallTree::min_radius)
            .fold(f64::INFINITY, f64::min);
        stats.push(ZoomEpisodeStats {
            episode,
            cumulative_reward: cumulative,
            num_balls,
            min_radius,
        });
    }
    Ok((stats, trees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_ball_index_arithmetic() {
        // root radius 0.25 over a tiny box; transfer term comes from itself
        let mut tree =
            BallTree::new(IndexMode::Lipschitz, 2.0, 1.0, 0.05, 1.0, 0.25, 0.25).unwrap();
        tree.set_q_hat(0, 0.5).unwrap();
        assert_relative_eq!(tree.index_with_mode(0, IndexMode::Lipschitz).unwrap(), 1.0);
        // coarse: 1.0*0.25 + 0.5 + 3*0.05*1.0 = 0.9
        assert_relative_eq!(tree.index_with_mode(0, IndexMode::LAlpha).unwrap(), 0.9);
        assert_relative_eq!(tree.index_with_mode(0, IndexMode::Combined).unwrap(), 0.9);
    }

    #[test]
    fn index_rejects_unknown_ball() {
        let tree = BallTree::new(IndexMode::Lipschitz, 2.0, 1.0, 0.05, 1.0, 0.5, 0.5).unwrap();
        assert!(tree.index(5).is_err());
    }

    #[test]
    fn refine_waits_for_visit_threshold() {
        let mut tree = BallTree::new(IndexMode::Lipschitz, 2.0, 1.0, 0.05, 1.0, 0.5, 0.5).unwrap();
        tree.record_visit(0, 0.1, 0.2).unwrap();
        assert!(
            tree.try_refine(0).unwrap().is_none(),
            "threshold 1/0.5 = 2 visits"
        );
        tree.record_visit(0, 0.1, 0.2).unwrap();
        let child = tree.try_refine(0).unwrap().expect("threshold met");
        let b = &tree.balls()[child];
        assert_relative_eq!(b.radius, 0.25);
        assert_relative_eq!(b.center_s, 0.1);
        assert_relative_eq!(b.center_a, 0.2);
        assert_eq!(b.parent, Some(0));
    }

    #[test]
    fn refine_skips_covered_points() {
        let mut tree = BallTree::new(IndexMode::Lipschitz, 2.0, 1.0, 0.05, 1.0, 0.5, 0.5).unwrap();
        for _ in 0..2 {
            tree.record_visit(0, 0.1, 0.2).unwrap();
        }
        assert!(tree.try_refine(0).unwrap().is_some());
        tree.record_visit(0, 0.12, 0.2).unwrap(); // inside the new child
        assert!(tree.try_refine(0).unwrap().is_none());
        tree.record_visit(0, -0.4, -0.3).unwrap(); // outside it
        assert!(tree.try_refine(0).unwrap().is_some());
    }

    #[test]
    fn radius_floor_blocks_fine_balls_early() {
        let mut tree = BallTree::new(IndexMode::LAlpha, 2.0, 1.0, 0.05, 1.0, 0.5, 0.5).unwrap();
        assert_eq!(tree.floor_episodes(), 13);
        for _ in 0..2 {
            tree.record_visit(0, 0.0, 0.0).unwrap();
        }
        let child = tree.try_refine(0).unwrap().unwrap(); // rad 0.25 >= 0.15
        for _ in 0..4 {
            tree.record_visit(child, 0.05, 0.05).unwrap();
        }
        assert!(
            tree.try_refine(child).unwrap().is_none(),
            "rad 0.125 < 3*alpha must be refused inside the floor window"
        );
        for _ in 0..13 {
            tree.note_episode();
        }
        assert!(tree.try_refine(child).unwrap().is_some());
        assert!(tree.min_radius() < 0.15);
    }

    #[test]
    fn coarse_index_never_beats_lipschitz_under_halved_constant() {
        // L_alpha <= L/2 and all radii >= 3*alpha
        let mut tree = BallTree::new(IndexMode::Combined, 4.0, 1.3, 0.05, 1.0, 1.0, 1.0).unwrap();
        for _ in 0..1 {
            tree.record_visit(0, 0.3, -0.4).unwrap();
        }
        tree.try_refine(0).unwrap();
        tree.set_q_hat(0, 0.7).unwrap();
        tree.set_q_hat(1, 0.4).unwrap();
        for i in 0..tree.num_balls() {
            let coarse = tree.index_with_mode(i, IndexMode::LAlpha).unwrap();
            let plain = tree.index_with_mode(i, IndexMode::Lipschitz).unwrap();
            assert!(coarse <= plain + 1e-12, "ball {i}: {coarse} > {plain}");
            assert_relative_eq!(
                tree.index_with_mode(i, IndexMode::Combined).unwrap(),
                coarse.min(plain)
            );
        }
    }

    #[test]
    fn q_update_is_running_average() {
        let mut tree = BallTree::new(IndexMode::Lipschitz, 2.0, 1.0, 0.05, 1.0, 0.5, 0.5).unwrap();
        tree.record_visit(0, 0.0, 0.0).unwrap();
        tree.update_q(0, 0.8).unwrap();
        assert_relative_eq!(tree.balls()[0].q_hat, 0.8); // first target replaces the prior
        tree.record_visit(0, 0.0, 0.0).unwrap();
        tree.update_q(0, 0.4).unwrap();
        assert_relative_eq!(tree.balls()[0].q_hat, 0.6);
    }

    #[test]
    fn select_prefers_containing_ball_with_best_index() {
        let mut tree = BallTree::new(IndexMode::Lipschitz, 2.0, 1.0, 0.05, 1.0, 1.0, 1.0).unwrap();
        tree.record_visit(0, 0.9, 0.9).unwrap();
        tree.try_refine(0).unwrap(); // child around (0.9, 0.9), radius 0.5
                                     // state -0.9 is only inside the root slice
        assert_eq!(tree.select(-0.9), 0);
    }

    #[test]
    fn zoom_run_is_deterministic_and_respects_floor() {
        let cfg = ZoomConfig {
            mode: IndexMode::LAlpha,
            episodes: 13,
            ..ZoomConfig::default()
        };
        let env = RiverswimConfig {
            noise_sigma: 0.03,
            ..RiverswimConfig::default()
        };
        let a = run_zoom(&cfg, &env, 7).unwrap();
        let b = run_zoom(&cfg, &env, 7).unwrap();
        assert_eq!(a.len(), 13);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.cumulative_reward.to_bits(), y.cumulative_reward.to_bits());
            assert_eq!(x.num_balls, y.num_balls);
        }
        let floor = 3.0 * cfg.alpha;
        for stat in &a {
            assert!(
                stat.min_radius >= floor - 1e-12,
                "episode {}: min radius {} below floor {floor}",
                stat.episode,
                stat.min_radius
            );
        }
        let last = a.last().unwrap();
        assert!(last.cumulative_reward > 0.0);
        assert!(last.num_balls >= cfg.max_steps);
    }

    /// Drive the fastest possible refinement chain: always visit the deepest
    /// ball at its own center. Reaching a radius below 3α costs
    /// 2 + 4 + … + 2^{n-1} = 2^n − 2 visits where 2^{-(n-1)} ≥ 3α > 2^{-n}.
    #[test]
    fn fastest_refinement_chain_visit_count() {
        for (alpha, n) in [(0.1, 2u32), (0.05, 3), (0.01, 6)] {
            let mut tree =
                BallTree::new(IndexMode::LAlpha, 2.0, 1.0, alpha, 1.0, 0.5, 0.5).unwrap();
            assert_relative_eq!(tree.balls()[0].radius, 0.5);
            for _ in 0..tree.floor_episodes() {
                tree.note_episode(); // lift the early-episode radius floor
            }
            let mut deepest = 0;
            let mut visits = 0u64;
            while tree.min_radius() >= 3.0 * alpha {
                let (s, a) = {
                    let b = &tree.balls()[deepest];
                    (b.center_s, b.center_a)
                };
                tree.record_visit(deepest, s, a).unwrap();
                visits += 1;
                if let Some(child) = tree.try_refine(deepest).unwrap() {
                    deepest = child;
                }
            }
            assert_eq!(visits, 2u64.pow(n) - 2, "alpha = {alpha}");
            let swept = 2.0f64.powi(-(n as i32));
            assert!(0.5f64.powi(n as i32 - 1) >= 3.0 * alpha && 3.0 * alpha > swept);
            assert_relative_eq!(tree.min_radius(), swept);
        }
    }

    /// With L_alpha ≤ L/2, the coarse index explores less and banks reward
    /// sooner inside the protected-radius window.
    #[test]
    fn coarse_mode_outperforms_plain_during_floor_window() {
        let env = RiverswimConfig {
            noise_sigma: 0.03,
            ..RiverswimConfig::default()
        };
        let episodes = (2.0_f64 / (3.0 * 0.05)).floor() as usize;
        let mut coarse_total = 0.0;
        let mut plain_total = 0.0;
        for seed in 0..30 {
            let coarse = ZoomConfig {
                mode: IndexMode::LAlpha,
                episodes,
                ..ZoomConfig::default()
            };
            let plain = ZoomConfig {
                mode: IndexMode::Lipschitz,
                episodes,
                ..ZoomConfig::default()
            };
            coarse_total += run_zoom(&coarse, &env, seed)
                .unwrap()
                .last()
                .unwrap()
                .cumulative_reward;
            plain_total += run_zoom(&plain, &env, seed)
                .unwrap()
                .last()
                .unwrap()
                .cumulative_reward;
        }
        assert!(
            coarse_total >= plain_total,
            "coarse mean {} < plain mean {}",
            coarse_total / 30.0,
            plain_total / 30.0
        );
    }

    #[test]
    fn config_validation() {
        let ok = ZoomConfig::default();
        assert!(ok.validate().is_ok());
        assert!(ZoomConfig { l: 0.5, ..ok }.validate().is_err()); // L < L_alpha
        assert!(ZoomConfig { alpha: 0.0, ..ok }.validate().is_err());
        assert!(ZoomConfig { gamma: 0.0, ..ok }.validate().is_err());
    }
}
