//! Smoothness constants and bound envelopes.
//!
//! Two families of pointwise bounds on an unknown function from a finite
//! sample set: the classical Lipschitz envelope
//!
//! ```text
//! upper(x) = min_{x'} f(x') + L * d(x, x')
//! lower(x) = max_{x'} f(x') - L * d(x, x')
//! ```
//!
//! and the coarse-grained variant built from the piecewise bound
//! `g_alpha(d) = L_alpha * (d + 2*alpha)` for `d <= alpha`, `L_alpha * d`
//! otherwise, which stays valid for functions that are only smooth at scales
//! of at least `alpha` (including discontinuous ones).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point};

/// A function observation: the value `f` seen at point `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub x: Point,
    pub f: f64,
}

/// A set of observations of one function over a metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    space: MetricSpace,
    observations: Vec<Observation>,
}

impl SampleSet {
    pub fn new(space: MetricSpace, observations: Vec<Observation>) -> Result<Self> {
        for (i, obs) in observations.iter().enumerate() {
            if obs.x.dim() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    got: obs.x.dim(),
                });
            }
            if !obs.f.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "observation {i} has non-finite value"
                )));
            }
            if !space.contains(&obs.x) {
                return Err(Error::InvalidInput(format!(
                    "observation {i} lies outside the sample space"
                )));
            }
        }
        Ok(Self {
            space,
            observations,
        })
    }

    /// 1-D convenience constructor from `(x, f)` pairs.
    pub fn from_scalar_pairs(space: MetricSpace, pairs: &[(f64, f64)]) -> Result<Self> {
        let observations = pairs
            .iter()
            .map(|&(x, f)| {
                Ok(Observation {
                    x: Point::scalar(x)?,
                    f,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, observations)
    }

    #[inline]
    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    #[inline]
    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Logs a warning if `l` is below what the samples already certify.
    /// Useful as a cheap sanity gate before an envelope sweep.
    pub fn warn_if_underestimates(&self, l: f64, tolerance: f64) {
        if self.len() < 2 {
            return;
        }
        if let Ok(emp) = lipschitz_constant_empirical(self) {
            if l < emp - tolerance {
                log::warn!(
                    "supplied smoothness constant {l} is below the empirical lower bound {emp}"
                );
            }
        }
    }
}

/// A per-scale smoothness summary: optional global Lipschitz constant plus
/// `(alpha, L_alpha)` pairs sorted by ascending `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessProfile {
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub pairs: Vec<(f64, f64)>,
}

impl SmoothnessProfile {
    pub fn new(l: Option<f64>, pairs: Vec<(f64, f64)>) -> Result<Self> {
        let profile = Self { l, pairs };
        profile.validate()?;
        Ok(profile)
    }

    /// Checks ordering and monotonicity: alphas strictly ascending, L_alpha
    /// non-increasing, and L (when present) at least every L_alpha.
    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.l {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "L must be finite and >= 0 (got {l})"
                )));
            }
        }
        for &(alpha, l_alpha) in &self.pairs {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "alpha must be positive (got {alpha})"
                )));
            }
            if !(l_alpha.is_finite() && l_alpha >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "L_alpha must be finite and >= 0 (got {l_alpha})"
                )));
            }
            if let Some(l) = self.l {
                if l_alpha > l {
                    return Err(Error::InvalidConfig(format!(
                        "L_alpha = {l_alpha} exceeds L = {l}"
                    )));
                }
            }
        }
        for w in self.pairs.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidConfig(format!(
                    "alphas must be strictly ascending ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::InvalidConfig(format!(
                    "L_alpha must be non-increasing in alpha ({} then {})",
                    w[0].1, w[1].1
                )));
            }
        }
        Ok(())
    }
}

/// Pointwise `[lower, upper]` bound on a function value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEnvelope {
    pub lower: f64,
    pub upper: f64,
}

impl BoundEnvelope {
    #[inline]
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    #[inline]
    pub fn contains(&self, f: f64) -> bool {
        f >= self.lower && f <= self.upper
    }
}

/// Largest |f(x)-f(x')| / d(x,x') over all sample pairs: an empirical LOWER
/// bound on the Lipschitz constant (an upper bound cannot be certified from
/// samples alone).
pub fn lipschitz_constant_empirical(samples: &SampleSet) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 observations, got {}",
            samples.len()
        )));
    }
    let obs = samples.observations();
    let mut best = 0.0f64;
    for i in 0..obs.len() {
        for j in (i + 1)..obs.len() {
            let d = samples.space().distance(&obs[i].x, &obs[j].x)?;
            let gap = (obs[i].f - obs[j].f).abs();
            if d == 0.0 {
                if gap > 0.0 {
                    return Err(Error::DegenerateInput(format!(
                        "duplicate points with differing values (observations {i} and {j})"
                    )));
                }
                continue;
            }
            best = best.max(gap / d);
        }
    }
    Ok(best)
}

/// Largest |f(x)-f(x')| / d(x,x') over pairs separated by at least `alpha`:
/// an empirical lower bound on the true coarse-grained constant L_alpha.
pub fn l_alpha_empirical(samples: &SampleSet, alpha: f64) -> Result<f64> {
    assert!(alpha > 0.0, "alpha must be positive");
    let obs = samples.observations();
    let mut best: Option<f64> = None;
    let mut max_distance = 0.0f64;
    for i in 0..obs.len() {
        for j in (i + 1)..obs.len() {
            let d = samples.space().distance(&obs[i].x, &obs[j].x)?;
            max_distance = max_distance.max(d);
            if d >= alpha {
                let ratio = (obs[i].f - obs[j].f).abs() / d;
                best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
            }
        }
    }
    best.ok_or(Error::NoQualifyingPair {
        alpha,
        max_distance,
    })
}

/// The coarse-grained distance bound of the envelope construction:
/// `L_alpha * (d + 2*alpha)` when `d <= alpha`, else `L_alpha * d`.
/// The boundary `d == alpha` deliberately uses the first branch.
#[inline]
pub fn g_alpha(d: f64, alpha: f64, l_alpha: f64) -> f64 {
    if d <= alpha {
        l_alpha * (d + 2.0 * alpha)
    } else {
        l_alpha * d
    }
}

/// Strict cap on any discontinuity gap of an L_alpha-smooth function.
#[inline]
pub fn max_jump_given_l_alpha(alpha: f64, l_alpha: f64) -> f64 {
    2.0 * l_alpha * alpha
}

fn envelope_over<F>(samples: &SampleSet, query: &Point, mut bound: F) -> Result<BoundEnvelope>
where
    F: FnMut(f64) -> f64,
{
    if samples.is_empty() {
        return Err(Error::InsufficientData("empty sample set".into()));
    }
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    for obs in samples.observations() {
        let d = samples.space().distance(&obs.x, query)?;
        let g = bound(d);
        upper = upper.min(obs.f + g);
        lower = lower.max(obs.f - g);
    }
    Ok(BoundEnvelope { lower, upper })
}

/// Classical Lipschitz envelope: valid whenever `l` really upper-bounds the
/// function's Lipschitz constant.
pub fn lipschitz_envelope(samples: &SampleSet, l: f64, query: &Point) -> Result<BoundEnvelope> {
    envelope_over(samples, query, |d| l * d)
}

/// Strict coarse-grained envelope built from `g_alpha`; never violated by a
/// function whose true L_alpha at scale `alpha` is at most `l_alpha`.
pub fn l_alpha_envelope(
    samples: &SampleSet,
    alpha: f64,
    l_alpha: f64,
    query: &Point,
) -> Result<BoundEnvelope> {
    assert!(alpha > 0.0, "alpha must be positive");
    envelope_over(samples, query, |d| g_alpha(d, alpha, l_alpha))
}

/// Combination over a whole profile: minimum of the per-scale upper bounds
/// and maximum of the per-scale lower bounds. A known Lipschitz constant in
/// the profile participates as the zero-scale envelope.
pub fn multi_alpha_envelope(
    samples: &SampleSet,
    profile: &SmoothnessProfile,
    query: &Point,
) -> Result<BoundEnvelope> {
    profile.validate()?;
    if profile.pairs.is_empty() && profile.l.is_none() {
        return Err(Error::InvalidConfig(
            "profile has neither L nor (alpha, L_alpha) pairs".into(),
        ));
    }
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    if let Some(l) = profile.l {
        let env = lipschitz_envelope(samples, l, query)?;
        upper = upper.min(env.upper);
        lower = lower.max(env.lower);
    }
    for &(alpha, l_alpha) in &profile.pairs {
        let env = l_alpha_envelope(samples, alpha, l_alpha, query)?;
        upper = upper.min(env.upper);
        lower = lower.max(env.lower);
    }
    Ok(BoundEnvelope { lower, upper })
}

/// The Lipschitz-form envelope evaluated with `l_alpha` in place of `L`.
/// Tighter than the strict envelope but NOT always valid: violations are
/// possible near observations, each smaller than `2 * alpha * l_alpha`.
pub fn relaxed_envelope(
    samples: &SampleSet,
    alpha: f64,
    l_alpha: f64,
    query: &Point,
) -> Result<BoundEnvelope> {
    assert!(alpha > 0.0, "alpha must be positive");
    envelope_over(samples, query, |d| l_alpha * d)
}
