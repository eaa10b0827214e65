//! Reference functions with closed-form smoothness constants: a sine ramp,
//! a staircase, and random piecewise-linear functions with jumps whose exact
//! coarse-grained constants are computable by finite enumeration.
//!
//! These serve as ground truth for the empirical estimators and envelopes.

use std::f64::consts::PI;

use rand::Rng;

use crate::num::tolerant_ceil;

/// `f(x) = A sin(2*pi*omega*x) + m*x` with `A, omega, m > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineRamp {
    pub amplitude: f64,
    pub omega: f64,
    pub slope: f64,
}

impl SineRamp {
    pub fn new(amplitude: f64, omega: f64, slope: f64) -> Self {
        assert!(
            amplitude >= 0.0 && omega > 0.0 && slope > 0.0,
            "need A >= 0, omega > 0, m > 0"
        );
        Self {
            amplitude,
            omega,
            slope,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.omega * x).sin() + self.slope * x
    }

    /// Largest instantaneous slope: `L = 2*pi*omega*A + m`.
    #[inline]
    pub fn lipschitz(&self) -> f64 {
        2.0 * PI * self.omega * self.amplitude + self.slope
    }

    /// Exact coarse-grained constant at scale `alpha`.
    ///
    /// Writing the pair separation as `y = pi*omega*d`, the steepest secant
    /// over separations `d >= alpha` is `2*A*pi*omega * sup_{y >= y0} |sin y|/y + m`
    /// with `y0 = pi*omega*alpha`. The supremum sits either at the boundary
    /// `y = y0` or at the first stationary point of `|sin y|/y` past it,
    /// which solves `y = tan y`; at such a root `|sin y|/y = |cos y|`.
    pub fn l_alpha(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0, "alpha must be positive");
        let y0 = PI * self.omega * alpha;
        let boundary = y0.sin().abs() / y0;
        let stationary = first_tan_root_at_least(y0).cos().abs();
        2.0 * self.amplitude * PI * self.omega * boundary.max(stationary) + self.slope
    }
}

/// First root of `y = tan(y)` in the branches `(n*pi, n*pi + pi/2)`, n >= 1,
/// that is at least `y0`.
pub fn first_tan_root_at_least(y0: f64) -> f64 {
    let mut n = (y0 / PI).floor().max(1.0);
    loop {
        let root = tan_root_in_branch(n);
        if root >= y0 {
            return root;
        }
        n += 1.0;
    }
}

/// Bisection for `g(y) = y - tan(y)` on `(n*pi + 1e-9, n*pi + pi/2 - 1e-9)`;
/// `g` is positive at the left end, negative near the asymptote, and
/// monotone questions don't arise because the bracket never loses the sign
/// change. Converges well past the 1e-10 target.
fn tan_root_in_branch(n: f64) -> f64 {
    let mut lo = n * PI + 1e-9;
    let mut hi = n * PI + PI / 2.0 - 1e-9;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - mid.tan() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `f(x) = A * floor(x / w)` with `A, w > 0`. No finite Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stairs {
    pub step_height: f64,
    pub step_width: f64,
}

impl Stairs {
    pub fn new(step_height: f64, step_width: f64) -> Self {
        assert!(
            step_height > 0.0 && step_width > 0.0,
            "need A > 0 and w > 0"
        );
        Self {
            step_height,
            step_width,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.step_height * (x / self.step_width).floor()
    }

    /// Exact coarse-grained constant:
    /// `max[(A/w)(1 + 1/ceil(a/w)), (A/a) * ceil(a/w)]`.
    pub fn l_alpha(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0, "alpha must be positive");
        let a = self.step_height;
        let w = self.step_width;
        let r = tolerant_ceil(alpha / w);
        let packed = (a / w) * (1.0 + 1.0 / r);
        let stretched = (a / alpha) * r;
        packed.max(stretched)
    }
}

/// A piecewise-linear function with jump discontinuities at its interior
/// breakpoints, right-continuous everywhere. Segment `i` covers
/// `[breaks[i], breaks[i+1])` with value `values[i] + slopes[i]*(x - breaks[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breaks: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>) -> Self {
        assert!(breaks.len() >= 2, "need at least one segment");
        assert_eq!(values.len(), breaks.len() - 1);
        assert_eq!(slopes.len(), breaks.len() - 1);
        assert!(
            breaks.windows(2).all(|w| w[1] > w[0]),
            "breakpoints must ascend"
        );
        Self {
            breaks,
            values,
            slopes,
        }
    }

    #[inline]
    pub fn domain(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    fn segment_of(&self, x: f64) -> usize {
        // right-continuous: x == breaks[i] belongs to segment i
        let k = self.breaks.partition_point(|b| *b <= x);
        k.saturating_sub(1).min(self.values.len() - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment_of(x);
        self.values[i] + self.slopes[i] * (x - self.breaks[i])
    }

    /// Left-limit value; differs from `eval` only at interior breakpoints.
    pub fn eval_left_limit(&self, x: f64) -> f64 {
        let i = self.segment_of(x);
        if i > 0 && x == self.breaks[i] {
            self.values[i - 1] + self.slopes[i - 1] * (x - self.breaks[i - 1])
        } else {
            self.eval(x)
        }
    }

    /// Largest discontinuity gap across interior breakpoints.
    pub fn max_jump(&self) -> f64 {
        self.breaks[1..self.breaks.len() - 1]
            .iter()
            .map(|&b| (self.eval(b) - self.eval_left_limit(b)).abs())
            .fold(0.0, f64::max)
    }

    /// Finite Lipschitz constant, present only when every jump is zero.
    pub fn lipschitz(&self) -> Option<f64> {
        if self.max_jump() == 0.0 {
            Some(self.slopes.iter().fold(0.0, |m: f64, s| m.max(s.abs())))
        } else {
            None
        }
    }

    /// Exact `sup |f(u)-f(v)| / (v-u)` over pairs at least `alpha` apart.
    ///
    /// On each segment the secant ratio is monotone in either endpoint
    /// (ratio of affine functions), so every maximizer has both endpoints at
    /// segment boundaries or pinned to the active constraint `v - u = alpha`
    /// with one end at a boundary. Enumerating breakpoints, their two
    /// one-sided values, and their `alpha`-shifts therefore finds the exact
    /// supremum.
    pub fn l_alpha(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0, "alpha must be positive");
        let (lo, hi) = self.domain();
        assert!(hi - lo >= alpha, "domain shorter than alpha");
        let mut coords: Vec<f64> = Vec::with_capacity(self.breaks.len() * 3);
        for &b in &self.breaks {
            for c in [b, b - alpha, b + alpha] {
                if c >= lo - 1e-12 && c <= hi + 1e-12 {
                    coords.push(c.clamp(lo, hi));
                }
            }
        }
        coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
        coords.dedup();

        // Two one-sided values per candidate coordinate.
        let sided: Vec<(f64, f64)> = coords
            .iter()
            .map(|&c| (c, self.eval(c)))
            .chain(coords.iter().map(|&c| (c, self.eval_left_limit(c))))
            .collect();

        let min_sep = alpha * (1.0 - 1e-12);
        let mut best = 0.0f64;
        for (i, &(u, fu)) in sided.iter().enumerate() {
            for &(v, fv) in &sided[i..] {
                let d = (v - u).abs();
                if d >= min_sep {
                    best = best.max((fv - fu).abs() / d.max(alpha * 1e-12));
                }
            }
        }
        best
    }

    /// Random function for the strictness test corpus: a handful of segments
    /// with bounded slopes and bounded jumps over `[0, 1]`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        max_segments: usize,
        max_slope: f64,
        max_jump: f64,
    ) -> Self {
        let segments = rng.gen_range(2..=max_segments.max(2));
        let mut breaks = vec![0.0];
        let mut interior: Vec<f64> = (0..segments - 1)
            .map(|_| rng.gen_range(0.05..0.95))
            .collect();
        interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
        interior.dedup_by(|a, b| (*a - *b).abs() < 0.02);
        breaks.extend(interior);
        breaks.push(1.0);

        let n = breaks.len() - 1;
        let mut values = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        let mut v = rng.gen_range(-1.0..1.0);
        for i in 0..n {
            values.push(v);
            let s = rng.gen_range(-max_slope..max_slope);
            slopes.push(s);
            v += s * (breaks[i + 1] - breaks[i]);
            if i + 1 < n {
                v += rng.gen_range(-max_jump..max_jump);
            }
        }
        Self::new(breaks, values, slopes)
    }
}
