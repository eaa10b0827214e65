//! Metric spaces over axis-aligned boxes, plus the ball-volume constants
//! used by the volume-fraction bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the "point lies inside the box" containment check.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Relative tolerance for the `volume == c_dx * l_x^D` identity.
const VOLUME_IDENTITY_TOL: f64 = 1e-12;

/// A point in a `D`-dimensional box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "point must have at least one coordinate".into(),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Self { coords })
    }

    /// 1-D convenience constructor.
    pub fn scalar(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Which metric the space carries.
///
/// `WeightedProduct` is the state-action product metric
/// `d((s,a),(s',a')) = d_S(s,s') + action_weight * d_A(a,a')`, with the
/// Euclidean metric on each factor. The first `state_dims` coordinates are
/// the state factor, the rest the action factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Euclidean,
    L1,
    WeightedProduct {
        state_dims: usize,
        action_weight: f64,
    },
}

/// A bounded box `[lower_i, upper_i]^D` equipped with one of [`MetricKind`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    kind: MetricKind,
}

/// Ball-volume constants of a space: `volume(ball of radius r) = c_d * r^D`,
/// and the linear size `l_x` solving `volume(X) = c_dx * l_x^D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeConstants {
    pub c_d: f64,
    pub c_dx: f64,
    pub l_x: f64,
}

impl MetricSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, kind: MetricKind) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidConfig(format!(
                "box bounds must be non-empty and of equal length (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidConfig(format!(
                    "box bounds must be finite with lower < upper (got [{l}, {u}])"
                )));
            }
        }
        if let MetricKind::WeightedProduct {
            state_dims,
            action_weight,
        } = kind
        {
            if state_dims == 0 || state_dims >= lower.len() {
                return Err(Error::InvalidConfig(format!(
                    "weighted product metric needs 0 < state_dims < D (got {state_dims} of {})",
                    lower.len()
                )));
            }
            if !(action_weight.is_finite() && action_weight >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "action weight must be finite and non-negative (got {action_weight})"
                )));
            }
        }
        Ok(Self { lower, upper, kind })
    }

    pub fn euclidean(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(lower, upper, MetricKind::Euclidean)
    }

    pub fn l1(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(lower, upper, MetricKind::L1)
    }

    pub fn weighted_product(
        lower: Vec<f64>,
        upper: Vec<f64>,
        state_dims: usize,
        action_weight: f64,
    ) -> Result<Self> {
        Self::new(
            lower,
            upper,
            MetricKind::WeightedProduct {
                state_dims,
                action_weight,
            },
        )
    }

    /// Uniform 1-D interval with the (trivially equal) Euclidean/L1 metric.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::euclidean(vec![lo], vec![hi])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    #[inline]
    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    #[inline]
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    #[inline]
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .product()
    }

    /// Box center, used as a default root for covering structures.
    pub fn center(&self) -> Point {
        Point {
            coords: self
                .lower
                .iter()
                .zip(&self.upper)
                .map(|(l, u)| 0.5 * (l + u))
                .collect(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(c, (l, u))| *c >= l - CONTAINMENT_TOL && *c <= u + CONTAINMENT_TOL)
    }

    /// Distance between two points of the space.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: b.dim(),
            });
        }
        Ok(match self.kind {
            MetricKind::Euclidean => euclidean(a.coords(), b.coords()),
            MetricKind::L1 => l1(a.coords(), b.coords()),
            MetricKind::WeightedProduct {
                state_dims,
                action_weight,
            } => {
                euclidean(&a.coords()[..state_dims], &b.coords()[..state_dims])
                    + action_weight
                        * euclidean(&a.coords()[state_dims..], &b.coords()[state_dims..])
            }
        })
    }

    /// Diameter of the box under this metric (largest pairwise distance).
    pub fn diameter(&self) -> f64 {
        let lo = Point {
            coords: self.lower.clone(),
        };
        let hi = Point {
            coords: self.upper.clone(),
        };
        // For all supported metrics the diameter is realized at opposite corners.
        self.distance(&lo, &hi).expect("corners live in the space")
    }

    /// Volume of a unit ball: `pi^(D/2)/Gamma(D/2+1)` for Euclidean,
    /// `2^D/D!` for L1. The weighted product metric has no closed-form
    /// constant here and is rejected.
    pub fn ball_volume_constant(&self) -> Result<f64> {
        let d = self.dim();
        match self.kind {
            MetricKind::Euclidean => Ok(euclidean_unit_ball_volume(d)),
            MetricKind::L1 => {
                let mut fact = 1.0;
                for i in 1..=d {
                    fact *= i as f64;
                }
                Ok(2f64.powi(d as i32) / fact)
            }
            MetricKind::WeightedProduct { .. } => Err(Error::InvalidConfig(
                "ball volume constant is not defined for the weighted product metric".into(),
            )),
        }
    }

    /// Linear size of the space: `l_x = (volume / c_dx)^(1/D)` with the
    /// convention `c_dx = c_d`, so that `volume == c_dx * l_x^D` exactly.
    pub fn linear_size(&self) -> Result<VolumeConstants> {
        let c_d = self.ball_volume_constant()?;
        let c_dx = c_d;
        let volume = self.volume();
        let l_x = (volume / c_dx).powf(1.0 / self.dim() as f64);
        let constants = VolumeConstants { c_d, c_dx, l_x };
        let recovered = c_dx * l_x.powi(self.dim() as i32);
        debug_assert!(
            (recovered - volume).abs() <= VOLUME_IDENTITY_TOL * volume.abs().max(1.0),
            "volume identity violated: {recovered} vs {volume}"
        );
        Ok(constants)
    }
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[inline]
fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Unit-ball volume in Euclidean `R^d` via the two-step recurrence
/// `V_d = V_{d-2} * 2*pi/d` (exact for half-integer Gamma values).
fn euclidean_unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => euclidean_unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_distance_3_4_5() {
        let space = MetricSpace::euclidean(vec![-10.0, -10.0], vec![10.0, 10.0]).unwrap();
        let d = space.distance(&p(&[0.0, 0.0]), &p(&[3.0, 4.0])).unwrap();
        assert_relative_eq!(d, 5.0);
    }

    #[test]
    fn l1_distance_sums_coordinates() {
        let space = MetricSpace::l1(vec![-10.0, -10.0], vec![10.0, 10.0]).unwrap();
        let d = space.distance(&p(&[0.0, 0.0]), &p(&[3.0, 4.0])).unwrap();
        assert_relative_eq!(d, 7.0);
    }

    #[test]
    fn weighted_product_combines_factors() {
        // state distance 0.3, action distance 0.1, weight 2 -> 0.5
        let space =
            MetricSpace::weighted_product(vec![-1.0, -1.0], vec![1.0, 1.0], 1, 2.0).unwrap();
        let d = space.distance(&p(&[0.0, 0.0]), &p(&[0.3, 0.1])).unwrap();
        assert_relative_eq!(d, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn distance_rejects_dimension_mismatch() {
        let space = MetricSpace::euclidean(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let err = space.distance(&p(&[0.0]), &p(&[0.0, 0.0])).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                got: 1
            }
        ));
    }

    #[test]
    fn euclidean_ball_constants() {
        for (d, want) in [
            (1, 2.0),
            (2, std::f64::consts::PI),
            (3, 4.0 * std::f64::consts::PI / 3.0),
        ] {
            let lower = vec![0.0; d];
            let upper = vec![1.0; d];
            let space = MetricSpace::euclidean(lower, upper).unwrap();
            assert_relative_eq!(
                space.ball_volume_constant().unwrap(),
                want,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn l1_ball_constants() {
        // 2^D / D!
        for (d, want) in [(1, 2.0), (2, 2.0), (3, 8.0 / 6.0)] {
            let space = MetricSpace::l1(vec![0.0; d], vec![1.0; d]).unwrap();
            assert_relative_eq!(
                space.ball_volume_constant().unwrap(),
                want,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn weighted_product_has_no_ball_constant() {
        let space = MetricSpace::weighted_product(vec![0.0, 0.0], vec![1.0, 1.0], 1, 1.0).unwrap();
        assert!(matches!(
            space.ball_volume_constant(),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn linear_size_unit_interval() {
        let space = MetricSpace::interval(0.0, 1.0).unwrap();
        let vc = space.linear_size().unwrap();
        assert_relative_eq!(vc.c_d, 2.0);
        assert_relative_eq!(vc.l_x, 0.5);
    }

    #[test]
    fn linear_size_unit_square_euclidean() {
        let space = MetricSpace::euclidean(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let vc = space.linear_size().unwrap();
        assert_relative_eq!(
            vc.l_x,
            (1.0 / std::f64::consts::PI).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn linear_size_scales_with_interval_length() {
        let space = MetricSpace::interval(0.0, 4.0).unwrap();
        assert_relative_eq!(space.linear_size().unwrap().l_x, 2.0);
    }

    #[test]
    fn containment_uses_tolerance() {
        let space = MetricSpace::interval(0.0, 1.0).unwrap();
        assert!(space.contains(&p(&[1.0 + 0.5e-9])));
        assert!(!space.contains(&p(&[1.0 + 1e-6])));
    }

    #[test]
    fn diameter_of_product_box() {
        let space =
            MetricSpace::weighted_product(vec![-1.0, -1.0], vec![1.0, 1.0], 1, 1.0).unwrap();
        assert_relative_eq!(space.diameter(), 4.0);
    }

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(MetricSpace::interval(1.0, 1.0).is_err());
        assert!(MetricSpace::euclidean(vec![0.0], vec![f64::NAN]).is_err());
        assert!(MetricSpace::weighted_product(vec![0.0], vec![1.0], 1, 1.0).is_err());
    }
}
