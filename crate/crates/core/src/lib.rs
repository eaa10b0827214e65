//! Coarse-grained smoothness toolkit: value envelopes that ignore
//! sub-`alpha` detail, gap bounds for reachable MDPs, exploration agents
//! that exploit both, and a randomized audit harness for every bound.
//!
//! Layout:
//! - [`metric`], [`smoothness`]: spaces, observations, per-scale constants,
//!   and the pointwise envelopes they induce.
//! - [`analytic`]: closed-form test functions (sine ramp, staircase, random
//!   piecewise-linear) with exact per-scale constants.
//! - [`riverswim`]: a continuous river-crossing environment with closed-form
//!   optimal values.
//! - [`theory`]: the gap bounds plus Monte Carlo checks ([`theory::checks`]).
//! - [`agents`]: an optimistic control agent and an adaptive ball-refinement
//!   agent whose exploration index uses the coarse constants.
//! - [`io`]: the CSV/JSON file formats shared with the command-line tool.

pub mod agents;
pub mod analytic;
pub mod error;
pub mod io;
pub mod metric;
pub mod num;
pub mod riverswim;
pub mod smoothness;
pub mod theory;

pub use error::{Error, Result};
pub use metric::{MetricKind, MetricSpace, Point, VolumeConstants};
pub use riverswim::{RiverswimConfig, RiverswimEnv};
pub use smoothness::{BoundEnvelope, Observation, SampleSet, SmoothnessProfile};
pub use theory::{CheckReport, ReachabilityParams};
