//! Bound-driven control agents: an optimistic nearest-point Q-agent whose
//! behaviour is steered by a replacement Lipschitz constant, and an adaptive
//! ball-tree agent whose optimism comes from smoothness-scaled indices.

pub mod optimistic;
pub mod zoom;

pub use optimistic::{
    run_control_episode, summarize_sweep, sweep_replacement_l, OptimisticAgent,
    OptimisticAgentConfig, SweepRow, SweepSummary,
};
pub use zoom::{
    run_zoom, run_zoom_with_trees, Ball, BallTree, IndexMode, ZoomConfig, ZoomEpisodeStats,
};
