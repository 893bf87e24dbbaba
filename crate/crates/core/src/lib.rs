//! Hybrid A* and distribution-guided Hybrid A* for autonomous parking.
//!
//! The crate covers the world model ([`scene`]), the bicycle transition model
//! ([`kinematics`]), the cost-to-go field ([`heuristic`]), the baseline search
//! ([`search`]), trajectory-distribution maps ([`guidance`]), the guided search
//! ([`neural`]), and scenario generation plus benchmarking ([`dataset`]).
//!
//! Runnable walkthroughs live in `examples/`, one per capability.

pub mod dataset;
pub mod error;
pub mod guidance;
pub mod heuristic;
pub mod kinematics;
pub mod neural;
pub mod scene;
pub mod search;

pub use error::{Error, Result};
pub use guidance::{check_dist_map, synthetic_oracle, Dmap, GuidanceConfig};
pub use kinematics::{action_set, transition, Action, Direction, StepConfig};
pub use neural::{guided_plan, ExpansionFilter, GateStats};
pub use scene::{is_collide, GridGeometry, OccupancyGrid, Pose, SceneImage, VehicleGeometry};
pub use search::{plan, Limits, PlanReport, PlannerConfig, PlanningProblem, SearchOutcome, SearchStats, Trajectory};
