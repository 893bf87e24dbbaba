//! Distribution-guided Hybrid A*.
//!
//! Each successor draws one uniform number u ∈ (0, 1). When u > 1 − p_guided the
//! Dmap is consulted and low-likelihood successors are dropped before any
//! collision check; otherwise the successor is treated exactly as in plain
//! Hybrid A*. The draws come from a dedicated seeded stream, so a run is
//! reproducible from its seed.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::guidance::{check_dist_map, Dmap, GuidanceConfig};
use crate::scene::Pose;
use crate::search::{plan, Limits, PlanReport, PlannerConfig, PlanningProblem, SuccessorFilter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateStats {
    pub draws: u64,
    /// Draws that passed the gate and looked at the map.
    pub consulted: u64,
    pub pruned: u64,
}

/// Random gate plus Dmap threshold, owned by one planner run.
#[derive(Debug, Clone)]
pub struct ExpansionFilter<'a> {
    dmap: &'a Dmap,
    config: GuidanceConfig,
    rng: ChaCha8Rng,
    stats: GateStats,
}

impl<'a> ExpansionFilter<'a> {
    pub fn new(dmap: &'a Dmap, config: GuidanceConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            dmap,
            config,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            stats: GateStats::default(),
        })
    }

    pub fn stats(&self) -> GateStats {
        self.stats
    }

    pub fn config(&self) -> &GuidanceConfig {
        &self.config
    }

    pub fn should_prune(&mut self, state: &Pose) -> bool {
        let u: f64 = self.rng.sample(Open01);
        self.stats.draws += 1;
        if u > 1.0 - self.config.p_guided {
            self.stats.consulted += 1;
            let prune = check_dist_map(state, self.dmap, self.config.threshold);
            self.stats.pruned += prune as u64;
            prune
        } else {
            false
        }
    }
}

impl SuccessorFilter for ExpansionFilter<'_> {
    fn should_prune(&mut self, state: &Pose) -> bool {
        ExpansionFilter::should_prune(self, state)
    }
}

/// Hybrid A* with expansion gated by `dmap`.
pub fn guided_plan(
    problem: &PlanningProblem<'_>,
    config: &PlannerConfig,
    dmap: &Dmap,
    guidance: GuidanceConfig,
    limits: Limits,
) -> Result<(PlanReport, GateStats)> {
    if dmap.geometry() != problem.grid().geometry() {
        return Err(crate::error::Error::InvalidInput(
            "dmap geometry differs from the occupancy grid".into(),
        ));
    }
    let mut filter = ExpansionFilter::new(dmap, guidance)?;
    let report = plan(problem, config, Some(&mut filter), limits);
    Ok((report, filter.stats()))
}
