//! Parking scenarios, expert trajectory sets, and the training-data export.
//!
//! A scenario is a lot built from a [`LotLayout`], a start pose sampled in free
//! space and a goal pose centered in one empty bay. Each exported scene carries
//! five expert trajectories obtained by re-running the baseline planner with a
//! shuffled action order.

mod bench;
mod files;

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::{
    is_collide, rasterize_condition, rasterize_trajectories, GridGeometry, LabelImage, OccupancyGrid, Pose,
    SceneImage, VehicleGeometry,
};
use crate::search::{plan, CellSpace, Limits, PlannerConfig, PlanningProblem, SearchOutcome, Trajectory};

pub use bench::{
    bench_case, median, render_table, run_benchmark, write_report_csv, BenchCase, BenchRow, BenchSummary, GuidanceSource,
};
pub use files::{
    export_scene, import_scene, list_scene_dirs, load_scenario, read_trajectory_csv, save_trajectory_csv, write_trajectory_csv,
    load_trajectory_csv, SCENARIO_FILE,
};

/// Expert trajectories per scene.
pub const EXPERTS_PER_SCENE: usize = 5;

/// Start-pose rejection sampling gives up after this many draws.
pub const MAX_START_ATTEMPTS: usize = 10_000;

/// Scenario redraws per dataset slot before generation fails.
pub const MAX_SCENARIO_ATTEMPTS: usize = 200;

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)
    }
}

/// Parameterized parking lot: perimeter wall plus two facing rows of
/// perpendicular bays along the south and north walls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LotLayout {
    pub resolution: f64,
    pub width: f64,
    pub height: f64,
    pub wall: f64,
    pub bays_per_row: usize,
    pub bay_width: f64,
    pub bay_depth: f64,
    /// x of the west edge of the first bay in each row.
    pub first_bay_x: f64,
    /// Parked-car body, centered in its bay and aligned with it.
    pub car_length: f64,
    pub car_width: f64,
    /// Chance that any bay holds a parked car.
    pub fill_probability: f64,
    /// Minimum start-to-goal distance of the rear axles.
    pub min_start_distance: f64,
}

impl Default for LotLayout {
    fn default() -> Self {
        Self {
            resolution: 0.1,
            width: 25.0,
            height: 15.0,
            wall: 0.2,
            bays_per_row: 9,
            bay_width: 2.5,
            bay_depth: 5.0,
            first_bay_x: 1.25,
            car_length: 4.5,
            car_width: 1.9,
            fill_probability: 0.4,
            min_start_distance: 4.0,
        }
    }
}

impl LotLayout {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.resolution,
            self.width,
            self.height,
            self.bay_width,
            self.bay_depth,
            self.car_length,
            self.car_width,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || !(self.wall >= 0.0) {
            return Err(Error::InvalidInput("lot dimensions must be positive".into()));
        }
        if self.bays_per_row == 0 {
            return Err(Error::InvalidInput("lot needs at least one bay per row".into()));
        }
        if self.first_bay_x + self.bays_per_row as f64 * self.bay_width > self.width {
            return Err(Error::InvalidInput("bays run past the east wall".into()));
        }
        if 2.0 * self.bay_depth >= self.height {
            return Err(Error::InvalidInput("bay rows leave no aisle".into()));
        }
        if self.car_length > self.bay_depth || self.car_width > self.bay_width {
            return Err(Error::InvalidInput("parked car does not fit its bay".into()));
        }
        if !(0.0..=1.0).contains(&self.fill_probability) {
            return Err(Error::InvalidInput("fill probability must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<GridGeometry> {
        let cols = (self.width / self.resolution).round() as usize;
        let rows = (self.height / self.resolution).round() as usize;
        GridGeometry::new(cols, rows, self.resolution)
    }

    pub fn bay_count(&self) -> usize {
        2 * self.bays_per_row
    }

    /// Bays `0..n` run west to east along the south wall, `n..2n` along the north wall.
    pub fn bays(&self) -> Vec<Rect> {
        let mut out = Vec::with_capacity(self.bay_count());
        for (y0, y1) in [(0.0, self.bay_depth), (self.height - self.bay_depth, self.height)] {
            for i in 0..self.bays_per_row {
                let x0 = self.first_bay_x + i as f64 * self.bay_width;
                out.push(Rect {
                    x0,
                    y0,
                    x1: x0 + self.bay_width,
                    y1,
                });
            }
        }
        out
    }

    /// Walls plus one parked car per occupied bay.
    pub fn rasterize(&self, occupied: &[bool]) -> Result<OccupancyGrid> {
        if occupied.len() != self.bay_count() {
            return Err(Error::InvalidInput(format!(
                "{} occupancy flags for {} bays",
                occupied.len(),
                self.bay_count()
            )));
        }
        let mut grid = OccupancyGrid::empty(self.geometry()?);
        let (w, h, t) = (self.width, self.height, self.wall);
        grid.fill_rect(0.0, 0.0, w, t);
        grid.fill_rect(0.0, h - t, w, h);
        grid.fill_rect(0.0, 0.0, t, h);
        grid.fill_rect(w - t, 0.0, w, h);
        for (bay, _) in self.bays().iter().zip(occupied).filter(|(_, &o)| o) {
            let (cx, cy) = bay.center();
            let (hx, hy) = (self.car_width / 2.0, self.car_length / 2.0);
            grid.fill_rect(cx - hx, cy - hy, cx + hx, cy + hy);
        }
        Ok(grid)
    }
}

/// One planning query in a lot.
#[derive(Debug, Clone, PartialEq)]
pub struct ParkingScenario {
    pub layout: LotLayout,
    pub occupied: Vec<bool>,
    pub goal_bay: usize,
    pub start: Pose,
    pub goal: Pose,
    pub seed: u64,
    grid: OccupancyGrid,
}

impl ParkingScenario {
    /// Assemble a scenario, rebuilding the lot raster from the layout.
    pub fn new(layout: LotLayout, occupied: Vec<bool>, goal_bay: usize, start: Pose, goal: Pose, seed: u64) -> Result<Self> {
        layout.validate()?;
        if goal_bay >= layout.bay_count() {
            return Err(Error::InvalidScenario(format!("goal bay {goal_bay} does not exist")));
        }
        if occupied.get(goal_bay).copied().unwrap_or(false) {
            return Err(Error::InvalidScenario(format!("goal bay {goal_bay} is occupied")));
        }
        let grid = layout.rasterize(&occupied)?;
        Ok(Self {
            layout,
            occupied,
            goal_bay,
            start,
            goal,
            seed,
            grid,
        })
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn goal_bay_rect(&self) -> Rect {
        self.layout.bays()[self.goal_bay]
    }

    /// Copy of the scenario with different endpoints.
    pub fn with_endpoints(&self, start: Pose, goal: Pose) -> Self {
        Self {
            start,
            goal,
            ..self.clone()
        }
    }

    pub fn problem<'a>(&'a self, vehicle: &VehicleGeometry) -> Result<PlanningProblem<'a>> {
        PlanningProblem::new(&self.grid, self.start, self.goal, vehicle)
    }
}

/// Rear-axle pose that centers the vehicle body in `bay` facing `heading_deg`.
pub fn bay_goal(bay: &Rect, heading_deg: f64, vehicle: &VehicleGeometry) -> Pose {
    let (cx, cy) = bay.center();
    let theta = heading_deg.to_radians();
    let back = vehicle.center_offset();
    Pose::new(cx - back * theta.cos(), cy - back * theta.sin(), theta)
}

/// Draw a scenario from `seed`. The same seed always yields the same scenario.
pub fn sample_scenario(layout: &LotLayout, vehicle: &VehicleGeometry, seed: u64) -> Result<ParkingScenario> {
    layout.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = layout.bay_count();
    let mut occupied: Vec<bool> = (0..n).map(|_| rng.gen_bool(layout.fill_probability)).collect();
    let empty: Vec<usize> = (0..n).filter(|&i| !occupied[i]).collect();
    let goal_bay = match empty.choose(&mut rng) {
        Some(&b) => b,
        None => {
            // a full lot still gets one free bay
            let b = rng.gen_range(0..n);
            occupied[b] = false;
            b
        }
    };
    let heading = if rng.gen_bool(0.5) { 90.0 } else { -90.0 };
    let goal = bay_goal(&layout.bays()[goal_bay], heading, vehicle);
    let grid = layout.rasterize(&occupied)?;
    if is_collide(&goal, &grid, vehicle) {
        return Err(Error::DegenerateLayout { attempts: 0 });
    }

    let (lo_x, hi_x) = (layout.wall, layout.width - layout.wall);
    let (lo_y, hi_y) = (layout.wall, layout.height - layout.wall);
    for _ in 0..MAX_START_ATTEMPTS {
        let x = rng.gen_range(lo_x..hi_x);
        let y = rng.gen_range(lo_y..hi_y);
        let theta = if rng.gen_bool(0.5) { 0.0 } else { 180.0 };
        let start = Pose::from_degrees(x, y, theta);
        if start.distance_to(&goal) < layout.min_start_distance || is_collide(&start, &grid, vehicle) {
            continue;
        }
        return Ok(ParkingScenario {
            layout: *layout,
            occupied,
            goal_bay,
            start,
            goal,
            seed,
            grid,
        });
    }
    Err(Error::DegenerateLayout {
        attempts: MAX_START_ATTEMPTS,
    })
}

/// A scenario, its conditioning image, and its expert trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneRecord {
    pub scenario: ParkingScenario,
    pub condition: SceneImage,
    pub label: LabelImage,
    pub trajectories: Vec<Trajectory>,
}

/// Seed of the action-order shuffle for expert run `k` of a scenario.
fn shuffle_rng(scenario_seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario_seed);
    rng.set_stream(k as u64 + 1);
    rng
}

/// Five baseline runs, each with its own shuffled action order.
///
/// Fails with [`Error::Unsolvable`] when any run does not reach the goal.
pub fn generate_expert_set(scenario: &ParkingScenario, config: &PlannerConfig, limits: Limits) -> Result<SceneRecord> {
    let problem = scenario.problem(&config.vehicle)?;
    let mut trajectories = Vec::with_capacity(EXPERTS_PER_SCENE);
    for k in 0..EXPERTS_PER_SCENE {
        let mut cfg = config.clone();
        cfg.actions.shuffle(&mut shuffle_rng(scenario.seed, k));
        let report = plan(&problem, &cfg, None, limits);
        match report.outcome {
            SearchOutcome::Solved(t) => trajectories.push(t),
            other => {
                return Err(Error::Unsolvable(format!(
                    "expert run {k} of scenario {} ended with {other:?}",
                    scenario.seed
                )))
            }
        }
    }
    let condition = rasterize_condition(scenario.grid(), &scenario.start, &scenario.goal)?;
    let label = rasterize_trajectories(scenario.grid().geometry(), &trajectories)?;
    Ok(SceneRecord {
        scenario: scenario.clone(),
        condition,
        label,
        trajectories,
    })
}

/// Whether every trajectory of the record ends in the goal's search cell.
pub fn reaches_goal_cell(record: &SceneRecord, config: &PlannerConfig) -> bool {
    let cells = CellSpace::new(record.scenario.grid().geometry(), config.binning);
    let Ok(goal) = cells.discretize(&record.scenario.goal) else {
        return false;
    };
    record
        .trajectories
        .iter()
        .all(|t| t.last().and_then(|p| cells.discretize(p).ok()) == Some(goal))
}

/// Scenario seeds for dataset slot `index`, in the order they are tried.
pub fn slot_seeds(master_seed: u64, index: usize) -> impl Iterator<Item = u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    std::iter::repeat_with(move || rng.next_u64())
}

/// Deterministic expert record for dataset slot `index`: scenarios are redrawn
/// until all five expert runs succeed.
pub fn generate_slot(
    master_seed: u64,
    index: usize,
    layout: &LotLayout,
    config: &PlannerConfig,
    limits: Limits,
) -> Result<SceneRecord> {
    for seed in slot_seeds(master_seed, index).take(MAX_SCENARIO_ATTEMPTS) {
        let scenario = match sample_scenario(layout, &config.vehicle, seed) {
            Ok(s) => s,
            Err(Error::DegenerateLayout { .. }) => continue,
            Err(e) => return Err(e),
        };
        match generate_expert_set(&scenario, config, limits) {
            Ok(record) => return Ok(record),
            Err(Error::Unsolvable(_)) | Err(Error::InvalidScenario(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Unsolvable(format!(
        "slot {index}: no solvable scenario in {MAX_SCENARIO_ATTEMPTS} draws"
    )))
}

pub fn scene_dir_name(index: usize) -> String {
    format!("scene_{index:04}")
}

/// Generate and export `count` scenes under `out`, in parallel.
///
/// The directory tree depends only on `master_seed`, `count`, the layout and the
/// planner configuration.
pub fn generate_dataset(
    out: impl AsRef<Path>,
    count: usize,
    master_seed: u64,
    layout: &LotLayout,
    config: &PlannerConfig,
) -> Result<Vec<PathBuf>> {
    let out = out.as_ref();
    std::fs::create_dir_all(out)?;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let record = generate_slot(master_seed, i, layout, config, Limits::none())?;
            let dir = out.join(scene_dir_name(i));
            export_scene(&dir, &record)?;
            Ok(dir)
        })
        .collect()
}
