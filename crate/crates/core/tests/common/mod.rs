#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::Path;

use nhastar::dataset::{sample_scenario, LotLayout, ParkingScenario};
use nhastar::search::{Binning, CellSpace, HeuristicMode, StepCosts};
use nhastar::{action_set, is_collide, plan, transition, GridGeometry, Limits, OccupancyGrid, PlannerConfig, Pose, StepConfig, VehicleGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 6 m x 6 m world, small vehicle, 1 m x 45° bins, pure arc-length costs.
pub fn small_world_config(heuristic: HeuristicMode) -> PlannerConfig {
    let vehicle = VehicleGeometry::new(0.5, 0.8, 0.4, 0.15).unwrap();
    PlannerConfig {
        step: StepConfig::new(0.6, vehicle.wheelbase).unwrap(),
        vehicle,
        binning: Binning {
            xy_resolution: 1.0,
            heading_bins: 8,
        },
        costs: StepCosts::ARC_LENGTH,
        heuristic,
        actions: action_set(),
    }
}

pub struct SmallInstance {
    pub grid: OccupancyGrid,
    pub start: Pose,
    pub goal: Pose,
}

/// Random rectangles and endpoints; endpoints are collision-free.
pub fn small_instances(seed: u64, vehicle: &VehicleGeometry) -> impl Iterator<Item = SmallInstance> + '_ {
    let geometry = GridGeometry::new(60, 60, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || loop {
        let mut grid = OccupancyGrid::empty(geometry);
        for _ in 0..rng.gen_range(1..4) {
            let x = rng.gen_range(0.5..5.0);
            let y = rng.gen_range(0.5..5.0);
            grid.fill_rect(x, y, x + rng.gen_range(0.2..1.5), y + rng.gen_range(0.2..1.5));
        }
        let start = Pose::new(rng.gen_range(0.5..5.5), rng.gen_range(0.5..5.5), rng.gen_range(-3.1..3.1));
        let goal = Pose::new(rng.gen_range(0.5..5.5), rng.gen_range(0.5..5.5), rng.gen_range(-3.1..3.1));
        if is_collide(&start, &grid, vehicle) || is_collide(&goal, &grid, vehicle) || grid.is_obstacle_at(goal.x(), goal.y()) {
            continue;
        }
        return Some(SmallInstance { grid, start, goal });
    })
}

/// Breadth-first search over the cell-deduplicated lattice: every cell keeps the
/// first state that reaches it. Returns the fewest steps to the goal cell.
pub fn lattice_bfs(grid: &OccupancyGrid, start: Pose, goal: Pose, config: &PlannerConfig) -> Option<usize> {
    let cells = CellSpace::new(grid.geometry(), config.binning);
    let goal_cell = cells.id(cells.discretize(&goal).ok()?);
    let start_cell = cells.id(cells.discretize(&start).ok()?);
    let mut seen = vec![false; cells.len()];
    seen[start_cell] = true;
    let mut queue = VecDeque::from([(start, 0usize, start_cell)]);
    while let Some((state, depth, cell)) = queue.pop_front() {
        if cell == goal_cell {
            return Some(depth);
        }
        for action in &config.actions {
            let next = transition(&state, action, &config.step);
            if is_collide(&next, grid, &config.vehicle) {
                continue;
            }
            let Ok(c) = cells.discretize(&next) else { continue };
            let id = cells.id(c);
            if !seen[id] {
                seen[id] = true;
                queue.push_back((next, depth + 1, id));
            }
        }
    }
    None
}

/// Sampled lot scenarios, skipping seeds whose layout is degenerate.
pub fn lot_scenarios(first_seed: u64) -> impl Iterator<Item = ParkingScenario> {
    let layout = LotLayout::default();
    let vehicle = VehicleGeometry::default();
    (first_seed..).filter_map(move |s| sample_scenario(&layout, &vehicle, s).ok())
}

/// The first `n` sampled scenarios the unguided planner solves.
pub fn solvable_scenarios(first_seed: u64, n: usize, config: &PlannerConfig) -> Vec<ParkingScenario> {
    lot_scenarios(first_seed)
        .filter(|s| {
            let p = s.problem(&config.vehicle).unwrap();
            plan(&p, config, None, Limits::none()).stats.solved
        })
        .take(n)
        .collect()
}

/// Every file under `root` as (relative path, bytes), sorted by path.
pub fn tree_bytes(root: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
