//! Hybrid A* over continuous poses with cell-level duplicate detection.
//!
//! Open list: binary min-heap keyed on `(c + h, c, insertion order)` with lazy
//! deletion. Each cell keeps at most one live open node; a cheaper arrival
//! replaces it and the old heap entry goes stale. A cell is closed when its node
//! is extracted, and successors landing in closed cells are dropped. The goal
//! test compares cells.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::heuristic::{self, CostField};
use crate::kinematics::{transition, Action, Direction, StepConfig};
use crate::scene::{is_collide, normalize_angle_positive, GridGeometry, OccupancyGrid, Pose, VehicleGeometry};

/// Duplicate-detection resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binning {
    /// Meters per XY bin.
    pub xy_resolution: f64,
    /// Number of heading bins over a full turn.
    pub heading_bins: usize,
}

impl Default for Binning {
    /// 2 m in X and Y, 15° in heading.
    fn default() -> Self {
        Self {
            xy_resolution: 2.0,
            heading_bins: 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub ix: usize,
    pub iy: usize,
    pub itheta: usize,
}

/// Dense enumeration of all cells of a world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpace {
    binning: Binning,
    extent: (f64, f64),
    nx: usize,
    ny: usize,
}

// Absorbs float noise at bin edges, e.g. 90° landing a hair under 6 × 15°.
const BIN_EPS: f64 = 1e-9;

impl CellSpace {
    pub fn new(geometry: GridGeometry, binning: Binning) -> Self {
        let extent = geometry.extent();
        Self {
            binning,
            extent,
            nx: (extent.0 / binning.xy_resolution - BIN_EPS).ceil() as usize,
            ny: (extent.1 / binning.xy_resolution - BIN_EPS).ceil() as usize,
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.binning.heading_bins)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.binning.heading_bins
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Floor-division binning of position and of heading taken in [0, 2π).
    pub fn discretize(&self, state: &Pose) -> Result<CellIndex> {
        let (x, y) = (state.x(), state.y());
        if !(x >= 0.0 && y >= 0.0 && x < self.extent.0 && y < self.extent.1) {
            return Err(Error::OutOfBounds { x, y });
        }
        let res = self.binning.xy_resolution;
        let ix = ((x / res + BIN_EPS).floor() as usize).min(self.nx - 1);
        let iy = ((y / res + BIN_EPS).floor() as usize).min(self.ny - 1);
        let bins = self.binning.heading_bins;
        let t = normalize_angle_positive(state.theta()) / std::f64::consts::TAU * bins as f64;
        let itheta = ((t + BIN_EPS).floor() as usize) % bins;
        Ok(CellIndex { ix, iy, itheta })
    }

    #[inline]
    pub fn id(&self, cell: CellIndex) -> usize {
        (cell.itheta * self.ny + cell.iy) * self.nx + cell.ix
    }
}

/// Convenience wrapper over [`CellSpace::discretize`].
pub fn discretize(state: &Pose, geometry: GridGeometry, binning: Binning) -> Result<CellIndex> {
    CellSpace::new(geometry, binning).discretize(state)
}

/// Per-step cost shaping. Base cost is the step length `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCosts {
    /// Multiplies `d` for reverse steps.
    pub reverse_multiplier: f64,
    /// Added when the direction differs from the parent step's direction.
    pub switch_penalty: f64,
}

impl StepCosts {
    /// Pure arc length.
    pub const ARC_LENGTH: StepCosts = StepCosts {
        reverse_multiplier: 1.0,
        switch_penalty: 0.0,
    };

    pub fn step_cost(&self, step: f64, previous: Option<Direction>, action: &Action) -> f64 {
        let mut cost = match action.dir {
            Direction::Forward => step,
            Direction::Reverse => step * self.reverse_multiplier,
        };
        if matches!(previous, Some(dir) if dir != action.dir) {
            cost += self.switch_penalty;
        }
        cost
    }
}

impl Default for StepCosts {
    fn default() -> Self {
        Self {
            reverse_multiplier: 2.0,
            switch_penalty: 2.0,
        }
    }
}

/// Which cost-to-go estimate orders the open list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeuristicMode {
    /// max(euclidean, 8-connected holonomic field).
    #[default]
    Holonomic,
    Euclidean,
    /// h ≡ 0: uniform-cost search.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub step: StepConfig,
    pub vehicle: VehicleGeometry,
    pub binning: Binning,
    pub costs: StepCosts,
    pub heuristic: HeuristicMode,
    /// Expansion order of the action set; reordering changes tie-breaking.
    pub actions: Vec<Action>,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        let vehicle = VehicleGeometry::default();
        Self {
            step: StepConfig {
                step: 2.0,
                wheelbase: vehicle.wheelbase,
            },
            vehicle,
            binning: Binning::default(),
            costs: StepCosts::default(),
            heuristic: HeuristicMode::default(),
            actions: Action::canonical_set(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Limits {
    pub max_expansions: Option<usize>,
    pub max_time: Option<Duration>,
}

impl Limits {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn expansions(n: usize) -> Self {
        Self {
            max_expansions: Some(n),
            max_time: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchStats {
    pub wall_time: Duration,
    /// Largest number of live (non-stale) open entries at any time.
    pub open_list_peak: usize,
    /// Every push onto the open list, root and replacements included.
    pub open_list_inserted: usize,
    pub expanded: usize,
    pub solved: bool,
}

impl SearchStats {
    /// Equality of everything except wall time.
    pub fn same_counts(&self, other: &SearchStats) -> bool {
        self.open_list_peak == other.open_list_peak
            && self.open_list_inserted == other.open_list_inserted
            && self.expanded == other.expanded
            && self.solved == other.solved
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub state: Pose,
    /// Action that produced this node; `None` at the root.
    pub action: Option<Action>,
    pub cost: f64,
    pub heuristic: f64,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub pose: Pose,
    pub action: Option<Action>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<TrajectoryPoint>,
    cost: f64,
}

impl Trajectory {
    pub fn new(points: Vec<TrajectoryPoint>, cost: f64) -> Self {
        Self { points, cost }
    }

    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn poses(&self) -> impl Iterator<Item = &Pose> + '_ {
        self.points.iter().map(|p| &p.pose)
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Option<&Pose> {
        self.points.first().map(|p| &p.pose)
    }

    pub fn last(&self) -> Option<&Pose> {
        self.points.last().map(|p| &p.pose)
    }

    /// Largest deviation (meters or radians) between stored poses and poses
    /// recomputed by replaying the actions from the first pose.
    pub fn replay_error(&self, step: &StepConfig) -> f64 {
        let mut worst: f64 = 0.0;
        for pair in self.points.windows(2) {
            let Some(action) = pair[1].action else {
                return f64::INFINITY;
            };
            let expected = transition(&pair[0].pose, &action, step);
            let got = pair[1].pose;
            let dtheta = crate::scene::normalize_angle(expected.theta() - got.theta()).abs();
            worst = worst
                .max((expected.x() - got.x()).abs())
                .max((expected.y() - got.y()).abs())
                .max(dtheta);
        }
        worst
    }

    pub fn is_collision_free(&self, grid: &OccupancyGrid, vehicle: &VehicleGeometry) -> bool {
        self.poses().all(|p| !is_collide(p, grid, vehicle))
    }

    /// Sum of step costs along the action sequence.
    pub fn recompute_cost(&self, step: f64, costs: &StepCosts) -> f64 {
        let mut prev = None;
        let mut total = 0.0;
        for p in self.points.iter().skip(1) {
            if let Some(a) = p.action {
                total += costs.step_cost(step, prev, &a);
                prev = Some(a.dir);
            }
        }
        total
    }
}

/// Walk parent links from `goal` back to the root.
pub fn backtrack(nodes: &[Node], goal: usize) -> Result<Trajectory> {
    let mut points = Vec::new();
    let mut cursor = Some(goal);
    while let Some(i) = cursor {
        let node = nodes
            .get(i)
            .ok_or_else(|| Error::Internal(format!("dangling parent index {i}")))?;
        points.push(TrajectoryPoint {
            pose: node.state,
            action: node.action,
        });
        if points.len() > nodes.len() {
            return Err(Error::Internal("cyclic parent chain".into()));
        }
        cursor = node.parent;
    }
    points.reverse();
    Ok(Trajectory::new(points, nodes[goal].cost))
}

/// Consulted for every successor before collision checking. Returning true drops it.
pub trait SuccessorFilter {
    fn should_prune(&mut self, state: &Pose) -> bool;
}

impl<F: FnMut(&Pose) -> bool> SuccessorFilter for F {
    fn should_prune(&mut self, state: &Pose) -> bool {
        self(state)
    }
}

/// A start/goal pair on a grid, with the cost-to-go field prepared once.
#[derive(Debug, Clone)]
pub struct PlanningProblem<'a> {
    grid: &'a OccupancyGrid,
    start: Pose,
    goal: Pose,
    field: CostField,
}

impl<'a> PlanningProblem<'a> {
    pub fn new(grid: &'a OccupancyGrid, start: Pose, goal: Pose, vehicle: &VehicleGeometry) -> Result<Self> {
        if is_collide(&start, grid, vehicle) {
            return Err(Error::InvalidInput(format!(
                "start ({:.3}, {:.3}, {:.3}) is in collision",
                start.x(),
                start.y(),
                start.theta()
            )));
        }
        if is_collide(&goal, grid, vehicle) {
            return Err(Error::InvalidInput(format!(
                "goal ({:.3}, {:.3}, {:.3}) is in collision",
                goal.x(),
                goal.y(),
                goal.theta()
            )));
        }
        let field = heuristic::build_holonomic_field(grid, &goal)?;
        Ok(Self {
            grid,
            start,
            goal,
            field,
        })
    }

    pub fn grid(&self) -> &OccupancyGrid {
        self.grid
    }

    pub fn start(&self) -> Pose {
        self.start
    }

    pub fn goal(&self) -> Pose {
        self.goal
    }

    pub fn field(&self) -> &CostField {
        &self.field
    }

    fn estimate(&self, state: &Pose, mode: HeuristicMode) -> f64 {
        match mode {
            HeuristicMode::Holonomic => heuristic::h(state, &self.field, &self.goal),
            HeuristicMode::Euclidean => state.distance_to(&self.goal),
            HeuristicMode::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Solved(Trajectory),
    /// Open list exhausted.
    NoPath,
    /// Expansion or time limit hit.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanReport {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

impl PlanReport {
    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.outcome {
            SearchOutcome::Solved(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    f: f64,
    cost: f64,
    seq: u64,
    node: usize,
    cell: usize,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl Ord for OpenEntry {
    // Reversed so BinaryHeap pops the smallest (f, cost, seq).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.cost.total_cmp(&self.cost))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search<'p, 'g> {
    problem: &'p PlanningProblem<'g>,
    config: &'p PlannerConfig,
    cells: CellSpace,
    nodes: Vec<Node>,
    heap: BinaryHeap<OpenEntry>,
    open: Vec<Option<usize>>,
    closed: Vec<bool>,
    live: usize,
    seq: u64,
    stats: SearchStats,
}

impl<'p, 'g> Search<'p, 'g> {
    fn push(&mut self, node: Node, cell: usize) {
        let index = self.nodes.len();
        self.heap.push(OpenEntry {
            f: node.cost + node.heuristic,
            cost: node.cost,
            seq: self.seq,
            node: index,
            cell,
        });
        self.nodes.push(node);
        self.seq += 1;
        if self.open[cell].replace(index).is_none() {
            self.live += 1;
        }
        self.stats.open_list_inserted += 1;
        self.stats.open_list_peak = self.stats.open_list_peak.max(self.live);
    }

    fn pop(&mut self) -> Option<OpenEntry> {
        while let Some(entry) = self.heap.pop() {
            if self.closed[entry.cell] || self.open[entry.cell] != Some(entry.node) {
                continue;
            }
            self.open[entry.cell] = None;
            self.live -= 1;
            self.closed[entry.cell] = true;
            return Some(entry);
        }
        None
    }

    fn expand(&mut self, index: usize, filter: &mut Option<&mut dyn SuccessorFilter>) {
        let parent = self.nodes[index];
        let vehicle = &self.config.vehicle;
        for action in &self.config.actions {
            let state = transition(&parent.state, action, &self.config.step);
            if let Some(f) = filter.as_mut() {
                if f.should_prune(&state) {
                    continue;
                }
            }
            if is_collide(&state, self.problem.grid, vehicle) {
                continue;
            }
            let Ok(cell) = self.cells.discretize(&state) else {
                continue;
            };
            let cell = self.cells.id(cell);
            if self.closed[cell] {
                continue;
            }
            let cost = parent.cost
                + self
                    .config
                    .costs
                    .step_cost(self.config.step.step, parent.action.map(|a| a.dir), action);
            if let Some(existing) = self.open[cell] {
                if self.nodes[existing].cost <= cost {
                    continue;
                }
            }
            let heuristic = self.problem.estimate(&state, self.config.heuristic);
            self.push(
                Node {
                    state,
                    action: Some(*action),
                    cost,
                    heuristic,
                    parent: Some(index),
                },
                cell,
            );
        }
    }
}

/// Run Hybrid A*. With a filter, every successor is offered to it before the
/// collision check; pruned successors never reach the open or closed lists.
pub fn plan(
    problem: &PlanningProblem<'_>,
    config: &PlannerConfig,
    mut filter: Option<&mut dyn SuccessorFilter>,
    limits: Limits,
) -> PlanReport {
    let clock = Instant::now();
    let cells = CellSpace::new(problem.grid.geometry(), config.binning);
    let mut search = Search {
        problem,
        config,
        cells,
        nodes: Vec::new(),
        heap: BinaryHeap::new(),
        open: vec![None; cells.len()],
        closed: vec![false; cells.len()],
        live: 0,
        seq: 0,
        stats: SearchStats::default(),
    };
    // Both poses passed the collision check, so they are inside the world.
    let goal_cell = cells.id(cells.discretize(&problem.goal).expect("goal inside world"));
    let start_cell = cells.id(cells.discretize(&problem.start).expect("start inside world"));
    let root = Node {
        state: problem.start,
        action: None,
        cost: 0.0,
        heuristic: problem.estimate(&problem.start, config.heuristic),
        parent: None,
    };
    search.push(root, start_cell);

    let outcome = loop {
        let Some(entry) = search.pop() else {
            break SearchOutcome::NoPath;
        };
        if entry.cell == goal_cell {
            match backtrack(&search.nodes, entry.node) {
                Ok(t) => break SearchOutcome::Solved(t),
                Err(e) => panic!("search tree corrupted: {e}"),
            }
        }
        if limits.max_expansions.is_some_and(|m| search.stats.expanded >= m) {
            break SearchOutcome::BudgetExceeded;
        }
        if let Some(budget) = limits.max_time {
            if search.stats.expanded % 32 == 0 && clock.elapsed() > budget {
                break SearchOutcome::BudgetExceeded;
            }
        }
        search.expand(entry.node, &mut filter);
        search.stats.expanded += 1;
    };

    let mut stats = search.stats;
    stats.solved = matches!(outcome, SearchOutcome::Solved(_));
    stats.wall_time = clock.elapsed();
    PlanReport { outcome, stats }
}
