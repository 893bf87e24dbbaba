//! Cost-to-go estimate shared by both planners.
//!
//! `h = max(euclidean, holonomic)` where the holonomic term is an 8-connected
//! obstacle-aware shortest-path distance from each pixel to the goal pixel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::scene::{GridGeometry, OccupancyGrid, Pose};

/// Per-pixel distance to the goal pixel in meters; `f64::INFINITY` where unreachable.
#[derive(Debug, Clone, PartialEq)]
pub struct CostField {
    geometry: GridGeometry,
    costs: Vec<f64>,
    goal_pixel: (usize, usize),
}

impl CostField {
    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn goal_pixel(&self) -> (usize, usize) {
        self.goal_pixel
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.costs[self.geometry.index(col, row)]
    }

    /// Field value at the pixel containing (x, y); infinite outside the world.
    #[inline]
    pub fn lookup(&self, x: f64, y: f64) -> f64 {
        match self.geometry.pixel_of(x, y) {
            Some((c, r)) => self.get(c, r),
            None => f64::INFINITY,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    cost: f64,
    index: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NEIGHBORS: [(i64, i64, f64); 8] = [
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, SQRT_2),
    (1, -1, SQRT_2),
    (-1, 1, SQRT_2),
    (-1, -1, SQRT_2),
];

/// Dijkstra from the goal pixel over free pixels, 8-connected.
pub fn build_holonomic_field(grid: &OccupancyGrid, goal: &Pose) -> Result<CostField> {
    let g = grid.geometry();
    let goal_pixel = g.pixel_of(goal.x(), goal.y()).ok_or(Error::OutOfBounds {
        x: goal.x(),
        y: goal.y(),
    })?;
    if grid.is_obstacle(goal_pixel.0, goal_pixel.1) {
        return Err(Error::InvalidInput(format!(
            "goal ({}, {}) lies on an obstacle pixel",
            goal.x(),
            goal.y()
        )));
    }
    let mut costs = vec![f64::INFINITY; g.len()];
    let start = g.index(goal_pixel.0, goal_pixel.1);
    costs[start] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Frontier {
        cost: 0.0,
        index: start,
    });
    let (w, h) = (g.width as i64, g.height as i64);
    while let Some(Frontier { cost, index }) = heap.pop() {
        if cost > costs[index] {
            continue;
        }
        let (col, row) = ((index % g.width) as i64, (index / g.width) as i64);
        for &(dc, dr, unit) in &NEIGHBORS {
            let (nc, nr) = (col + dc, row + dr);
            if nc < 0 || nr < 0 || nc >= w || nr >= h {
                continue;
            }
            let (nc, nr) = (nc as usize, nr as usize);
            if grid.is_obstacle(nc, nr) {
                continue;
            }
            let next = cost + unit * g.resolution;
            let ni = g.index(nc, nr);
            if next < costs[ni] {
                costs[ni] = next;
                heap.push(Frontier { cost: next, index: ni });
            }
        }
    }
    Ok(CostField {
        geometry: g,
        costs,
        goal_pixel,
    })
}

/// `max(euclidean distance to goal, field value at the state's pixel)`.
#[inline]
pub fn h(state: &Pose, field: &CostField, goal: &Pose) -> f64 {
    state.distance_to(goal).max(field.lookup(state.x(), state.y()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bellman-Ford style relaxation to a fixed point; independent of the heap search.
    fn brute_force(grid: &OccupancyGrid, goal: (usize, usize)) -> Vec<f64> {
        let g = grid.geometry();
        let mut d = vec![f64::INFINITY; g.len()];
        d[g.index(goal.0, goal.1)] = 0.0;
        loop {
            let mut changed = false;
            for row in 0..g.height {
                for col in 0..g.width {
                    if grid.is_obstacle(col, row) {
                        continue;
                    }
                    for dr in -1i64..=1 {
                        for dc in -1i64..=1 {
                            if dr == 0 && dc == 0 {
                                continue;
                            }
                            let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                            if nc < 0 || nr < 0 || nc >= g.width as i64 || nr >= g.height as i64 {
                                continue;
                            }
                            let (nc, nr) = (nc as usize, nr as usize);
                            if grid.is_obstacle(nc, nr) {
                                continue;
                            }
                            let step = ((dc * dc + dr * dr) as f64).sqrt() * g.resolution;
                            let cand = d[g.index(nc, nr)] + step;
                            if cand < d[g.index(col, row)] - 1e-12 {
                                d[g.index(col, row)] = cand;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return d;
            }
        }
    }

    #[test]
    fn goal_cell_is_zero_and_east_neighbor_is_one_meter() {
        let grid = OccupancyGrid::empty(GridGeometry::new(60, 40, 0.1).unwrap());
        let goal = Pose::new(2.05, 2.05, 0.0);
        let field = build_holonomic_field(&grid, &goal).unwrap();
        assert_eq!(field.get(20, 20), 0.0);
        let east = field.lookup(3.05, 2.05);
        assert!((east - 1.0).abs() < 1e-9);
        let oracle = brute_force(&grid, (20, 20));
        assert!((oracle[grid.geometry().index(30, 20)] - 1.0).abs() < 1e-9);
        assert_eq!(h(&goal, &field, &goal), 0.0);
    }

    #[test]
    fn matches_brute_force_on_cluttered_grid() {
        let g = GridGeometry::new(40, 30, 0.1).unwrap();
        let mut grid = OccupancyGrid::empty(g);
        for i in 0..g.len() {
            if (i * 2654435761usize) % 7 == 0 {
                grid.set_obstacle(i % g.width, i / g.width, true);
            }
        }
        grid.set_obstacle(5, 5, false);
        let field = build_holonomic_field(&grid, &Pose::new(0.55, 0.55, 0.0)).unwrap();
        let oracle = brute_force(&grid, (5, 5));
        for row in 0..g.height {
            for col in 0..g.width {
                let (a, b) = (field.get(col, row), oracle[g.index(col, row)]);
                if grid.is_obstacle(col, row) {
                    assert!(a.is_infinite());
                } else if b.is_infinite() {
                    assert!(a.is_infinite());
                } else {
                    assert!((a - b).abs() < 1e-9, "({col},{row}): {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn walled_off_cell_is_unreachable() {
        let g = GridGeometry::new(50, 50, 0.1).unwrap();
        let mut grid = OccupancyGrid::empty(g);
        // closed ring around (4.0, 4.0)
        grid.fill_rect(3.0, 3.0, 5.0, 3.2);
        grid.fill_rect(3.0, 4.8, 5.0, 5.0);
        grid.fill_rect(3.0, 3.0, 3.2, 5.0);
        grid.fill_rect(4.8, 3.0, 5.0, 5.0);
        let field = build_holonomic_field(&grid, &Pose::new(1.0, 1.0, 0.0)).unwrap();
        assert!(field.lookup(4.0, 4.0).is_infinite());
        assert!(h(&Pose::new(4.0, 4.0, 0.0), &field, &Pose::new(1.0, 1.0, 0.0)).is_infinite());
    }

    #[test]
    fn free_world_h_is_euclidean_on_axes_and_diagonals() {
        let grid = OccupancyGrid::empty(GridGeometry::new(100, 100, 0.1).unwrap());
        let goal = Pose::new(5.05, 5.05, 0.0);
        let field = build_holonomic_field(&grid, &goal).unwrap();
        for (x, y) in [(8.05, 5.05), (5.05, 1.05), (8.05, 8.05), (2.05, 8.05)] {
            let s = Pose::new(x, y, 0.0);
            let euclid = s.distance_to(&goal);
            let holo = field.lookup(x, y);
            assert!((holo - euclid).abs() < 1e-9, "{holo} vs {euclid}");
            assert!((h(&s, &field, &goal) - euclid).abs() < 1e-9);
        }
        // off-axis the octile term dominates
        let s = Pose::new(9.05, 7.05, 0.0);
        assert!(field.lookup(9.05, 7.05) > s.distance_to(&goal));
    }

    #[test]
    fn wall_forces_detour() {
        // Goal west of a wall, state 3 m east of the goal. The wall runs from the
        // south edge up to y = 10.8, forcing a ~12 m path over its top.
        let g = GridGeometry::new(200, 200, 0.1).unwrap();
        let mut grid = OccupancyGrid::empty(g);
        grid.fill_rect(6.5, 0.0, 6.6, 10.8);
        let goal = Pose::new(5.05, 5.05, 0.0);
        let state = Pose::new(8.05, 5.05, 0.0);
        let field = build_holonomic_field(&grid, &goal).unwrap();
        let oracle = brute_force(&grid, (50, 50));
        let expected = oracle[g.index(80, 50)];
        let got = h(&state, &field, &goal);
        assert!((state.distance_to(&goal) - 3.0).abs() < 1e-9);
        assert!((got - expected).abs() < 1e-9);
        assert!(got > 11.5 && got < 13.0, "detour {got}");
    }

    #[test]
    fn goal_on_obstacle_is_an_error() {
        let mut grid = OccupancyGrid::empty(GridGeometry::new(10, 10, 0.1).unwrap());
        grid.set_obstacle(5, 5, true);
        assert!(build_holonomic_field(&grid, &Pose::new(0.55, 0.55, 0.0)).is_err());
        assert!(build_holonomic_field(&grid, &Pose::new(5.0, 0.55, 0.0)).is_err());
    }
}
