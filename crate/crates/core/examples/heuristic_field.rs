// Obstacle-aware cost-to-go around a wall with a gap.

use nhastar::heuristic::{build_holonomic_field, h};
use nhastar::{GridGeometry, OccupancyGrid, Pose};

/// Heuristic at a point behind the wall, and its straight-line distance.
pub fn run_example() -> nhastar::Result<(f64, f64)> {
    let mut grid = OccupancyGrid::empty(GridGeometry::new(200, 100, 0.1)?);
    grid.fill_rect(9.5, 2.0, 10.5, 10.0);
    let goal = Pose::new(18.0, 5.0, 0.0);
    let field = build_holonomic_field(&grid, &goal)?;

    let state = Pose::new(2.0, 5.0, 0.0);
    let cost = h(&state, &field, &goal);
    let straight = state.distance_to(&goal);
    println!("straight line {straight:.2} m, around the wall {cost:.2} m");
    for x in (0..20).step_by(4) {
        println!("x = {x:>2}: {:.2}", field.lookup(x as f64 + 0.05, 1.05));
    }
    Ok((cost, straight))
}

fn main() -> nhastar::Result<()> {
    run_example().map(|_| ())
}
