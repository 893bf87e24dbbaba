// Footprint collision checks against a small lot with one parked car.

use nhastar::{is_collide, GridGeometry, OccupancyGrid, Pose, VehicleGeometry};

/// Returns `(free, blocked)` verdict counts over a sweep of headings.
pub fn run_example() -> nhastar::Result<(usize, usize)> {
    let mut grid = OccupancyGrid::empty(GridGeometry::new(200, 100, 0.1)?);
    grid.fill_rect(9.0, 4.0, 11.0, 6.0);
    let vehicle = VehicleGeometry::default();

    let mut counts = (0, 0);
    for deg in (0..360).step_by(45) {
        for (x, y) in [(4.0, 5.0), (9.0, 5.0), (16.0, 2.0)] {
            let pose = Pose::from_degrees(x, y, deg as f64);
            let hit = is_collide(&pose, &grid, &vehicle);
            println!("({x:>4}, {y}) heading {deg:>3}: {}", if hit { "blocked" } else { "free" });
            if hit {
                counts.1 += 1;
            } else {
                counts.0 += 1;
            }
        }
    }
    Ok(counts)
}

fn main() -> nhastar::Result<()> {
    let (free, blocked) = run_example()?;
    println!("{free} free, {blocked} blocked");
    Ok(())
}
