//! Footprint collision test against a 0.01 m rasterization of the vehicle body.

use nhastar::{is_collide, GridGeometry, OccupancyGrid, Pose, VehicleGeometry};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sample lattice spacing; pixel centers (k + 0.5) * 0.1 = (10k + 5) * 0.01 lie on it.
const SUB: f64 = 0.01;

struct Footprint {
    corners: [(f64, f64); 4],
}

impl Footprint {
    /// Corners built from heading unit vectors, counter-clockwise.
    fn new(pose: &Pose, v: &VehicleGeometry) -> Self {
        let (fx, fy) = (pose.theta().cos(), pose.theta().sin());
        let (lx, ly) = (-fy, fx);
        let back = (pose.x() - v.rear_overhang * fx, pose.y() - v.rear_overhang * fy);
        let front_len = v.body_length;
        let hw = v.body_width / 2.0;
        let rr = (back.0 - hw * lx, back.1 - hw * ly);
        let fr = (rr.0 + front_len * fx, rr.1 + front_len * fy);
        let fl = (fr.0 + 2.0 * hw * lx, fr.1 + 2.0 * hw * ly);
        let rl = (rr.0 + 2.0 * hw * lx, rr.1 + 2.0 * hw * ly);
        Self { corners: [rr, fr, fl, rl] }
    }

    /// Point inside or on the boundary: left of (or on) every counter-clockwise edge.
    fn contains(&self, x: f64, y: f64) -> bool {
        (0..4).all(|i| {
            let (ax, ay) = self.corners[i];
            let (bx, by) = self.corners[(i + 1) % 4];
            (bx - ax) * (y - ay) - (by - ay) * (x - ax) >= -1e-9
        })
    }
}

struct Verdicts {
    /// Some obstacle pixel has its center sample inside the body.
    center: bool,
    /// Some obstacle pixel has any sample inside the body.
    any_sample: bool,
}

fn brute_force(pose: &Pose, grid: &OccupancyGrid, v: &VehicleGeometry) -> Verdicts {
    let g = grid.geometry();
    let (w, h) = (g.width as f64 * g.resolution, g.height as f64 * g.resolution);
    let fp = Footprint::new(pose, v);
    if fp.corners.iter().any(|&(x, y)| x < 0.0 || y < 0.0 || x >= w || y >= h) {
        return Verdicts { center: true, any_sample: true };
    }
    let xs = fp.corners.iter().map(|c| c.0);
    let ys = fp.corners.iter().map(|c| c.1);
    let (x0, x1) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
    let per_pixel = (g.resolution / SUB).round() as i64;
    let mut verdicts = Verdicts { center: false, any_sample: false };
    // integer lattice: sample i sits at i * SUB and belongs to pixel i / 10
    for j in ((y0 / SUB).floor() as i64 - 1)..=((y1 / SUB).ceil() as i64) {
        for i in ((x0 / SUB).floor() as i64 - 1)..=((x1 / SUB).ceil() as i64) {
            let (x, y) = (i as f64 * SUB, j as f64 * SUB);
            if i < 0 || j < 0 || !fp.contains(x, y) {
                continue;
            }
            let (col, row) = ((i / per_pixel) as usize, (j / per_pixel) as usize);
            if col >= g.width || row >= g.height || !grid.is_obstacle(col, row) {
                continue;
            }
            verdicts.any_sample = true;
            if i % per_pixel == per_pixel / 2 && j % per_pixel == per_pixel / 2 {
                verdicts.center = true;
                return verdicts;
            }
        }
    }
    verdicts
}

fn random_grid(rng: &mut ChaCha8Rng, g: GridGeometry) -> OccupancyGrid {
    let mut grid = OccupancyGrid::empty(g);
    for _ in 0..rng.gen_range(0..6) {
        let (x, y) = (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0));
        grid.fill_rect(x, y, x + rng.gen_range(0.05..2.0), y + rng.gen_range(0.05..2.0));
    }
    for _ in 0..rng.gen_range(0..40) {
        grid.set_obstacle(rng.gen_range(0..g.width), rng.gen_range(0..g.height), true);
    }
    grid
}

#[test]
fn agrees_with_fine_rasterization_on_1000_pairs() {
    let g = GridGeometry::new(200, 200, 0.1).unwrap();
    let v = VehicleGeometry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0111DE);
    let (mut hits, mut partial_only) = (0, 0);
    for n in 0..1000 {
        let grid = random_grid(&mut rng, g);
        let pose = Pose::new(rng.gen_range(0.5..19.5), rng.gen_range(0.5..19.5), rng.gen_range(-3.2..3.2));
        let got = is_collide(&pose, &grid, &v);
        let oracle = brute_force(&pose, &grid, &v);
        assert_eq!(got, oracle.center, "pair {n}: pose {pose:?}");
        assert!(!got || oracle.any_sample);
        hits += got as usize;
        partial_only += (oracle.any_sample && !oracle.center) as usize;
    }
    // both outcomes must be exercised
    assert!(hits > 100 && hits < 900, "{hits} collisions");
    println!("{hits} collisions; {partial_only} poses only clip obstacle pixels without covering a center");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_obstacles_never_frees_a_pose(
        seed in any::<u64>(),
        x in 1.0f64..9.0, y in 1.0f64..9.0, theta in -3.2f64..3.2,
        extra in proptest::collection::vec((0usize..100, 0usize..100), 1..50),
    ) {
        let g = GridGeometry::new(100, 100, 0.1).unwrap();
        let v = VehicleGeometry::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut grid = random_grid(&mut rng, g);
        let pose = Pose::new(x, y, theta);
        let before = is_collide(&pose, &grid, &v);
        for (c, r) in extra {
            grid.set_obstacle(c, r, true);
        }
        prop_assert!(!before || is_collide(&pose, &grid, &v));
    }

    #[test]
    fn empty_interior_poses_are_free(x in 5.0f64..20.0, y in 5.0f64..10.0, theta in -3.2f64..3.2) {
        let grid = OccupancyGrid::empty(GridGeometry::PARKING_LOT);
        prop_assert!(!is_collide(&Pose::new(x, y, theta), &grid, &VehicleGeometry::default()));
    }
}
