//! World model: poses, byte rasters, the vehicle footprint and collision checks.
//!
//! Raster axis convention, used by every raster in the crate: column 0 sits at
//! x = 0 (west), row 0 at y = 0 (south), and a world point (x, y) falls in pixel
//! `(floor(x / res), floor(y / res))`. Storage is row-major from row 0.

pub mod raster_io;

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::search::Trajectory;

/// Wrap an angle into (−π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Wrap an angle into [0, 2π).
pub fn normalize_angle_positive(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Vehicle configuration (x, y, θ) at the rear axle. θ is kept in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    x: f64,
    y: f64,
    theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite(), "pose position must be finite");
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn from_degrees(x: f64, y: f64, theta_deg: f64) -> Self {
        Self::new(x, y, theta_deg.to_radians())
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn distance_to(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Shape of a raster and its metric scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub width: usize,
    pub height: usize,
    /// Meters per pixel.
    pub resolution: f64,
}

impl GridGeometry {
    /// The 25 m × 15 m lot at 0.1 m per pixel.
    pub const PARKING_LOT: GridGeometry = GridGeometry {
        width: 250,
        height: 150,
        resolution: 0.1,
    };

    pub fn new(width: usize, height: usize, resolution: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("raster dimensions must be positive".into()));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidInput(format!("bad resolution {resolution}")));
        }
        Ok(Self {
            width,
            height,
            resolution,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// World extent in meters, (width, height).
    pub fn extent(&self) -> (f64, f64) {
        (
            self.width as f64 * self.resolution,
            self.height as f64 * self.resolution,
        )
    }

    /// Pixel `(col, row)` containing the world point, if any.
    #[inline]
    pub fn pixel_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !(x >= 0.0 && y >= 0.0) {
            return None;
        }
        let col = (x / self.resolution).floor();
        let row = (y / self.resolution).floor();
        if col >= self.width as f64 || row >= self.height as f64 {
            return None;
        }
        Some((col as usize, row as usize))
    }

    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.pixel_of(x, y).is_some()
    }

    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    /// World coordinates of a pixel center.
    #[inline]
    pub fn center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            (col as f64 + 0.5) * self.resolution,
            (row as f64 + 0.5) * self.resolution,
        )
    }
}

impl Default for GridGeometry {
    fn default() -> Self {
        Self::PARKING_LOT
    }
}

/// Row-major byte raster with no value constraints of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteRaster {
    geometry: GridGeometryKey,
    data: Vec<u8>,
}

// Geometry stored with the resolution as bits so byte rasters can derive Eq.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GridGeometryKey {
    width: usize,
    height: usize,
    resolution_bits: u64,
}

impl From<GridGeometry> for GridGeometryKey {
    fn from(g: GridGeometry) -> Self {
        Self {
            width: g.width,
            height: g.height,
            resolution_bits: g.resolution.to_bits(),
        }
    }
}

impl ByteRaster {
    pub fn new(geometry: GridGeometry, data: Vec<u8>) -> Result<Self> {
        if data.len() != geometry.len() {
            return Err(Error::Format(format!(
                "payload has {} bytes, expected {}",
                data.len(),
                geometry.len()
            )));
        }
        Ok(Self {
            geometry: geometry.into(),
            data,
        })
    }

    pub fn zeros(geometry: GridGeometry) -> Self {
        Self {
            geometry: geometry.into(),
            data: vec![0; geometry.len()],
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        GridGeometry {
            width: self.geometry.width,
            height: self.geometry.height,
            resolution: f64::from_bits(self.geometry.resolution_bits),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.geometry.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.geometry.height
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.data[row * self.geometry.width + col]
    }

    #[inline]
    pub fn set(&mut self, col: usize, row: usize, value: u8) {
        self.data[row * self.geometry.width + col] = value;
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    fn check_values(&self, max: u8, what: &str) -> Result<()> {
        match self.data.iter().position(|&v| v > max) {
            Some(i) => Err(Error::Validation(format!(
                "{what} pixel {i} has value {}, allowed 0..={max}",
                self.data[i]
            ))),
            None => Ok(()),
        }
    }
}

pub const FREE: u8 = 0;
pub const OBSTACLE: u8 = 1;
pub const START_MARKER: u8 = 2;
pub const GOAL_MARKER: u8 = 3;

/// Heading arrow length in pixel steps.
pub const ARROW_PIXELS: usize = 10;

/// Binary obstacle raster: 0 free, 1 obstacle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyGrid(ByteRaster);

impl OccupancyGrid {
    pub fn empty(geometry: GridGeometry) -> Self {
        Self(ByteRaster::zeros(geometry))
    }

    pub fn from_raster(raster: ByteRaster) -> Result<Self> {
        raster.check_values(OBSTACLE, "occupancy")?;
        Ok(Self(raster))
    }

    pub fn new(geometry: GridGeometry, cells: Vec<u8>) -> Result<Self> {
        Self::from_raster(ByteRaster::new(geometry, cells)?)
    }

    pub fn geometry(&self) -> GridGeometry {
        self.0.geometry()
    }

    pub fn raster(&self) -> &ByteRaster {
        &self.0
    }

    #[inline]
    pub fn is_obstacle(&self, col: usize, row: usize) -> bool {
        self.0.get(col, row) == OBSTACLE
    }

    pub fn set_obstacle(&mut self, col: usize, row: usize, obstacle: bool) {
        self.0.set(col, row, obstacle as u8);
    }

    /// Obstacle test at world point resolution. Points outside the world count as blocked.
    pub fn is_obstacle_at(&self, x: f64, y: f64) -> bool {
        match self.geometry().pixel_of(x, y) {
            Some((c, r)) => self.is_obstacle(c, r),
            None => true,
        }
    }

    /// Mark every pixel whose center lies in the axis-aligned box `[x0, x1] × [y0, y1]`.
    pub fn fill_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64) {
        let g = self.geometry();
        for row in 0..g.height {
            for col in 0..g.width {
                let (cx, cy) = g.center(col, row);
                if cx >= x0 && cx <= x1 && cy >= y0 && cy <= y1 {
                    self.set_obstacle(col, row, true);
                }
            }
        }
    }

    pub fn obstacle_count(&self) -> usize {
        self.0.data().iter().filter(|&&v| v == OBSTACLE).count()
    }
}

/// Condition image: 0 free, 1 obstacle, 2 start marker and arrow, 3 goal marker and arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneImage(ByteRaster);

impl SceneImage {
    pub fn from_raster(raster: ByteRaster) -> Result<Self> {
        raster.check_values(GOAL_MARKER, "scene image")?;
        Ok(Self(raster))
    }

    pub fn geometry(&self) -> GridGeometry {
        self.0.geometry()
    }

    pub fn raster(&self) -> &ByteRaster {
        &self.0
    }

    pub fn count(&self, value: u8) -> usize {
        self.0.data().iter().filter(|&&v| v == value).count()
    }

    /// Replace start and goal markers with free space.
    pub fn strip_markers(&self) -> OccupancyGrid {
        let data = self
            .0
            .data()
            .iter()
            .map(|&v| if v == OBSTACLE { OBSTACLE } else { FREE })
            .collect();
        OccupancyGrid(ByteRaster::new(self.geometry(), data).expect("same geometry"))
    }
}

/// Union of expert trajectory pixels: 1 where any trajectory state falls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelImage(ByteRaster);

impl LabelImage {
    pub fn from_raster(raster: ByteRaster) -> Result<Self> {
        raster.check_values(1, "label image")?;
        Ok(Self(raster))
    }

    pub fn geometry(&self) -> GridGeometry {
        self.0.geometry()
    }

    pub fn raster(&self) -> &ByteRaster {
        &self.0
    }

    pub fn count_set(&self) -> usize {
        self.0.data().iter().filter(|&&v| v == 1).count()
    }
}

/// Rectangular vehicle body referenced at the rear axle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleGeometry {
    pub wheelbase: f64,
    pub body_length: f64,
    pub body_width: f64,
    /// Rear axle to rear bumper.
    pub rear_overhang: f64,
}

impl Default for VehicleGeometry {
    fn default() -> Self {
        Self {
            wheelbase: 2.7,
            body_length: 4.5,
            body_width: 1.9,
            rear_overhang: 0.9,
        }
    }
}

impl VehicleGeometry {
    pub fn new(wheelbase: f64, body_length: f64, body_width: f64, rear_overhang: f64) -> Result<Self> {
        let v = Self {
            wheelbase,
            body_length,
            body_width,
            rear_overhang,
        };
        let all_positive = [wheelbase, body_length, body_width, rear_overhang]
            .iter()
            .all(|d| d.is_finite() && *d > 0.0);
        if !all_positive {
            return Err(Error::InvalidInput("vehicle dimensions must be positive".into()));
        }
        if body_length <= wheelbase {
            return Err(Error::InvalidInput("body length must exceed the wheelbase".into()));
        }
        Ok(v)
    }

    /// Distance from the rear axle forward to the front bumper.
    #[inline]
    pub fn front_extent(&self) -> f64 {
        self.body_length - self.rear_overhang
    }

    /// Offset from the rear axle to the body center, along the heading.
    #[inline]
    pub fn center_offset(&self) -> f64 {
        self.body_length / 2.0 - self.rear_overhang
    }

    /// Footprint corners in world coordinates: rear-right, front-right, front-left, rear-left.
    pub fn corners(&self, pose: &Pose) -> [(f64, f64); 4] {
        let (s, c) = pose.theta().sin_cos();
        let half = self.body_width / 2.0;
        let front = self.front_extent();
        let rear = -self.rear_overhang;
        [(rear, -half), (front, -half), (front, half), (rear, half)].map(|(lon, lat)| {
            (
                pose.x() + lon * c - lat * s,
                pose.y() + lon * s + lat * c,
            )
        })
    }

    /// Whether a world point lies inside the footprint (boundary included).
    #[inline]
    pub fn covers(&self, pose: &Pose, px: f64, py: f64) -> bool {
        let (s, c) = pose.theta().sin_cos();
        self.covers_with(pose, s, c, px, py)
    }

    #[inline]
    fn covers_with(&self, pose: &Pose, s: f64, c: f64, px: f64, py: f64) -> bool {
        let dx = px - pose.x();
        let dy = py - pose.y();
        let lon = dx * c + dy * s;
        let lat = -dx * s + dy * c;
        lon >= -self.rear_overhang && lon <= self.front_extent() && lat.abs() <= self.body_width / 2.0
    }
}

/// Footprint collision test.
///
/// True when any footprint corner leaves the grid, or when an obstacle pixel has
/// its center inside the oriented rectangle.
pub fn is_collide(pose: &Pose, grid: &OccupancyGrid, vehicle: &VehicleGeometry) -> bool {
    let g = grid.geometry();
    let corners = vehicle.corners(pose);
    if corners.iter().any(|&(x, y)| !g.contains(x, y)) {
        return true;
    }
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &corners {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    // All corners are in the grid, so the bounding box pixels are too.
    let (c0, r0) = g.pixel_of(min_x, min_y).expect("corner inside grid");
    let (c1, r1) = g.pixel_of(max_x, max_y).expect("corner inside grid");
    let (s, c) = pose.theta().sin_cos();
    for row in r0..=r1 {
        for col in c0..=c1 {
            if !grid.is_obstacle(col, row) {
                continue;
            }
            let (cx, cy) = g.center(col, row);
            if vehicle.covers_with(pose, s, c, cx, cy) {
                return true;
            }
        }
    }
    false
}

/// Pixels of a heading arrow starting next to `(col, row)`.
///
/// The arrow takes `ARROW_PIXELS` unit steps along the dominant axis of the heading,
/// rounding the minor axis, so it always covers exactly that many distinct pixels.
pub fn arrow_pixels(col: usize, row: usize, theta: f64) -> Vec<(i64, i64)> {
    let (s, c) = theta.sin_cos();
    let major = c.abs().max(s.abs());
    let (ux, uy) = (c / major, s / major);
    (1..=ARROW_PIXELS as i64)
        .map(|i| {
            let f = i as f64;
            (
                col as i64 + (f * ux).round() as i64,
                row as i64 + (f * uy).round() as i64,
            )
        })
        .collect()
}

fn marker_pixels(g: &GridGeometry, pose: &Pose, what: &str) -> Result<Vec<(usize, usize)>> {
    let (col, row) = g
        .pixel_of(pose.x(), pose.y())
        .ok_or_else(|| Error::InvalidScenario(format!("{what} pose outside the world")))?;
    let mut out = vec![(col, row)];
    for (c, r) in arrow_pixels(col, row, pose.theta()) {
        if c < 0 || r < 0 || c as usize >= g.width || r as usize >= g.height {
            return Err(Error::InvalidScenario(format!("{what} arrow leaves the world")));
        }
        out.push((c as usize, r as usize));
    }
    Ok(out)
}

/// Encode obstacles, start and goal into a condition image.
///
/// Markers may only overwrite free pixels; landing on an obstacle or on the other
/// marker is rejected.
pub fn rasterize_condition(grid: &OccupancyGrid, start: &Pose, goal: &Pose) -> Result<SceneImage> {
    let g = grid.geometry();
    let mut raster = grid.raster().clone();
    for (pose, value, what) in [(start, START_MARKER, "start"), (goal, GOAL_MARKER, "goal")] {
        for (c, r) in marker_pixels(&g, pose, what)? {
            let current = raster.get(c, r);
            if current == OBSTACLE {
                return Err(Error::InvalidScenario(format!(
                    "{what} marker lands on obstacle pixel ({c}, {r})"
                )));
            }
            if current != FREE && current != value {
                return Err(Error::InvalidScenario(format!(
                    "{what} marker overlaps the other marker at ({c}, {r})"
                )));
            }
            raster.set(c, r, value);
        }
    }
    Ok(SceneImage(raster))
}

/// Binary union of the pixels visited by trajectory states.
pub fn rasterize_trajectories(geometry: GridGeometry, trajectories: &[Trajectory]) -> Result<LabelImage> {
    let mut raster = ByteRaster::zeros(geometry);
    for traj in trajectories {
        for pose in traj.poses() {
            let (c, r) = geometry
                .pixel_of(pose.x(), pose.y())
                .ok_or(Error::OutOfBounds {
                    x: pose.x(),
                    y: pose.y(),
                })?;
            raster.set(c, r, 1);
        }
    }
    Ok(LabelImage(raster))
}

/// Grey levels used by [`render_overlay`].
pub mod grey {
    pub const FREE: u8 = 255;
    pub const OBSTACLE: u8 = 0;
    pub const TRAJECTORY: u8 = 128;
    pub const START: u8 = 64;
    pub const GOAL: u8 = 192;
}

/// Grey-level picture of a grid with trajectories drawn as polylines and the
/// start and goal drawn as marker arrows. Marker pixels off the grid are dropped.
pub fn render_overlay(grid: &OccupancyGrid, start: &Pose, goal: &Pose, trajectories: &[&Trajectory]) -> ByteRaster {
    let g = grid.geometry();
    let data = grid
        .raster()
        .data()
        .iter()
        .map(|&v| if v == OBSTACLE { grey::OBSTACLE } else { grey::FREE })
        .collect();
    let mut out = ByteRaster::new(g, data).expect("same geometry");
    let mut paint = |x: f64, y: f64, value: u8| {
        if let Some((c, r)) = g.pixel_of(x, y) {
            out.set(c, r, value);
        }
    };
    for traj in trajectories {
        let poses: Vec<&Pose> = traj.poses().collect();
        if let [only] = poses[..] {
            paint(only.x(), only.y(), grey::TRAJECTORY);
        }
        for pair in poses.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let n = (a.distance_to(b) / (g.resolution / 2.0)).ceil().max(1.0) as usize;
            for i in 0..=n {
                let t = i as f64 / n as f64;
                paint(a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y()), grey::TRAJECTORY);
            }
        }
    }
    for (pose, value) in [(start, grey::START), (goal, grey::GOAL)] {
        if let Some((col, row)) = g.pixel_of(pose.x(), pose.y()) {
            out.set(col, row, value);
            for (c, r) in arrow_pixels(col, row, pose.theta()) {
                if c >= 0 && r >= 0 && (c as usize) < g.width && (r as usize) < g.height {
                    out.set(c as usize, r as usize, value);
                }
            }
        }
    }
    out
}
