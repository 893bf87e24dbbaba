//! On-disk scene layout.
//!
//! ```text
//! scene_0000/
//!   condition.pras   scene image (0 free, 1 obstacle, 2 start, 3 goal)
//!   label.pras       union of expert trajectory pixels (0/1)
//!   traj_0.csv ... traj_4.csv
//!   scenario.toml    seed, endpoints, bay occupancy, layout, expert costs
//! ```
//!
//! Trajectory CSV columns are `x,y,theta,steer,dir`; angles in radians, `dir` is
//! 1 forward, -1 reverse, 0 for the start row which has no action.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{LotLayout, ParkingScenario, SceneRecord, EXPERTS_PER_SCENE};
use crate::error::{Error, Result};
use crate::kinematics::{Action, Direction};
use crate::scene::raster_io::{load_label_image, load_scene_image, save_pras};
use crate::scene::{rasterize_condition, rasterize_trajectories, Pose};
use crate::search::{Trajectory, TrajectoryPoint};

pub const CONDITION_FILE: &str = "condition.pras";
pub const LABEL_FILE: &str = "label.pras";
pub const SCENARIO_FILE: &str = "scenario.toml";

fn traj_file(k: usize) -> String {
    format!("traj_{k}.csv")
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("trajectory csv: {other:?}")),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajRow {
    x: f64,
    y: f64,
    theta: f64,
    steer: f64,
    dir: i32,
}

pub fn write_trajectory_csv<W: Write>(w: W, trajectory: &Trajectory) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for p in trajectory.points() {
        let (steer, dir) = match p.action {
            Some(a) => (a.steer, a.dir.sign() as i32),
            None => (0.0, 0),
        };
        out.serialize(TrajRow {
            x: p.pose.x(),
            y: p.pose.y(),
            theta: p.pose.theta(),
            steer,
            dir,
        })
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

/// Parse trajectory rows. Only the first row may lack an action.
pub fn read_trajectory_csv<R: Read>(r: R) -> Result<Vec<TrajectoryPoint>> {
    let mut points = Vec::new();
    for (i, row) in csv::Reader::from_reader(r).deserialize::<TrajRow>().enumerate() {
        let row = row.map_err(csv_error)?;
        let action = match (row.dir, i) {
            (0, 0) => None,
            (0, _) => return Err(Error::Format(format!("row {i} has no action"))),
            (s, _) => Some(Action {
                steer: row.steer,
                dir: Direction::from_sign(s).ok_or_else(|| Error::Format(format!("row {i}: bad dir {s}")))?,
            }),
        };
        points.push(TrajectoryPoint {
            pose: Pose::new(row.x, row.y, row.theta),
            action,
        });
    }
    if points.is_empty() {
        return Err(Error::Format("trajectory csv has no rows".into()));
    }
    Ok(points)
}

pub fn save_trajectory_csv(path: impl AsRef<Path>, trajectory: &Trajectory) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv(&mut w, trajectory)?;
    w.flush()?;
    Ok(())
}

pub fn load_trajectory_csv(path: impl AsRef<Path>) -> Result<Vec<TrajectoryPoint>> {
    read_trajectory_csv(BufReader::new(File::open(path)?))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PoseRecord {
    x: f64,
    y: f64,
    theta: f64,
}

impl From<Pose> for PoseRecord {
    fn from(p: Pose) -> Self {
        Self {
            x: p.x(),
            y: p.y(),
            theta: p.theta(),
        }
    }
}

impl From<PoseRecord> for Pose {
    fn from(p: PoseRecord) -> Self {
        Pose::new(p.x, p.y, p.theta)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ScenarioFile {
    /// TOML integers are signed 64-bit, so the seed is stored as a decimal string.
    #[serde(with = "seed_string")]
    seed: u64,
    goal_bay: usize,
    occupied: Vec<bool>,
    expert_costs: Vec<f64>,
    start: PoseRecord,
    goal: PoseRecord,
    layout: LotLayout,
}

mod seed_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&seed.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Write one scene directory, creating it if needed.
pub fn export_scene(dir: impl AsRef<Path>, record: &SceneRecord) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    save_pras(dir.join(CONDITION_FILE), record.condition.raster())?;
    save_pras(dir.join(LABEL_FILE), record.label.raster())?;
    for (k, t) in record.trajectories.iter().enumerate() {
        save_trajectory_csv(dir.join(traj_file(k)), t)?;
    }
    let s = &record.scenario;
    let meta = ScenarioFile {
        seed: s.seed,
        goal_bay: s.goal_bay,
        occupied: s.occupied.clone(),
        expert_costs: record.trajectories.iter().map(Trajectory::cost).collect(),
        start: s.start.into(),
        goal: s.goal.into(),
        layout: s.layout,
    };
    let text = toml::to_string(&meta).map_err(|e| Error::Format(e.to_string()))?;
    std::fs::write(dir.join(SCENARIO_FILE), text)?;
    Ok(())
}

fn read_meta(dir: &Path) -> Result<ScenarioFile> {
    toml::from_str(&std::fs::read_to_string(dir.join(SCENARIO_FILE))?)
        .map_err(|e| Error::Format(format!("{}: {e}", SCENARIO_FILE)))
}

fn scenario_of(meta: &ScenarioFile) -> Result<ParkingScenario> {
    ParkingScenario::new(
        meta.layout,
        meta.occupied.clone(),
        meta.goal_bay,
        meta.start.into(),
        meta.goal.into(),
        meta.seed,
    )
}

/// Scenario of a scene directory, with the lot rebuilt from its layout.
pub fn load_scenario(dir: impl AsRef<Path>) -> Result<ParkingScenario> {
    scenario_of(&read_meta(dir.as_ref())?)
}

/// Read a scene directory back and check it is self-consistent.
pub fn import_scene(dir: impl AsRef<Path>) -> Result<SceneRecord> {
    let dir = dir.as_ref();
    let meta = read_meta(dir)?;
    let scenario = scenario_of(&meta)?;
    let condition = load_scene_image(dir.join(CONDITION_FILE))?;
    let label = load_label_image(dir.join(LABEL_FILE))?;
    if condition.strip_markers() != *scenario.grid() {
        return Err(Error::Validation("condition image disagrees with the lot layout".into()));
    }
    if condition != rasterize_condition(scenario.grid(), &scenario.start, &scenario.goal)? {
        return Err(Error::Validation("condition markers disagree with the endpoints".into()));
    }
    if meta.expert_costs.len() != EXPERTS_PER_SCENE {
        return Err(Error::Format(format!(
            "expected {EXPERTS_PER_SCENE} expert costs, found {}",
            meta.expert_costs.len()
        )));
    }
    let mut trajectories = Vec::with_capacity(EXPERTS_PER_SCENE);
    for (k, cost) in meta.expert_costs.iter().enumerate() {
        let points = load_trajectory_csv(dir.join(traj_file(k)))?;
        trajectories.push(Trajectory::new(points, *cost));
    }
    if label != rasterize_trajectories(scenario.grid().geometry(), &trajectories)? {
        return Err(Error::Validation("label image disagrees with the trajectories".into()));
    }
    Ok(SceneRecord {
        scenario,
        condition,
        label,
        trajectories,
    })
}

/// Subdirectories of `root` holding a scenario file, sorted by name.
pub fn list_scene_dirs(root: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut dirs = Vec::new();
    for entry in std::fs::read_dir(root)? {
        let path = entry?.path();
        if path.join(SCENARIO_FILE).is_file() {
            dirs.push(path);
        }
    }
    dirs.sort();
    Ok(dirs)
}
