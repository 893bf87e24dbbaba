// Write and reload PRAS, DMAP and PGM files.

use std::path::Path;

use nhastar::dataset::{sample_scenario, LotLayout};
use nhastar::guidance::{load_dmap, save_dmap, save_dmap_pgm};
use nhastar::scene::raster_io::{load_occupancy, load_pgm, save_pgm, save_pras};
use nhastar::scene::render_overlay;
use nhastar::{plan, synthetic_oracle, Limits, PlannerConfig};

/// Whether the grid and the Dmap came back unchanged.
pub fn run_example(dir: &Path) -> nhastar::Result<bool> {
    let config = PlannerConfig::default();
    let scenario = sample_scenario(&LotLayout::default(), &config.vehicle, 3)?;
    let grid = scenario.grid();
    save_pras(dir.join("grid.pras"), grid.raster())?;
    let grid_back = load_occupancy(dir.join("grid.pras"))?;

    let problem = scenario.problem(&config.vehicle)?;
    let report = plan(&problem, &config, None, Limits::none());
    let traj = report
        .trajectory()
        .ok_or_else(|| nhastar::Error::Unsolvable("baseline found no path".into()))?;
    let dmap = synthetic_oracle(traj, 1.5, grid.geometry())?;
    save_dmap(dir.join("oracle.dmap"), &dmap)?;
    save_dmap_pgm(dir.join("oracle.pgm"), &dmap)?;
    let dmap_back = load_dmap(dir.join("oracle.dmap"))?;

    let picture = render_overlay(grid, &scenario.start, &scenario.goal, &[traj]);
    save_pgm(dir.join("overlay.pgm"), &picture, 255)?;
    let (_, maxval) = load_pgm(dir.join("overlay.pgm"), grid.geometry().resolution)?;

    for name in ["grid.pras", "oracle.dmap", "oracle.pgm", "overlay.pgm"] {
        println!("{name}: {} bytes", std::fs::metadata(dir.join(name))?.len());
    }
    Ok(grid_back == *grid && dmap_back == dmap && maxval == 255)
}

fn main() -> nhastar::Result<()> {
    let tmp = tempfile::tempdir()?;
    println!("round trip exact: {}", run_example(tmp.path())?);
    Ok(())
}
