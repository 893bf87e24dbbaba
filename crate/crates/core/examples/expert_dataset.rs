// Generate a few expert scenes and read them back.

use std::path::Path;

use nhastar::dataset::{generate_dataset, import_scene, LotLayout};
use nhastar::PlannerConfig;

/// Number of scenes that import cleanly.
pub fn run_example(out: &Path) -> nhastar::Result<usize> {
    let dirs = generate_dataset(out, 3, 42, &LotLayout::default(), &PlannerConfig::default())?;
    for dir in &dirs {
        let record = import_scene(dir)?;
        let costs: Vec<f64> = record.trajectories.iter().map(|t| t.cost()).collect();
        println!(
            "{}: seed {} goal bay {} label pixels {} expert costs {costs:?}",
            dir.display(),
            record.scenario.seed,
            record.scenario.goal_bay,
            record.label.count_set()
        );
    }
    Ok(dirs.len())
}

fn main() -> nhastar::Result<()> {
    let tmp = tempfile::tempdir()?;
    run_example(tmp.path()).map(|_| ())
}
