// Guided search with a map dilated from a known solution.

use nhastar::dataset::{sample_scenario, LotLayout};
use nhastar::{guided_plan, plan, synthetic_oracle, GateStats, GuidanceConfig, Limits, PlannerConfig, SearchStats};

/// Unguided stats, guided stats and gate counters.
pub fn run_example() -> nhastar::Result<(SearchStats, SearchStats, GateStats)> {
    let config = PlannerConfig::default();
    let scenario = sample_scenario(&LotLayout::default(), &config.vehicle, 3)?;
    let problem = scenario.problem(&config.vehicle)?;

    let base = plan(&problem, &config, None, Limits::none());
    let reference = base
        .trajectory()
        .ok_or_else(|| nhastar::Error::Unsolvable("baseline found no path".into()))?;
    let dmap = synthetic_oracle(reference, 1.5, problem.grid().geometry())?;
    let (guided, gate) = guided_plan(&problem, &config, &dmap, GuidanceConfig::default(), Limits::none())?;

    println!("unguided: solved {} inserted {}", base.stats.solved, base.stats.open_list_inserted);
    println!("guided:   solved {} inserted {}", guided.stats.solved, guided.stats.open_list_inserted);
    println!("gate: {} draws, {} consulted, {} pruned", gate.draws, gate.consulted, gate.pruned);
    Ok((base.stats, guided.stats, gate))
}

fn main() -> nhastar::Result<()> {
    run_example().map(|_| ())
}
