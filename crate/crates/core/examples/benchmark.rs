// Guided versus unguided over a handful of sampled scenarios.

use nhastar::dataset::{render_table, run_benchmark, sample_scenario, BenchCase, BenchSummary, GuidanceSource, LotLayout};
use nhastar::{GuidanceConfig, PlannerConfig};

pub fn run_example() -> nhastar::Result<BenchSummary> {
    let config = PlannerConfig::default();
    let layout = LotLayout::default();
    let cases: Vec<BenchCase> = (0..6)
        .filter_map(|seed| sample_scenario(&layout, &config.vehicle, seed).ok())
        .map(|scenario| BenchCase {
            id: format!("seed_{}", scenario.seed),
            scenario,
            guidance: GuidanceSource::Oracle { radius: 1.5 },
        })
        .collect();
    let rows = run_benchmark(&cases, &config, GuidanceConfig::default(), 2)?;
    print!("{}", render_table(&rows));
    Ok(BenchSummary::of(&rows))
}

fn main() -> nhastar::Result<()> {
    let summary = run_example()?;
    println!("{summary:?}");
    Ok(())
}
