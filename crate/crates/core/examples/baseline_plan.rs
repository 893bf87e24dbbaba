// Plain Hybrid A* on a sampled parking scenario.

use nhastar::dataset::{sample_scenario, LotLayout};
use nhastar::{plan, Limits, PlannerConfig, SearchStats, Trajectory};

pub fn run_example() -> nhastar::Result<(SearchStats, Option<Trajectory>)> {
    let config = PlannerConfig::default();
    let scenario = sample_scenario(&LotLayout::default(), &config.vehicle, 3)?;
    let problem = scenario.problem(&config.vehicle)?;
    let report = plan(&problem, &config, None, Limits::none());
    let s = report.stats;
    println!(
        "goal bay {} | solved {} | inserted {} | expanded {} | {:.2} ms",
        scenario.goal_bay,
        s.solved,
        s.open_list_inserted,
        s.expanded,
        s.wall_time.as_secs_f64() * 1e3
    );
    if let Some(t) = report.trajectory() {
        for p in t.points() {
            let a = p.action.map(|a| format!("{:?} {:>4.0}", a.dir, a.steer.to_degrees())).unwrap_or_default();
            println!("  {:>6.2} {:>6.2} {:>7.1}  {a}", p.pose.x(), p.pose.y(), p.pose.theta().to_degrees());
        }
        println!("cost {}", t.cost());
    }
    Ok((s, report.trajectory().cloned()))
}

fn main() -> nhastar::Result<()> {
    run_example().map(|_| ())
}
