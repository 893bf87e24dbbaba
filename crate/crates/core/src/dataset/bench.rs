//! Guided versus unguided benchmark.
//!
//! Both planners run sequentially on the same scenario, `reps` times each, and
//! wall times are averaged. Wall time covers the search loop only; building the
//! cost-to-go field is shared by both planners and excluded.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use super::ParkingScenario;
use crate::error::{Error, Result};
use crate::guidance::{synthetic_oracle, Dmap, GuidanceConfig};
use crate::neural::{guided_plan, GateStats};
use crate::search::{plan, Limits, PlanReport, PlannerConfig, SearchStats};

/// Where a case's Dmap comes from.
#[derive(Debug, Clone)]
pub enum GuidanceSource {
    /// Dilate the unguided solution of the same scenario.
    Oracle { radius: f64 },
    Map(Dmap),
}

#[derive(Debug, Clone)]
pub struct BenchCase {
    pub id: String,
    pub scenario: ParkingScenario,
    pub guidance: GuidanceSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub id: String,
    pub reps: usize,
    /// Counts from one run, wall time averaged over `reps`.
    pub unguided: SearchStats,
    /// `None` when no Dmap was available (oracle guidance on an unsolved scenario).
    pub guided: Option<SearchStats>,
    pub gate: Option<GateStats>,
}

impl BenchRow {
    pub fn time_ratio(&self) -> Option<f64> {
        let g = self.guided?;
        Some(g.wall_time.as_secs_f64() / self.unguided.wall_time.as_secs_f64())
    }

    pub fn node_ratio(&self) -> Option<f64> {
        let g = self.guided?;
        Some(g.open_list_inserted as f64 / self.unguided.open_list_inserted as f64)
    }

    pub fn both_solved(&self) -> bool {
        self.unguided.solved && self.guided.is_some_and(|g| g.solved)
    }
}

fn timed_runs<F: FnMut() -> Result<PlanReport>>(reps: usize, mut run: F) -> Result<PlanReport> {
    let mut first: Option<PlanReport> = None;
    let mut total = Duration::ZERO;
    for _ in 0..reps {
        let report = run()?;
        total += report.stats.wall_time;
        match &first {
            None => first = Some(report),
            Some(f) if !f.stats.same_counts(&report.stats) => {
                return Err(Error::Internal("repeated run changed its search counts".into()))
            }
            Some(_) => {}
        }
    }
    let mut report = first.ok_or_else(|| Error::InvalidInput("repetitions must be at least 1".into()))?;
    report.stats.wall_time = total / reps as u32;
    Ok(report)
}

/// Benchmark one case.
pub fn bench_case(case: &BenchCase, config: &PlannerConfig, guidance: GuidanceConfig, reps: usize) -> Result<BenchRow> {
    let problem = case.scenario.problem(&config.vehicle)?;
    let unguided = timed_runs(reps, || Ok(plan(&problem, config, None, Limits::none())))?;
    let dmap = match &case.guidance {
        GuidanceSource::Map(d) => Some(d.clone()),
        GuidanceSource::Oracle { radius } => match unguided.trajectory() {
            Some(t) => Some(synthetic_oracle(t, *radius, problem.grid().geometry())?),
            None => None,
        },
    };
    let (guided, gate) = match dmap {
        Some(dmap) => {
            let mut gate = GateStats::default();
            let report = timed_runs(reps, || {
                let (report, stats) = guided_plan(&problem, config, &dmap, guidance, Limits::none())?;
                gate = stats;
                Ok(report)
            })?;
            (Some(report.stats), Some(gate))
        }
        None => (None, None),
    };
    Ok(BenchRow {
        id: case.id.clone(),
        reps,
        unguided: unguided.stats,
        guided,
        gate,
    })
}

/// Benchmark every case in order. Runs are sequential so timings do not contend.
pub fn run_benchmark(
    cases: &[BenchCase],
    config: &PlannerConfig,
    guidance: GuidanceConfig,
    reps: usize,
) -> Result<Vec<BenchRow>> {
    guidance.validate()?;
    cases.iter().map(|c| bench_case(c, config, guidance, reps)).collect()
}

/// Median of the finite values; `None` if there are none.
pub fn median(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSummary {
    pub rows: usize,
    /// Rows where both planners solved; the medians use only these.
    pub both_solved: usize,
    /// Unguided solved but guided did not.
    pub guided_failures: usize,
    pub median_time_ratio: Option<f64>,
    pub median_node_ratio: Option<f64>,
}

impl BenchSummary {
    pub fn of(rows: &[BenchRow]) -> Self {
        let solved: Vec<&BenchRow> = rows.iter().filter(|r| r.both_solved()).collect();
        Self {
            rows: rows.len(),
            both_solved: solved.len(),
            guided_failures: rows
                .iter()
                .filter(|r| r.unguided.solved && r.guided.is_some_and(|g| !g.solved))
                .count(),
            median_time_ratio: median(solved.iter().filter_map(|r| r.time_ratio())),
            median_node_ratio: median(solved.iter().filter_map(|r| r.node_ratio())),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario: &'a str,
    unguided_solved: bool,
    guided_solved: bool,
    unguided_time_s: f64,
    guided_time_s: f64,
    unguided_nodes: usize,
    guided_nodes: usize,
    unguided_expanded: usize,
    guided_expanded: usize,
    time_ratio: f64,
    node_ratio: f64,
}

/// CSV report, one row per case, preceded by a `#` comment line describing the timing.
pub fn write_report_csv<W: Write>(mut w: W, rows: &[BenchRow]) -> Result<()> {
    let reps = rows.first().map_or(0, |r| r.reps);
    writeln!(
        w,
        "# wall time: mean of {reps} sequential runs, search loop only (cost-to-go field construction excluded); nodes = open-list insertions"
    )?;
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        let g = r.guided.unwrap_or_default();
        out.serialize(CsvRow {
            scenario: &r.id,
            unguided_solved: r.unguided.solved,
            guided_solved: g.solved,
            unguided_time_s: r.unguided.wall_time.as_secs_f64(),
            guided_time_s: r.guided.map_or(f64::NAN, |g| g.wall_time.as_secs_f64()),
            unguided_nodes: r.unguided.open_list_inserted,
            guided_nodes: g.open_list_inserted,
            unguided_expanded: r.unguided.expanded,
            guided_expanded: g.expanded,
            time_ratio: r.time_ratio().unwrap_or(f64::NAN),
            node_ratio: r.node_ratio().unwrap_or(f64::NAN),
        })
        .map_err(|e| Error::Format(e.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

/// Fixed-width table for terminals.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<14} {:>6} {:>6} {:>10} {:>10} {:>8} {:>8} {:>7} {:>7}",
        "scenario", "base", "guided", "t_base ms", "t_guid ms", "n_base", "n_guid", "t_ratio", "n_ratio"
    );
    let fmt_ratio = |r: Option<f64>| r.map_or("-".to_string(), |v| format!("{v:.3}"));
    for r in rows {
        let g = r.guided;
        let _ = writeln!(
            s,
            "{:<14} {:>6} {:>6} {:>10.3} {:>10} {:>8} {:>8} {:>7} {:>7}",
            r.id,
            r.unguided.solved,
            g.map_or("-".into(), |g| g.solved.to_string()),
            r.unguided.wall_time.as_secs_f64() * 1e3,
            g.map_or("-".into(), |g| format!("{:.3}", g.wall_time.as_secs_f64() * 1e3)),
            r.unguided.open_list_inserted,
            g.map_or("-".into(), |g| g.open_list_inserted.to_string()),
            fmt_ratio(r.time_ratio()),
            fmt_ratio(r.node_ratio()),
        );
    }
    let sum = BenchSummary::of(rows);
    let _ = writeln!(
        s,
        "{} scenarios, {} solved by both, {} guided failures; median time ratio {}, median node ratio {}",
        sum.rows,
        sum.both_solved,
        sum.guided_failures,
        fmt_ratio(sum.median_time_ratio),
        fmt_ratio(sum.median_node_ratio)
    );
    s
}
