use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nhastar::dataset::{
    generate_dataset, list_scene_dirs, load_scenario, load_trajectory_csv, render_table, run_benchmark,
    save_trajectory_csv, write_report_csv, BenchCase, BenchSummary, GuidanceSource, LotLayout,
};
use nhastar::guidance::load_dmap;
use nhastar::scene::raster_io::save_pgm;
use nhastar::scene::render_overlay;
use nhastar::search::{TrajectoryPoint, Trajectory};
use nhastar::{guided_plan, plan, synthetic_oracle, GuidanceConfig, Limits, PlannerConfig, Pose};

#[derive(Parser)]
#[command(name = "nhastar", version, about = "Hybrid A* parking planner with distribution guidance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate scenes with five expert trajectories each.
    GenData {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plan one scene, optionally guided by a Dmap.
    Plan(PlanArgs),
    /// Compare guided against unguided planning over a scene directory.
    Bench {
        #[arg(long)]
        scenarios: PathBuf,
        /// `oracle`, or a directory holding `<scene>.dmap` files.
        #[arg(long)]
        guidance: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        gate: GateArgs,
    },
    /// Draw a scene and a trajectory as a PGM image.
    Render {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GateArgs {
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, default_value_t = 0.8)]
    p_guided: f64,
    /// Seed of the guidance gate.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radius of the synthetic oracle map, meters.
    #[arg(long, default_value_t = 1.5)]
    radius: f64,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, conflicts_with = "oracle")]
    dmap: Option<PathBuf>,
    /// Guide with a map dilated from the unguided solution.
    #[arg(long)]
    oracle: bool,
    /// Start override as `x,y,heading_deg`.
    #[arg(long, value_parser = parse_pose)]
    start: Option<Pose>,
    /// Goal override as `x,y,heading_deg`.
    #[arg(long, value_parser = parse_pose)]
    goal: Option<Pose>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    gate: GateArgs,
}

fn parse_pose(s: &str) -> Result<Pose, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, deg] => Ok(Pose::from_degrees(x, y, deg)),
        _ => Err(format!("expected x,y,heading_deg, got {s:?}")),
    }
}

type CliResult = Result<(), Box<dyn std::error::Error>>;

fn gate_config(g: &GateArgs) -> GuidanceConfig {
    GuidanceConfig {
        threshold: g.tau,
        p_guided: g.p_guided,
        seed: g.seed,
    }
}

fn gen_data(count: usize, seed: u64, out: &Path) -> CliResult {
    let dirs = generate_dataset(out, count, seed, &LotLayout::default(), &PlannerConfig::default())?;
    println!("wrote {} scenes to {}", dirs.len(), out.display());
    Ok(())
}

fn run_plan(args: &PlanArgs) -> CliResult {
    let config = PlannerConfig::default();
    let base = load_scenario(&args.scenario)?;
    let scenario = base.with_endpoints(args.start.unwrap_or(base.start), args.goal.unwrap_or(base.goal));
    let problem = scenario.problem(&config.vehicle)?;
    let guidance = gate_config(&args.gate);
    let dmap = match (&args.dmap, args.oracle) {
        (Some(path), _) => Some(load_dmap(path)?),
        (None, true) => {
            let reference = plan(&problem, &config, None, Limits::none());
            let traj = reference.trajectory().ok_or("oracle needs an unguided solution, none found")?;
            Some(synthetic_oracle(traj, args.gate.radius, problem.grid().geometry())?)
        }
        (None, false) => None,
    };
    let report = match &dmap {
        Some(d) => {
            let (report, gate) = guided_plan(&problem, &config, d, guidance, Limits::none())?;
            println!("gate: {} draws, {} consulted, {} pruned", gate.draws, gate.consulted, gate.pruned);
            report
        }
        None => plan(&problem, &config, None, Limits::none()),
    };
    let s = report.stats;
    println!(
        "solved={} nodes={} expanded={} peak_open={} time_ms={:.3}",
        s.solved,
        s.open_list_inserted,
        s.expanded,
        s.open_list_peak,
        s.wall_time.as_secs_f64() * 1e3
    );
    match report.trajectory() {
        Some(t) => {
            save_trajectory_csv(&args.out, t)?;
            println!("cost={} poses={} -> {}", t.cost(), t.len(), args.out.display());
            Ok(())
        }
        None => Err(format!("no trajectory: {:?}", report.outcome).into()),
    }
}

fn bench(scenarios: &Path, guidance: &str, reps: usize, out: &Path, gate: &GateArgs) -> CliResult {
    let mut cases = Vec::new();
    for dir in list_scene_dirs(scenarios)? {
        let id = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let source = if guidance == "oracle" {
            GuidanceSource::Oracle { radius: gate.radius }
        } else {
            GuidanceSource::Map(load_dmap(Path::new(guidance).join(format!("{id}.dmap")))?)
        };
        cases.push(BenchCase {
            id,
            scenario: load_scenario(&dir)?,
            guidance: source,
        });
    }
    if cases.is_empty() {
        return Err(format!("no scenes under {}", scenarios.display()).into());
    }
    let rows = run_benchmark(&cases, &PlannerConfig::default(), gate_config(gate), reps)?;
    write_report_csv(BufWriter::new(File::create(out)?), &rows)?;
    print!("{}", render_table(&rows));
    let summary = BenchSummary::of(&rows);
    println!("report -> {} ({} rows)", out.display(), summary.rows);
    Ok(())
}

fn render(scenario: &Path, traj: &Path, out: &Path) -> CliResult {
    let s = load_scenario(scenario)?;
    let points: Vec<TrajectoryPoint> = load_trajectory_csv(traj)?;
    let t = Trajectory::new(points, f64::NAN);
    let image = render_overlay(s.grid(), &s.start, &s.goal, &[&t]);
    save_pgm(out, &image, 255)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenData { count, seed, out } => gen_data(*count, *seed, out),
        Command::Plan(args) => run_plan(args),
        Command::Bench {
            scenarios,
            guidance,
            reps,
            out,
            gate,
        } => bench(scenarios, guidance, *reps, out, gate),
        Command::Render { scenario, traj, out } => render(scenario, traj, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
