mod common;

use nhastar::dataset::{
    export_scene, generate_slot, import_scene, list_scene_dirs, load_scenario, reaches_goal_cell, sample_scenario,
    slot_seeds, LotLayout, EXPERTS_PER_SCENE, SCENARIO_FILE,
};
use nhastar::scene::{GOAL_MARKER, START_MARKER};
use nhastar::{is_collide, Error, Limits, PlannerConfig, VehicleGeometry};

#[test]
fn sampled_scenarios_respect_layout_rules() {
    let layout = LotLayout::default();
    let vehicle = VehicleGeometry::default();
    let bays = layout.bays();
    let mut sampled = 0;
    for seed in 0..1000 {
        let s = match sample_scenario(&layout, &vehicle, seed) {
            Ok(s) => s,
            Err(Error::DegenerateLayout { .. }) => continue,
            Err(e) => panic!("seed {seed}: {e}"),
        };
        sampled += 1;
        let heading = s.start.theta().to_degrees().abs();
        assert!(heading < 1e-9 || (heading - 180.0).abs() < 1e-9, "seed {seed}: {heading}");
        assert!(!s.occupied[s.goal_bay]);
        assert_eq!(s.goal_bay_rect(), bays[s.goal_bay]);
        let (cx, cy) = s.goal_bay_rect().center();
        let body = vehicle.center_offset();
        let (bx, by) = (s.goal.x() + body * s.goal.theta().cos(), s.goal.y() + body * s.goal.theta().sin());
        assert!((bx - cx).abs() < 1e-9 && (by - cy).abs() < 1e-9);
        assert!(s.goal_bay_rect().contains(s.goal.x(), s.goal.y()));
        assert!(s.start.distance_to(&s.goal) >= layout.min_start_distance);
        assert!(!is_collide(&s.start, s.grid(), &vehicle));
        assert!(!is_collide(&s.goal, s.grid(), &vehicle));
    }
    assert!(sampled >= 900, "{sampled}");
}

#[test]
fn expert_scene_round_trips_through_disk() {
    let cfg = PlannerConfig::default();
    let layout = LotLayout::default();
    let tmp = tempfile::tempdir().unwrap();
    let mut identical = 0;
    let n = 6;
    for i in 0..n {
        let record = generate_slot(11, i, &layout, &cfg, Limits::none()).unwrap();
        assert_eq!(record.trajectories.len(), EXPERTS_PER_SCENE);
        assert!(reaches_goal_cell(&record, &cfg));
        for t in &record.trajectories {
            assert_eq!(*t.first().unwrap(), record.scenario.start);
            assert!(t.replay_error(&cfg.step) <= 1e-9);
            assert!(t.is_collision_free(record.scenario.grid(), &cfg.vehicle));
        }
        let first = record.trajectories[0].points();
        identical += record.trajectories[1..].iter().filter(|t| t.points() == first).count();

        let label = record.label.raster();
        let grid = record.scenario.grid();
        let (w, h) = (label.width(), label.height());
        for r in 0..h {
            for c in 0..w {
                if label.get(c, r) == 1 {
                    assert!(!grid.is_obstacle(c, r), "label on obstacle at ({c}, {r})");
                }
            }
        }
        assert_eq!(record.condition.strip_markers(), *grid);
        assert!(record.condition.count(START_MARKER) > 0 && record.condition.count(GOAL_MARKER) > 0);

        let dir = tmp.path().join(format!("s{i}"));
        export_scene(&dir, &record).unwrap();
        assert_eq!(import_scene(&dir).unwrap(), record);
        assert_eq!(load_scenario(&dir).unwrap(), record.scenario);
    }
    println!(
        "{identical} of {} extra expert runs repeat the first run exactly",
        n * (EXPERTS_PER_SCENE - 1)
    );
    assert_eq!(list_scene_dirs(tmp.path()).unwrap().len(), n);
}

#[test]
fn slots_are_reproducible() {
    let cfg = PlannerConfig::default();
    let layout = LotLayout::default();
    let a = generate_slot(3, 4, &layout, &cfg, Limits::none()).unwrap();
    let b = generate_slot(3, 4, &layout, &cfg, Limits::none()).unwrap();
    assert_eq!(a, b);
    assert!(slot_seeds(3, 4).take(200).any(|s| s == a.scenario.seed));
}

#[test]
fn import_rejects_tampered_scenes() {
    let cfg = PlannerConfig::default();
    let record = generate_slot(5, 0, &LotLayout::default(), &cfg, Limits::none()).unwrap();
    let tmp = tempfile::tempdir().unwrap();

    let dir = tmp.path().join("label");
    export_scene(&dir, &record).unwrap();
    std::fs::copy(dir.join("traj_1.csv"), dir.join("traj_0.csv")).unwrap();
    if record.trajectories[0] != record.trajectories[1] {
        assert!(matches!(import_scene(&dir), Err(Error::Validation(_))));
    }

    let dir = tmp.path().join("moved");
    export_scene(&dir, &record).unwrap();
    let meta = std::fs::read_to_string(dir.join(SCENARIO_FILE)).unwrap();
    let moved = meta.replacen(&format!("goal_bay = {}", record.scenario.goal_bay), "goal_bay = 999", 1);
    assert_ne!(moved, meta);
    std::fs::write(dir.join(SCENARIO_FILE), moved).unwrap();
    assert!(import_scene(&dir).is_err());

    let dir = tmp.path().join("missing");
    export_scene(&dir, &record).unwrap();
    std::fs::remove_file(dir.join("traj_4.csv")).unwrap();
    assert!(matches!(import_scene(&dir), Err(Error::Io(_))));
}
