// One step of every action from the origin.

use nhastar::{action_set, transition, Pose, StepConfig, VehicleGeometry};

/// Successor poses of the origin, one per action.
pub fn run_example() -> nhastar::Result<Vec<Pose>> {
    let vehicle = VehicleGeometry::default();
    let step = StepConfig::new(2.0, vehicle.wheelbase)?;
    let origin = Pose::new(0.0, 0.0, 0.0);
    let mut out = Vec::new();
    for a in action_set() {
        let p = transition(&origin, &a, &step);
        println!(
            "{:?} steer {:>4.0} deg -> x {:>6.3} y {:>6.3} heading {:>7.2} deg",
            a.dir,
            a.steer.to_degrees(),
            p.x(),
            p.y(),
            p.theta().to_degrees()
        );
        out.push(p);
    }
    Ok(out)
}

fn main() -> nhastar::Result<()> {
    run_example().map(|_| ())
}
