//! Discrete bicycle transition model and the control action set.

use crate::error::{Error, Result};
use crate::scene::Pose;

/// Steering set in degrees, −40° to +40° at 10° spacing.
pub const STEER_DEGREES: [i32; 9] = [-40, -30, -20, -10, 0, 10, 20, 30, 40];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(Direction::Forward),
            -1 => Some(Direction::Reverse),
            _ => None,
        }
    }
}

/// One control action: a steering angle (radians) and a travel direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub steer: f64,
    pub dir: Direction,
}

impl Action {
    /// The 18 actions in canonical order: forward then reverse, steering ascending.
    pub fn canonical_set() -> Vec<Action> {
        [Direction::Forward, Direction::Reverse]
            .into_iter()
            .flat_map(|dir| {
                STEER_DEGREES.iter().map(move |&deg| Action {
                    steer: (deg as f64).to_radians(),
                    dir,
                })
            })
            .collect()
    }
}

/// Same as [`Action::canonical_set`].
pub fn action_set() -> Vec<Action> {
    Action::canonical_set()
}

/// Step length `d` and wheelbase `L` of the transition model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub step: f64,
    pub wheelbase: f64,
}

impl StepConfig {
    pub fn new(step: f64, wheelbase: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0 && wheelbase.is_finite() && wheelbase > 0.0) {
            return Err(Error::InvalidInput(format!(
                "step ({step}) and wheelbase ({wheelbase}) must be positive"
            )));
        }
        Ok(Self { step, wheelbase })
    }

    /// Largest heading change any legal action can produce.
    pub fn max_heading_change(&self) -> f64 {
        self.step / self.wheelbase * 40f64.to_radians().tan()
    }
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            step: 2.0,
            wheelbase: 2.7,
        }
    }
}

/// Advance one search step. Position moves along the pre-step heading.
#[inline]
pub fn transition(state: &Pose, action: &Action, cfg: &StepConfig) -> Pose {
    let dir = action.dir.sign();
    let (s, c) = state.theta().sin_cos();
    Pose::new(
        state.x() + cfg.step * c * dir,
        state.y() + cfg.step * s * dir,
        state.theta() + cfg.step / cfg.wheelbase * action.steer.tan() * dir,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn act(deg: f64, dir: Direction) -> Action {
        Action {
            steer: deg.to_radians(),
            dir,
        }
    }

    #[test]
    fn straight_steps() {
        let cfg = StepConfig::default();
        let origin = Pose::new(0.0, 0.0, 0.0);
        let fwd = transition(&origin, &act(0.0, Direction::Forward), &cfg);
        assert_eq!((fwd.x(), fwd.y(), fwd.theta()), (2.0, 0.0, 0.0));
        let rev = transition(&origin, &act(0.0, Direction::Reverse), &cfg);
        assert_eq!((rev.x(), rev.y(), rev.theta()), (-2.0, 0.0, 0.0));
    }

    #[test]
    fn full_lock_heading_change() {
        // (2 / 2.7) * tan(40°) evaluated at 30 digits: 0.621555282353540749...
        let p = transition(&Pose::new(0.0, 0.0, 0.0), &act(40.0, Direction::Forward), &StepConfig::default());
        assert_eq!((p.x(), p.y()), (2.0, 0.0));
        assert!((p.theta() - 0.621_555_282_353_540_7).abs() < 1e-12);
        assert!((p.theta() - 0.62155).abs() < 1e-5);
    }

    #[test]
    fn reverse_mirror_does_not_return_home() {
        // Forward at 40° then reverse at 40°: heading cancels, position does not.
        // Residual (d(1 − cos k), −d sin k) with k = 0.6215552823...
        let cfg = StepConfig::default();
        let a = transition(&Pose::new(0.0, 0.0, 0.0), &act(40.0, Direction::Forward), &cfg);
        let b = transition(&a, &act(40.0, Direction::Reverse), &cfg);
        assert!((b.x() - 0.374_052_402_103_045_7).abs() < 1e-12);
        assert!((b.y() + 1.164_600_536_189_608_7).abs() < 1e-12);
        assert!(b.theta().abs() < 1e-15);
    }

    #[test]
    fn action_set_shape() {
        let set = action_set();
        assert_eq!(set.len(), 18);
        assert!(set.contains(&act(0.0, Direction::Forward)));
        assert!(set.contains(&act(0.0, Direction::Reverse)));
        assert_eq!(set, action_set());
        for a in &set {
            let deg = a.steer.to_degrees().round() as i32;
            assert!(STEER_DEGREES.contains(&deg));
        }
    }

    #[test]
    fn config_validation() {
        assert!(StepConfig::new(0.0, 2.7).is_err());
        assert!(StepConfig::new(2.0, -1.0).is_err());
        assert!(StepConfig::new(2.0, 2.7).is_ok());
    }

    proptest! {
        #[test]
        fn displacement_and_heading_bounds(
            x in -50.0f64..50.0, y in -50.0f64..50.0, theta in -4.0f64..4.0,
            idx in 0usize..18, step in 0.1f64..3.0,
        ) {
            let cfg = StepConfig::new(step, 2.7).unwrap();
            let a = action_set()[idx];
            let s = Pose::new(x, y, theta);
            let n = transition(&s, &a, &cfg);
            prop_assert!((s.distance_to(&n) - step).abs() < 1e-9);
            let dtheta = crate::scene::normalize_angle(n.theta() - s.theta()).abs();
            prop_assert!(dtheta <= cfg.max_heading_change() + 1e-12);
            prop_assert!(n.theta() > -std::f64::consts::PI && n.theta() <= std::f64::consts::PI);
        }
    }
}
