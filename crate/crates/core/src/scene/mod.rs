//! Scene domain types, file parsing, validation, obstacle envelopes and
//! per-person parameter sampling.

mod obstacle;
mod parse;
mod sample;
mod validate;

pub use obstacle::{build_obstacle_particles, obstacle_particle_positions};
pub use parse::{parse_scene, SceneError};
pub use sample::sample_profile;
pub use validate::{validate_scene, Violation};

use crate::math::Vec2;

/// Piecewise-linear visco-elastic interaction profile.
///
/// Distances split the plane around a particle into three zones:
/// zone C (`dist < d1`, impenetrable), zone B (`d1..d2`, avoidance) and
/// zone A (`d2..d3`, anticipation). Beyond `d3` the interaction is zero.
/// `f1` and `f2` are the repulsive force magnitudes at the `d1` and `d2`
/// knots; the force reaches zero at `d3`. `z_a`, `z_b`, `z_c` are the
/// per-zone viscosities applied to the radial closing speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionProfile {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub f1: f64,
    pub f2: f64,
    pub z_a: f64,
    pub z_b: f64,
    pub z_c: f64,
}

impl InteractionProfile {
    pub fn is_valid(&self) -> bool {
        self.all_finite()
            && 0.0 < self.d1
            && self.d1 < self.d2
            && self.d2 < self.d3
            && self.f1 > self.f2
            && self.f2 > 0.0
            && self.z_a >= 0.0
            && self.z_b >= 0.0
            && self.z_c >= 0.0
    }

    pub fn all_finite(&self) -> bool {
        [
            self.d1, self.d2, self.d3, self.f1, self.f2, self.z_a, self.z_b, self.z_c,
        ]
        .iter()
        .all(|v| v.is_finite())
    }

    /// Fieldwise arithmetic mean, used for person-person pair laws.
    pub fn mean(a: &InteractionProfile, b: &InteractionProfile) -> InteractionProfile {
        InteractionProfile {
            d1: (a.d1 + b.d1) / 2.0,
            d2: (a.d2 + b.d2) / 2.0,
            d3: (a.d3 + b.d3) / 2.0,
            f1: (a.f1 + b.f1) / 2.0,
            f2: (a.f2 + b.f2) / 2.0,
            z_a: (a.z_a + b.z_a) / 2.0,
            z_b: (a.z_b + b.z_b) / 2.0,
            z_c: (a.z_c + b.z_c) / 2.0,
        }
    }
}

/// Calibration for an open public place: impenetrable at 1 m, avoidance
/// from 3 m, anticipation from 5 m. Knot forces and viscosities are chosen
/// so a 1.5 m/s head-on approach is stopped well outside zone C.
pub fn default_profile() -> InteractionProfile {
    InteractionProfile {
        d1: 1.0,
        d2: 3.0,
        d3: 5.0,
        f1: 60.0,
        f2: 6.0,
        z_a: 1.0,
        z_b: 2.0,
        z_c: 4.0,
    }
}

/// Default sampling bounds: +/-20% jitter on each threshold gap
/// (d1, d2-d1, d3-d2); knot forces and viscosities are left unjittered.
pub fn default_profile_bounds() -> (InteractionProfile, InteractionProfile) {
    let base = default_profile();
    let min = InteractionProfile {
        d1: 0.8,
        d2: 0.8 + 1.6,
        d3: 0.8 + 1.6 + 1.6,
        ..base
    };
    let max = InteractionProfile {
        d1: 1.2,
        d2: 1.2 + 2.4,
        d3: 1.2 + 2.4 + 2.4,
        ..base
    };
    (min, max)
}

pub const DEFAULT_DT: f64 = 0.05;
pub const DEFAULT_OUTPUT_STRIDE: u32 = 1;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TARGET_STIFFNESS: f64 = 1.0;
pub const DEFAULT_TARGET_DAMPING: f64 = 2.0;
pub const DEFAULT_TARGET_SATURATION: f64 = 3.0;
pub const DEFAULT_CAPTURE_RADIUS: f64 = 2.0;
pub const DEFAULT_CAPTURE_SPEED: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticleKind {
    Person,
    Fixed,
}

impl ParticleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParticleKind::Person => "person",
            ParticleKind::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Active,
    Arrived,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Active => "active",
            Phase::Arrived => "arrived",
        }
    }
}

/// Index of a target within `Scene::targets`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    pub id: u64,
    pub kind: ParticleKind,
    pub pos: Vec2,
    pub vel: Vec2,
    pub profile: InteractionProfile,
    pub target: Option<TargetId>,
    pub phase: Phase,
}

/// Visco-elastic attraction point. The elastic pull saturates at `f_sat`,
/// which with damping `z_t` yields a free-walking speed of `f_sat / z_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    pub id: String,
    pub pos: Vec2,
    pub k_t: f64,
    pub z_t: f64,
    pub f_sat: f64,
    pub r_capture: f64,
    pub v_capture: f64,
}

/// Spawn source: `count` persons at `rate` per second, uniformly placed in
/// a disc, each with a profile sampled between `profile_min`/`profile_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectorSpec {
    pub id: String,
    pub center: Vec2,
    pub radius: f64,
    pub count: u32,
    pub rate: f64,
    pub target: TargetId,
    pub profile_min: InteractionProfile,
    pub profile_max: InteractionProfile,
}

/// Axis-aligned rectangle (optionally rotated) whose repulsive envelope is
/// realized as fixed particles on its medial segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleSpec {
    pub id: String,
    pub center: Vec2,
    pub width: f64,
    pub height: f64,
    /// Rotation in radians, counter-clockwise.
    pub angle: f64,
    pub spacing: f64,
    pub profile: InteractionProfile,
}

/// Axis-aligned rectangle given by center and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub bounds: Rect,
    pub obstacles: Vec<ObstacleSpec>,
    pub injectors: Vec<InjectorSpec>,
    pub targets: Vec<TargetSpec>,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub output_stride: u32,
}

impl Scene {
    /// Number of integration steps covering `duration`.
    pub fn step_count(&self) -> u64 {
        (self.duration / self.dt).ceil().max(1.0) as u64
    }

    /// Largest `d3` any sampled or fixed profile can carry; the spatial
    /// grid cell size so any interacting pair is at most one cell apart.
    pub fn max_interaction_range(&self) -> f64 {
        let mut max_d3 = 0.0f64;
        for o in &self.obstacles {
            max_d3 = max_d3.max(o.profile.d3);
        }
        for i in &self.injectors {
            max_d3 = max_d3.max(i.profile_max.d3);
        }
        if max_d3 > 0.0 {
            max_d3
        } else {
            default_profile().d3
        }
    }
}
