//! Deterministic 2D particle engine for emergent crowd phenomena.
//!
//! Persons and obstacles are particles on a flat ground coupled by
//! piecewise-linear visco-elastic repulsion in three distance zones, plus a
//! saturated visco-elastic pull toward per-person targets. Jamming, queues,
//! lane flows and volutes emerge from those local laws alone; the
//! [`analysis`] module turns them into numbers and the companion CLI into
//! CSV reports and SVG figures.
//!
//! Everything is bit-reproducible: identical scenes (same seed) give
//! identical trajectories across runs and thread counts.

pub mod analysis;
pub mod dynamics;
pub mod math;
pub mod neighborhood;
pub mod scene;
pub mod trajectory;

pub use analysis::{FrameRecord, TrajectoryFrame};
pub use math::Vec2;
pub use scene::{
    InteractionProfile, ParticleKind, ParticleState, Phase, Scene, TargetId, TargetSpec,
};
