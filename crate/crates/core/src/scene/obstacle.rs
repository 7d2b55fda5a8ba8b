//! Obstacle envelopes: a rectangle's repulsive presence is a row of fixed
//! particles on its medial segment, not on its geometric border. Each
//! particle's circular falloff makes the mid-wall push harder than the
//! corners, so walkers cut toward corners.

use super::{ObstacleSpec, ParticleKind, ParticleState, Phase};
use crate::math::Vec2;

/// Positions of the fixed particles for one obstacle, in world coordinates.
///
/// With `L = |w - h|` the medial segment runs along the longer dimension
/// from `-L/2` to `+L/2`; particles are evenly spaced with
/// `n = max(1, ceil(L / spacing) + 1)`. A square collapses to a single
/// particle at the center.
pub fn obstacle_particle_positions(spec: &ObstacleSpec) -> Vec<Vec2> {
    let length = (spec.width - spec.height).abs();
    let along_x = spec.width >= spec.height;
    let n = ((length / spec.spacing).ceil() as usize + 1).max(1);

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let offset = if n == 1 {
            0.0
        } else {
            -length / 2.0 + length * (i as f64) / ((n - 1) as f64)
        };
        let local = if along_x {
            Vec2::new(offset, 0.0)
        } else {
            Vec2::new(0.0, offset)
        };
        out.push(spec.center + local.rotated(spec.angle));
    }
    out
}

/// Fixed particles for one obstacle, ids assigned consecutively from
/// `first_id`.
pub fn build_obstacle_particles(spec: &ObstacleSpec, first_id: u64) -> Vec<ParticleState> {
    obstacle_particle_positions(spec)
        .into_iter()
        .enumerate()
        .map(|(i, pos)| ParticleState {
            id: first_id + i as u64,
            kind: ParticleKind::Fixed,
            pos,
            vel: Vec2::ZERO,
            profile: spec.profile,
            target: None,
            phase: Phase::Active,
        })
        .collect()
}
