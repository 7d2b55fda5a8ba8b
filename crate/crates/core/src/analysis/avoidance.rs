//! Pairwise avoidance signature: how strongly two walkers interacted,
//! measured from their trajectories alone.

use crate::math::Vec2;

use super::{AnalysisError, TrajectoryFrame};

/// Summary of one avoidance encounter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidanceSignature {
    /// Smallest pairwise separation over the frames, meters.
    pub min_separation: f64,
    /// 1 - (slowest speed after reaching cruise) / (cruise speed); the
    /// larger of the two persons' dips.
    pub speed_dip: f64,
    /// Largest perpendicular deviation from the straight first-to-last
    /// chord; the larger of the two persons' deviations, meters.
    pub lateral_deviation: f64,
}

/// Compute the signature for persons `id_a` and `id_b`, both of which must
/// be present in every frame. Fixed-particle ids are legal: a person
/// avoiding a wall particle yields a signature just the same.
pub fn avoidance_signature(
    frames: &[TrajectoryFrame],
    id_a: u64,
    id_b: u64,
) -> Result<AvoidanceSignature, AnalysisError> {
    if frames.is_empty() {
        return Err(AnalysisError::NoFrames);
    }
    let track_a = track(frames, id_a)?;
    let track_b = track(frames, id_b)?;

    let min_separation = track_a
        .iter()
        .zip(&track_b)
        .map(|(a, b)| (a.0 - b.0).norm())
        .fold(f64::INFINITY, f64::min);

    let speed_dip = dip(&track_a).max(dip(&track_b));
    let lateral_deviation = chord_deviation(&track_a).max(chord_deviation(&track_b));

    Ok(AvoidanceSignature {
        min_separation,
        speed_dip,
        lateral_deviation,
    })
}

fn track(frames: &[TrajectoryFrame], id: u64) -> Result<Vec<(Vec2, f64)>, AnalysisError> {
    frames
        .iter()
        .map(|f| {
            f.record(id)
                .map(|r| (r.pos, r.vel.norm()))
                .ok_or(AnalysisError::MissingId {
                    id,
                    step: f.step_index,
                })
        })
        .collect()
}

/// Fraction of cruise speed lost after the cruise peak. Walkers spawn at
/// rest, so the dip only counts frames from the first attainment of the
/// maximum speed onward.
fn dip(track: &[(Vec2, f64)]) -> f64 {
    let free_speed = track.iter().map(|&(_, s)| s).fold(0.0, f64::max);
    if free_speed <= 0.0 {
        return 0.0;
    }
    let peak = track
        .iter()
        .position(|&(_, s)| s == free_speed)
        .unwrap_or(0);
    let min_after = track[peak..]
        .iter()
        .map(|&(_, s)| s)
        .fold(f64::INFINITY, f64::min);
    1.0 - min_after / free_speed
}

/// Max distance from the straight chord between the first and last observed
/// positions; 0 when the chord is degenerate.
fn chord_deviation(track: &[(Vec2, f64)]) -> f64 {
    let start = track.first().unwrap().0;
    let end = track.last().unwrap().0;
    let chord = end - start;
    let len = chord.norm();
    if len == 0.0 {
        return 0.0;
    }
    let dir = chord / len;
    track
        .iter()
        .map(|&(p, _)| (p - start).dot(dir.perp()).abs())
        .fold(0.0, f64::max)
}
