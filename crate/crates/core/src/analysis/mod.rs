//! Trajectory analytics: the emergent phenomena the engine produces (jams,
//! flows, volutes, densities) quantified as per-frame or per-window
//! metrics. Everything here is a pure function of the input frames.

mod avoidance;
mod curl;
mod density;
mod flow;
mod jams;

pub use avoidance::{avoidance_signature, AvoidanceSignature};
pub use curl::{curl_field, CurlField};
pub use density::{density_grid, DensityGrid};
pub use flow::{flow_rate, FlowWindow, Gate};
pub use jams::{detect_jams, JamCluster};

use crate::math::Vec2;
use crate::scene::{ParticleKind, Phase};

/// Timestamped snapshot of every particle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFrame {
    pub step_index: u64,
    pub time: f64,
    /// Records in ascending id order; ids unique per frame.
    pub records: Vec<FrameRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRecord {
    pub id: u64,
    pub kind: ParticleKind,
    pub pos: Vec2,
    pub vel: Vec2,
    pub phase: Phase,
}

impl TrajectoryFrame {
    pub fn persons(&self) -> impl Iterator<Item = &FrameRecord> {
        self.records
            .iter()
            .filter(|r| r.kind == ParticleKind::Person)
    }

    pub fn record(&self, id: u64) -> Option<&FrameRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalysisError {
    #[error("particle {id} missing from frame at step {step}")]
    MissingId { id: u64, step: u64 },
    #[error("no frames supplied")]
    NoFrames,
}
