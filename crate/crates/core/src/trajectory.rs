//! Trajectory CSV serialization. Floats are written in Rust's shortest
//! round-trip decimal form, so a written file reloads bit-for-bit and two
//! identical runs hash identically.

use std::io::{self, BufRead, Write};

use crate::analysis::{FrameRecord, TrajectoryFrame};
use crate::math::Vec2;
use crate::scene::{ParticleKind, Phase};

pub const TRAJECTORY_HEADER: &str = "step,time,id,kind,x,y,vx,vy,phase";

#[derive(Debug, thiserror::Error)]
pub enum TrajectoryError {
    #[error("bad header: expected \"{TRAJECTORY_HEADER}\", got \"{0}\"")]
    Header(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")
}

pub fn write_frame<W: Write>(w: &mut W, frame: &TrajectoryFrame) -> io::Result<()> {
    for r in &frame.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            frame.step_index,
            frame.time,
            r.id,
            r.kind.as_str(),
            r.pos.x,
            r.pos.y,
            r.vel.x,
            r.vel.y,
            r.phase.as_str()
        )?;
    }
    Ok(())
}

pub fn write_frames<W: Write>(w: &mut W, frames: &[TrajectoryFrame]) -> io::Result<()> {
    write_header(w)?;
    for frame in frames {
        write_frame(w, frame)?;
    }
    Ok(())
}

/// Parse a trajectory CSV. Rows sharing a step index form one frame; steps
/// must be strictly increasing between frames and ids unique within one.
pub fn read_frames<R: BufRead>(reader: R) -> Result<Vec<TrajectoryFrame>, TrajectoryError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| TrajectoryError::Header(String::new()))?;
    if header.trim_end() != TRAJECTORY_HEADER {
        return Err(TrajectoryError::Header(header));
    }

    let mut frames: Vec<TrajectoryFrame> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx + 2;
        if line.is_empty() {
            continue;
        }
        let row = parse_row(&line).map_err(|message| TrajectoryError::Line {
            line: line_no,
            message,
        })?;

        let start_new = match frames.last() {
            None => true,
            Some(f) if f.step_index == row.step => false,
            Some(f) if row.step > f.step_index => true,
            Some(f) => {
                return Err(TrajectoryError::Line {
                    line: line_no,
                    message: format!(
                        "step {} goes backwards (previous frame was {})",
                        row.step, f.step_index
                    ),
                })
            }
        };
        if start_new {
            frames.push(TrajectoryFrame {
                step_index: row.step,
                time: row.time,
                records: Vec::new(),
            });
        }
        let frame = frames.last_mut().unwrap();
        if frame.time != row.time {
            return Err(TrajectoryError::Line {
                line: line_no,
                message: format!(
                    "time {} disagrees with the frame time {}",
                    row.time, frame.time
                ),
            });
        }
        if frame.records.iter().any(|r| r.id == row.record.id) {
            return Err(TrajectoryError::Line {
                line: line_no,
                message: format!("duplicate id {} within one frame", row.record.id),
            });
        }
        frame.records.push(row.record);
    }
    Ok(frames)
}

struct Row {
    step: u64,
    time: f64,
    record: FrameRecord,
}

fn parse_row(line: &str) -> Result<Row, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 9 {
        return Err(format!("expected 9 fields, got {}", fields.len()));
    }
    let step = fields[0]
        .parse::<u64>()
        .map_err(|e| format!("bad step: {e}"))?;
    let time = parse_f64(fields[1], "time")?;
    let id = fields[2]
        .parse::<u64>()
        .map_err(|e| format!("bad id: {e}"))?;
    let kind = match fields[3] {
        "person" => ParticleKind::Person,
        "fixed" => ParticleKind::Fixed,
        other => return Err(format!("bad kind \"{other}\"")),
    };
    let pos = Vec2::new(parse_f64(fields[4], "x")?, parse_f64(fields[5], "y")?);
    let vel = Vec2::new(parse_f64(fields[6], "vx")?, parse_f64(fields[7], "vy")?);
    let phase = match fields[8] {
        "active" => Phase::Active,
        "arrived" => Phase::Arrived,
        other => return Err(format!("bad phase \"{other}\"")),
    };
    Ok(Row {
        step,
        time,
        record: FrameRecord {
            id,
            kind,
            pos,
            vel,
            phase,
        },
    })
}

fn parse_f64(field: &str, name: &str) -> Result<f64, String> {
    let v = field
        .parse::<f64>()
        .map_err(|e| format!("bad {name}: {e}"))?;
    if !v.is_finite() {
        return Err(format!("bad {name}: non-finite value"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_frames() -> Vec<TrajectoryFrame> {
        vec![
            TrajectoryFrame {
                step_index: 0,
                time: 0.0,
                records: vec![
                    FrameRecord {
                        id: 0,
                        kind: ParticleKind::Fixed,
                        pos: Vec2::new(0.1, -0.3),
                        vel: Vec2::ZERO,
                        phase: Phase::Active,
                    },
                    FrameRecord {
                        id: 1,
                        kind: ParticleKind::Person,
                        pos: Vec2::new(1.0 / 3.0, 2.0_f64.sqrt()),
                        vel: Vec2::new(-1.5e-13, 0.7),
                        phase: Phase::Active,
                    },
                ],
            },
            TrajectoryFrame {
                step_index: 5,
                time: 0.25,
                records: vec![FrameRecord {
                    id: 1,
                    kind: ParticleKind::Person,
                    pos: Vec2::new(0.4, 1.5),
                    vel: Vec2::new(0.0, -0.0),
                    phase: Phase::Arrived,
                }],
            },
        ]
    }

    #[test]
    fn round_trip_is_bitwise_exact() {
        let frames = sample_frames();
        let mut buf = Vec::new();
        write_frames(&mut buf, &frames).unwrap();
        let reread = read_frames(buf.as_slice()).unwrap();
        assert_eq!(frames.len(), reread.len());
        for (a, b) in frames.iter().zip(&reread) {
            assert_eq!(a.step_index, b.step_index);
            assert_eq!(a.time.to_bits(), b.time.to_bits());
            for (ra, rb) in a.records.iter().zip(&b.records) {
                assert_eq!(ra.pos.to_bits(), rb.pos.to_bits());
                assert_eq!(ra.vel.to_bits(), rb.vel.to_bits());
                assert_eq!(ra.kind, rb.kind);
                assert_eq!(ra.phase, rb.phase);
            }
        }
    }

    #[test]
    fn header_mismatch_is_rejected() {
        let err = read_frames("a,b,c\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TrajectoryError::Header(_)));
    }

    #[test]
    fn short_row_is_rejected_with_line_number() {
        let text = format!("{TRAJECTORY_HEADER}\n0,0,1,person,1,2\n");
        match read_frames(text.as_bytes()).unwrap_err() {
            TrajectoryError::Line { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_in_frame_is_rejected() {
        let text = format!(
            "{TRAJECTORY_HEADER}\n0,0,1,person,0,0,0,0,active\n0,0,1,person,1,1,0,0,active\n"
        );
        assert!(matches!(
            read_frames(text.as_bytes()).unwrap_err(),
            TrajectoryError::Line { .. }
        ));
    }

    #[test]
    fn backwards_step_is_rejected() {
        let text = format!(
            "{TRAJECTORY_HEADER}\n5,0.25,1,person,0,0,0,0,active\n0,0,1,person,1,1,0,0,active\n"
        );
        assert!(matches!(
            read_frames(text.as_bytes()).unwrap_err(),
            TrajectoryError::Line { .. }
        ));
    }

    #[test]
    fn empty_body_yields_no_frames() {
        let text = format!("{TRAJECTORY_HEADER}\n");
        assert!(read_frames(text.as_bytes()).unwrap().is_empty());
    }
}
