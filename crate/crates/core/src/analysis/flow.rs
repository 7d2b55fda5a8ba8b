//! Gate-crossing flow rates: how many persons pass a segment per time
//! window, signed by direction.

use std::collections::HashMap;

use crate::math::Vec2;

use super::TrajectoryFrame;

/// Directed gate segment. The positive crossing direction is along the
/// counter-clockwise perpendicular of `a -> b` (the "left" of the gate),
/// so swapping the endpoints negates signed counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub a: Vec2,
    pub b: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowWindow {
    pub window_start: f64,
    pub signed: i64,
    pub gross: u64,
}

/// Count person crossings of `gate` between consecutive frames, bucketed
/// into windows of `window` seconds (a crossing belongs to the window of
/// the frame that completes it). A person landing exactly on the gate line
/// crosses when it departs to the other side on a later step.
pub fn flow_rate(frames: &[TrajectoryFrame], gate: Gate, window: f64) -> Vec<FlowWindow> {
    assert!(window > 0.0, "window must be positive");
    assert!(gate.a != gate.b, "gate endpoints must be distinct");
    let normal = (gate.b - gate.a).perp();
    let gate_dir = gate.b - gate.a;
    let gate_len2 = gate_dir.norm_squared();

    let side = |p: Vec2| -> i8 {
        let s = (p - gate.a).dot(normal);
        if s > 0.0 {
            1
        } else if s < 0.0 {
            -1
        } else {
            0
        }
    };
    // Intersection with the gate must lie within the segment extent.
    let within_gate = |p: Vec2| -> bool {
        let t = (p - gate.a).dot(gate_dir) / gate_len2;
        (0.0..=1.0).contains(&t)
    };

    if frames.is_empty() {
        return Vec::new();
    }

    let t0 = frames.first().unwrap().time;
    let t_end = frames.last().unwrap().time;
    let first_window = (t0 / window).floor() as i64;
    let last_window = (t_end / window).floor() as i64;
    let mut windows: Vec<FlowWindow> = (first_window..=last_window)
        .map(|k| FlowWindow {
            window_start: k as f64 * window,
            signed: 0,
            gross: 0,
        })
        .collect();

    // Last position and last off-gate side per person id.
    let mut tracked: HashMap<u64, (Vec2, i8)> = HashMap::new();

    for frame in frames {
        for r in frame.persons() {
            let s_now = side(r.pos);
            match tracked.get_mut(&r.id) {
                None => {
                    tracked.insert(r.id, (r.pos, s_now));
                }
                Some((prev_pos, last_side)) => {
                    let crossing_sign = detect_crossing(
                        *prev_pos,
                        r.pos,
                        *last_side,
                        s_now,
                        &within_gate,
                        gate,
                        normal,
                    );
                    if let Some(sign) = crossing_sign {
                        let k = (frame.time / window).floor() as i64 - first_window;
                        if let Some(w) = windows.get_mut(k as usize) {
                            w.signed += sign as i64;
                            w.gross += 1;
                        }
                    }
                    *prev_pos = r.pos;
                    if s_now != 0 {
                        *last_side = s_now;
                    }
                }
            }
        }
    }
    windows
}

/// Returns the crossing sign (+1 toward the gate normal) if the move from
/// `prev` to `cur` crosses the gate segment. `last_side` is the most recent
/// off-gate side, which resolves moves that start exactly on the line.
fn detect_crossing(
    prev: Vec2,
    cur: Vec2,
    last_side: i8,
    s_now: i8,
    within_gate: &impl Fn(Vec2) -> bool,
    gate: Gate,
    normal: Vec2,
) -> Option<i8> {
    if s_now == 0 {
        return None; // landed on the line: counted on departure
    }
    let s_prev = {
        let raw = (prev - gate.a).dot(normal);
        if raw > 0.0 {
            1
        } else if raw < 0.0 {
            -1
        } else {
            last_side
        }
    };
    if s_prev == 0 || s_prev == s_now {
        return None;
    }
    // Point where the motion meets the gate line.
    let d_prev = (prev - gate.a).dot(normal);
    let d_cur = (cur - gate.a).dot(normal);
    let hit = if d_prev == d_cur {
        prev // started on the line (departure case)
    } else {
        let t = d_prev / (d_prev - d_cur);
        prev + (cur - prev) * t
    };
    if within_gate(hit) {
        Some(s_now)
    } else {
        None
    }
}
