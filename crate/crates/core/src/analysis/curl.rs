//! Discrete curl of the crowd velocity field: the signature that separates
//! a volute (whorl) from straight lanes.

use std::collections::BTreeMap;

use crate::math::Vec2;

use super::TrajectoryFrame;

/// Per-cell mean velocities and the discrete curl where defined.
#[derive(Debug, Clone, PartialEq)]
pub struct CurlField {
    pub cell: f64,
    mean_velocity: BTreeMap<(i64, i64), Vec2>,
    curl: BTreeMap<(i64, i64), f64>,
}

impl CurlField {
    pub fn mean_velocity(&self, cell: (i64, i64)) -> Option<Vec2> {
        self.mean_velocity.get(&cell).copied()
    }

    pub fn curl(&self, cell: (i64, i64)) -> Option<f64> {
        self.curl.get(&cell).copied()
    }

    pub fn curl_cells(&self) -> impl Iterator<Item = ((i64, i64), f64)> + '_ {
        self.curl.iter().map(|(&k, &v)| (k, v))
    }

    /// Mean |curl| over all defined cells; 0 when none are defined.
    pub fn mean_abs_curl(&self) -> f64 {
        mean_abs(self.curl.values().copied())
    }

    /// Mean |curl| over defined cells whose center lies in the axis-aligned
    /// box `[min, max]`; 0 when none fall inside.
    pub fn mean_abs_curl_in(&self, min: Vec2, max: Vec2) -> f64 {
        let half = self.cell / 2.0;
        mean_abs(self.curl.iter().filter_map(|(&(x, y), &c)| {
            let cx = x as f64 * self.cell + half;
            let cy = y as f64 * self.cell + half;
            (cx >= min.x && cx <= max.x && cy >= min.y && cy <= max.y).then_some(c)
        }))
    }
}

fn mean_abs(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut n) = (0.0, 0u64);
    for v in values {
        sum += v.abs();
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Cell-averaged person velocities and the central-difference curl
/// `dv_y/dx - dv_x/dy`. The curl is defined only on cells whose four
/// stencil arms are all occupied; other cells are excluded rather than
/// imputed.
pub fn curl_field(frame: &TrajectoryFrame, cell: f64) -> CurlField {
    assert!(cell > 0.0, "cell size must be positive");
    let mut sums: BTreeMap<(i64, i64), (Vec2, u32)> = BTreeMap::new();
    for r in frame.persons() {
        let key = (
            (r.pos.x / cell).floor() as i64,
            (r.pos.y / cell).floor() as i64,
        );
        let entry = sums.entry(key).or_insert((Vec2::ZERO, 0));
        entry.0 += r.vel;
        entry.1 += 1;
    }
    let mean_velocity: BTreeMap<(i64, i64), Vec2> = sums
        .into_iter()
        .map(|(k, (sum, n))| (k, sum / n as f64))
        .collect();

    let mut curl = BTreeMap::new();
    for &(x, y) in mean_velocity.keys() {
        let (Some(right), Some(left), Some(up), Some(down)) = (
            mean_velocity.get(&(x + 1, y)),
            mean_velocity.get(&(x - 1, y)),
            mean_velocity.get(&(x, y + 1)),
            mean_velocity.get(&(x, y - 1)),
        ) else {
            continue;
        };
        let dvy_dx = (right.y - left.y) / (2.0 * cell);
        let dvx_dy = (up.x - down.x) / (2.0 * cell);
        curl.insert((x, y), dvy_dx - dvx_dy);
    }

    CurlField {
        cell,
        mean_velocity,
        curl,
    }
}
