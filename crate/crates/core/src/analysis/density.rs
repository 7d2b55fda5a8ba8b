//! Person density on a uniform grid, the metric behind the "square meters
//! per person" calibration of open-place scenarios.

use std::collections::BTreeMap;

use super::TrajectoryFrame;

/// Sparse grid of person counts; densities are counts divided by the cell
/// area. Only occupied cells are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub cell: f64,
    counts: BTreeMap<(i64, i64), u32>,
}

impl DensityGrid {
    /// `(cell_x, cell_y, persons_per_m2)` in deterministic cell order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let area = self.cell * self.cell;
        self.counts
            .iter()
            .map(move |(&(x, y), &c)| (x, y, c as f64 / area))
    }

    /// Total persons across all cells (exact: integer counts).
    pub fn total_count(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    pub fn occupied_cells(&self) -> usize {
        self.counts.len()
    }

    /// Mean density over occupied cells: persons / occupied area.
    pub fn mean_occupied_density(&self) -> f64 {
        if self.counts.is_empty() {
            return 0.0;
        }
        let area = self.cell * self.cell * self.counts.len() as f64;
        self.total_count() as f64 / area
    }
}

/// Per-cell person density for one frame; `cell` is the edge length in
/// meters. Cell assignment is `floor(pos / cell)` componentwise.
pub fn density_grid(frame: &TrajectoryFrame, cell: f64) -> DensityGrid {
    assert!(cell > 0.0, "cell size must be positive");
    let mut counts: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    for r in frame.persons() {
        let key = (
            (r.pos.x / cell).floor() as i64,
            (r.pos.y / cell).floor() as i64,
        );
        *counts.entry(key).or_insert(0) += 1;
    }
    DensityGrid { cell, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::FrameRecord;
    use crate::math::Vec2;
    use crate::scene::{ParticleKind, Phase};

    fn frame(records: Vec<FrameRecord>) -> TrajectoryFrame {
        TrajectoryFrame {
            step_index: 0,
            time: 0.0,
            records,
        }
    }

    fn person(id: u64, x: f64, y: f64) -> FrameRecord {
        FrameRecord {
            id,
            kind: ParticleKind::Person,
            pos: Vec2::new(x, y),
            vel: Vec2::ZERO,
            phase: Phase::Active,
        }
    }

    #[test]
    fn empty_frame_is_all_zero() {
        let g = density_grid(&frame(vec![]), 5.0);
        assert_eq!(g.total_count(), 0);
        assert_eq!(g.occupied_cells(), 0);
        assert_eq!(g.mean_occupied_density(), 0.0);
    }

    #[test]
    fn one_person_in_a_ten_meter_cell() {
        let g = density_grid(&frame(vec![person(0, 3.0, 4.0)]), 10.0);
        let cells: Vec<_> = g.cells().collect();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].0, 0);
        assert_eq!(cells[0].1, 0);
        assert!((cells[0].2 - 0.01).abs() < 1e-15);
    }

    #[test]
    fn total_mass_is_exact() {
        let mut records = Vec::new();
        for i in 0..137 {
            records.push(person(i, (i as f64) * 0.83 - 40.0, ((i * 7) % 23) as f64));
        }
        // A fixed particle must not count.
        records.push(FrameRecord {
            id: 999,
            kind: ParticleKind::Fixed,
            pos: Vec2::ZERO,
            vel: Vec2::ZERO,
            phase: Phase::Active,
        });
        let g = density_grid(&frame(records), 2.5);
        assert_eq!(g.total_count(), 137);
    }
}
