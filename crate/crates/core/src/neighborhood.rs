//! Spatial hash broad phase. One conservative cell size (the scene-wide
//! maximum interaction range) keeps any interacting pair within the 3x3
//! block around a query point, so force gathering is near-linear instead
//! of all-pairs quadratic.

use std::collections::HashMap;

use crate::math::Vec2;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GridError {
    #[error("query radius {radius} exceeds grid cell size {cell_size}: grid too coarse")]
    RadiusExceedsCell { radius: f64, cell_size: f64 },
}

/// Uniform hash grid over particle positions. Immutable once built;
/// concurrent read queries are safe.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    cell_size: f64,
    cells: HashMap<(i64, i64), Vec<(u64, Vec2)>>,
}

impl SpatialGrid {
    /// Build a grid from `(id, position)` pairs. Cell assignment is
    /// `floor(pos / cell_size)` componentwise, so a particle exactly on a
    /// boundary lands in the higher cell. Per-cell lists are ascending by id.
    pub fn rebuild(positions: &[(u64, Vec2)], cell_size: f64) -> SpatialGrid {
        assert!(
            cell_size > 0.0 && cell_size.is_finite(),
            "cell_size must be positive and finite"
        );
        let mut cells: HashMap<(i64, i64), Vec<(u64, Vec2)>> = HashMap::new();
        for &(id, pos) in positions {
            cells
                .entry(cell_coords(pos, cell_size))
                .or_default()
                .push((id, pos));
        }
        for list in cells.values_mut() {
            list.sort_unstable_by_key(|&(id, _)| id);
        }
        SpatialGrid { cell_size, cells }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn cell_of(&self, pos: Vec2) -> (i64, i64) {
        cell_coords(pos, self.cell_size)
    }

    /// Ids of all particles strictly within `radius` of `center`, excluding
    /// `exclude_id`, in ascending id order. The strict inequality matches
    /// the zero-force contract at `dist >= d3`.
    pub fn neighbors_within(
        &self,
        center: Vec2,
        radius: f64,
        exclude_id: u64,
    ) -> Result<Vec<u64>, GridError> {
        let mut out = Vec::new();
        self.neighbors_within_into(center, radius, exclude_id, &mut out)?;
        Ok(out)
    }

    /// Allocation-free variant for hot loops; clears and fills `out`.
    pub fn neighbors_within_into(
        &self,
        center: Vec2,
        radius: f64,
        exclude_id: u64,
        out: &mut Vec<u64>,
    ) -> Result<(), GridError> {
        if radius > self.cell_size {
            return Err(GridError::RadiusExceedsCell {
                radius,
                cell_size: self.cell_size,
            });
        }
        out.clear();
        let (cx, cy) = cell_coords(center, self.cell_size);
        let r2 = radius * radius;
        for gx in cx - 1..=cx + 1 {
            for gy in cy - 1..=cy + 1 {
                let Some(list) = self.cells.get(&(gx, gy)) else {
                    continue;
                };
                for &(id, pos) in list {
                    if id != exclude_id && (pos - center).norm_squared() < r2 {
                        out.push(id);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(())
    }
}

fn cell_coords(pos: Vec2, cell_size: f64) -> (i64, i64) {
    (
        (pos.x / cell_size).floor() as i64,
        (pos.y / cell_size).floor() as i64,
    )
}

/// Reference broad phase: all ids strictly within `radius` of `center`
/// by exhaustive scan, ascending. Used as the oracle for the grid and as
/// the bit-identical brute-force path in the integrator tests.
pub fn brute_force_within(
    positions: &[(u64, Vec2)],
    center: Vec2,
    radius: f64,
    exclude_id: u64,
) -> Vec<u64> {
    let r2 = radius * radius;
    let mut out: Vec<u64> = positions
        .iter()
        .filter(|&&(id, pos)| id != exclude_id && (pos - center).norm_squared() < r2)
        .map(|&(id, _)| id)
        .collect();
    out.sort_unstable();
    out
}
