//! Four-block shapes, the play rules they must satisfy, and the geometric
//! transforms the buttons apply to them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Cell, GridConfig};

pub const SHAPE_SIZE: usize = 4;

/// One sonified chord: four cells and the color it was drawn in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    /// In the order they were drawn; this is also voice order.
    pub cells: [Cell; SHAPE_SIZE],
    pub color_index: u32,
    /// Position of this shape in the performance, starting at 0.
    pub ordinal: u32,
}

impl Shape {
    pub fn cell_set(&self) -> BTreeSet<Cell> {
        self.cells.iter().copied().collect()
    }
}

/// Why a prospective shape breaks the rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Error, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeError {
    #[error("a shape needs exactly four blocks")]
    WrongCount,
    #[error("blocks must touch vertically or horizontally")]
    NotContiguous,
    #[error("shape must share a block with an earlier shape")]
    NoOverlap,
    #[error("shape leaves the grid")]
    OutOfBounds,
}

/// True when the cells form one piece under orthogonal adjacency.
pub fn is_four_connected(cells: &BTreeSet<Cell>) -> bool {
    let Some(&start) = cells.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for &n in cells {
            if c.is_adjacent(n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == cells.len()
}

/// Checks the play rules for a prospective shape.
///
/// Duplicate cells collapse, so `cells` is treated as a set. The overlap rule
/// compares against every earlier shape, not just the latest one.
pub fn validate_shape(
    cells: &[Cell],
    history: &[Shape],
    config: &GridConfig,
    exempt_overlap: bool,
) -> Result<(), ShapeError> {
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    if set.len() != SHAPE_SIZE {
        return Err(ShapeError::WrongCount);
    }
    if !set.iter().all(|&c| config.contains(c)) {
        return Err(ShapeError::OutOfBounds);
    }
    if !is_four_connected(&set) {
        return Err(ShapeError::NotContiguous);
    }
    if history.is_empty() || exempt_overlap {
        return Ok(());
    }
    let overlaps = history
        .iter()
        .any(|s| s.cells.iter().any(|c| set.contains(c)));
    if overlaps {
        Ok(())
    } else {
        Err(ShapeError::NoOverlap)
    }
}

/// Left-right flip about the vertical center line.
pub fn mirror_cells(cells: &[Cell], width: i32) -> Vec<Cell> {
    cells
        .iter()
        .map(|c| Cell::new(c.row, width - 1 - c.col))
        .collect()
}

/// The top-left-most cell: smallest row, then smallest column.
pub fn default_pivot(cells: &[Cell]) -> Option<Cell> {
    cells.iter().copied().min()
}

/// Quarter turn clockwise (as seen on screen) about `pivot`.
pub fn rotate_cells(cells: &[Cell], pivot: Cell) -> Vec<Cell> {
    cells
        .iter()
        .map(|c| {
            Cell::new(
                pivot.row + (c.col - pivot.col),
                pivot.col - (c.row - pivot.row),
            )
        })
        .collect()
}

pub fn translate_cells(cells: &[Cell], d_row: i32, d_col: i32) -> Vec<Cell> {
    cells.iter().map(|c| c.offset(d_row, d_col)).collect()
}
