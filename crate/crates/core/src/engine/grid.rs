use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::tuning::{LatticeCoord, Pitch};

pub const MIN_GRID: i32 = 4;
pub const MAX_GRID: i32 = 64;
pub const DEFAULT_FADE_MS: u64 = 5_000;

/// Screen geometry and where the lattice origin sits on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub width: i32,
    pub height: i32,
    pub origin_row: i32,
    pub origin_col: i32,
    pub base_pitch: Pitch,
    /// Length of the END GAME fade.
    pub fade_ms: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            width: 16,
            height: 16,
            origin_row: 8,
            origin_col: 8,
            base_pitch: Pitch::A4,
            fade_ms: DEFAULT_FADE_MS,
        }
    }
}

impl GridConfig {
    /// A `width`×`height` grid with the origin at `(height/2, width/2)`.
    pub fn with_size(width: i32, height: i32) -> Self {
        GridConfig {
            width,
            height,
            origin_row: height / 2,
            origin_col: width / 2,
            ..GridConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        for (name, v) in [("width", self.width), ("height", self.height)] {
            if !(MIN_GRID..=MAX_GRID).contains(&v) {
                return Err(EngineError::GridSize { name, value: v });
            }
        }
        let origin = Cell::new(self.origin_row, self.origin_col);
        if !self.contains(origin) {
            return Err(EngineError::OriginOutside { origin });
        }
        Ok(())
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (0..self.height).contains(&cell.row) && (0..self.width).contains(&cell.col)
    }

    pub fn origin(&self) -> Cell {
        Cell::new(self.origin_row, self.origin_col)
    }

    /// Up is one fifth higher, right is one limb step higher.
    pub fn cell_to_coord(&self, cell: Cell) -> Result<LatticeCoord, EngineError> {
        if !self.contains(cell) {
            return Err(EngineError::CellOutside { cell });
        }
        Ok(LatticeCoord::new(self.origin_row - cell.row, cell.col - self.origin_col))
    }

    /// Every cell in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |row| (0..self.width).map(move |col| Cell::new(row, col)))
    }
}

/// A grid block. Row 0 is the top row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    pub fn offset(self, d_row: i32, d_col: i32) -> Cell {
        Cell::new(self.row + d_row, self.col + d_col)
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        (self.row - other.row).abs() + (self.col - other.col).abs() == 1
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    /// (row delta, col delta).
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }
}

impl FromStr for Direction {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Direction::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| EngineError::UnknownInput(s.to_string()))
    }
}
