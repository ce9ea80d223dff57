//! The performance state machine.
//!
//! The screen is a grid whose cells index the tuning lattice. The performer
//! steers a cursor with a four-way joystick and plays with eight buttons;
//! each input maps a [`GameState`] to a new one plus a list of
//! [`EngineEffect`]s for the synth and display.

mod effect;
mod grid;
mod shape;
mod state;

pub use effect::{palette_size, EngineEffect, LitCell, PALETTE};
pub use grid::{Cell, Direction, GridConfig, DEFAULT_FADE_MS, MAX_GRID, MIN_GRID};
pub use shape::{
    default_pivot, is_four_connected, mirror_cells, rotate_cells, translate_cells, validate_shape,
    Shape, ShapeError, SHAPE_SIZE,
};
pub use state::{new_game, GameState, Ignored, InputStatus, Mode, Rejected, Step};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("grid {name} must be between {MIN_GRID} and {MAX_GRID}, got {value}")]
    GridSize { name: &'static str, value: i32 },
    #[error("lattice origin {origin} is outside the grid")]
    OriginOutside { origin: Cell },
    #[error("cell {cell} is outside the grid")]
    CellOutside { cell: Cell },
    #[error("unknown input {0:?}")]
    UnknownInput(String),
}

/// The eight cabinet buttons, numbered 1 to 8 left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Button {
    Draw,
    Sonify,
    Shift,
    Mirror,
    Rotate,
    Delete,
    ChangeTuning,
    EndGame,
}

impl Button {
    pub const ALL: [Button; 8] = [
        Button::Draw,
        Button::Sonify,
        Button::Shift,
        Button::Mirror,
        Button::Rotate,
        Button::Delete,
        Button::ChangeTuning,
        Button::EndGame,
    ];

    pub fn number(self) -> u8 {
        Button::ALL.iter().position(|&b| b == self).unwrap() as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Button> {
        Button::ALL.get((n as usize).checked_sub(1)?).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Button::Draw => "draw",
            Button::Sonify => "sonify",
            Button::Shift => "shift",
            Button::Mirror => "mirror",
            Button::Rotate => "rotate",
            Button::Delete => "delete",
            Button::ChangeTuning => "change_tuning",
            Button::EndGame => "end_game",
        }
    }
}

impl fmt::Display for Button {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Button {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(n) = s.parse::<u8>() {
            return Button::from_number(n).ok_or_else(|| EngineError::UnknownInput(s.to_string()));
        }
        Button::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| EngineError::UnknownInput(s.to_string()))
    }
}

/// One joystick or button input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Input {
    Move(Direction),
    Button(Button),
}

impl Input {
    /// Every distinct input: four directions then eight buttons.
    pub fn all() -> impl Iterator<Item = Input> {
        Direction::ALL
            .into_iter()
            .map(Input::Move)
            .chain(Button::ALL.into_iter().map(Input::Button))
    }
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Move(d) => write!(f, "move {}", d.as_str()),
            Input::Button(b) => write!(f, "button {b}"),
        }
    }
}
