use serde::{Deserialize, Serialize};

use super::Cell;
use crate::tuning::Pitch;

/// Colors shapes cycle through, in order.
pub const PALETTE: [&str; 6] = ["red", "orange", "yellow", "green", "blue", "violet"];

pub fn palette_size() -> u32 {
    PALETTE.len() as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LitCell {
    pub row: i32,
    pub col: i32,
    pub color: u32,
}

impl LitCell {
    pub fn cell(&self) -> Cell {
        Cell::new(self.row, self.col)
    }
}

/// Something the outside world should do in response to an input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "payload", rename_all = "snake_case")]
pub enum EngineEffect {
    /// Start (or retune to) a four-note chord.
    ChordOn { frequencies: [Pitch; 4] },
    /// Full-screen white burst.
    Flash,
    /// Silence the synth and fade the screen out.
    #[serde(rename = "fade")]
    FadeOut { duration_ms: u64 },
    /// Committed-shape cells that changed color or went dark.
    GridDiff { lit: Vec<LitCell>, unlit: Vec<Cell> },
    /// The color the next shape will be drawn in.
    #[serde(rename = "marquee")]
    MarqueeColor { color_index: u32 },
}

impl EngineEffect {
    pub fn name(&self) -> &'static str {
        match self {
            EngineEffect::ChordOn { .. } => "chord_on",
            EngineEffect::Flash => "flash",
            EngineEffect::FadeOut { .. } => "fade",
            EngineEffect::GridDiff { .. } => "grid_diff",
            EngineEffect::MarqueeColor { .. } => "marquee",
        }
    }
}
