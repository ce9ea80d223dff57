use serde::{Deserialize, Serialize};

use crate::engine::{Cell, GameState, LitCell, Mode};
use crate::tuning::{nearest_tet, TuningSystem};

/// One sounding voice and where it sits against equal temperament.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoiceReadout {
    pub hz: f64,
    /// Nearest 12TET pitch name, with the base pitch taken as A4.
    pub nearest: String,
    /// Deviation from that pitch in cents.
    pub cents: f64,
}

/// Everything a display needs to draw the instrument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionSnapshot {
    /// Number of events applied so far.
    pub seq: u64,
    /// Timestamp of the last applied event.
    pub at: u64,
    pub width: i32,
    pub height: i32,
    /// Committed cells with their palette colors, in row-major order.
    pub cells: Vec<LitCell>,
    pub cursor: Cell,
    pub mode: Mode,
    pub system: TuningSystem,
    /// Color the shape being drawn will take.
    pub color: u32,
    pub pending: Vec<Cell>,
    /// Where the grabbed shape would land, while shifting.
    pub shift_preview: Option<Vec<Cell>>,
    pub history_len: usize,
    pub chord: Option<Vec<VoiceReadout>>,
}

impl SessionSnapshot {
    pub fn of(state: &GameState, seq: u64, at: u64) -> Self {
        let config = state.config();
        let cells = state
            .lit_cells()
            .into_iter()
            .map(|(c, color)| LitCell {
                row: c.row,
                col: c.col,
                color,
            })
            .collect();
        let chord = state.sustained_chord().map(|voices| {
            voices
                .iter()
                .map(|&p| {
                    let near = nearest_tet(p, config.base_pitch);
                    VoiceReadout {
                        hz: p.hz(),
                        nearest: near.name,
                        cents: near.cents,
                    }
                })
                .collect()
        });
        SessionSnapshot {
            seq,
            at,
            width: config.width,
            height: config.height,
            cells,
            cursor: state.cursor(),
            mode: state.mode(),
            system: state.system(),
            color: state.current_color(),
            pending: state.pending().to_vec(),
            shift_preview: state.shift_preview(),
            history_len: state.history().len(),
            chord,
        }
    }
}
