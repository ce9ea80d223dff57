use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::effect::{palette_size, EngineEffect, LitCell};
use super::shape::{
    default_pivot, mirror_cells, rotate_cells, translate_cells, validate_shape, Shape, ShapeError,
    SHAPE_SIZE,
};
use super::{Button, Cell, Direction, EngineError, GridConfig, Input};
use crate::tuning::{coord_frequency, Pitch, TuningError, TuningSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Drawing,
    Shifting,
    Ended,
}

/// Why an input had no effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ignored {
    GameEnded,
    WrongMode,
    NoShapeYet,
}

/// Why an input was refused.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejected {
    ShapeFull,
    InvalidShape(ShapeError),
    RotationOutOfBounds,
    Tuning(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputStatus {
    Applied,
    Ignored(Ignored),
    Rejected(Rejected),
}

impl InputStatus {
    pub fn is_applied(&self) -> bool {
        matches!(self, InputStatus::Applied)
    }
}

/// Result of feeding one input to a state.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub state: GameState,
    pub effects: Vec<EngineEffect>,
    pub status: InputStatus,
}

/// The whole instrument at one moment. Operations never mutate a state in
/// place; each returns the next state alongside the effects it caused.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    config: GridConfig,
    mode: Mode,
    cursor: Cell,
    /// Cells of the shape being drawn, in draw order.
    pending: Vec<Cell>,
    /// The pending shape came from MIRROR or ROTATE and skips the overlap rule.
    pending_exempt: bool,
    /// Pivot used by the rotation that produced `pending`, kept so repeated
    /// turns all spin about the same block.
    rotate_pivot: Option<Cell>,
    history: Vec<Shape>,
    shift_offset: (i32, i32),
    system: TuningSystem,
    color_counter: u32,
    sustained_chord: Option<[Pitch; 4]>,
}

impl GameState {
    pub fn new(config: GridConfig) -> Result<Self, EngineError> {
        config.validate()?;
        Ok(GameState {
            cursor: config.origin(),
            config,
            mode: Mode::Drawing,
            pending: Vec::new(),
            pending_exempt: false,
            rotate_pivot: None,
            history: Vec::new(),
            shift_offset: (0, 0),
            system: TuningSystem::FiveLimit,
            color_counter: 0,
            sustained_chord: None,
        })
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cursor(&self) -> Cell {
        self.cursor
    }

    pub fn pending(&self) -> &[Cell] {
        &self.pending
    }

    pub fn pending_exempt(&self) -> bool {
        self.pending_exempt
    }

    pub fn history(&self) -> &[Shape] {
        &self.history
    }

    pub fn shift_offset(&self) -> (i32, i32) {
        self.shift_offset
    }

    pub fn system(&self) -> TuningSystem {
        self.system
    }

    pub fn color_counter(&self) -> u32 {
        self.color_counter
    }

    pub fn sustained_chord(&self) -> Option<&[Pitch; 4]> {
        self.sustained_chord.as_ref()
    }

    /// Color the next committed shape will get.
    pub fn current_color(&self) -> u32 {
        self.color_counter % palette_size()
    }

    /// The grabbed shape at its slid position, while shifting.
    pub fn shift_preview(&self) -> Option<Vec<Cell>> {
        if self.mode != Mode::Shifting {
            return None;
        }
        let last = self.history.last()?;
        let (dr, dc) = self.shift_offset;
        Some(translate_cells(&last.cells, dr, dc))
    }

    /// Committed cells and their colors; later shapes paint over earlier ones.
    pub fn lit_cells(&self) -> BTreeMap<Cell, u32> {
        let mut lit = BTreeMap::new();
        for shape in &self.history {
            for &c in &shape.cells {
                lit.insert(c, shape.color_index);
            }
        }
        lit
    }

    /// Applies one input.
    pub fn apply(&self, input: Input) -> Step {
        match input {
            Input::Move(d) => self.move_cursor(d),
            Input::Button(b) => self.press(b),
        }
    }

    pub fn press(&self, button: Button) -> Step {
        match button {
            Button::Draw => self.press_draw(),
            Button::Sonify => self.press_sonify(),
            Button::Shift => self.press_shift(),
            Button::Mirror => self.press_mirror(),
            Button::Rotate => self.press_rotate(),
            Button::Delete => self.press_delete(),
            Button::ChangeTuning => self.press_change_tuning(),
            Button::EndGame => self.press_end_game(),
        }
    }

    fn unchanged(&self, status: InputStatus) -> Step {
        Step {
            state: self.clone(),
            effects: Vec::new(),
            status,
        }
    }

    fn ignored(&self, why: Ignored) -> Step {
        self.unchanged(InputStatus::Ignored(why))
    }

    fn rejected(&self, why: Rejected) -> Step {
        self.unchanged(InputStatus::Rejected(why))
    }

    fn applied(state: GameState, effects: Vec<EngineEffect>) -> Step {
        Step {
            state,
            effects,
            status: InputStatus::Applied,
        }
    }

    pub fn move_cursor(&self, direction: Direction) -> Step {
        let (dr, dc) = direction.delta();
        let mut next = self.clone();
        match self.mode {
            Mode::Ended => return self.ignored(Ignored::GameEnded),
            Mode::Drawing => {
                let moved = self.cursor.offset(dr, dc);
                if self.config.contains(moved) {
                    next.cursor = moved;
                }
            }
            Mode::Shifting => {
                let offset = (self.shift_offset.0 + dr, self.shift_offset.1 + dc);
                let grabbed = &self.history.last().expect("shifting needs a shape").cells;
                let slid = translate_cells(grabbed, offset.0, offset.1);
                if slid.iter().all(|&c| self.config.contains(c)) {
                    next.shift_offset = offset;
                }
            }
        }
        Self::applied(next, Vec::new())
    }

    pub fn press_draw(&self) -> Step {
        match self.mode {
            Mode::Ended => return self.ignored(Ignored::GameEnded),
            Mode::Shifting => return self.ignored(Ignored::WrongMode),
            Mode::Drawing => {}
        }
        if self.pending.contains(&self.cursor) {
            return Self::applied(self.clone(), Vec::new());
        }
        if self.pending.len() >= SHAPE_SIZE {
            return self.rejected(Rejected::ShapeFull);
        }
        let mut next = self.clone();
        let mut effects = Vec::new();
        if next.pending.is_empty() {
            next.pending_exempt = false;
            effects.push(EngineEffect::MarqueeColor {
                color_index: self.current_color(),
            });
        }
        next.pending.push(self.cursor);
        next.rotate_pivot = None;
        Self::applied(next, effects)
    }

    /// Validates `cells`, appends them as a new shape and sounds the chord.
    fn commit(&self, cells: &[Cell], exempt: bool) -> Result<(GameState, Vec<EngineEffect>), Rejected> {
        validate_shape(cells, &self.history, &self.config, exempt).map_err(Rejected::InvalidShape)?;
        let cells: [Cell; SHAPE_SIZE] = cells.try_into().map_err(|_| Rejected::InvalidShape(ShapeError::WrongCount))?;
        let chord = self.chord_for(&cells).map_err(|e| Rejected::Tuning(e.to_string()))?;

        let mut next = self.clone();
        next.history.push(Shape {
            cells,
            color_index: self.current_color(),
            ordinal: self.history.last().map_or(0, |s| s.ordinal + 1),
        });
        next.color_counter += 1;
        next.clear_pending();
        next.mode = Mode::Drawing;
        next.shift_offset = (0, 0);
        next.sustained_chord = Some(chord);

        let mut effects = vec![EngineEffect::ChordOn { frequencies: chord }];
        effects.extend(grid_diff(self, &next));
        Ok((next, effects))
    }

    fn chord_for(&self, cells: &[Cell; SHAPE_SIZE]) -> Result<[Pitch; 4], TuningError> {
        let mut chord = [self.config.base_pitch; 4];
        for (slot, &cell) in chord.iter_mut().zip(cells) {
            let coord = self
                .config
                .cell_to_coord(cell)
                .expect("committed cells are in bounds");
            *slot = coord_frequency(coord, self.system, self.config.base_pitch)?;
        }
        Ok(chord)
    }

    fn clear_pending(&mut self) {
        self.pending.clear();
        self.pending_exempt = false;
        self.rotate_pivot = None;
    }

    pub fn press_sonify(&self) -> Step {
        let result = match self.mode {
            Mode::Ended => return self.ignored(Ignored::GameEnded),
            Mode::Drawing => self.commit(&self.pending, self.pending_exempt),
            Mode::Shifting => {
                let slid = self.shift_preview().expect("shifting needs a shape");
                self.commit(&slid, true)
            }
        };
        match result {
            Ok((next, effects)) => Self::applied(next, effects),
            Err(why) => self.rejected(why),
        }
    }

    pub fn press_shift(&self) -> Step {
        match self.mode {
            Mode::Ended => self.ignored(Ignored::GameEnded),
            Mode::Shifting => {
                let mut next = self.clone();
                next.mode = Mode::Drawing;
                next.shift_offset = (0, 0);
                Self::applied(next, Vec::new())
            }
            Mode::Drawing if self.history.is_empty() => self.ignored(Ignored::NoShapeYet),
            Mode::Drawing => {
                let mut next = self.clone();
                next.mode = Mode::Shifting;
                next.shift_offset = (0, 0);
                next.clear_pending();
                Self::applied(next, Vec::new())
            }
        }
    }

    /// The shape MIRROR and ROTATE act on: a complete pending shape if there
    /// is one, otherwise the last sonified shape.
    fn transform_source(&self) -> Result<Vec<Cell>, Step> {
        match self.mode {
            Mode::Ended => return Err(self.ignored(Ignored::GameEnded)),
            Mode::Shifting => return Err(self.ignored(Ignored::WrongMode)),
            Mode::Drawing => {}
        }
        let Some(last) = self.history.last() else {
            return Err(self.ignored(Ignored::NoShapeYet));
        };
        if self.pending.len() == SHAPE_SIZE {
            Ok(self.pending.clone())
        } else {
            Ok(last.cells.to_vec())
        }
    }

    fn with_transformed_pending(&self, cells: Vec<Cell>, pivot: Option<Cell>) -> Step {
        let mut next = self.clone();
        let mut effects = Vec::new();
        if self.pending.is_empty() {
            effects.push(EngineEffect::MarqueeColor {
                color_index: self.current_color(),
            });
        }
        next.pending = cells;
        next.pending_exempt = true;
        next.rotate_pivot = pivot;
        Self::applied(next, effects)
    }

    pub fn press_mirror(&self) -> Step {
        let source = match self.transform_source() {
            Ok(s) => s,
            Err(step) => return step,
        };
        let mirrored = mirror_cells(&source, self.config.width);
        self.with_transformed_pending(mirrored, None)
    }

    pub fn press_rotate(&self) -> Step {
        let source = match self.transform_source() {
            Ok(s) => s,
            Err(step) => return step,
        };
        let pivot = match self.rotate_pivot {
            Some(p) if self.pending.len() == SHAPE_SIZE => p,
            _ => default_pivot(&source).expect("source shape is non-empty"),
        };
        let rotated = rotate_cells(&source, pivot);
        if !rotated.iter().all(|&c| self.config.contains(c)) {
            return self.rejected(Rejected::RotationOutOfBounds);
        }
        self.with_transformed_pending(rotated, Some(pivot))
    }

    pub fn press_delete(&self) -> Step {
        if self.mode == Mode::Ended {
            return self.ignored(Ignored::GameEnded);
        }
        let mut next = self.clone();
        next.clear_pending();
        next.mode = Mode::Drawing;
        next.shift_offset = (0, 0);
        Self::applied(next, Vec::new())
    }

    pub fn press_change_tuning(&self) -> Step {
        match self.mode {
            Mode::Ended => return self.ignored(Ignored::GameEnded),
            Mode::Shifting => return self.ignored(Ignored::WrongMode),
            Mode::Drawing => {}
        }
        let mut next = self.clone();
        next.system = self.system.toggled();
        next.clear_pending();
        if let Some(last) = self.history.last() {
            next.history = vec![last.clone()];
        }
        let mut effects = vec![EngineEffect::Flash];
        effects.extend(grid_diff(self, &next));
        if let Some(retained) = next.history.last() {
            // The exponent range does not depend on the system, so a shape
            // that sounded before still sounds after the swap.
            let chord = next
                .chord_for(&retained.cells)
                .expect("retained shape was already in tuning range");
            next.sustained_chord = Some(chord);
            effects.push(EngineEffect::ChordOn { frequencies: chord });
        }
        Self::applied(next, effects)
    }

    pub fn press_end_game(&self) -> Step {
        if self.mode == Mode::Ended {
            return self.ignored(Ignored::GameEnded);
        }
        let mut next = self.clone();
        next.mode = Mode::Ended;
        next.clear_pending();
        next.shift_offset = (0, 0);
        next.sustained_chord = None;
        Self::applied(
            next,
            vec![EngineEffect::FadeOut {
                duration_ms: self.config.fade_ms,
            }],
        )
    }
}

fn grid_diff(before: &GameState, after: &GameState) -> Option<EngineEffect> {
    let old = before.lit_cells();
    let new = after.lit_cells();
    let lit: Vec<LitCell> = new
        .iter()
        .filter(|(c, color)| old.get(c) != Some(color))
        .map(|(c, &color)| LitCell {
            row: c.row,
            col: c.col,
            color,
        })
        .collect();
    let unlit: Vec<Cell> = old.keys().filter(|c| !new.contains_key(c)).copied().collect();
    if lit.is_empty() && unlit.is_empty() {
        None
    } else {
        Some(EngineEffect::GridDiff { lit, unlit })
    }
}

pub fn new_game(config: GridConfig) -> Result<GameState, EngineError> {
    GameState::new(config)
}
