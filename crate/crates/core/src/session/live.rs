use super::{EventLog, PerformanceEvent, SessionError, SessionSnapshot};
use crate::engine::{EngineEffect, GameState, GridConfig, InputStatus};
use crate::synth::TimedEffect;

/// What one applied event produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Applied {
    pub event: PerformanceEvent,
    pub status: InputStatus,
    pub effects: Vec<EngineEffect>,
    pub snapshot: SessionSnapshot,
}

/// A running performance: the engine state plus the log of everything fed to it.
///
/// Both live serving and replay go through [`Session::apply`], so a replayed
/// log reproduces the live snapshot stream exactly.
#[derive(Clone, Debug)]
pub struct Session {
    state: GameState,
    log: EventLog,
}

impl Session {
    pub fn new(config: GridConfig) -> Result<Self, SessionError> {
        Ok(Session {
            state: GameState::new(config)?,
            log: EventLog::new(),
        })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot::of(&self.state, self.log.len() as u64, self.log.last_at())
    }

    /// Applies an event whose timestamp must not go backwards.
    pub fn apply(&mut self, event: PerformanceEvent) -> Result<Applied, SessionError> {
        self.log.append(event)?;
        let step = self.state.apply(event.input);
        self.state = step.state;
        Ok(Applied {
            event,
            status: step.status,
            effects: step.effects,
            snapshot: self.snapshot(),
        })
    }

    /// Applies an event from an untrusted clock, pulling an early timestamp
    /// forward to the last accepted one.
    pub fn apply_clamped(&mut self, mut event: PerformanceEvent) -> Applied {
        event.at = event.at.max(self.log.last_at());
        self.apply(event).expect("clamped timestamps are monotone")
    }
}

/// Everything a log produces when played back from a fresh state.
#[derive(Clone, Debug, PartialEq)]
pub struct Replay {
    pub final_state: GameState,
    pub effects: Vec<TimedEffect>,
    /// Initial snapshot followed by one per event.
    pub snapshots: Vec<SessionSnapshot>,
    pub statuses: Vec<InputStatus>,
}

pub fn replay(log: &EventLog, config: &GridConfig) -> Result<Replay, SessionError> {
    let mut session = Session::new(config.clone())?;
    let mut effects = Vec::new();
    let mut snapshots = vec![session.snapshot()];
    let mut statuses = Vec::with_capacity(log.len());
    for &event in log.events() {
        let applied = session.apply(event)?;
        effects.extend(applied.effects.into_iter().map(|effect| TimedEffect { at: event.at, effect }));
        snapshots.push(applied.snapshot);
        statuses.push(applied.status);
    }
    Ok(Replay {
        final_state: session.state,
        effects,
        snapshots,
        statuses,
    })
}
