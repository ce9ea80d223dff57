//! Event-sourced sessions: recording, replay, snapshots and the wire format.

mod event;
mod live;
mod protocol;
mod snapshot;

pub use event::{EventKind, EventLog, EventRecord, LineError, LogWriter, PerformanceEvent};
pub use live::{replay, Applied, Replay, Session};
pub use protocol::{ClientMessage, Role, ServerMessage};
pub use snapshot::{SessionSnapshot, VoiceReadout};

use thiserror::Error;

use crate::engine::EngineError;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("event at {at} ms is earlier than the last one at {last} ms")]
    DecreasingTimestamp { at: u64, last: u64 },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
