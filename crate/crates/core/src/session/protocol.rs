//! Messages exchanged with clients over the session socket. Every message is
//! one JSON text frame tagged by `type`.

use serde::{Deserialize, Serialize};

use super::{EventKind, EventRecord, PerformanceEvent, SessionSnapshot};
use crate::engine::{EngineEffect, InputStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Performer,
    Observer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientMessage {
    Input { at: u64, kind: EventKind, arg: String },
}

impl ClientMessage {
    pub fn input(event: &PerformanceEvent) -> Self {
        let EventRecord { at, kind, arg } = event.to_record();
        ClientMessage::Input { at, kind, arg }
    }

    pub fn parse(text: &str) -> Result<PerformanceEvent, String> {
        let msg: ClientMessage = serde_json::from_str(text).map_err(|e| e.to_string())?;
        match msg {
            ClientMessage::Input { at, kind, arg } => EventRecord { at, kind, arg }.to_event(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("client messages always serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    /// First message on every connection.
    Welcome { role: Role },
    Snapshot(SessionSnapshot),
    /// Outcome of one applied event, sent to everyone.
    Result { seq: u64, at: u64, status: InputStatus },
    Effect {
        at: u64,
        #[serde(flatten)]
        effect: EngineEffect,
    },
    /// Sent only to the connection that caused it.
    Error { message: String },
}

impl ServerMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}
