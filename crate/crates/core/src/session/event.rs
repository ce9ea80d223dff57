//! Performance events and the `.limlog` text format.
//!
//! A log is one JSON object per line, `{"at":<ms>,"kind":"move"|"button","arg":<name>}`,
//! with non-decreasing `at`.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SessionError;
use crate::engine::{Button, Direction, Input};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PerformanceEvent {
    /// Milliseconds since the session started.
    pub at: u64,
    pub input: Input,
}

impl PerformanceEvent {
    pub fn new(at: u64, input: Input) -> Self {
        PerformanceEvent { at, input }
    }

    pub fn moved(at: u64, d: Direction) -> Self {
        PerformanceEvent::new(at, Input::Move(d))
    }

    pub fn pressed(at: u64, b: Button) -> Self {
        PerformanceEvent::new(at, Input::Button(b))
    }

    pub fn to_record(&self) -> EventRecord {
        let (kind, arg) = match self.input {
            Input::Move(d) => (EventKind::Move, d.as_str()),
            Input::Button(b) => (EventKind::Button, b.as_str()),
        };
        EventRecord {
            at: self.at,
            kind,
            arg: arg.to_string(),
        }
    }

    /// The canonical log line, without a trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("records always serialize")
    }

    pub fn from_line(line: &str) -> Result<Self, String> {
        let record: EventRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        record.to_event()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Move,
    Button,
}

/// Flat wire/log form of an event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRecord {
    pub at: u64,
    pub kind: EventKind,
    pub arg: String,
}

impl EventRecord {
    pub fn to_event(&self) -> Result<PerformanceEvent, String> {
        let input = match self.kind {
            EventKind::Move => Input::Move(self.arg.parse().map_err(|e| format!("{e}"))?),
            EventKind::Button => Input::Button(self.arg.parse().map_err(|e| format!("{e}"))?),
        };
        Ok(PerformanceEvent::new(self.at, input))
    }
}

/// An append-only, time-ordered list of events.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<PerformanceEvent>,
}

/// One line of a log that could not be read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

impl EventLog {
    pub fn new() -> Self {
        EventLog::default()
    }

    pub fn from_events(events: impl IntoIterator<Item = PerformanceEvent>) -> Result<Self, SessionError> {
        let mut log = EventLog::new();
        for e in events {
            log.append(e)?;
        }
        Ok(log)
    }

    pub fn events(&self) -> &[PerformanceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn last_at(&self) -> u64 {
        self.events.last().map_or(0, |e| e.at)
    }

    pub fn append(&mut self, event: PerformanceEvent) -> Result<(), SessionError> {
        if event.at < self.last_at() {
            return Err(SessionError::DecreasingTimestamp {
                at: event.at,
                last: self.last_at(),
            });
        }
        self.events.push(event);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_line());
            out.push('\n');
        }
        out
    }

    /// Reads every line independently. Blank lines are skipped. A line whose
    /// timestamp goes backwards counts as malformed and is left out.
    pub fn parse_lenient(text: &str) -> (EventLog, Vec<LineError>) {
        let mut log = EventLog::new();
        let mut errors = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed = PerformanceEvent::from_line(line)
                .and_then(|e| log.append(e).map_err(|err| err.to_string()));
            if let Err(message) = parsed {
                errors.push(LineError { line: i + 1, message });
            }
        }
        (log, errors)
    }

    /// Reads a log, failing on the first bad line.
    pub fn parse(text: &str) -> Result<EventLog, SessionError> {
        let (log, errors) = EventLog::parse_lenient(text);
        match errors.into_iter().next() {
            None => Ok(log),
            Some(e) => Err(SessionError::Malformed {
                line: e.line,
                message: e.message,
            }),
        }
    }

    pub fn read(path: &Path) -> Result<EventLog, SessionError> {
        EventLog::parse(&std::fs::read_to_string(path)?)
    }
}

/// Appends events to a `.limlog` file, syncing each line before returning.
pub struct LogWriter {
    file: File,
}

impl LogWriter {
    pub fn create(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(LogWriter { file })
    }

    pub fn append(&mut self, event: &PerformanceEvent) -> io::Result<()> {
        let mut line = event.to_line();
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.sync_data()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_line_format() {
        let e = PerformanceEvent::moved(0, Direction::Up);
        assert_eq!(e.to_line(), r#"{"at":0,"kind":"move","arg":"up"}"#);
        let b = PerformanceEvent::pressed(1250, Button::ChangeTuning);
        assert_eq!(b.to_line(), r#"{"at":1250,"kind":"button","arg":"change_tuning"}"#);
        assert_eq!(PerformanceEvent::from_line(&b.to_line()).unwrap(), b);
    }

    #[test]
    fn append_rules() {
        let mut log = EventLog::new();
        log.append(PerformanceEvent::moved(0, Direction::Up)).unwrap();
        assert_eq!(log.len(), 1);
        log.append(PerformanceEvent::moved(10, Direction::Up)).unwrap();
        let err = log.append(PerformanceEvent::moved(5, Direction::Up)).unwrap_err();
        assert!(matches!(err, SessionError::DecreasingTimestamp { at: 5, last: 10 }));
        log.append(PerformanceEvent::moved(10, Direction::Down)).unwrap();
    }

    #[test]
    fn thousand_events_keep_order() {
        let mut log = EventLog::new();
        for i in 0..1000u64 {
            let d = Direction::ALL[(i % 4) as usize];
            log.append(PerformanceEvent::moved(i, d)).unwrap();
        }
        assert_eq!(log.len(), 1000);
        assert!(log.events().iter().enumerate().all(|(i, e)| e.at == i as u64));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let text = "{\"at\":0,\"kind\":\"move\",\"arg\":\"up\"}\n\n{\"at\":5,\"kind\":\"butt\n{\"at\":6,\"kind\":\"button\",\"arg\":\"fly\"}\n";
        let (log, errors) = EventLog::parse_lenient(text);
        assert_eq!(log.len(), 1);
        assert_eq!(errors.iter().map(|e| e.line).collect::<Vec<_>>(), vec![3, 4]);
        let err = EventLog::parse(text).unwrap_err();
        assert!(matches!(err, SessionError::Malformed { line: 3, .. }));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(PerformanceEvent::from_line(r#"{"at":0,"kind":"move","arg":"up","x":1}"#).is_err());
        assert!(PerformanceEvent::from_line(r#"{"at":-1,"kind":"move","arg":"up"}"#).is_err());
    }

    #[test]
    fn writer_appends_lines() {
        let dir = std::env::temp_dir().join(format!("limlog-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.limlog");
        let _ = std::fs::remove_file(&path);
        let mut w = LogWriter::create(&path).unwrap();
        w.append(&PerformanceEvent::pressed(0, Button::Draw)).unwrap();
        w.append(&PerformanceEvent::pressed(3, Button::Sonify)).unwrap();
        let log = EventLog::read(&path).unwrap();
        assert_eq!(log.len(), 2);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
