use std::fmt::Write;

use serde::{Deserialize, Serialize};

use limiter_core::engine::{GridConfig, InputStatus, Rejected};
use limiter_core::session::{replay, EventLog, LineError, SessionError};

/// What one log line turned into.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineReport {
    Event {
        line: usize,
        at: u64,
        input: String,
        status: InputStatus,
    },
    Malformed {
        line: usize,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub lines: Vec<LineReport>,
    pub events: usize,
    pub malformed: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.malformed == 0
    }

    pub fn summary(&self) -> String {
        format!("{} events, {} malformed", self.events, self.malformed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let _ = match l {
                LineReport::Event {
                    line,
                    at,
                    input,
                    status,
                } => writeln!(out, "line {line:>4}  at {at:>8} ms  {input:<20} {}", describe(status)),
                LineReport::Malformed { line, message } => {
                    writeln!(out, "line {line:>4}  malformed: {message}")
                }
            };
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&serde_json::to_string(l).expect("reports serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn describe(status: &InputStatus) -> String {
    match status {
        InputStatus::Applied => "applied".into(),
        InputStatus::Ignored(why) => format!("ignored ({why:?})"),
        InputStatus::Rejected(Rejected::InvalidShape(e)) => format!("rejected {e:?} ({e})"),
        InputStatus::Rejected(Rejected::Tuning(msg)) => format!("rejected Tuning ({msg})"),
        InputStatus::Rejected(why) => format!("rejected {why:?}"),
    }
}

/// Replays `text` line by line. Malformed lines are reported and skipped.
pub fn validate_log(text: &str, config: &GridConfig) -> Result<ValidationReport, SessionError> {
    let (log, errors) = EventLog::parse_lenient(text);
    let played = replay(&log, config)?;

    // Line numbers of the lines that parsed, in order.
    let bad: Vec<usize> = errors.iter().map(|e| e.line).collect();
    let good_lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(n, l)| !l.trim().is_empty() && !bad.contains(n))
        .map(|(n, _)| n);

    let mut lines: Vec<LineReport> = good_lines
        .zip(log.events().iter().zip(played.statuses))
        .map(|(line, (event, status))| LineReport::Event {
            line,
            at: event.at,
            input: event.input.to_string(),
            status,
        })
        .collect();
    lines.extend(
        errors
            .iter()
            .map(|LineError { line, message }| LineReport::Malformed {
                line: *line,
                message: message.clone(),
            }),
    );
    lines.sort_by_key(|l| match l {
        LineReport::Event { line, .. } | LineReport::Malformed { line, .. } => *line,
    });
    Ok(ValidationReport {
        lines,
        events: log.len(),
        malformed: errors.len(),
    })
}
