//! Core of a grid-played just-intonation instrument.
//!
//! - [`tuning`]: exact lattice ratios, cents, equal-temperament comparison
//!   and Helmholtz-Ellis spelling.
//! - [`engine`]: the performance state machine driven by a joystick and
//!   eight buttons.
//! - [`synth`]: offline four-voice rendering to 16-bit WAV.
//! - [`session`]: timestamped event logs, deterministic replay and the
//!   client wire protocol.

pub mod engine;
pub mod session;
pub mod synth;
pub mod tuning;
